import math
from math import gcd

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eisenqe.domain import (
    HalfPlanePoint,
    JordanRegion,
    MoebiusElement,
    apply_moebius,
    coset_representatives,
    fundamental_domain,
    im_moebius,
    in_fundamental_domain,
    max_im_over_cosets,
    mu_measure,
    parse_region,
    reduce_to_fundamental,
    split_rectangle,
    staircase_cover,
    union,
)
from eisenqe.errors import NumericDomainError

I = MoebiusElement.identity()
S = MoebiusElement.inversion()


def random_element(rng, bound):
    while True:
        c, d = (int(v) for v in rng.integers(-bound, bound + 1, 2))
        if gcd(c, d) != 1:
            continue
        # solve a d - b c = 1 with the extended Euclidean algorithm
        g, x, y = _egcd(d, c)
        a, b = x, -y
        return MoebiusElement(a, b, c, d)


def _egcd(p, q):
    if q == 0:
        return (abs(p), 1 if p >= 0 else -1, 0)
    g, x, y = _egcd(q, p % q)
    return g, y, x - (p // q) * y


upper = st.tuples(st.floats(-5, 5), st.floats(1e-3, 20))


class TestPoints:
    def test_rejects_lower_half(self):
        with pytest.raises(NumericDomainError, match="y > 0"):
            HalfPlanePoint(0.0, -1.0)
        with pytest.raises(NumericDomainError):
            HalfPlanePoint(0.0, 0.0)

    def test_complex(self):
        assert complex(HalfPlanePoint(0.3, 2.0)) == complex(0.3, 2.0)


class TestMoebius:
    def test_determinant(self):
        with pytest.raises(ValueError):
            MoebiusElement(1, 1, 1, 1)

    def test_projective(self):
        assert MoebiusElement(1, 2, 0, 1) == MoebiusElement(-1, -2, 0, -1)
        assert hash(MoebiusElement(1, 2, 0, 1)) == hash(MoebiusElement(-1, -2, 0, -1))

    def test_examples(self):
        z = HalfPlanePoint(0.3, 2.0)
        assert complex(apply_moebius(I, z)) == complex(z)
        w = apply_moebius(S, HalfPlanePoint(0.0, 1.0))
        assert complex(w) == pytest.approx(1j, abs=1e-15)
        t = apply_moebius(MoebiusElement(1, 1, 0, 1), z)
        assert complex(t) == pytest.approx(1.3 + 2j, abs=1e-15)

    def test_group_law(self):
        rng = np.random.default_rng(1)
        z = HalfPlanePoint(0.2, 0.7)
        for _ in range(20):
            g, h = random_element(rng, 20), random_element(rng, 20)
            lhs = apply_moebius(g @ h, z)
            rhs = apply_moebius(g, apply_moebius(h, z))
            assert complex(lhs) == pytest.approx(complex(rhs), rel=1e-10)
            assert g @ g.inverse() == I

    def test_im_moebius(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            g = random_element(rng, 10_000)
            z = HalfPlanePoint(rng.uniform(-3, 3), rng.uniform(0.1, 5))
            a = im_moebius(g, z)
            b = apply_moebius(g, z).y
            assert abs(a - b) <= 1e-14 * max(a, 1e-300) or abs(a - b) <= 1e-14


class TestReduction:
    def test_fixed(self):
        z, g = reduce_to_fundamental(HalfPlanePoint(0.0, 1.0))
        assert complex(z) == 1j and g == I

    def test_translate(self):
        z, g = reduce_to_fundamental(HalfPlanePoint(1.0, 1.0))
        assert complex(z) == pytest.approx(1j)
        assert g == MoebiusElement.translation(-1)

    def test_small_point(self):
        z0 = HalfPlanePoint(0.1, 0.1)
        z, g = reduce_to_fundamental(z0)
        assert in_fundamental_domain(z)
        assert complex(apply_moebius(g, z0)) == pytest.approx(complex(z), rel=1e-12)
        assert z.y == pytest.approx(max_im_over_cosets(z0, 60, 60), rel=1e-12)

    @settings(max_examples=200)
    @given(upper)
    def test_postconditions(self, xy):
        z0 = HalfPlanePoint(*xy)
        z, g = reduce_to_fundamental(z0)
        assert abs(z.x) <= 0.5 + 1e-12
        assert abs(complex(z)) >= 1 - 1e-12
        assert complex(apply_moebius(g, z0)) == pytest.approx(complex(z), rel=1e-9, abs=1e-9)

    @settings(max_examples=100)
    @given(upper)
    def test_idempotent(self, xy):
        z, _ = reduce_to_fundamental(HalfPlanePoint(*xy))
        z2, g2 = reduce_to_fundamental(z)
        assert complex(z2) == complex(z)
        assert g2 == I

    def test_max_im(self):
        rng = np.random.default_rng(5)
        for _ in range(30):
            z0 = HalfPlanePoint(rng.uniform(-2, 2), rng.uniform(0.05, 3))
            z, _ = reduce_to_fundamental(z0)
            assert z.y <= 10
            assert max_im_over_cosets(z0, 40, 40) == pytest.approx(z.y, rel=1e-12)


class TestCosets:
    def test_small(self):
        reps = coset_representatives(1)
        for pair in [(0, 1), (1, 0), (1, 1), (1, -1)]:
            assert pair in reps

    def test_unique_and_coprime(self):
        reps = coset_representatives(30)
        assert len(reps) == len(set(reps))
        assert all(gcd(c, d) == 1 for c, d in reps)

    def test_density(self):
        C = 200
        count = sum(1 for c, d in coset_representatives(C) if c >= 1 and 1 <= d <= C)
        assert count == pytest.approx(6 / math.pi**2 * C * C, rel=0.02)

    def test_invalid(self):
        with pytest.raises(ValueError):
            coset_representatives(0)


class TestRegions:
    def test_measure_examples(self):
        assert mu_measure(JordanRegion(((0, 1, 1, 2),))) == pytest.approx(0.5)
        assert mu_measure(JordanRegion(((-0.5, 0.5, 2, 4),))) == pytest.approx(0.25)

    def test_additivity(self):
        a = JordanRegion(((0, 0.5, 1, 2),))
        b = JordanRegion(((0.5, 1, 1, 3),))
        assert mu_measure(union([a, b])) == pytest.approx(mu_measure(a) + mu_measure(b), rel=1e-15)
        left, right = split_rectangle(b, "y")
        assert mu_measure(left) + mu_measure(right) == pytest.approx(mu_measure(b), rel=1e-15)

    def test_validation(self):
        with pytest.raises(ValueError):
            JordanRegion(((1, 0, 1, 2),))
        with pytest.raises(ValueError):
            JordanRegion(((0, 1, 0, 2),))
        with pytest.raises(ValueError, match="overlap"):
            JordanRegion(((0, 1, 1, 2), (0.5, 2, 1.5, 3)))
        with pytest.raises(ValueError):
            JordanRegion(((0, 1, 1, math.inf),))

    def test_touching_is_fine(self):
        JordanRegion(((0, 1, 1, 2), (1, 2, 1, 2)))

    def test_parse(self):
        r = parse_region("0,0.5,1,2; 0.5,1,1,2")
        assert r.rectangles == ((0.0, 0.5, 1.0, 2.0), (0.5, 1.0, 1.0, 2.0))
        assert parse_region(r.label()).rectangles == r.rectangles
        with pytest.raises(ValueError, match="four numbers"):
            parse_region("0,1,2")
        with pytest.raises(ValueError, match="not numeric"):
            parse_region("0,a,1,2")

    def test_fundamental_domain_volume(self):
        assert mu_measure(fundamental_domain()) == pytest.approx(math.pi / 3, rel=1e-12)

    def test_clipped_region(self):
        # part of F with |x| <= 1/2 under y = 1.2: area = int (1/sqrt(1-x^2) - 1/1.2) dx
        region = JordanRegion(((-0.5, 0.5, 0.5, 1.2),), clip_to_fundamental=True)
        exact = 2 * math.asin(0.5) - 1 / 1.2
        assert mu_measure(region) == pytest.approx(exact, rel=1e-10)

    def test_staircase_converges(self):
        y_max = 1e9
        errs = [mu_measure(staircase_cover(k, y_max)) - (math.pi / 3 - 1 / y_max) for k in (8, 16, 32)]
        assert all(e > 0 for e in errs)
        assert errs[0] > errs[1] > errs[2]
        # first order in 1/k
        assert errs[1] / errs[2] == pytest.approx(2.0, rel=0.1)
