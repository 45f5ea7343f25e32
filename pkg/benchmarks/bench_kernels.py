"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly, so EISENQE_PURE_PYTHON is irrelevant
here; the script exits with an error if the extension is not built.
"""
from __future__ import annotations

import argparse
import sys
import timeit

import numpy as np

from eisenqe._kernels import _reference

try:
    from eisenqe._kernels import _ckernels
except ImportError:
    sys.exit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")


def _cases():
    rng = np.random.default_rng(0)
    us = np.linspace(0.5, 40.0, 200)
    coeffs = rng.standard_normal(60) + 1j * rng.standard_normal(60)
    xs = rng.uniform(-0.5, 0.5, 400)
    return [
        ("k_bessel t=5, 200 args", "k_bessel_log", (0.25, 5.0, us)),
        ("k_bessel t=50, 200 args", "k_bessel_log", (0.25, 50.0, us)),
        ("k_bessel t=200, 200 args", "k_bessel_log", (0.25, 200.0, us * 5.0)),
        ("cosine_sum 60 modes x 400", "cosine_sum", (1.0 + 0.5j, coeffs, xs)),
    ]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="timing repeats, best is reported (default 5)")
    args = parser.parse_args(argv)

    print(f"{'case':<28}{'cython ms':>12}{'python ms':>12}{'speedup':>10}{'max |diff|':>14}")
    for label, name, call_args in _cases():
        fast, slow = getattr(_ckernels, name), getattr(_reference, name)
        diff = float(np.max(np.abs(np.asarray(fast(*call_args)) - np.asarray(slow(*call_args)))))
        t_fast = min(timeit.repeat(lambda: fast(*call_args), number=1, repeat=args.repeat)) * 1e3
        t_slow = min(timeit.repeat(lambda: slow(*call_args), number=1, repeat=args.repeat)) * 1e3
        print(f"{label:<28}{t_fast:>12.3f}{t_slow:>12.3f}{t_slow / t_fast:>10.1f}{diff:>14.2e}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
