"""Complex numbers stored as (log-modulus, phase).

Gamma factors and K-Bessel values at height t carry magnitudes near
exp(-pi t / 2); the products that appear in the Fourier coefficients are
O(1) while their factors are not.  Everything is multiplied in log space
and only converted back at the end.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

_TWO_PI = 2.0 * math.pi


def normalize_phase(phase: float) -> float:
    """Map a phase to (-pi, pi]."""
    p = math.remainder(phase, _TWO_PI)
    if p <= -math.pi:
        p += _TWO_PI
    return p


@dataclass(frozen=True)
class LogComplex:
    """A complex number ``exp(log_mag) * exp(i * phase)``.

    ``log_mag = -inf`` encodes zero (phase is then 0).
    """

    log_mag: float
    phase: float = 0.0

    def __post_init__(self):
        if math.isnan(self.log_mag) or math.isnan(self.phase):
            raise ValueError("LogComplex components must not be NaN")
        if self.log_mag == -math.inf:
            object.__setattr__(self, "phase", 0.0)
        else:
            object.__setattr__(self, "phase", normalize_phase(self.phase))

    @classmethod
    def from_complex(cls, value: complex) -> "LogComplex":
        value = complex(value)
        if value == 0:
            return cls(-math.inf, 0.0)
        return cls(math.log(abs(value)), cmath.phase(value))

    @classmethod
    def from_log(cls, log_value: complex) -> "LogComplex":
        """Build from a complex logarithm ``log|v| + i arg v``."""
        log_value = complex(log_value)
        return cls(log_value.real, log_value.imag)

    def log(self) -> complex:
        """Complex logarithm (principal phase)."""
        return complex(self.log_mag, self.phase)

    def to_complex(self) -> complex:
        if self.log_mag == -math.inf:
            return 0j
        return cmath.rect(math.exp(self.log_mag), self.phase)

    __complex__ = to_complex

    @property
    def modulus(self) -> float:
        return math.exp(self.log_mag)

    def is_zero(self) -> bool:
        return self.log_mag == -math.inf

    def conjugate(self) -> "LogComplex":
        return LogComplex(self.log_mag, -self.phase)

    def __mul__(self, other):
        other = _coerce(other)
        return LogComplex(self.log_mag + other.log_mag, self.phase + other.phase)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by a zero LogComplex")
        return LogComplex(self.log_mag - other.log_mag, self.phase - other.phase)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, exponent):
        # principal branch: exp(exponent * Log(self))
        if self.is_zero():
            return LogComplex(-math.inf)
        return LogComplex.from_log(complex(exponent) * self.log())

    def __add__(self, other):
        other = _coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        big, small = (self, other) if self.log_mag >= other.log_mag else (other, self)
        ratio = cmath.rect(math.exp(small.log_mag - big.log_mag), small.phase - big.phase)
        total = 1.0 + ratio
        if total == 0:
            return LogComplex(-math.inf)
        return LogComplex(big.log_mag + math.log(abs(total)), big.phase + cmath.phase(total))

    __radd__ = __add__

    def __neg__(self):
        return LogComplex(self.log_mag, self.phase + math.pi)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def isclose(self, other, rel_tol=1e-12) -> bool:
        other = _coerce(other)
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        diff = complex(self.log_mag - other.log_mag, normalize_phase(self.phase - other.phase))
        return abs(diff) <= rel_tol


def _coerce(value) -> LogComplex:
    if isinstance(value, LogComplex):
        return value
    return LogComplex.from_complex(value)


def exp_log(log_values) -> np.ndarray:
    """``exp`` of complex logarithms, mapping ``-inf`` real parts to exact zeros."""
    log_values = np.asarray(log_values, dtype=complex)
    out = np.zeros(log_values.shape, dtype=complex)
    finite = np.isfinite(log_values.real)
    out[finite] = np.exp(log_values[finite])
    return out
