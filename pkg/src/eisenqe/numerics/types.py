"""Small value types for spectral parameters."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class SpectralPoint:
    """The Eisenstein parameter s = sigma + i t."""

    sigma: float
    t: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and math.isfinite(self.t)):
            raise ValueError(f"SpectralPoint must be finite, got ({self.sigma}, {self.t})")

    def __complex__(self):
        return complex(self.sigma, self.t)

    @classmethod
    def from_complex(cls, s: complex) -> "SpectralPoint":
        s = complex(s)
        return cls(s.real, s.imag)


def as_complex(s) -> complex:
    """Accept a SpectralPoint, a complex, or a real and return a complex."""
    value = complex(s)
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ValueError(f"non-finite spectral parameter {s!r}")
    return value
