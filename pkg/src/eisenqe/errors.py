"""Exception hierarchy shared by all modules."""


class EisenQEError(Exception):
    """Base class for library errors."""


class NumericDomainError(EisenQEError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleError(NumericDomainError):
    """Evaluation requested at a pole."""


class ScatteringPoleError(PoleError):
    """The point is (numerically) a pole of the scattering matrix."""

    def __init__(self, s, detail=""):
        self.location = complex(s)
        msg = f"scattering pole: xi(2s) vanishes at s = {self.location}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class AccuracyError(EisenQEError, ArithmeticError):
    """A requested accuracy cannot be certified."""


class OscillationBudgetError(AccuracyError):
    """|Im nu| exceeds the configured K-Bessel oscillation budget."""


class QuadratureError(AccuracyError):
    """Adaptive quadrature did not meet its tolerance."""


class TruncationError(AccuracyError):
    """A series needs more terms than the configured cap allows."""


class DivergentParametersError(NumericDomainError):
    """A Dirichlet series was requested outside its half-plane of convergence."""


class ZeroTableError(EisenQEError, ValueError):
    """Malformed zero table or failed zero refinement."""


class NoSignChangeError(ZeroTableError):
    """No sign change of xi(1/2 + i tau) in the search window."""
