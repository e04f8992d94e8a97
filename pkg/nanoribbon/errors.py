"""
Exceptions

Error hierarchy for the nanoribbon library. Validation errors describe inputs
that can be fixed by the caller (CLI exit code 2); solver errors describe
numerical failures (CLI exit code 3).
"""

from typing import List, Optional, Sequence


class RibbonError(Exception):
    """Base class for all library errors."""

    def __init__(self, message: str):
        self.message = message
        super().__init__(message)


class RibbonValidationError(RibbonError):
    """Input rejected before any computation."""


class UnsupportedGeometryError(RibbonValidationError):
    """Ribbon width with 2L an integer (degenerate thresholds)."""

    def __init__(self, L: float, detail: str = ""):
        self.L = L
        message = f"Unsupported geometry L={L!r}: 2L must not be an integer"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)


class ThresholdCollisionError(RibbonValidationError):
    """Energy coincides with a threshold; the near-threshold path is required."""

    def __init__(self, omega: float, threshold: float, k: int):
        self.omega = omega
        self.threshold = threshold
        self.k = k
        super().__init__(
            f"omega={omega!r} coincides with threshold omega_{k}={threshold!r}; "
            "use the near-threshold (N, eps) parametrisation"
        )


class EnergyRangeError(RibbonValidationError):
    """Threshold distance eps outside the admissible window."""

    def __init__(self, eps: float, lower: float, upper: float, N: Optional[int] = None):
        self.eps = eps
        self.lower = lower
        self.upper = upper
        self.N = N
        where = f" for N={N}" if N is not None else ""
        super().__init__(
            f"eps={eps!r} outside the admissible window ({lower!r}, {upper!r}]{where}"
        )


class RegimeMismatchError(RibbonValidationError):
    """Wave family requested in an energy regime where it is not defined."""

    def __init__(self, family: str, detail: str):
        self.family = family
        super().__init__(f"Wave family '{family}' not available: {detail}")


class ConfigurationError(RibbonValidationError):
    """Inconsistent run or solver configuration."""


class SolverError(RibbonError):
    """Numerical failure of a solve."""


class IllConditionedError(SolverError):
    """Boundary matching produced a (numerically) singular system."""

    def __init__(self, condition: float, residual: Optional[float] = None):
        self.condition = condition
        self.residual = residual
        message = f"Ill-conditioned scattering system (condition estimate {condition:.3e})"
        if residual is not None:
            message += f", relative residual {residual:.3e}"
        super().__init__(message)


class InsufficientDomainError(SolverError):
    """Remainder at the extraction section exceeds the tolerance."""

    def __init__(self, remainder: float, tol: float):
        self.remainder = remainder
        self.tol = tol
        super().__init__(
            f"Extraction sections disagree by {remainder:.3e} (> {tol:.1e}); "
            "increase X or the solver resolution"
        )


class QuadratureError(SolverError):
    """Quadrature did not converge under refinement."""

    def __init__(self, change: float, tol: float):
        self.change = change
        self.tol = tol
        super().__init__(f"Quadrature changed by {change:.3e} under refinement (> {tol:.1e})")


class SynthesisError(SolverError):
    """Failure of the inverse design."""


class RankDeficiencyError(SynthesisError):
    """Bump basis does not span the moment conditions."""

    def __init__(self, singular_values: Sequence[float]):
        self.singular_values: List[float] = [float(s) for s in singular_values]
        spectrum = ", ".join(f"{s:.3e}" for s in self.singular_values)
        super().__init__(f"Moment system is rank deficient; Gram spectrum [{spectrum}]")


class ContractionError(SynthesisError):
    """Fixed-point iterates failed to contract."""

    def __init__(self, history: Sequence[float]):
        self.history: List[float] = [float(h) for h in history]
        super().__init__(
            "Fixed-point iteration is not contracting "
            f"(step sizes {', '.join(f'{h:.2e}' for h in self.history[-4:])}); "
            "use a smaller eps"
        )


class IdentityCheckError(SolverError):
    """One or more numerical identity checks exceeded their tolerance."""

    def __init__(self, failed: Sequence[str]):
        self.failed: List[str] = list(failed)
        super().__init__(f"Identity checks failed: {', '.join(self.failed)}")
