"""Exception hierarchy shared across the package."""


class SpecCalcError(Exception):
    """Base class for all speccalc errors."""


class NotDiagonalizable(SpecCalcError):
    """Matrix is defective within tolerance; no eigenprojection family exists."""


class IllConditioned(SpecCalcError):
    """Eigenvector condition number exceeds the configured cap, so the
    projection family would not be uniformly bounded in any useful sense."""


class DomainError(SpecCalcError):
    """A vector fell outside the domain of an unbounded operator."""


class NotCovering(SpecCalcError):
    """A covering-sequence residual stayed above tolerance."""


class Unbounded(SpecCalcError):
    """Essential sup of the symbol is infinite; no bounded operator exists."""


class IdentityViolated(SpecCalcError):
    """A verified operator identity missed its tolerance.  This signals an
    implementation bug, not an expected mathematical failure."""


class QuadratureNotConverged(SpecCalcError):
    """Adaptive refinement hit its depth cap before meeting tolerance."""


class NotBounded(SpecCalcError):
    """Operator-norm estimate over probes diverged."""


class NoRepresentingOperator(SpecCalcError):
    """Scalar integrals converged but no single operator reproduces them."""


class NotAppropriate(SpecCalcError):
    """A functional family failed one of the adequacy clauses."""

    def __init__(self, clause, message):
        super().__init__(f"clause {clause}: {message}")
        self.clause = clause


class HypothesisViolated(SpecCalcError):
    """A boundedness/integrability hypothesis of a verifier failed; carries
    the offending sample when one exists."""

    def __init__(self, message, sample=None):
        super().__init__(message)
        self.sample = sample


class OrderTooLow(SpecCalcError):
    """Observed finite-difference convergence order fell below threshold."""


class SpectrumNotReal(SpecCalcError):
    """Resolvent check requires a real-spectrum operator."""


class HalfPlaneViolation(SpecCalcError):
    """Resolvent parameter must lie in the open upper half-plane."""


class HUnbounded(SpecCalcError):
    """Right-hand symbol of an extension identity is not essentially bounded."""


class ConfigError(SpecCalcError):
    """Suite configuration failed validation."""
