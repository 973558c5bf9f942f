"""Exception taxonomy shared by every module in the package."""


class UscmetError(Exception):
    """Base class for package-specific errors."""


class InvalidSpec(UscmetError):
    """A parameter record or sweep specification fails validation."""


class NotResonant(InvalidSpec):
    """An operation that assumes omega == Omega was called off resonance."""


class BeyondThreshold(InvalidSpec):
    """Coupling sits at or beyond the normal-phase stability threshold."""


class DimensionCap(InvalidSpec):
    """A truncated space would exceed the configured dimension cap."""


class DimensionMismatch(InvalidSpec):
    """Operator and state dimensions are incompatible."""


class ConvergenceError(UscmetError):
    """A truncated-space quantity failed its cutoff-convergence check."""


class SolverFailure(UscmetError):
    """An eigensolver or linear solver did not converge."""


class StepTooSmall(UscmetError):
    """Finite-difference extrapolants disagree; the step cannot be trusted."""


class SingularDrift(UscmetError):
    """The drift matrix of an open-system model is not strictly stable."""


class NoRootInBracket(UscmetError):
    """A bracketing root search was handed an interval with no sign change."""


class GridTooCoarse(UscmetError):
    """A grid-based estimate has too few points to be meaningful."""
