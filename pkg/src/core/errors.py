# src/core/errors.py


class StepFitError(ValueError):
    """Base class for every domain error raised by the fitting engine."""


class EmptyInput(StepFitError):
    pass


class DuplicateP(StepFitError):
    pass


class NonFiniteValue(StepFitError):
    pass


class IndexOutOfRange(StepFitError, IndexError):
    pass


class CurveDoesNotCoverData(StepFitError):
    pass


class BelowDomain(StepFitError):
    pass


class InfeasibleCardinality(StepFitError):
    """No path reaches the sink within the allowed number of arcs."""


class InfeasibleStepMin(InfeasibleCardinality):
    """step_min excludes every completion, even a single block."""


class NonPositiveLB(StepFitError):
    pass


class InstanceTooLarge(StepFitError):
    pass


class UsageError(StepFitError):
    """Bad command-line usage."""
