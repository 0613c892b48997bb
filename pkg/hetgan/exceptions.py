"""Exceptions raised across hetgan."""


class TrainingDivergedError(FloatingPointError):
    """
    Raised when a loss or gradient becomes non-finite during training.

    Parameters
    ----------
    message : str
        Description of the fault.
    report : LossReport or None
        The last loss report computed before the fault, if any.
    iteration : int or None
        The iteration at which training diverged.
    """

    def __init__(self, message, report=None, iteration=None):
        super().__init__(message)
        self.report = report
        self.iteration = iteration

    def __reduce__(self):
        return type(self), (str(self), self.report, self.iteration)


class CheckpointError(ValueError):
    """Base class for checkpoint loading failures."""


class CheckpointVersionError(CheckpointError):
    """The checkpoint was written by an incompatible format version."""


class CheckpointFormatError(CheckpointError):
    """The checkpoint file is not valid or is missing required fields."""


class CheckpointShapeError(CheckpointError):
    """A declared layer shape disagrees with the stored arrays."""


class UndefinedMetricError(ValueError):
    """A metric has no defined value for the given inputs."""


class ReplicaError(RuntimeError):
    """A single replica failed during replicated training."""

    def __init__(self, message, replica=None):
        super().__init__(message)
        self.replica = replica

    def __reduce__(self):
        return type(self), (str(self), self.replica)


class CohortFormatError(ValueError):
    """A cohort or truth file is missing columns or holds invalid values."""
