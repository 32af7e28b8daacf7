"""Exception types shared across the toolkit."""


class MorphidError(Exception):
    """Base class for all toolkit errors."""


class StructureError(MorphidError, ValueError):
    """A morphology vector does not match the robot description."""


class ResourceLimitError(MorphidError):
    """An enumeration would exceed the configured state cap."""


class SimulationError(MorphidError):
    """The requested configuration cannot be simulated."""


class SpectrumIntegrityError(MorphidError):
    """A spectrum that should be conjugate-symmetric is not."""


class TrajectoryParseError(MorphidError, ValueError):
    """A trajectory CSV file is malformed."""


class PipelineError(MorphidError):
    """An end-to-end identification run cannot proceed."""
