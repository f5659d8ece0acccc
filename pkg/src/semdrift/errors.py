"""Exception hierarchy shared by all semdrift modules."""


class SemdriftError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(SemdriftError):
    """Malformed input files, inconsistent resources, or violated contracts."""


class IngestError(SemdriftError):
    """A corpus file could not be read."""


class AnalysisError(SemdriftError):
    """A computation is undefined for the given data (empty stratum, zero vector, ...)."""


class DegenerateVarianceWarning(UserWarning):
    """Emitted when a statistical test runs on data with zero within-group variance."""
