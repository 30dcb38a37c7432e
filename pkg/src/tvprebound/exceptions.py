"""Exception hierarchy shared by the pipeline stages."""


class ReboundError(Exception):
    """Base class for all package errors."""


class ConfigError(ReboundError, ValueError):
    """Malformed or inconsistent run configuration."""


class DataError(ReboundError, ValueError):
    """Problems with input series: ingestion, alignment, transform domains."""


class IngestionError(DataError):
    pass


class EstimationError(ReboundError, RuntimeError):
    """Numerical failure while fitting or sampling."""


class SweepError(EstimationError):
    """A single Gibbs sweep could not be completed (retried by the driver)."""
