"""Exceptions and warning categories shared across the package."""


class CoordMetricsError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(CoordMetricsError):
    """A CSV file does not match the expected column layout."""


class ValidationError(CoordMetricsError):
    """Input data violate a structural invariant (monotone time, finiteness, ...)."""


class ConfigError(CoordMetricsError):
    """A configuration value is out of its allowed range."""


class ParameterError(CoordMetricsError):
    """An operation was called with incompatible or out-of-range arguments."""


class DegenerateRangeError(CoordMetricsError):
    """A series has zero range (max == min) and cannot be range-normalized."""


class MetricError(CoordMetricsError):
    """A metric computation failed on otherwise well-formed inputs."""


class EigenvalueTieWarning(UserWarning):
    """Adjacent eigenvalues are (near-)tied, so the component basis is not unique."""


class SampleSizeWarning(UserWarning):
    """Fewer samples than the recommended variable-to-factor ratio."""


class EmptySelectionWarning(UserWarning):
    """A row selection produced no rows (e.g. null-space rows when m == p)."""
