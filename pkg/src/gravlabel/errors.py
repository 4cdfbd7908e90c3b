"""Exception types shared across the package."""


class GravlabelError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(GravlabelError):
    """A referenced column, feature, or LF name does not fit the schema."""


class InputError(GravlabelError):
    """A value or file content is malformed or out of range."""


class ConfigError(GravlabelError):
    """A pipeline configuration file is missing or inconsistent."""


class NumericError(GravlabelError):
    """A numeric computation failed (e.g. a singular covariance matrix)."""


class NoTrainingDataError(GravlabelError):
    """Aggregation labeled zero points, so no end model can be trained."""


class DegenerateTrainingError(GravlabelError):
    """The training set contains a single class (or too few samples)."""
