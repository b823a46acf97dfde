"""Error hierarchy shared by the toolkit, the CLI and the prediction service."""


class FocirError(Exception):
    """Base error.

    Attributes:
        exit_code: Process exit code used by the CLI
        http_status: Status code used by the prediction service
    """

    exit_code = 1
    http_status = 400

    def __init__(self, message):
        super().__init__(message)
        self.message = message


class ConfigError(FocirError):
    """Invalid run configuration, command usage or option value."""

    exit_code = 1


class VariantError(ConfigError):
    """Operation not available for the configured network variant."""


class DataError(FocirError):
    """Malformed or inconsistent input data."""

    exit_code = 2


class ShapeError(DataError):
    """Array shapes do not agree."""


class LayoutError(DataError):
    """Sample columns do not follow the expected feature layout."""


class NumericalError(FocirError):
    """NaN/Inf encountered or training diverged."""

    exit_code = 3
    http_status = 422


class MissingCacheError(FocirError):
    """Backward pass requested without a forward cache."""

    exit_code = 3
    http_status = 500
