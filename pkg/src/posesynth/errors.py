"""Exception types shared across the package."""


class PlyParseError(ValueError):
    """Malformed PLY content. Carries the byte offset where parsing failed."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class ManifestError(ValueError):
    """Malformed manifest CSV. Carries the 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class CapacityError(RuntimeError):
    """Requested pose enumeration exceeds the configured cap."""


class ConfigError(ValueError):
    """Invalid configuration. Carries the dotted field path when known."""

    def __init__(self, message, field=None):
        if field is not None:
            message = f"{field}: {message}"
        super().__init__(message)
        self.field = field
