"""
Exception hierarchy shared by every roadseg module.
"""


class RoadsegError(Exception):
    """Base exception for all roadseg errors."""
    kind = "runtime"


class InvalidArgumentError(RoadsegError, ValueError):
    """Raised when an argument lies outside its documented domain."""
    kind = "invalid-argument"


class ShapeError(RoadsegError, ValueError):
    """Raised when tensor shapes violate a layer or model contract."""
    kind = "shape"


class ConfigurationError(RoadsegError):
    """Raised for inconsistent configs, empty splits or input mismatches."""
    kind = "config"


class CorruptFileError(RoadsegError):
    """
    Raised when a patch container fails validation.

    Attributes:
        check: Name of the failing check (magic, version, header,
            payload or names).
    """
    kind = "corrupt-file"

    def __init__(self, check: str, message: str):
        self.check = check
        super().__init__(f"{check}: {message}")
