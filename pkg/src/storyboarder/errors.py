"""Exception types shared across the package."""

from __future__ import annotations


class StoryboarderError(Exception):
    """Base class for every error raised by this package."""


class ParseError(StoryboarderError):
    """Syntax error in an app document. Carries 1-based line and column."""

    def __init__(self, line: int, col: int, message: str):
        self.line = line
        self.col = col
        self.message = message
        super().__init__(f"line {line}, col {col}: {message}")


class ModelReferenceError(StoryboarderError):
    """A document names a unit, layout, activity, or method that does not exist."""

    def __init__(self, missing: str, context: str):
        self.missing = missing
        self.context = context
        super().__init__(f"{context}: unknown reference {missing!r}")


class DuplicateNameError(StoryboarderError):
    """Two declarations claim the same name in one namespace."""

    def __init__(self, name: str, context: str):
        self.name = name
        self.context = context
        super().__init__(f"{context}: duplicate name {name!r}")


class ModelValidationError(StoryboarderError):
    """A parsed document violates model invariants. Wraps validate() diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(f"{d.path}: {d.message}" for d in self.diagnostics)
        super().__init__(f"invalid model: {lines}")


class AnalysisError(StoryboarderError):
    """An analysis met input it cannot process (e.g. a call to an undeclared method)."""


class SecurityLaunchError(StoryboarderError):
    """Direct launch into a non-exported, non-launcher activity."""


class DeviceError(StoryboarderError):
    """Invalid operation against the device state (bad target, nothing on screen, ...)."""


class UndefinedMetricError(StoryboarderError):
    """A metric's denominator is empty (e.g. zero declared activities)."""


class DimensionMismatchError(StoryboarderError):
    """Two rasters of different sizes were compared."""
