from __future__ import annotations


class ToolError(Exception):
    """Recoverable tool failure; reported back to the model as an error result."""


class ToolFatalError(Exception):
    """Infrastructure loss (e.g. the browser session is gone); ends the run."""


class ElementNotFound(ToolError):
    pass


class SandboxEscapeError(ToolError):
    """A file path resolved outside the sandbox root."""


class ParseSchemaError(ToolError):
    """Parse backend output failed validation. ``raw`` keeps the backend output."""

    def __init__(self, message: str, raw: str = ""):
        super().__init__(message)
        self.raw = raw
