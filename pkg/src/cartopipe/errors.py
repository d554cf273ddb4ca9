"""Exception types shared across the toolkit.

Every error raised on purpose derives from CartoError so callers (CLI,
pipeline runner, HTTP service) can catch one base class and report the
message without a traceback.
"""


class CartoError(Exception):
    """Base class for all toolkit errors."""


class TextParseError(CartoError):
    """A textual input (JSON, XML, DSL source) failed to parse.

    Carries a 1-based line/column when the underlying parser provides one.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{message} ({where})"
        super().__init__(message)


class SchemaError(CartoError):
    """A metamodel schema violates its invariants (cycles, duplicates, unknown names)."""


class ModelError(CartoError):
    """A cartography model document violates its structural contract."""


class MergeError(CartoError):
    """Models cannot be merged (e.g. conflicting locators on one identity)."""


class TransformError(CartoError):
    """A transformation failed: static check, rule ambiguity, expression or trace error."""


class ViewError(CartoError):
    """View registry loading or view execution failed."""


class PipelineError(CartoError):
    """Pipeline configuration is invalid (distinct from individual step failures)."""
