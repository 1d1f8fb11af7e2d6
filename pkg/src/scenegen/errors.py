"""Shared exception types."""


class CodecError(ValueError):
    """Invalid input to a control-image codec operation."""


class CorruptDataError(CodecError):
    """Serialized data violates a codec invariant (bad intensity, size, ...)."""


class PipelineError(RuntimeError):
    """Dataset pipeline failure (missing files, broken record, ...)."""


class CompileError(ValueError):
    """A scene cannot be compiled into control images."""

    def __init__(self, message: str, slot: int | None = None):
        super().__init__(message)
        self.slot = slot
