"""Exception types shared across the package."""


class EigensurfError(Exception):
    """Base class for all package-specific errors."""


class MatrixFormatError(EigensurfError):
    """A matrix, surface, or report file violates the expected format."""


class AlignmentError(EigensurfError):
    """Control and deformed matrices cannot be aligned row-for-row."""


class WindowError(EigensurfError, ValueError):
    """A sliding-window size is invalid for the given dimensions."""


class PipelineError(EigensurfError):
    """A pipeline stage failed. Carries the stage name for diagnostics."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
