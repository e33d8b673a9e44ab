"""Exception types shared across the package."""


class MicpError(ValueError):
    """Invalid input or a violated precondition."""


class DeskScaleError(MicpError):
    """An exact algorithm was asked to run beyond its supported size."""

    def __init__(self, message: str = "desk-scale limit"):
        super().__init__(message)
