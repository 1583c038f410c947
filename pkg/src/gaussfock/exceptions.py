"""Error types shared across the package."""


class TruncationError(ValueError):
    """Raised when a construction loses more tail weight than allowed.

    Carries the lost probability mass as `lost`.
    """

    def __init__(self, message: str, lost: float):
        super().__init__(message)
        self.lost = float(lost)


class AccuracyError(RuntimeError):
    """Raised when a numeric route fails its own convergence check."""
