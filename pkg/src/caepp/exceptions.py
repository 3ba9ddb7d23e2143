class ZeroSuccessError(RuntimeError):
    """Every branch of a round is rejected, so the posterior is undefined."""


class NonConvergenceError(RuntimeError):
    """A fixed-point search ran out of rounds."""

    def __init__(self, message, trajectory=None):
        super().__init__(message)
        self.trajectory = trajectory


class SizeGuardError(ValueError):
    """An exact enumeration or dense simulation would be too large."""
