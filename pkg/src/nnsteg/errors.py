"""Exception types shared across the package."""


class NnstegError(Exception):
    """Base class for all package-specific errors."""


class ShapeError(NnstegError, ValueError):
    """Vector or matrix dimensions do not match what an operation requires."""


class ParseError(NnstegError, ValueError):
    """A text document (model file, PGM, bit file, sidecar) is malformed."""


class CapacityError(NnstegError, ValueError):
    """A cover object cannot hold the requested message."""

    def __init__(self, required: int, available: int, what: str = "bits"):
        self.required = required
        self.available = available
        super().__init__(f"capacity exceeded: need {required} {what}, have {available}")


class ConventionError(NnstegError, ValueError):
    """An embedding convention was requested with unsupported parameters."""


class TrainingDiverged(NnstegError, RuntimeError):
    """Training loss became non-finite."""

    def __init__(self, epoch: int):
        self.epoch = epoch
        super().__init__(f"training diverged at epoch {epoch}: loss is not finite")


class SpaceTooLarge(NnstegError, ValueError):
    """Exhaustive enumeration was requested over too large an input space."""
