"""Exception hierarchy shared by every qcore package."""


class QcoreError(Exception):
    """Base class for qcore failures."""


class CapacityError(QcoreError):
    """A configured size cap was exceeded."""


class ConsistencyError(QcoreError):
    """An internal invariant was violated."""


class ConvergenceError(QcoreError):
    """An iterative solver stopped before meeting its tolerance."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


class FitError(QcoreError):
    """A fit or constraint solve has no finite solution."""


class OutputExistsError(QcoreError):
    """Result files already exist and overwriting was not requested."""


class RealizationError(QcoreError):
    """A disorder realization failed; carries its index and seed."""

    def __init__(self, index: int, seed: int, cause: Exception):
        super().__init__(f"realization {index} (seed {seed}): {type(cause).__name__}: {cause}")
        self.index = index
        self.seed = seed
