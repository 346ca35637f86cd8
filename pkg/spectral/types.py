"""Type definitions for level-spacing statistics."""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpacingSample:
    """Consecutive-level gaps normalized to unit mean within one window."""
    spacings: np.ndarray
    window: str  # e.g. "center 0.05" or "E/B [-0.50, -0.38]"

    @property
    def count(self) -> int:
        return int(self.spacings.shape[0])


@dataclass(frozen=True)
class EtaResult:
    """Poisson/Wigner-Dyson crossover parameter (1 = Poisson, 0 = Wigner-Dyson)."""
    eta: float
    n_spacings: int
    stderr: float
    realization_mean: float | None = None
    realization_stderr: float | None = None
    n_realizations: int | None = None


@dataclass(frozen=True)
class EnergyWindow:
    """A contiguous block of levels [start, stop) and its position in the band."""
    index: int
    start: int
    stop: int
    e_over_b: float  # mean level energy in the window over the band width
    e_over_b_lo: float
    e_over_b_hi: float

    @property
    def n_levels(self) -> int:
        return self.stop - self.start

    @property
    def label(self) -> str:
        return f"E/B [{self.e_over_b_lo:+.3f}, {self.e_over_b_hi:+.3f}]"
