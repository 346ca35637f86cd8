"""Type definitions for eigensolver results."""
from dataclasses import dataclass
from typing import Literal

import numpy as np

SolverMethod = Literal["dense", "iterative"]
BandSide = Literal["lowest", "highest"]


@dataclass(frozen=True)
class SpectrumResult:
    """Eigenpairs of a band Hamiltonian, eigenvalues ascending.

    Eigenvectors, when present, are the columns of an (N_B, k) array aligned
    with the eigenvalues.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    method: SolverMethod
    residual_bound: float | None  # max ||Hv - lv||, None without vectors
    degenerate: bool = False
    side: BandSide | None = None  # iterative results only

    @property
    def n_levels(self) -> int:
        return int(self.eigenvalues.shape[0])

    @property
    def is_full(self) -> bool:
        return self.method == "dense"
