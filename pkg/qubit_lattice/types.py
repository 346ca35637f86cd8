"""Type definitions for the qubit lattice model."""
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
import numpy as np
import scipy.sparse as sparse
from pydantic import BaseModel, ConfigDict, Field, model_validator


class LatticeSpec(BaseModel):
    """Periodic two-dimensional lattice with its nearest-neighbor bond set."""
    model_config = ConfigDict(frozen=True)

    rows: int = Field(ge=2, description="Number of lattice rows.")
    cols: int = Field(ge=2, description="Number of lattice columns.")
    bonds: list[tuple[int, int]] = Field(description="Deduplicated bonds (i, j), i < j, in canonical order.")

    @property
    def n(self) -> int:
        return self.rows * self.cols

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    @model_validator(mode="after")
    def _check_bonds(self) -> "LatticeSpec":
        seen = set()
        for i, j in self.bonds:
            if not (0 <= i < self.n and 0 <= j < self.n):
                raise ValueError(f"bond ({i}, {j}) references a site outside [0, {self.n})")
            if i == j:
                raise ValueError(f"bond ({i}, {j}) pairs a site with itself")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicate bond {key}")
            seen.add(key)
        return self

    def to_graph(self) -> nx.Graph:
        """Return the lattice as a networkx graph on site indices."""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from(self.bonds)
        return graph


class ModelParams(BaseModel):
    """Energy scales of the model, in units of the detuning width."""
    model_config = ConfigDict(frozen=True)

    delta: float = Field(default=1.0, gt=0, description="Detuning width: delta_i ~ U[-delta/2, delta/2].")
    J: float = Field(default=0.0, ge=0, description="Coupling amplitude: J_ij ~ U[-J, J].")
    delta0: float = Field(default=25.0, gt=0, description="Mean qubit spacing, used by full-H validation only.")

    def check_validation_regime(self) -> None:
        """Full-Hamiltonian validation needs well separated bands."""
        if self.delta0 <= self.delta:
            raise ValueError(f"delta0={self.delta0} must exceed delta={self.delta} for band validation")


@dataclass(frozen=True)
class DisorderRealization:
    """One draw of detunings and bond couplings."""
    seed: int
    deltas: np.ndarray  # (n,)
    couplings: np.ndarray  # (n_bonds,)

    @property
    def sum_deltas(self) -> float:
        return float(np.sum(self.deltas))


@dataclass(frozen=True)
class BandBasis:
    """Fixed-magnetization computational basis of one band.

    States are n-bit masks (bit i set = spin i up) sorted ascending, so the
    rank of a mask is found by binary search.
    """
    n: int
    n_up: int
    states: np.ndarray  # (N_B,) int64, strictly increasing

    @property
    def dimension(self) -> int:
        return int(self.states.shape[0])

    def rank(self, masks: np.ndarray) -> np.ndarray:
        """Map masks to basis indices; raises KeyError on any mask outside the band."""
        masks = np.asarray(masks, dtype=np.int64)
        idx = np.searchsorted(self.states, masks)
        idx_clipped = np.minimum(idx, self.dimension - 1)
        found = self.states[idx_clipped] == masks
        if not np.all(found):
            missing = masks[~found]
            raise KeyError(f"{missing.size} masks not in band basis (first: {int(missing[0]):#x})")
        return idx_clipped

    @cached_property
    def spins(self) -> np.ndarray:
        """(N_B, n) table of 0/1 occupations: spins[k, i] = bit i of state k."""
        shifts = np.arange(self.n, dtype=np.int64)
        return ((self.states[:, None] >> shifts[None, :]) & 1).astype(np.int8)


@dataclass(frozen=True)
class BandHamiltonian:
    """Band-projected Hamiltonian H_P in band-relative energies.

    Off-diagonal entries are stored once with rows < cols.
    """
    dimension: int
    diag: np.ndarray  # (N_B,)
    rows: np.ndarray  # (n_offdiag,)
    cols: np.ndarray
    values: np.ndarray
    sum_deltas: float

    @property
    def n_offdiag(self) -> int:
        return int(self.values.shape[0])

    @cached_property
    def matrix(self) -> sparse.csr_matrix:
        """Full symmetric CSR form of the operator."""
        upper = sparse.coo_matrix((self.values, (self.rows, self.cols)), shape=(self.dimension, self.dimension))
        full = upper + upper.T + sparse.diags(self.diag)
        return full.tocsr()

    def trace(self) -> float:
        return float(np.sum(self.diag))


@dataclass(frozen=True)
class ProjectionCheck:
    """Comparison of the full-H central band against the projected spectrum."""
    max_deviation: float
    bound: float
    band_size: int
    n_bands: int
    passed: bool
