"""Eigenstate weights, entropies and site occupation numbers."""
import logging

import numpy as np
from scipy.stats import entropy

from qubit_lattice.errors import ConsistencyError
from qubit_lattice.hamiltonian import shifted_energy
from qubit_lattice.types import BandBasis
from shared_config import NORMALIZATION_TOL
from thermo.types import OccupationProfile

logger = logging.getLogger(__name__)

_BATCH = 256


def eigenstate_entropy(weights: np.ndarray) -> float:
    """S_q = -sum_k W_k log2 W_k with 0 log 0 = 0.

    Args:
        weights: Squared eigenvector components over the band basis.

    Returns:
        Entropy in bits, between 0 and log2(N_B).
    """
    weights = np.asarray(weights, dtype=float)
    if np.any(weights < -NORMALIZATION_TOL):
        raise ConsistencyError(f"negative weight {weights.min():.3e} in eigenstate")
    total = weights.sum()
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise ConsistencyError(f"eigenstate weights sum to {total:.12f}, not 1")
    return float(entropy(np.clip(weights, 0.0, None), base=2))


def occupation_numbers(
    eigvec: np.ndarray,
    basis: BandBasis,
    m: int = 0,
    energy: float = 0.0,
    sum_deltas: float = 0.0,
    ground_energy: float | None = None,
) -> OccupationProfile:
    """n_i(m) = sum over basis states with spin i up of W_km.

    Args:
        eigvec: Unit-norm eigenvector in the band basis.
        basis: Band basis the vector is expressed in.
        m: Level index of the eigenstate.
        energy: Band-relative eigenvalue E_m.
        sum_deltas: Sum of detunings, for E'.
        ground_energy: E_0 of the same band, for the excitation energy.

    Returns:
        OccupationProfile of the eigenstate.
    """
    weights = np.abs(np.asarray(eigvec)) ** 2
    s_q = eigenstate_entropy(weights)
    occupations = weights @ basis.spins
    _check_sum_rule(occupations, basis.n_up)

    eprime = float(shifted_energy(energy, sum_deltas))
    excitation = None if ground_energy is None else eprime - float(shifted_energy(ground_energy, sum_deltas))
    return OccupationProfile(
        m=m,
        occupations=occupations,
        energy=float(energy),
        shifted_energy=eprime,
        excitation=excitation,
        entropy=s_q,
    )


def occupation_matrix(eigvecs: np.ndarray, basis: BandBasis) -> np.ndarray:
    """(k, n) occupation table for the columns of eigvecs."""
    k = eigvecs.shape[1]
    table = np.empty((k, basis.n))
    for start in range(0, k, _BATCH):
        block = np.abs(eigvecs[:, start:start + _BATCH]) ** 2
        table[start:start + _BATCH] = block.T @ basis.spins
    for row in table:
        _check_sum_rule(row, basis.n_up)
    return table


def _check_sum_rule(occupations: np.ndarray, n_up: int) -> None:
    total = float(occupations.sum())
    if abs(total - n_up) > NORMALIZATION_TOL:
        raise ConsistencyError(f"occupations sum to {total:.12f}, expected n_up={n_up}")
