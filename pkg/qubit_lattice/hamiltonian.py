"""Assembly of the band-projected and full qubit-lattice Hamiltonians."""
import logging

import numpy as np
import scipy.sparse as sparse

from qubit_lattice.errors import CapacityError, ConsistencyError
from qubit_lattice.types import BandBasis, BandHamiltonian, DisorderRealization, LatticeSpec
from shared_config import FULL_HAMILTONIAN_MAX_SITES

logger = logging.getLogger(__name__)


def _check_sizes(lattice: LatticeSpec, real: DisorderRealization) -> None:
    if real.deltas.shape != (lattice.n,) or real.couplings.shape != (lattice.n_bonds,):
        raise ValueError(
            f"realization sized ({real.deltas.size}, {real.couplings.size}) does not match "
            f"lattice ({lattice.n} sites, {lattice.n_bonds} bonds)"
        )


def build_band_hamiltonian(lattice: LatticeSpec, real: DisorderRealization, basis: BandBasis) -> BandHamiltonian:
    """Assemble H_P restricted to one fixed-magnetization band.

    Within a band only the spin-exchange part of sigma^x sigma^x survives, so
    each bond with anti-aligned spins links a state to the one with those two
    spins swapped.

    Args:
        lattice: Lattice geometry.
        real: Disorder realization on that lattice.
        basis: Band basis (n must match the lattice).

    Returns:
        BandHamiltonian with band-relative diagonal sum_i delta_i s_i.
    """
    _check_sizes(lattice, real)
    if basis.n != lattice.n:
        raise ValueError(f"basis has n={basis.n} but lattice has n={lattice.n}")

    spins = basis.spins
    diag = (2 * spins - 1) @ real.deltas

    rows, cols, values = [], [], []
    for (i, j), coupling in zip(lattice.bonds, real.couplings):
        anti = np.nonzero(spins[:, i] != spins[:, j])[0]
        partners = basis.states[anti] ^ ((1 << i) | (1 << j))
        try:
            targets = basis.rank(partners)
        except KeyError as e:
            raise ConsistencyError(f"exchange on bond ({i}, {j}) left the band: {e}") from e
        upper = anti < targets
        rows.append(anti[upper])
        cols.append(targets[upper])
        values.append(np.full(int(upper.sum()), coupling))

    rows_arr = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols_arr = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    values_arr = np.concatenate(values) if values else np.zeros(0)

    logger.debug(f"Band Hamiltonian N_B={basis.dimension}: {values_arr.size} off-diagonal pairs")
    return BandHamiltonian(
        dimension=basis.dimension,
        diag=diag,
        rows=rows_arr,
        cols=cols_arr,
        values=values_arr,
        sum_deltas=real.sum_deltas,
    )


def build_full_hamiltonian(lattice: LatticeSpec, real: DisorderRealization, delta0: float) -> sparse.csr_matrix:
    """Full 2^n Hamiltonian sum_i Gamma_i sigma^z_i + sum_<ij> J_ij sigma^x_i sigma^x_j.

    Used to validate the band projection; sigma^x sigma^x flips both spins of
    a bond, which covers both the exchange and the double-flip terms.

    Args:
        lattice: Lattice geometry (n <= 14).
        real: Disorder realization.
        delta0: Mean qubit spacing Delta_0.

    Returns:
        Symmetric CSR matrix indexed by bit masks.
    """
    _check_sizes(lattice, real)
    n = lattice.n
    if n > FULL_HAMILTONIAN_MAX_SITES:
        raise CapacityError(f"full Hamiltonian is for validation only: n={n} exceeds {FULL_HAMILTONIAN_MAX_SITES}")

    dim = 1 << n
    states = np.arange(dim, dtype=np.int64)
    spins = (states[:, None] >> np.arange(n, dtype=np.int64)[None, :]) & 1
    gammas = delta0 + real.deltas
    diag = (2 * spins - 1) @ gammas

    rows, cols, values = [], [], []
    for (i, j), coupling in zip(lattice.bonds, real.couplings):
        partners = states ^ ((1 << i) | (1 << j))
        upper = states < partners
        rows.append(states[upper])
        cols.append(partners[upper])
        values.append(np.full(int(upper.sum()), coupling))

    upper_part = sparse.coo_matrix(
        (np.concatenate(values), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
    )
    full = upper_part + upper_part.T + sparse.diags(diag)
    return full.tocsr()


def shifted_energy(energy: float | np.ndarray, sum_deltas: float) -> float | np.ndarray:
    """E' = E/2 + sum_i delta_i / 2; for J = 0 eigenstates this is the sum of delta_i over up spins."""
    return energy / 2.0 + sum_deltas / 2.0
