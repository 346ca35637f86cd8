"""Seeded sampling of detunings and couplings."""
import logging

import numpy as np

from qubit_lattice.types import DisorderRealization, LatticeSpec, ModelParams

logger = logging.getLogger(__name__)

SEED_MAX = 2**64 - 1


def make_rng(seed: int) -> np.random.Generator:
    """PCG64 generator; bit streams are identical across platforms for a given seed."""
    if not 0 <= seed <= SEED_MAX:
        raise ValueError(f"seed={seed} must be an unsigned 64-bit integer")
    return np.random.Generator(np.random.PCG64(seed))


def sample_disorder(params: ModelParams, lattice: LatticeSpec, seed: int) -> DisorderRealization:
    """Draw one disorder realization.

    Draw order is part of the output contract: n detunings in site order,
    then one coupling per bond in bond order.

    Args:
        params: Energy scales (delta, J).
        lattice: Lattice whose sites and bonds receive random values.
        seed: Unsigned 64-bit seed.

    Returns:
        DisorderRealization with delta_i ~ U[-delta/2, delta/2] and J_ij ~ U[-J, J].
    """
    rng = make_rng(seed)
    half = params.delta / 2.0
    deltas = rng.uniform(-half, half, size=lattice.n)
    couplings = rng.uniform(-params.J, params.J, size=lattice.n_bonds)
    if params.J == 0.0:
        couplings = np.zeros(lattice.n_bonds)
    deltas.flags.writeable = False
    couplings.flags.writeable = False
    return DisorderRealization(seed=seed, deltas=deltas, couplings=couplings)
