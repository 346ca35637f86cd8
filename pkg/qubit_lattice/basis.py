"""Enumeration of fixed-magnetization bases."""
import itertools
import logging

import numpy as np
from scipy.special import comb

from qubit_lattice.errors import CapacityError
from qubit_lattice.types import BandBasis
from shared_config import MAX_BASIS_DIM, MAX_BASIS_SITES

logger = logging.getLogger(__name__)


def central_band_filling(n: int) -> int:
    """Number of up spins in the central band, floor(n/2)."""
    return n // 2


def band_dimension(n: int, n_up: int) -> int:
    """N_B = C(n, n_up)."""
    return int(comb(n, n_up, exact=True))


def build_band_basis(n: int, n_up: int | None = None, max_dimension: int = MAX_BASIS_DIM) -> BandBasis:
    """Enumerate all n-bit masks with n_up bits set, ascending.

    Args:
        n: Number of sites (<= 32).
        n_up: Number of up spins; defaults to the central band floor(n/2).
        max_dimension: Memory budget in basis states.

    Returns:
        BandBasis of dimension C(n, n_up).
    """
    if n_up is None:
        n_up = central_band_filling(n)
    if not 0 < n <= MAX_BASIS_SITES:
        raise CapacityError(f"n={n} outside the supported range 1..{MAX_BASIS_SITES} for bit-mask bases")
    if not 0 <= n_up <= n:
        raise ValueError(f"n_up={n_up} must lie in [0, {n}]")

    dimension = band_dimension(n, n_up)
    if dimension > max_dimension:
        raise CapacityError(
            f"band basis C({n},{n_up})={dimension} exceeds the memory budget of {max_dimension} states "
            f"(raise QCORE_MAX_BASIS_DIM to allow it)"
        )

    if n_up == 0:
        states = np.zeros(1, dtype=np.int64)
    else:
        positions = np.fromiter(
            itertools.chain.from_iterable(itertools.combinations(range(n), n_up)),
            dtype=np.int64,
            count=dimension * n_up,
        ).reshape(dimension, n_up)
        states = np.bitwise_or.reduce(np.left_shift(np.int64(1), positions), axis=1)
        states.sort()

    states.flags.writeable = False
    logger.debug(f"Band basis n={n}, n_up={n_up}: {dimension} states")
    return BandBasis(n=n, n_up=n_up, states=states)
