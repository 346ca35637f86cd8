"""Periodic square-lattice geometry."""
import logging
import math

import networkx as nx

from qubit_lattice.types import LatticeSpec

logger = logging.getLogger(__name__)


def default_lattice_shape(n: int) -> tuple[int, int]:
    """Most-square factorization rows <= cols of n (9 -> 3x3, 12 -> 3x4, 24 -> 4x6).

    Args:
        n: Number of sites.

    Returns:
        (rows, cols) tuple.
    """
    for rows in range(math.isqrt(n), 1, -1):
        if n % rows == 0:
            return rows, n // rows
    raise ValueError(f"n={n} has no factorization with both dimensions >= 2")


def _bond_order_key(u: tuple[int, int], v: tuple[int, int], rows: int, cols: int) -> tuple[int, int]:
    """Canonical position of a bond: (origin site, 0 for right / 1 for down).

    On 2-wide dimensions the same bond is both the right bond of one site and
    the wraparound of another; the smallest key wins.
    """
    keys = []
    for a, b in ((u, v), (v, u)):
        origin = a[0] * cols + a[1]
        if b == (a[0], (a[1] + 1) % cols):
            keys.append((origin, 0))
        if b == ((a[0] + 1) % rows, a[1]):
            keys.append((origin, 1))
    return min(keys)


def build_lattice(rows: int, cols: int) -> LatticeSpec:
    """Build a rows x cols lattice with periodic nearest-neighbor bonds.

    Sites are numbered row-major (site = r * cols + c). Bonds are ordered by
    origin site, right bond before down bond, and stored as (min, max).

    Args:
        rows: Number of rows (>= 2).
        cols: Number of columns (>= 2).

    Returns:
        LatticeSpec with the deduplicated bond list.
    """
    if rows < 2 or cols < 2:
        raise ValueError(f"degenerate geometry: lattice {rows}x{cols} needs both dimensions >= 2")

    grid = nx.grid_2d_graph(rows, cols, periodic=True)
    ordered = sorted(grid.edges(), key=lambda e: _bond_order_key(e[0], e[1], rows, cols))

    bonds = []
    for u, v in ordered:
        i = u[0] * cols + u[1]
        j = v[0] * cols + v[1]
        bonds.append((min(i, j), max(i, j)))

    n = rows * cols
    if len(bonds) < 2 * n:
        logger.warning(
            f"Lattice {rows}x{cols}: periodic wraparound duplicates bonds, keeping {len(bonds)} of {2 * n}"
        )

    lattice = LatticeSpec(rows=rows, cols=cols, bonds=bonds)
    logger.debug(f"Built lattice {rows}x{cols}: {lattice.n} sites, {lattice.n_bonds} bonds")
    return lattice
