"""Dense and iterative diagonalization of band Hamiltonians."""
import logging

import numpy as np
import scipy.linalg
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from eigensolve.types import BandSide, SpectrumResult
from qubit_lattice.errors import CapacityError, ConvergenceError
from qubit_lattice.types import BandHamiltonian
from shared_config import DEGENERACY_TOL, DENSE_CAP, ITERATIVE_MAX_ITER, ITERATIVE_START_SEED, SOLVER_TOL

logger = logging.getLogger(__name__)

_RESIDUAL_CHUNK = 1024
_ARPACK_WHICH = {"lowest": "SA", "highest": "LA"}


def matvec(H: BandHamiltonian, v: np.ndarray) -> np.ndarray:
    """Return H v for a vector (or a block of column vectors) of length N_B."""
    v = np.asarray(v)
    if v.shape[0] != H.dimension:
        raise ValueError(f"vector of length {v.shape[0]} does not match N_B={H.dimension}")
    return H.matrix @ v


def norm_bound(H: BandHamiltonian) -> float:
    """Gershgorin bound on the spectral radius: max row sum of |H|."""
    return float(abs(H.matrix).sum(axis=1).max())


def residual_norms(H: BandHamiltonian, eigenvalues: np.ndarray, eigenvectors: np.ndarray) -> np.ndarray:
    """||H v_m - E_m v_m|| for every column, evaluated in column chunks."""
    norms = np.empty(eigenvalues.shape[0])
    for start in range(0, eigenvalues.shape[0], _RESIDUAL_CHUNK):
        stop = start + _RESIDUAL_CHUNK
        block = eigenvectors[:, start:stop]
        diff = matvec(H, block) - block * eigenvalues[start:stop]
        norms[start:stop] = np.linalg.norm(diff, axis=0)
    return norms


def _has_degeneracy(eigenvalues: np.ndarray) -> bool:
    return bool(eigenvalues.size > 1 and np.min(np.diff(eigenvalues)) < DEGENERACY_TOL)


def dense_full_diag(
    H: BandHamiltonian, want_vectors: bool = True, dense_cap: int = DENSE_CAP, tol: float = SOLVER_TOL
) -> SpectrumResult:
    """Diagonalize H completely with LAPACK.

    Args:
        H: Band Hamiltonian with N_B <= dense_cap.
        want_vectors: Also return eigenvectors and a residual certificate.
        dense_cap: Largest N_B accepted on this path.
        tol: Largest accepted residual ||Hv - lv|| of the returned pairs.

    Returns:
        SpectrumResult with all N_B eigenvalues ascending.
    """
    if H.dimension > dense_cap:
        raise CapacityError(
            f"N_B={H.dimension} exceeds the dense cap {dense_cap}; use the iterative solver for band-edge states "
            f"or raise --dense-cap"
        )

    dense = H.matrix.toarray()
    if want_vectors:
        eigenvalues, eigenvectors = scipy.linalg.eigh(dense)
        del dense
        residual = float(np.max(residual_norms(H, eigenvalues, eigenvectors))) if H.dimension else 0.0
        if residual > tol:
            raise ConvergenceError(
                f"dense eigenpairs of N_B={H.dimension} fail the residual certificate (tol {tol:g})", residual
            )
    else:
        eigenvalues = scipy.linalg.eigvalsh(dense)
        eigenvectors, residual = None, None

    degenerate = _has_degeneracy(eigenvalues)
    if degenerate:
        logger.warning(f"Dense spectrum N_B={H.dimension} has gaps below {DEGENERACY_TOL:g}; flagged degenerate")
    logger.debug(f"Dense diagonalization N_B={H.dimension} done (residual {residual})")
    return SpectrumResult(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        method="dense",
        residual_bound=residual,
        degenerate=degenerate,
    )


def iterative_extremal(
    H: BandHamiltonian,
    k: int,
    side: BandSide = "lowest",
    tol: float = SOLVER_TOL,
    max_iter: int = ITERATIVE_MAX_ITER,
) -> SpectrumResult:
    """Extract the k lowest or highest eigenpairs with implicitly restarted Lanczos.

    ARPACK keeps its Lanczos basis orthogonal, so converged eigenvalues are not
    duplicated. Every returned pair is certified afterwards with an explicit
    residual ||Hv - lv|| <= tol.

    Args:
        H: Band Hamiltonian.
        k: Number of eigenpairs, 1 <= k < N_B.
        side: "lowest" or "highest" end of the band.
        tol: Residual tolerance.
        max_iter: ARPACK restart budget.

    Returns:
        SpectrumResult with k eigenvalues ascending and their eigenvectors.
    """
    if side not in _ARPACK_WHICH:
        raise ValueError(f"side must be 'lowest' or 'highest', got {side!r}")
    if not 1 <= k < H.dimension:
        raise ValueError(f"k={k} must satisfy 1 <= k < N_B={H.dimension}")

    v0 = np.random.default_rng(ITERATIVE_START_SEED).standard_normal(H.dimension)
    scale = max(norm_bound(H), 1.0)
    try:
        eigenvalues, eigenvectors = eigsh(
            H.matrix, k=k, which=_ARPACK_WHICH[side], v0=v0, tol=0.1 * tol / scale, maxiter=max_iter
        )
    except ArpackNoConvergence as e:
        found = 0 if e.eigenvalues is None else len(e.eigenvalues)
        best = np.inf
        if found:
            best = float(np.min(residual_norms(H, np.asarray(e.eigenvalues), np.asarray(e.eigenvectors))))
        raise ConvergenceError(f"Lanczos found {found} of {k} {side} eigenpairs", best) from e

    order = np.argsort(eigenvalues)
    eigenvalues = eigenvalues[order]
    eigenvectors = eigenvectors[:, order]

    residuals = residual_norms(H, eigenvalues, eigenvectors)
    worst = float(np.max(residuals))
    if worst > tol:
        raise ConvergenceError(f"residual certificate failed for {k} {side} eigenpairs (tol {tol:g})", worst)

    logger.info(f"Lanczos: {k} {side} eigenpairs of N_B={H.dimension}, max residual {worst:.2e}")
    return SpectrumResult(
        eigenvalues=eigenvalues,
        eigenvectors=eigenvectors,
        method="iterative",
        residual_bound=worst,
        degenerate=_has_degeneracy(eigenvalues),
        side=side,
    )
