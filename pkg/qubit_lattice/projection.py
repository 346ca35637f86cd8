"""Validation of the band projection against the full Hamiltonian."""
import logging

import numpy as np
import scipy.linalg

from qubit_lattice.basis import central_band_filling
from qubit_lattice.errors import CapacityError
from qubit_lattice.hamiltonian import build_full_hamiltonian
from qubit_lattice.types import DisorderRealization, LatticeSpec, ModelParams, ProjectionCheck
from shared_config import PROJECTION_CHECK_MAX_SITES

logger = logging.getLogger(__name__)


def count_bands(eigenvalues: np.ndarray, delta0: float) -> int:
    """Number of clusters separated by gaps larger than delta0."""
    gaps = np.diff(np.sort(eigenvalues))
    return int(np.count_nonzero(gaps > delta0)) + 1


def validate_projection(
    lattice: LatticeSpec,
    real: DisorderRealization,
    params: ModelParams,
    band_eigenvalues: np.ndarray,
    n_up: int | None = None,
) -> ProjectionCheck:
    """Compare the central band of the full H with the projected spectrum.

    The band around Delta_0 (2 n_up - n) is cut out of the full spectrum,
    shifted to band-relative energies and compared level by level.

    Args:
        lattice: Lattice geometry (n <= 12).
        real: Disorder realization used for both operators.
        params: Energy scales; delta0 must exceed delta.
        band_eigenvalues: Sorted eigenvalues of H_P.
        n_up: Band filling (defaults to the central band).

    Returns:
        ProjectionCheck with the maximum deviation and the 5 (delta + J)^2 / delta0 bound.
    """
    params.check_validation_regime()
    n = lattice.n
    if n > PROJECTION_CHECK_MAX_SITES:
        raise CapacityError(
            f"projection check diagonalizes 2^{n} states densely; limit is n={PROJECTION_CHECK_MAX_SITES}"
        )
    if n_up is None:
        n_up = central_band_filling(n)

    full = build_full_hamiltonian(lattice, real, params.delta0)
    full_eigs = scipy.linalg.eigvalsh(full.toarray())

    center = params.delta0 * (2 * n_up - n)
    band = np.sort(full_eigs[np.abs(full_eigs - center) < params.delta0]) - center
    projected = np.sort(np.asarray(band_eigenvalues))

    bound = 5.0 * (params.delta + params.J) ** 2 / params.delta0
    n_bands = count_bands(full_eigs, params.delta0)
    if band.size != projected.size:
        logger.warning(f"Full-H band holds {band.size} levels, projected spectrum {projected.size}")
        return ProjectionCheck(
            max_deviation=np.inf, bound=bound, band_size=int(band.size), n_bands=n_bands, passed=False
        )

    deviation = float(np.max(np.abs(band - projected)))
    passed = deviation <= bound
    verdict = "ok" if passed else "FAIL"
    logger.info(f"Projection check n={n}: max deviation {deviation:.3e} vs bound {bound:.3e} ({verdict})")
    return ProjectionCheck(
        max_deviation=deviation, bound=bound, band_size=int(band.size), n_bands=n_bands, passed=bool(passed)
    )
