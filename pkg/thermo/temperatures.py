"""Canonical and thermodynamic temperatures of eigenstates."""
import logging

import numpy as np
from scipy.optimize import brentq

from qubit_lattice.errors import ConsistencyError
from shared_config import CANONICAL_BETA_MAX
from thermo.types import CanonicalTemperature, DosFit, FDFit, TemperatureSet

logger = logging.getLogger(__name__)

_MONOTONE_GRID = 33


def canonical_energy(beta: float, energies: np.ndarray, eprimes: np.ndarray) -> float:
    """<E>(beta) = sum_m E_m exp(-beta E'_m) / sum_m exp(-beta E'_m) with max-shifted exponents."""
    exponents = -beta * eprimes
    weights = np.exp(exponents - exponents.max())
    return float(np.dot(weights, energies) / weights.sum())


def t_canonical(
    energies: np.ndarray,
    eprimes: np.ndarray,
    target: float,
    beta_max: float = CANONICAL_BETA_MAX,
) -> CanonicalTemperature:
    """Temperature at which the canonical band energy equals target.

    Args:
        energies: All band eigenvalues E_m (full spectrum).
        eprimes: The matching shifted energies E'_m.
        target: Energy E of the analyzed eigenstate.
        beta_max: Bracket [-beta_max, beta_max] for the inverse temperature.

    Returns:
        CanonicalTemperature; targets outside the spectrum or the bracket give
        beta = +-inf (T = +-0) with a flag, the infinite-temperature mean gives T = +inf.
    """
    energies = np.asarray(energies, dtype=float)
    eprimes = np.asarray(eprimes, dtype=float)
    scale = max(float(np.ptp(energies)), 1e-300)

    if target <= energies.min():
        return CanonicalTemperature(beta=np.inf, t_can=0.0, flag="below_spectrum")
    if target >= energies.max():
        return CanonicalTemperature(beta=-np.inf, t_can=-0.0, flag="above_spectrum")

    def excess(beta: float) -> float:
        return canonical_energy(beta, energies, eprimes) - target

    at_zero = excess(0.0)
    if abs(at_zero) <= 1e-12 * scale:
        return CanonicalTemperature(beta=0.0, t_can=np.inf, flag="infinite")

    betas = np.linspace(-beta_max, beta_max, _MONOTONE_GRID)
    means = np.array([canonical_energy(b, energies, eprimes) for b in betas])
    if np.any(np.diff(means) > 1e-12 * scale):
        raise ConsistencyError("canonical energy is not decreasing in beta on the solve bracket")

    lo, hi = excess(-beta_max), excess(beta_max)
    if lo < 0.0:
        return CanonicalTemperature(beta=-np.inf, t_can=-0.0, flag="beyond_bracket")
    if hi > 0.0:
        return CanonicalTemperature(beta=np.inf, t_can=0.0, flag="beyond_bracket")

    beta = float(brentq(excess, -beta_max, beta_max, xtol=1e-12))
    return CanonicalTemperature(beta=beta, t_can=np.inf if beta == 0.0 else 1.0 / beta)


def dos_fit(eprimes: np.ndarray) -> DosFit:
    """Gaussian density of states matched to the mean and variance of E'."""
    eprimes = np.asarray(eprimes, dtype=float)
    if eprimes.size < 2:
        raise ValueError("a density-of-states fit needs at least two levels")
    return DosFit(mean=float(eprimes.mean()), sigma2=float(eprimes.var()))


def t_thermodynamic(dos: DosFit, eprime: float) -> float:
    """T_th = -sigma^2 / (E' - mean); +inf at the peak of the density of states."""
    offset = eprime - dos.mean
    if abs(offset) <= 1e-12 * max(np.sqrt(dos.sigma2), 1.0):
        return np.inf
    return -dos.sigma2 / offset


def temperature_set(fit: FDFit, canonical: CanonicalTemperature | None, t_th: float | None) -> TemperatureSet:
    flags = []
    if fit.flat:
        flags.append("flat_profile")
    if canonical is not None and canonical.flag is not None:
        flags.append(f"t_can_{canonical.flag}")
    if t_th is not None and np.isinf(t_th):
        flags.append("t_th_infinite")
    return TemperatureSet(
        t_fd=fit.t_fd,
        t_can=None if canonical is None else canonical.t_can,
        t_th=t_th,
        flags=tuple(flags),
    )
