"""Constrained Fermi-Dirac fits of occupation profiles."""
import logging

import numpy as np
from scipy.optimize import brentq, minimize_scalar
from scipy.special import expit

from qubit_lattice.errors import FitError
from shared_config import FD_BETA_MAX, FD_BETA_MIN, FD_BRACKET_WIDTH, FD_GRID_POINTS, FD_REFINE_TOL
from thermo.types import FDFit

logger = logging.getLogger(__name__)

_FLAT_TOL = 1e-12


def fd_occupations(beta: float, mu: float, epsilons: np.ndarray) -> np.ndarray:
    """n_i = 1 / (exp(beta (eps_i - mu)) + 1), overflow-safe."""
    return expit(-beta * (np.asarray(epsilons, dtype=float) - mu))


def fd_mu_solve(beta: float, epsilons: np.ndarray, n_up: float, delta: float = 1.0) -> float:
    """Chemical potential fixing sum_i n_i = n_up at inverse temperature beta.

    Args:
        beta: Signed inverse temperature.
        epsilons: Single-qubit energies eps_i = delta_i + delta/2 (possibly pooled
            over several realizations).
        n_up: Required total occupation, strictly between 0 and len(epsilons).
        delta: Detuning width; at beta = 0 the constraint does not involve mu and
            mu = delta/2 is returned.

    Returns:
        mu.
    """
    epsilons = np.asarray(epsilons, dtype=float)
    if not 0 < n_up < epsilons.size:
        raise FitError(f"n_up={n_up} must lie strictly between 0 and {epsilons.size}; no finite mu exists")
    if beta == 0.0:
        return delta / 2.0

    def excess(mu: float) -> float:
        return float(fd_occupations(beta, mu, epsilons).sum()) - n_up

    pad = FD_BRACKET_WIDTH / abs(beta)
    lo, hi = epsilons.min() - pad, epsilons.max() + pad
    for _ in range(8):
        if excess(lo) * excess(hi) < 0:
            break
        lo, hi = lo - pad, hi + pad
        pad *= 2.0
    else:
        raise FitError(f"could not bracket mu at beta={beta:g}")
    return float(brentq(excess, lo, hi, xtol=1e-14, rtol=4 * np.finfo(float).eps))


def beta_grid(
    beta_max: float = FD_BETA_MAX, beta_min: float = FD_BETA_MIN, n_points: int = FD_GRID_POINTS
) -> np.ndarray:
    """Ascending grid: beta = 0 plus log-spaced |beta| of both signs."""
    per_sign = (n_points - 1) // 2
    magnitudes = np.geomspace(beta_min, beta_max, per_sign)
    return np.concatenate([-magnitudes[::-1], [0.0], magnitudes])


def fd_fit(
    occupations: np.ndarray,
    epsilons: np.ndarray,
    n_up: float,
    delta: float = 1.0,
    beta_max: float = FD_BETA_MAX,
) -> FDFit:
    """Least-squares Fermi-Dirac fit with beta as the only free parameter.

    mu follows from the occupation constraint at every beta. A coarse scan
    over beta_grid is refined by bounded Brent minimization between the
    neighbours of the best grid point.

    Args:
        occupations: Site occupations (single state or pooled cloud).
        epsilons: Matching single-qubit energies eps_i.
        n_up: Total occupation the fit must conserve.
        delta: Detuning width.
        beta_max: Largest |beta| considered.

    Returns:
        FDFit; a flat profile yields beta = 0 with flat=True.
    """
    occupations = np.asarray(occupations, dtype=float)
    epsilons = np.asarray(epsilons, dtype=float)
    if occupations.shape != epsilons.shape:
        raise ValueError(f"occupations {occupations.shape} and epsilons {epsilons.shape} differ in shape")

    if np.ptp(occupations) < _FLAT_TOL:
        return _make_fit(0.0, occupations, epsilons, n_up, delta, flat=True)

    def objective(beta: float) -> float:
        mu = fd_mu_solve(beta, epsilons, n_up, delta)
        return float(np.sum((occupations - fd_occupations(beta, mu, epsilons)) ** 2))

    grid = beta_grid(beta_max)
    values = np.array([objective(b) for b in grid])
    best = int(np.argmin(values))
    lo, hi = grid[max(best - 1, 0)], grid[min(best + 1, grid.size - 1)]

    beta = float(grid[best])
    if hi > lo:
        refined = minimize_scalar(objective, bounds=(lo, hi), method="bounded", options={"xatol": FD_REFINE_TOL})
        if refined.fun <= values[best]:
            beta = float(refined.x)

    fit = _make_fit(beta, occupations, epsilons, n_up, delta)
    logger.debug(f"FD fit: beta={fit.beta:.6g}, mu={fit.mu:.6g}, sigma_fd={fit.sigma_fd:.3e}")
    return fit


def _make_fit(
    beta: float, occupations: np.ndarray, epsilons: np.ndarray, n_up: float, delta: float, flat: bool = False
) -> FDFit:
    mu = fd_mu_solve(beta, epsilons, n_up, delta)
    fitted = fd_occupations(beta, mu, epsilons)
    return FDFit(
        beta=beta,
        mu=mu,
        t_fd=np.inf if beta == 0.0 else 1.0 / beta,
        sigma_fd=float(np.sqrt(np.mean((occupations - fitted) ** 2))),
        fitted=fitted,
        flat=flat,
    )


def sigma_fd(occupations: np.ndarray, fit: FDFit) -> float:
    """Root-mean-square deviation of a profile from its fitted Fermi-Dirac curve."""
    return float(np.sqrt(np.mean((np.asarray(occupations) - fit.fitted) ** 2)))


def sigma_s(occupations_m: np.ndarray, occupations_next: np.ndarray) -> float:
    """Root-mean-square difference between the profiles of consecutive eigenstates."""
    a, b = np.asarray(occupations_m), np.asarray(occupations_next)
    if a.shape != b.shape:
        raise ValueError(f"profiles of shapes {a.shape} and {b.shape} cannot be compared")
    return float(np.sqrt(np.mean((b - a) ** 2)))


def sigma_s_series(table: np.ndarray) -> np.ndarray:
    """sigma_s for every consecutive pair of rows of an occupation table."""
    table = np.asarray(table)
    if table.shape[0] < 2:
        raise ValueError("sigma_s needs at least two consecutive eigenstates")
    return np.sqrt(np.mean(np.diff(table, axis=0) ** 2, axis=1))
