"""Analytic estimates of the chaos and thermalization scales."""
import numpy as np

from qubit_lattice.basis import band_dimension, central_band_filling
from shared_config import C_CHAOS, C_THERMAL
from spectral.statistics import central_window
from thermo.types import TheoryEstimates


def theory_estimates(
    n: int,
    delta: float = 1.0,
    J: float = 0.0,
    c_chaos: float = C_CHAOS,
    c_thermal: float = C_THERMAL,
    spectrum: np.ndarray | None = None,
    excitation: float | None = None,
    window_fraction: float = 0.05,
) -> TheoryEstimates:
    """Collect the scaling estimates for an n-qubit lattice.

    Args:
        n: Number of qubits (>= 2).
        delta: Detuning width.
        J: Coupling amplitude.
        c_chaos: Constant C in J_c = C delta / n.
        c_thermal: Constant C in J_t = C delta / n.
        spectrum: Sorted band eigenvalues; adds the measured central level spacing.
        excitation: Excitation energy dE; adds n_eff.

    Returns:
        TheoryEstimates.
    """
    if n < 2:
        raise ValueError(f"n={n} must be at least 2")
    gamma = J**2 * n / delta

    delta_n_empirical = None
    if spectrum is not None:
        start, stop = central_window(spectrum, window_fraction)
        delta_n_empirical = float(np.mean(np.diff(np.asarray(spectrum)[start:stop])))

    n_eff = None
    if excitation is not None:
        n_eff = float(np.sqrt(max(n * excitation / delta, 0.0)))

    return TheoryEstimates(
        n=n,
        delta=delta,
        J=J,
        J_c=c_chaos * delta / n,
        J_t=c_thermal * delta / n,
        delta_c=delta / n,
        delta_n_scaling=n**1.5 * 2.0**-n * delta,
        delta_n_empirical=delta_n_empirical,
        gamma_bw=gamma,
        tau_chi=np.inf if gamma == 0.0 else 1.0 / gamma,
        n_b=band_dimension(n, central_band_filling(n)),
        n_eff=n_eff,
    )
