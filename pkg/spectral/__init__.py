"""Level-spacing statistics: spacing samples, P(s) histograms and the eta parameter."""
from spectral.statistics import (
    central_window,
    energy_over_bandwidth,
    energy_windows,
    eta_from_histogram,
    eta_from_spacings,
    eta_vs_energy,
    merge_samples,
    normalized_spacings,
    poisson_cdf,
    poisson_density,
    pooled_eta,
    ps_histogram,
    wigner_cdf,
    wigner_density,
    window_spacings,
)
from spectral.types import EnergyWindow, EtaResult, SpacingSample

__all__ = [
    "EnergyWindow",
    "EtaResult",
    "SpacingSample",
    "central_window",
    "energy_over_bandwidth",
    "energy_windows",
    "eta_from_histogram",
    "eta_from_spacings",
    "eta_vs_energy",
    "merge_samples",
    "normalized_spacings",
    "poisson_cdf",
    "poisson_density",
    "pooled_eta",
    "ps_histogram",
    "wigner_cdf",
    "wigner_density",
    "window_spacings",
]
