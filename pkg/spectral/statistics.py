"""Level-spacing statistics and the eta crossover parameter."""
import logging
import math

import numpy as np
import pandas as pd

from shared_config import ETA_BOOTSTRAP_SAMPLES, ETA_BOOTSTRAP_SEED, ETA_S0, MIN_LEVELS_PER_WINDOW
from spectral.types import EnergyWindow, EtaResult, SpacingSample

logger = logging.getLogger(__name__)


# ============================================================================
# Reference Distributions
# ============================================================================

def poisson_density(s: np.ndarray | float) -> np.ndarray | float:
    """P_P(s) = exp(-s)."""
    return np.exp(-np.asarray(s, dtype=float))


def wigner_density(s: np.ndarray | float) -> np.ndarray | float:
    """Wigner surmise P_W(s) = (pi s / 2) exp(-pi s^2 / 4)."""
    s = np.asarray(s, dtype=float)
    return np.pi * s / 2.0 * np.exp(-np.pi * s**2 / 4.0)


def poisson_cdf(s: np.ndarray | float) -> np.ndarray | float:
    return -np.expm1(-np.asarray(s, dtype=float))


def wigner_cdf(s: np.ndarray | float) -> np.ndarray | float:
    return -np.expm1(-np.pi * np.asarray(s, dtype=float) ** 2 / 4.0)


POISSON_CDF_S0 = float(poisson_cdf(ETA_S0))  # 0.376808
WIGNER_CDF_S0 = float(wigner_cdf(ETA_S0))  # 0.161083
ETA_DENOMINATOR = POISSON_CDF_S0 - WIGNER_CDF_S0


def eta_from_cdf_value(cdf_s0: np.ndarray | float) -> np.ndarray | float:
    """Map the cumulative spacing probability at s0 onto the eta scale."""
    return (cdf_s0 - WIGNER_CDF_S0) / ETA_DENOMINATOR


# ============================================================================
# Windows & Spacings
# ============================================================================

def central_window(eigs: np.ndarray, fraction: float) -> tuple[int, int]:
    """Index range [start, stop) of the levels around the middle of the spectrum.

    Takes round_half_up(fraction * N) levels on each side of index N // 2, so
    fraction = 0.05 keeps the central 10% of the states.

    Args:
        eigs: Sorted eigenvalues (only the count is used).
        fraction: Half-width as a fraction of the level count, 0 < fraction <= 0.5.

    Returns:
        (start, stop) slice bounds.
    """
    if not 0.0 < fraction <= 0.5:
        raise ValueError(f"window fraction={fraction} must lie in (0, 0.5]")
    n_levels = len(eigs)
    half = math.floor(fraction * n_levels + 0.5)
    center = n_levels // 2
    start, stop = max(0, center - half), min(n_levels, center + half)
    if stop - start < 3:
        raise ValueError(f"central window holds {stop - start} levels of {n_levels}; at least 3 are needed")
    return start, stop


def normalized_spacings(levels: np.ndarray, window: str = "") -> SpacingSample:
    """Gaps between consecutive levels divided by their mean gap.

    Args:
        levels: Sorted eigenvalues of one window of one realization (>= 3).
        window: Free-form description of where the levels came from.

    Returns:
        SpacingSample with unit-mean spacings.
    """
    levels = np.asarray(levels, dtype=float)
    if levels.size < 3:
        raise ValueError(f"need at least 3 levels for spacings, got {levels.size}")
    gaps = np.diff(levels)
    mean_gap = gaps.mean()
    if not mean_gap > 0.0:
        raise ValueError(f"levels in window '{window}' are fully degenerate (mean gap {mean_gap:g})")
    return SpacingSample(spacings=gaps / mean_gap, window=window)


def merge_samples(samples: list[SpacingSample], window: str | None = None) -> SpacingSample:
    """Concatenate spacing samples; associative, so partial merges may be combined in any grouping."""
    if not samples:
        raise ValueError("cannot merge an empty list of spacing samples")
    spacings = np.concatenate([s.spacings for s in samples])
    return SpacingSample(spacings=spacings, window=window if window is not None else samples[0].window)


# ============================================================================
# Eta
# ============================================================================

def eta_from_spacings(
    sample: SpacingSample,
    n_bootstrap: int = ETA_BOOTSTRAP_SAMPLES,
    seed: int = ETA_BOOTSTRAP_SEED,
) -> EtaResult:
    """eta = (F(s0) - F_W(s0)) / (F_P(s0) - F_W(s0)) from the empirical CDF.

    This equals the ratio of integrals of P(s) - P_W(s) and P_P(s) - P_W(s)
    over [0, s0] without any binning. The standard error comes from a
    seeded bootstrap of the empirical CDF value, which is binomial.

    Args:
        sample: Normalized spacings (nonempty).
        n_bootstrap: Number of bootstrap resamples.
        seed: Bootstrap seed.

    Returns:
        EtaResult.
    """
    count = sample.count
    if count == 0:
        raise ValueError("eta needs at least one spacing")
    cdf_s0 = np.count_nonzero(sample.spacings <= ETA_S0) / count
    eta = float(eta_from_cdf_value(cdf_s0))

    rng = np.random.default_rng(seed)
    resampled = rng.binomial(count, cdf_s0, size=n_bootstrap) / count
    stderr = float(np.std(eta_from_cdf_value(resampled), ddof=1)) if n_bootstrap > 1 else 0.0
    return EtaResult(eta=eta, n_spacings=count, stderr=stderr)


def eta_from_histogram(sample: SpacingSample, bin_width: float) -> float:
    """Binned form of eta: integrate a density histogram of P(s) up to s0.

    The bin containing s0 contributes its overlap with [0, s0].
    """
    if bin_width <= 0:
        raise ValueError(f"bin_width={bin_width} must be positive")
    n_bins = max(1, math.ceil(sample.spacings.max() / bin_width))
    density, edges = np.histogram(sample.spacings, bins=n_bins, range=(0.0, n_bins * bin_width), density=True)
    overlap = np.clip(np.minimum(edges[1:], ETA_S0) - edges[:-1], 0.0, None)
    return float(eta_from_cdf_value(np.sum(density * overlap)))


def pooled_eta(samples: list[SpacingSample], window: str | None = None) -> EtaResult:
    """Eta of the concatenated spacings, plus the spread of per-realization values.

    Args:
        samples: One spacing sample per realization.
        window: Label for the pooled sample.

    Returns:
        EtaResult whose realization_* fields describe the per-sample etas.
    """
    pooled = eta_from_spacings(merge_samples(samples, window))
    per_realization = np.array([eta_from_spacings(s, n_bootstrap=0).eta for s in samples if s.count])
    n_real = int(per_realization.size)
    spread = float(np.std(per_realization, ddof=1) / np.sqrt(n_real)) if n_real > 1 else 0.0
    return EtaResult(
        eta=pooled.eta,
        n_spacings=pooled.n_spacings,
        stderr=pooled.stderr,
        realization_mean=float(per_realization.mean()) if n_real else None,
        realization_stderr=spread,
        n_realizations=n_real,
    )


# ============================================================================
# Histograms
# ============================================================================

def ps_histogram(sample: SpacingSample, bin_width: float = 0.1, s_max: float | None = None) -> pd.DataFrame:
    """Density-normalized histogram of spacings with the reference curves at bin centres.

    Args:
        sample: Normalized spacings.
        bin_width: Bin width in units of the mean spacing.
        s_max: Upper edge; defaults to max(4, largest spacing). Spacings beyond it are dropped.

    Returns:
        DataFrame with s_lo, s_hi, s_center, density, p_poisson, p_wigner.
    """
    if bin_width <= 0:
        raise ValueError(f"bin_width={bin_width} must be positive")
    if s_max is None:
        s_max = max(4.0, float(sample.spacings.max()) if sample.count else 0.0)
    n_bins = max(1, math.ceil(s_max / bin_width - 1e-9))
    density, edges = np.histogram(sample.spacings, bins=n_bins, range=(0.0, n_bins * bin_width), density=True)
    centers = 0.5 * (edges[:-1] + edges[1:])
    return pd.DataFrame(
        {
            "s_lo": edges[:-1],
            "s_hi": edges[1:],
            "s_center": centers,
            "density": density,
            "p_poisson": poisson_density(centers),
            "p_wigner": wigner_density(centers),
        }
    )


# ============================================================================
# Energy-Resolved Statistics
# ============================================================================

def energy_over_bandwidth(eigs: np.ndarray) -> np.ndarray:
    """E / B for sorted eigenvalues, with E measured from the band centre (the spectrum mean)."""
    eigs = np.asarray(eigs, dtype=float)
    bandwidth = float(eigs[-1] - eigs[0])
    if bandwidth <= 0.0:
        raise ValueError("spectrum has zero width")
    return (eigs - eigs.mean()) / bandwidth


def energy_windows(eigs: np.ndarray, n_windows: int, half: str = "lower") -> list[EnergyWindow]:
    """Split the spectrum into windows holding equal numbers of levels.

    With half="lower" only the E < 0 half (the first N // 2 levels) is split,
    since the density of states is symmetric about the band centre.
    Positions are reported as E / B from the band centre, B = E_max - E_min.

    Args:
        eigs: Sorted eigenvalues of one realization.
        n_windows: Number of windows.
        half: "lower" or "full".

    Returns:
        List of EnergyWindow ordered by energy.
    """
    eigs = np.asarray(eigs, dtype=float)
    if n_windows < 1:
        raise ValueError(f"n_windows={n_windows} must be positive")
    if half not in ("lower", "full"):
        raise ValueError(f"half must be 'lower' or 'full', got {half!r}")
    span = len(eigs) // 2 if half == "lower" else len(eigs)
    relative = energy_over_bandwidth(eigs)

    bounds = np.linspace(0, span, n_windows + 1).round().astype(int)
    windows = []
    for index, (start, stop) in enumerate(zip(bounds[:-1], bounds[1:])):
        if stop - start < 3:
            raise ValueError(f"window {index} holds {stop - start} levels; at least 3 are needed")
        if stop - start < MIN_LEVELS_PER_WINDOW:
            logger.warning(f"Energy window {index} holds only {stop - start} levels")
        chunk = relative[start:stop]
        windows.append(
            EnergyWindow(
                index=index,
                start=int(start),
                stop=int(stop),
                e_over_b=float(chunk.mean()),
                e_over_b_lo=float(chunk[0]),
                e_over_b_hi=float(chunk[-1]),
            )
        )
    return windows


def window_spacings(eigs: np.ndarray, windows: list[EnergyWindow]) -> list[SpacingSample]:
    return [normalized_spacings(eigs[w.start:w.stop], window=w.label) for w in windows]


def eta_vs_energy(eigs: np.ndarray, n_windows: int, half: str = "lower") -> list[tuple[EnergyWindow, EtaResult]]:
    """Eta in equal-count energy windows of a single spectrum."""
    windows = energy_windows(eigs, n_windows, half)
    return [(w, eta_from_spacings(s)) for w, s in zip(windows, window_spacings(eigs, windows))]
