"""Diagnostics of a single disorder realization, per experiment kind."""
import logging
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
import pandas as pd

from eigensolve.solver import dense_full_diag, iterative_extremal
from eigensolve.types import SpectrumResult
from ensemble.config import FULL_SPECTRUM_KINDS, ExperimentConfig
from ensemble.types import OccupationRecord, RangeRecord, Record, SpacingRecord, StateTable, WindowRecord
from qubit_lattice.basis import band_dimension, build_band_basis, central_band_filling
from qubit_lattice.disorder import sample_disorder
from qubit_lattice.errors import CapacityError, ConsistencyError
from qubit_lattice.hamiltonian import build_band_hamiltonian, shifted_energy
from qubit_lattice.lattice import build_lattice
from qubit_lattice.projection import validate_projection
from qubit_lattice.types import BandBasis, BandHamiltonian, DisorderRealization, LatticeSpec
from spectral.statistics import (
    central_window,
    energy_over_bandwidth,
    energy_windows,
    normalized_spacings,
    window_spacings,
)
from thermo.analysis import analyze_eigenstates, single_particle_energies
from thermo.fermi_dirac import fd_fit, sigma_s_series
from thermo.occupations import eigenstate_entropy, occupation_matrix
from thermo.theory import theory_estimates
from thermo.types import EigenstateAnalysis

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EdgeBlock:
    """Eigenstates requested from one band edge on the iterative path."""
    label: str
    side: str
    k: int
    levels: list[int]  # band indices


@lru_cache(maxsize=8)
def geometry(rows: int, cols: int) -> tuple[LatticeSpec, BandBasis]:
    """Lattice and central-band basis, built once per process."""
    lattice = build_lattice(rows, cols)
    return lattice, build_band_basis(lattice.n, central_band_filling(lattice.n))


def band_size(config: ExperimentConfig) -> int:
    return band_dimension(config.n, central_band_filling(config.n))


def uses_iterative(config: ExperimentConfig) -> bool:
    """Whether eigenstates come from the band-edge Lanczos path."""
    n_b = band_size(config)
    if config.kind in FULL_SPECTRUM_KINDS or config.kind == "theory":
        if config.solver == "iterative" or n_b > config.dense_cap:
            raise CapacityError(
                f"kind '{config.kind}' needs the full spectrum, but N_B={n_b} exceeds the dense cap "
                f"{config.dense_cap}; use a smaller lattice, raise --dense-cap, or run occupations for band-edge states"
            )
        return False
    if config.solver == "dense" and n_b > config.dense_cap:
        raise CapacityError(f"N_B={n_b} exceeds the dense cap {config.dense_cap}; use --solver iterative")
    return config.solver == "iterative" or n_b > config.dense_cap


def clipped_ranges(config: ExperimentConfig, n_b: int) -> list[tuple[int, int]]:
    """Level ranges clipped to the band; empty ones are dropped."""
    ranges = []
    for lo, hi in config.level_ranges:
        lo_c, hi_c = max(lo, 0), min(hi, n_b - 1)
        if lo_c > hi_c:
            logger.warning(f"Level range {lo}-{hi} lies outside the band of {n_b} states; skipped")
            continue
        if (lo_c, hi_c) != (lo, hi):
            logger.warning(f"Level range {lo}-{hi} clipped to {lo_c}-{hi_c}")
        ranges.append((lo_c, hi_c))
    return ranges


def edge_blocks(config: ExperimentConfig, n_b: int) -> list[EdgeBlock]:
    """Band-edge blocks for the iterative path.

    Explicit level ranges are served from whichever edge is closer; without
    ranges, iterative_k states are taken from the configured band side(s).
    """
    blocks = []
    for lo, hi in clipped_ranges(config, n_b):
        levels = list(range(lo, hi + 1))
        if hi < n_b // 2:
            blocks.append(EdgeBlock(label=_range_label(lo, hi), side="lowest", k=hi + 1, levels=levels))
        else:
            blocks.append(EdgeBlock(label=_range_label(lo, hi), side="highest", k=n_b - lo, levels=levels))
    if not config.level_ranges:
        k = min(config.iterative_k, n_b - 1)
        if config.band_side in ("lowest", "both"):
            blocks.append(EdgeBlock(label=f"0-{k - 1}", side="lowest", k=k, levels=list(range(k))))
        if config.band_side in ("highest", "both"):
            levels = list(range(n_b - k, n_b))
            blocks.append(EdgeBlock(label=_range_label(levels[0], levels[-1]), side="highest", k=k, levels=levels))
    for block in blocks:
        if block.k >= n_b:
            raise ValueError(f"range {block.label} needs {block.k} of {n_b} states; use the dense solver")
    return blocks


def _range_label(lo: int, hi: int) -> str:
    return str(lo) if lo == hi else f"{lo}-{hi}"


# ============================================================================
# Per-Kind Diagnostics
# ============================================================================

def diagnose(config: ExperimentConfig, J: float, seed: int) -> Record:
    """Run the diagnostics of config.kind on the realization with this seed and J.

    Args:
        config: Experiment configuration.
        J: Coupling amplitude.
        seed: Disorder seed.

    Returns:
        The record type matching the experiment kind.
    """
    lattice, basis = geometry(config.rows, config.cols)
    real = sample_disorder(config.model_params(J), lattice, seed)
    H = build_band_hamiltonian(lattice, real, basis)

    if config.kind == "occupation_profile":
        if uses_iterative(config):
            return _occupations_iterative(config, H, basis, real)
        return _occupations_dense(config, dense_full_diag(H, dense_cap=config.dense_cap, tol=config.tol), basis, real)

    want_vectors = config.kind in ("sigma_vs_energy", "sigma_scan", "temperature_comparison")
    spectrum = dense_full_diag(H, want_vectors=want_vectors, dense_cap=config.dense_cap, tol=config.tol)
    if config.validate_projection:
        _check_projection(config, lattice, real, J, spectrum.eigenvalues)

    if config.kind in ("eta_scan", "ps_histogram"):
        start, stop = central_window(spectrum.eigenvalues, config.window_fraction)
        return SpacingRecord(
            sample=normalized_spacings(spectrum.eigenvalues[start:stop], window=f"center {config.window_fraction:g}")
        )
    if config.kind == "eta_vs_energy":
        windows = energy_windows(spectrum.eigenvalues, config.n_windows, half="lower")
        return WindowRecord(windows=windows, samples=window_spacings(spectrum.eigenvalues, windows))
    if config.kind == "spectrum":
        return _spectrum_table(spectrum, real)
    if config.kind == "temperature_comparison":
        return _temperature_table(config, spectrum, basis, real)
    if config.kind in ("sigma_vs_energy", "sigma_scan"):
        return _sigma_table(config, spectrum, basis, real)
    raise ValueError(f"kind '{config.kind}' has no per-realization diagnostics")


def _check_projection(
    config: ExperimentConfig, lattice: LatticeSpec, real: DisorderRealization, J: float, eigs: np.ndarray
) -> None:
    check = validate_projection(lattice, real, config.model_params(J), eigs)
    if not check.passed:
        raise ConsistencyError(
            f"band projection deviates by {check.max_deviation:.3e}, above the bound {check.bound:.3e}"
        )


def _spectrum_table(spectrum: SpectrumResult, real: DisorderRealization) -> StateTable:
    eigs = spectrum.eigenvalues
    return StateTable(
        columns={
            "m": np.arange(eigs.size),
            "E": eigs,
            "E_prime": shifted_energy(eigs, real.sum_deltas),
            "E_over_B": energy_over_bandwidth(eigs),
        }
    )


def _strided_levels(config: ExperimentConfig, n_b: int, central_only: bool) -> np.ndarray:
    if central_only:
        start, stop = central_window(np.empty(n_b), config.window_fraction)
    else:
        start, stop = 0, n_b
    # sigma_s needs the next state as well
    return np.arange(start, min(stop, n_b - 1), config.state_stride)


def _sigma_table(
    config: ExperimentConfig, spectrum: SpectrumResult, basis: BandBasis, real: DisorderRealization
) -> StateTable:
    eigs = spectrum.eigenvalues
    levels = _strided_levels(config, eigs.size, central_only=config.kind == "sigma_scan")
    table = occupation_matrix(spectrum.eigenvectors[:, np.union1d(levels, levels + 1)], basis)
    index = {m: row for row, m in enumerate(np.union1d(levels, levels + 1))}
    epsilons = single_particle_energies(real, config.delta)

    sigma_fd_values = np.array([fd_fit(table[index[m]], epsilons, basis.n_up, config.delta).sigma_fd for m in levels])
    # rows m0, m0+1, m1, m1+1, ...; every other difference is a (m, m+1) pair
    pairs = table[[index[m + step] for m in levels for step in (0, 1)]]
    sigma_s_values = sigma_s_series(pairs)[::2]

    return StateTable(
        columns={
            "m": levels,
            "E_over_B": energy_over_bandwidth(eigs)[levels],
            "sigma_fd": sigma_fd_values,
            "sigma_s": sigma_s_values,
        }
    )


def _temperature_table(
    config: ExperimentConfig, spectrum: SpectrumResult, basis: BandBasis, real: DisorderRealization
) -> StateTable:
    levels = list(range(0, spectrum.n_levels, config.state_stride))
    results = analyze_eigenstates(spectrum, basis, real, levels, delta=config.delta)
    return StateTable(
        columns={
            "m": np.array(levels),
            "E_over_B": np.array([r.e_over_b for r in results]),
            "E_prime": np.array([r.profile.shifted_energy for r in results]),
            "T_fd": np.array([r.temperatures.t_fd for r in results]),
            "T_can": np.array([r.temperatures.t_can for r in results]),
            "T_th": np.array([r.temperatures.t_th for r in results]),
            "sigma_fd": np.array([r.fit.sigma_fd for r in results]),
        }
    )


def _range_record(
    label: str, levels: list[int], table: np.ndarray, spectrum: SpectrumResult, config: ExperimentConfig,
    basis: BandBasis, real: DisorderRealization, local: list[int], ground_energy: float | None,
) -> RangeRecord:
    eigs = spectrum.eigenvalues
    weights = np.abs(spectrum.eigenvectors[:, local]) ** 2
    entropies = [eigenstate_entropy(w) for w in weights.T]
    excitation = None
    if ground_energy is not None:
        excitation = float(np.mean((eigs[local] - ground_energy) / 2.0))

    states = []
    if config.per_state:
        states = analyze_eigenstates(
            spectrum, basis, real, local, delta=config.delta, ground_energy=ground_energy
        )
        states = [_relabel(s, m) for s, m in zip(states, levels)]

    return RangeRecord(
        label=label,
        levels=levels,
        deltas=np.asarray(real.deltas),
        mean_occupations=table.mean(axis=0),
        entropy=float(np.mean(entropies)),
        excitation=excitation,
        states=states,
    )


def _relabel(state: EigenstateAnalysis, m: int) -> EigenstateAnalysis:
    """Report band indices for states taken from a partial (edge) spectrum."""
    return replace(state, profile=replace(state.profile, m=m))


def _occupations_dense(
    config: ExperimentConfig, spectrum: SpectrumResult, basis: BandBasis, real: DisorderRealization
) -> OccupationRecord:
    ranges = clipped_ranges(config, spectrum.n_levels)
    if not ranges:
        raise ValueError("occupation_profile needs at least one level range inside the band")
    ground = float(spectrum.eigenvalues[0])
    records = []
    for lo, hi in ranges:
        levels = list(range(lo, hi + 1))
        table = occupation_matrix(spectrum.eigenvectors[:, levels], basis)
        records.append(
            _range_record(_range_label(lo, hi), levels, table, spectrum, config, basis, real, levels, ground)
        )
    return OccupationRecord(ranges=records)


def _occupations_iterative(
    config: ExperimentConfig, H: BandHamiltonian, basis: BandBasis, real: DisorderRealization
) -> OccupationRecord:
    n_b = basis.dimension
    ground: float | None = None
    records = []
    for block in edge_blocks(config, n_b):
        spectrum = iterative_extremal(H, block.k, side=block.side, tol=config.tol)
        if block.side == "lowest":
            ground = float(spectrum.eigenvalues[0])
            local = block.levels
        else:
            if ground is None:
                ground = float(iterative_extremal(H, 1, side="lowest", tol=config.tol).eigenvalues[0])
            offset = n_b - block.k
            local = [m - offset for m in block.levels]
        table = occupation_matrix(spectrum.eigenvectors[:, local], basis)
        records.append(_range_record(block.label, block.levels, table, spectrum, config, basis, real, local, ground))
    return OccupationRecord(ranges=records)


def theory_table(config: ExperimentConfig) -> pd.DataFrame:
    """Scaling estimates for every J; the realization at base_seed adds the measured level spacing.

    n_eff is reported when config.excitation (dE) is set.
    """
    n_b = band_size(config)
    rows = []
    for J in config.couplings():
        spectrum = None
        if n_b <= config.dense_cap and config.solver != "iterative":
            lattice, basis = geometry(config.rows, config.cols)
            real = sample_disorder(config.model_params(J), lattice, config.base_seed)
            H = build_band_hamiltonian(lattice, real, basis)
            spectrum = dense_full_diag(H, want_vectors=False, dense_cap=config.dense_cap).eigenvalues
        estimates = theory_estimates(
            config.n, config.delta, J, config.c_chaos, config.c_thermal, spectrum,
            excitation=config.excitation, window_fraction=config.window_fraction,
        )
        rows += [
            {"quantity": name, "value": value, "J_over_delta": J / config.delta}
            for name, value in estimates.to_rows()
        ]
    return pd.DataFrame(rows)
