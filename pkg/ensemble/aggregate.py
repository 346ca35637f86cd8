"""Associative accumulation of realization records and the per-kind summary tables."""
import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ensemble.config import ExperimentConfig
from ensemble.types import (
    EnsembleSummary,
    OccupationRecord,
    RangeRecord,
    RealizationResult,
    Record,
    StateTable,
    WindowRecord,
)
from spectral.statistics import merge_samples, pooled_eta, ps_histogram
from thermo.fermi_dirac import fd_fit

logger = logging.getLogger(__name__)


@dataclass
class EnsembleAccumulator:
    """Records of completed realizations per coupling, plus the failures.

    merge() concatenates and re-sorts by realization index, so any grouping
    of partial accumulators folds to the same result.
    """
    entries: dict[float, list[tuple[int, Record]]]
    failures: list[tuple[int, str]] = field(default_factory=list)
    n_completed: int = 0

    @classmethod
    def empty(cls, couplings: list[float]) -> "EnsembleAccumulator":
        return cls(entries={J: [] for J in couplings})

    @property
    def n_failed(self) -> int:
        return len(self.failures)

    def add(self, result: RealizationResult) -> None:
        if not result.ok:
            self.failures.append((result.index, result.error or ""))
            return
        for J, record in result.records.items():
            self.entries.setdefault(J, []).append((result.index, record))
        self.n_completed += 1

    def merge(self, other: "EnsembleAccumulator") -> "EnsembleAccumulator":
        entries = {}
        for J in list(self.entries) + [J for J in other.entries if J not in self.entries]:
            combined = self.entries.get(J, []) + other.entries.get(J, [])
            entries[J] = sorted(combined, key=lambda item: item[0])
        return EnsembleAccumulator(
            entries=entries,
            failures=sorted(self.failures + other.failures),
            n_completed=self.n_completed + other.n_completed,
        )

    def records(self, J: float) -> list[tuple[int, Record]]:
        return sorted(self.entries.get(J, []), key=lambda item: item[0])


def _stderr(values: np.ndarray) -> float:
    return float(np.std(values, ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0


# ============================================================================
# Per-Kind Tables
# ============================================================================

def _eta_scan_table(config: ExperimentConfig, acc: EnsembleAccumulator) -> pd.DataFrame:
    rows = []
    for J in config.couplings():
        samples = [record.sample for _, record in acc.records(J)]
        result = pooled_eta(samples, window=f"center {config.window_fraction:g}")
        rows.append(
            {
                "J_over_delta": J / config.delta,
                "Jn_over_delta": J * config.n / config.delta,
                "eta": result.eta,
                "stderr": result.stderr,
                "n_spacings": result.n_spacings,
                "eta_realization_mean": result.realization_mean,
                "eta_realization_stderr": result.realization_stderr,
                "n_realizations": result.n_realizations,
                "n_failed": acc.n_failed,
            }
        )
        logger.info(f"J n/delta={J * config.n / config.delta:.3f}: eta={result.eta:.4f} +- {result.stderr:.4f}")
    return pd.DataFrame(rows)


def _ps_hist_table(config: ExperimentConfig, acc: EnsembleAccumulator) -> pd.DataFrame:
    frames = []
    for J in config.couplings():
        samples = [record.sample for _, record in acc.records(J)]
        pooled = merge_samples(samples)
        hist = ps_histogram(pooled, bin_width=config.bin_width)
        hist.insert(0, "J_over_delta", J / config.delta)
        hist["eta"] = pooled_eta(samples).eta
        frames.append(hist)
    return pd.concat(frames, ignore_index=True)


def _eta_energy_table(config: ExperimentConfig, acc: EnsembleAccumulator) -> pd.DataFrame:
    rows = []
    for J in config.couplings():
        records: list[WindowRecord] = [record for _, record in acc.records(J)]
        for w in range(len(records[0].windows)):
            samples = [record.samples[w] for record in records]
            result = pooled_eta(samples)
            rows.append(
                {
                    "J_over_delta": J / config.delta,
                    "window": w,
                    "E_over_B": float(np.mean([record.windows[w].e_over_b for record in records])),
                    "eta": result.eta,
                    "stderr": result.stderr,
                    "n_spacings": result.n_spacings,
                }
            )
    return pd.DataFrame(rows)


def _occupation_rows(
    config: ExperimentConfig, J: float, index: int, span: RangeRecord, occupations: np.ndarray, fitted: np.ndarray,
    t_fd: float, sigma: float, label: str, entropy: float, excitation: float | None,
) -> list[dict]:
    return [
        {
            "site": i,
            "delta_i": float(span.deltas[i]),
            "n_i": float(occupations[i]),
            "n_i_fd": float(fitted[i]),
            "m_range": label,
            "T_fd": t_fd,
            "sigma_fd": sigma,
            "J_over_delta": J / config.delta,
            "realization": index,
            "S_q": entropy,
            "dE": excitation,
        }
        for i in range(occupations.size)
    ]


def _occupations_table(config: ExperimentConfig, acc: EnsembleAccumulator) -> pd.DataFrame:
    n_up = config.n // 2
    rows: list[dict] = []
    for J in config.couplings():
        records: list[tuple[int, OccupationRecord]] = acc.records(J)
        labels = [span.label for span in records[0][1].ranges]
        for position, label in enumerate(labels):
            block = [(index, record.ranges[position]) for index, record in records]
            if config.per_state:
                for index, span in block:
                    for state in span.states:
                        rows += _occupation_rows(
                            config, J, index, span, state.profile.occupations, state.fit.fitted, state.fit.t_fd,
                            state.fit.sigma_fd, str(state.profile.m), state.profile.entropy, state.profile.excitation,
                        )
                continue

            # one pooled fit over the (eps_i, n_i) clouds of all realizations
            epsilons = np.concatenate([span.deltas + config.delta / 2.0 for _, span in block])
            occupations = np.concatenate([span.mean_occupations for _, span in block])
            fit = fd_fit(occupations, epsilons, n_up * len(block), config.delta)
            logger.info(f"J={J:g} levels {label}: pooled T_fd={fit.t_fd:.4g}, sigma_fd={fit.sigma_fd:.4f}")
            offset = 0
            for index, span in block:
                size = span.mean_occupations.size
                rows += _occupation_rows(
                    config, J, index, span, span.mean_occupations, fit.fitted[offset:offset + size], fit.t_fd,
                    fit.sigma_fd, label, span.entropy, span.excitation,
                )
                offset += size
    return pd.DataFrame(rows)


def _state_frames(config: ExperimentConfig, acc: EnsembleAccumulator) -> list[pd.DataFrame]:
    frames = []
    for J in config.couplings():
        for index, record in acc.records(J):
            frame = record.frame()
            frame.insert(0, "J_over_delta", J / config.delta)
            frame["realization"] = index
            frames.append(frame)
    return frames


def _sigma_scan_table(config: ExperimentConfig, acc: EnsembleAccumulator) -> pd.DataFrame:
    rows = []
    for J in config.couplings():
        tables: list[StateTable] = [record for _, record in acc.records(J)]
        fd_means = np.array([np.mean(t.columns["sigma_fd"]) for t in tables])
        s_means = np.array([np.mean(t.columns["sigma_s"]) for t in tables]) / np.sqrt(2.0)
        rows.append(
            {
                "J_over_delta": J / config.delta,
                "Jn_over_delta": J * config.n / config.delta,
                "sigma_fd": float(fd_means.mean()),
                "sigma_fd_stderr": _stderr(fd_means),
                "sigma_s_over_sqrt2": float(s_means.mean()),
                "sigma_s_stderr": _stderr(s_means),
                "n_states": int(sum(t.columns["m"].size for t in tables)),
            }
        )
    return pd.DataFrame(rows)


def _sigma_energy_table(config: ExperimentConfig, acc: EnsembleAccumulator) -> pd.DataFrame:
    edges = np.linspace(-0.5, 0.5, config.n_windows + 1)
    rows = []
    for J in config.couplings():
        frame = pd.concat([record.frame() for _, record in acc.records(J)], ignore_index=True)
        bins = np.clip(np.digitize(frame["E_over_B"], edges) - 1, 0, config.n_windows - 1)
        for b, group in frame.groupby(bins):
            rows.append(
                {
                    "J_over_delta": J / config.delta,
                    "E_over_B": 0.5 * (edges[b] + edges[b + 1]),
                    "sigma_fd": float(group["sigma_fd"].mean()),
                    "sigma_s_over_sqrt2": float(group["sigma_s"].mean() / np.sqrt(2.0)),
                    "n_states": int(len(group)),
                }
            )
    return pd.DataFrame(rows)


# ============================================================================
# Summary
# ============================================================================

OUTPUT_NAMES = {
    "eta_scan": "eta-scan",
    "ps_histogram": "ps-hist",
    "eta_vs_energy": "eta-energy",
    "occupation_profile": "occupations",
    "sigma_scan": "sigma-scan",
    "sigma_vs_energy": "sigma-energy",
    "temperature_comparison": "temps",
    "spectrum": "spectrum",
}


def summarize(
    config: ExperimentConfig, acc: EnsembleAccumulator, raw: list[RealizationResult] | None = None
) -> EnsembleSummary:
    """Turn accumulated records into the output table of the experiment kind."""
    kind = config.kind
    if kind == "eta_scan":
        table = _eta_scan_table(config, acc)
    elif kind == "ps_histogram":
        table = _ps_hist_table(config, acc)
    elif kind == "eta_vs_energy":
        table = _eta_energy_table(config, acc)
    elif kind == "occupation_profile":
        table = _occupations_table(config, acc)
    elif kind == "sigma_scan":
        table = _sigma_scan_table(config, acc)
    elif kind == "sigma_vs_energy":
        table = _sigma_energy_table(config, acc)
    elif kind in ("temperature_comparison", "spectrum"):
        table = pd.concat(_state_frames(config, acc), ignore_index=True)
    else:
        raise ValueError(f"kind '{kind}' has no ensemble summary")

    return EnsembleSummary(
        kind=kind,
        tables={OUTPUT_NAMES[kind]: table},
        n_requested=config.n_realizations,
        n_completed=acc.n_completed,
        n_failed=acc.n_failed,
        failures=list(acc.failures),
        raw=raw,
    )
