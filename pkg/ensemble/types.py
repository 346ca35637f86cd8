"""Per-realization records and ensemble summaries."""
from dataclasses import dataclass, field
from typing import Union

import numpy as np
import pandas as pd

from spectral.types import EnergyWindow, SpacingSample
from thermo.types import EigenstateAnalysis


@dataclass(frozen=True)
class SpacingRecord:
    """Central-window spacings of one realization."""
    sample: SpacingSample


@dataclass(frozen=True)
class WindowRecord:
    """Spacings of every energy window of one realization."""
    windows: list[EnergyWindow]
    samples: list[SpacingSample]


@dataclass(frozen=True)
class RangeRecord:
    """Occupations of a block of eigenstates of one realization."""
    label: str  # "95-100", or a single level "100"
    levels: list[int]
    deltas: np.ndarray
    mean_occupations: np.ndarray  # averaged over the levels of the range
    entropy: float  # mean S_q over the range
    excitation: float | None  # mean dE over the range
    states: list[EigenstateAnalysis]  # per-state fits, filled in per-state mode


@dataclass(frozen=True)
class OccupationRecord:
    ranges: list[RangeRecord]


@dataclass(frozen=True)
class StateTable:
    """Column arrays with one entry per analyzed eigenstate."""
    columns: dict[str, np.ndarray]

    def frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.columns)


Record = Union[SpacingRecord, WindowRecord, OccupationRecord, StateTable]


@dataclass(frozen=True)
class RealizationResult:
    """Diagnostics of one disorder realization for every J of the experiment."""
    index: int
    seed: int
    records: dict[float, Record] = field(default_factory=dict)
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass
class EnsembleSummary:
    """Aggregated tables of an ensemble run and its completeness."""
    kind: str
    tables: dict[str, pd.DataFrame]
    n_requested: int
    n_completed: int
    n_failed: int
    failures: list[tuple[int, str]] = field(default_factory=list)
    raw: list[RealizationResult] | None = None

    @property
    def complete(self) -> bool:
        return self.n_failed == 0 and self.n_completed == self.n_requested
