"""Experiment configuration and key=value config files."""
import logging
from pathlib import Path
from typing import Any, Literal

from dotenv import dotenv_values
from pydantic import BaseModel, Field, field_validator, model_validator

from qubit_lattice.lattice import default_lattice_shape
from qubit_lattice.types import ModelParams
from shared_config import C_CHAOS, C_THERMAL, DEFAULT_OUT_DIR, DEFAULT_THREADS, DENSE_CAP, SOLVER_TOL

logger = logging.getLogger(__name__)

ExperimentKind = Literal[
    "eta_scan",
    "eta_vs_energy",
    "ps_histogram",
    "occupation_profile",
    "sigma_vs_energy",
    "temperature_comparison",
    "sigma_scan",
    "theory",
    "spectrum",
]

# Kinds whose diagnostics need the complete band spectrum
FULL_SPECTRUM_KINDS = {
    "eta_scan",
    "eta_vs_energy",
    "ps_histogram",
    "sigma_vs_energy",
    "temperature_comparison",
    "sigma_scan",
    "spectrum",
}

_LIST_KEYS = {"j_values", "jn_values"}
_RANGE_KEYS = {"level_ranges"}


class ExperimentConfig(BaseModel):
    """One ensemble experiment: geometry, energy scales, disorder ensemble and solver settings."""
    kind: ExperimentKind = Field(description="Experiment kind; selects the diagnostics computed per realization.")
    rows: int = Field(default=3, ge=2, description="Lattice rows.")
    cols: int = Field(default=3, ge=2, description="Lattice columns.")
    n_qubits: int | None = Field(
        default=None, ge=4, description="Qubit count; rows x cols default to its most-square factorization."
    )
    delta: float = Field(default=1.0, gt=0, description="Detuning width delta.")
    delta0: float = Field(default=25.0, gt=0, description="Mean qubit spacing, for projection validation.")
    j_values: list[float] = Field(default_factory=lambda: [0.1], description="Coupling amplitudes J.")
    jn_values: list[float] | None = Field(default=None, description="Scaled couplings J n / delta; replace j_values.")
    n_realizations: int = Field(default=10, ge=1, description="Number of disorder realizations N_D.")
    base_seed: int = Field(default=0, ge=0, le=2**64 - 1, description="Realization r uses seed base_seed + r.")
    window_fraction: float = Field(default=0.05, gt=0, le=0.5, description="Central window half-width fraction.")
    level_ranges: list[tuple[int, int]] = Field(default_factory=list, description="Inclusive level ranges lo-hi.")
    per_state: bool = Field(default=False, description="Fit each eigenstate separately instead of range averages.")
    n_windows: int = Field(default=8, ge=1, description="Energy windows for energy-resolved diagnostics.")
    bin_width: float = Field(default=0.1, gt=0, description="P(s) histogram bin width.")
    solver: Literal["auto", "dense", "iterative"] = Field(default="auto", description="Eigensolver choice.")
    dense_cap: int = Field(default=DENSE_CAP, ge=1, description="Largest N_B diagonalized densely.")
    iterative_k: int = Field(default=6, ge=1, description="Eigenpairs per band edge on the iterative path.")
    band_side: Literal["lowest", "highest", "both"] = Field(default="both", description="Band edges to resolve.")
    tol: float = Field(default=SOLVER_TOL, gt=0, description="Eigenpair residual tolerance (dense and iterative).")
    state_stride: int = Field(default=1, ge=1, description="Analyze every stride-th eigenstate.")
    threads: int = Field(default=DEFAULT_THREADS, ge=1, description="Worker processes; 1 runs serially.")
    out_dir: str = Field(default=DEFAULT_OUT_DIR, description="Output directory.")
    keep_raw: bool = Field(default=False, description="Keep per-realization records in the summary.")
    validate_projection: bool = Field(default=False, description="Check H_P against the full Hamiltonian.")
    c_chaos: float = Field(default=C_CHAOS, gt=0, description="Chaos border constant.")
    c_thermal: float = Field(default=C_THERMAL, gt=0, description="Thermalization border constant.")
    excitation: float | None = Field(default=None, ge=0, description="Excitation energy dE for the theory n_eff.")
    force: bool = Field(default=False, description="Overwrite existing outputs.")

    @field_validator("j_values")
    @classmethod
    def _check_j(cls, values: list[float]) -> list[float]:
        if not values:
            raise ValueError("at least one J value is required")
        if any(j < 0 for j in values):
            raise ValueError(f"J values must be >= 0, got {values}")
        return values

    @field_validator("jn_values")
    @classmethod
    def _check_jn(cls, values: list[float] | None) -> list[float] | None:
        if values is not None and (not values or any(x < 0 for x in values)):
            raise ValueError(f"J n / delta values must be nonempty and >= 0, got {values}")
        return values

    @field_validator("level_ranges")
    @classmethod
    def _check_ranges(cls, ranges: list[tuple[int, int]]) -> list[tuple[int, int]]:
        for lo, hi in ranges:
            if lo < 0 or hi < lo:
                raise ValueError(f"level range {lo}-{hi} must satisfy 0 <= lo <= hi")
        return ranges

    @model_validator(mode="after")
    def _resolve_shape(self) -> "ExperimentConfig":
        if self.n_qubits is None:
            return self
        given = {"rows", "cols"} & self.model_fields_set
        if not given:
            self.rows, self.cols = default_lattice_shape(self.n_qubits)
        elif given == {"rows"} and self.n_qubits % self.rows == 0:
            self.cols = self.n_qubits // self.rows
        elif given == {"cols"} and self.n_qubits % self.cols == 0:
            self.rows = self.n_qubits // self.cols
        if self.rows * self.cols != self.n_qubits or min(self.rows, self.cols) < 2:
            raise ValueError(f"n_qubits={self.n_qubits} does not match a {self.rows}x{self.cols} lattice")
        return self

    @model_validator(mode="after")
    def _check_sizes(self) -> "ExperimentConfig":
        if self.base_seed + self.n_realizations - 1 > 2**64 - 1:
            raise ValueError("base_seed + n_realizations overflows the 64-bit seed range")
        return self

    @property
    def n(self) -> int:
        return self.rows * self.cols

    def couplings(self) -> list[float]:
        """J values in run order."""
        if self.jn_values is not None:
            return [x * self.delta / self.n for x in self.jn_values]
        return list(self.j_values)

    def model_params(self, J: float) -> ModelParams:
        return ModelParams(delta=self.delta, J=J, delta0=self.delta0)

    def echo(self) -> dict[str, Any]:
        """Config as plain JSON-serializable values."""
        return self.model_dump(mode="json")


def _parse_value(key: str, raw: str) -> Any:
    if key in _LIST_KEYS:
        return [float(x) for x in raw.split(",") if x.strip()]
    if key in _RANGE_KEYS:
        return parse_level_ranges(raw)
    return raw


def parse_level_ranges(raw: str) -> list[tuple[int, int]]:
    """Parse "5-10,95-100" (or single levels "5,100") into inclusive ranges."""
    ranges = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        lo, _, hi = part.partition("-")
        ranges.append((int(lo), int(hi) if hi else int(lo)))
    return ranges


def load_config(path: str | Path) -> dict[str, Any]:
    """Read a flat key=value file (# comments) into config overrides.

    Args:
        path: Config file path.

    Returns:
        Dict of field values, still to be validated by ExperimentConfig.
    """
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file {path} does not exist")

    raw = dotenv_values(path)
    known = set(ExperimentConfig.model_fields)
    unknown = sorted(set(raw) - known)
    if unknown:
        raise ValueError(f"unknown config keys in {path}: {', '.join(unknown)}")

    values = {key: _parse_value(key, value) for key, value in raw.items() if value is not None}
    logger.info(f"Loaded {len(values)} settings from {path}")
    return values


def build_config(*layers: dict[str, Any]) -> ExperimentConfig:
    """Merge override layers left to right (later wins) and validate."""
    merged: dict[str, Any] = {}
    for layer in layers:
        values = {k: v for k, v in layer.items() if v is not None}
        # explicit J values replace a scaled scan set by an earlier layer
        if "j_values" in values and "jn_values" not in values:
            merged.pop("jn_values", None)
        # a qubit count and an explicit shape from different layers: the later one decides
        if "n_qubits" in values:
            merged.pop("rows", None)
            merged.pop("cols", None)
        elif {"rows", "cols"} & set(values):
            merged.pop("n_qubits", None)
        merged.update(values)
    return ExperimentConfig(**merged)
