"""Plot-ready CSV tables with a units line and a JSON .meta sidecar."""
import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field

from qubit_lattice.errors import OutputExistsError
from shared_config import ARTIFACT_VERSION, CSV_SIGNIFICANT_DIGITS

logger = logging.getLogger(__name__)


class OutputSchema(BaseModel):
    """Column layout of one output table."""
    name: str = Field(description="Table name; files are <prefix>_<name>.csv and .meta.")
    columns: list[str] = Field(description="Required columns, in order.")
    optional: list[str] = Field(default_factory=list, description="Columns appended after the required ones.")
    units: dict[str, str] = Field(default_factory=dict, description="Unit of each column; dimensionless when missing.")

    def ordered(self, table: pd.DataFrame) -> list[str]:
        missing = [c for c in self.columns if c not in table.columns]
        if missing:
            raise ValueError(f"table for '{self.name}' lacks columns {missing}")
        return self.columns + [c for c in self.optional if c in table.columns]

    def units_line(self, columns: list[str]) -> str:
        return "# units: " + ", ".join(f"{c}={self.units.get(c, '1')}" for c in columns)


_ENERGY = "delta"

SCHEMAS: dict[str, OutputSchema] = {
    "eta-scan": OutputSchema(
        name="eta-scan",
        columns=["J_over_delta", "Jn_over_delta", "eta", "stderr", "n_spacings"],
        optional=["eta_realization_mean", "eta_realization_stderr", "n_realizations", "n_failed"],
        units={"n_spacings": "count", "n_realizations": "count", "n_failed": "count"},
    ),
    "eta-energy": OutputSchema(
        name="eta-energy",
        columns=["J_over_delta", "window", "E_over_B", "eta", "stderr", "n_spacings"],
        units={"window": "index", "n_spacings": "count"},
    ),
    "ps-hist": OutputSchema(
        name="ps-hist",
        columns=["J_over_delta", "s_lo", "s_hi", "s_center", "density", "p_poisson", "p_wigner"],
        optional=["eta"],
        units={c: "mean spacing" for c in ("s_lo", "s_hi", "s_center")},
    ),
    "occupations": OutputSchema(
        name="occupations",
        columns=["site", "delta_i", "n_i", "n_i_fd", "m_range", "T_fd", "sigma_fd"],
        optional=["J_over_delta", "realization", "S_q", "dE"],
        units={"site": "index", "delta_i": _ENERGY, "m_range": "level", "T_fd": _ENERGY, "S_q": "bits", "dE": _ENERGY},
    ),
    "sigma-scan": OutputSchema(
        name="sigma-scan",
        columns=[
            "J_over_delta", "Jn_over_delta", "sigma_fd", "sigma_fd_stderr", "sigma_s_over_sqrt2", "sigma_s_stderr",
            "n_states",
        ],
        units={"n_states": "count"},
    ),
    "sigma-energy": OutputSchema(
        name="sigma-energy",
        columns=["J_over_delta", "E_over_B", "sigma_fd", "sigma_s_over_sqrt2", "n_states"],
        units={"n_states": "count"},
    ),
    "temps": OutputSchema(
        name="temps",
        columns=["E_over_B", "E_prime", "T_fd", "T_can", "T_th"],
        optional=["J_over_delta", "realization", "m", "sigma_fd"],
        units={"E_prime": _ENERGY, "T_fd": _ENERGY, "T_can": _ENERGY, "T_th": _ENERGY, "m": "level"},
    ),
    "spectrum": OutputSchema(
        name="spectrum",
        columns=["m", "E", "E_prime", "E_over_B"],
        optional=["J_over_delta", "realization"],
        units={"m": "level", "E": _ENERGY, "E_prime": _ENERGY},
    ),
    "theory": OutputSchema(
        name="theory", columns=["quantity", "value"], optional=["J_over_delta"], units={"value": "mixed"}
    ),
}


def format_value(value: Any) -> str:
    """CSV cell text: 12 significant digits, +inf/-inf, empty when unavailable."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return ""
        if math.isinf(value):
            return "+inf" if value > 0 else "-inf"
        return f"{float(value):.{CSV_SIGNIFICANT_DIGITS}g}"
    return str(value)


def output_paths(out_dir: str | Path, prefix: str, schema: OutputSchema) -> tuple[Path, Path]:
    base = Path(out_dir) / f"{prefix}_{schema.name}"
    return base.with_suffix(".csv"), base.with_suffix(".meta")


def write_outputs(
    table: pd.DataFrame,
    schema: OutputSchema,
    out_dir: str | Path,
    meta: dict[str, Any],
    force: bool = False,
    prefix: str = "run",
) -> tuple[Path, Path]:
    """Write a result table and its metadata sidecar.

    Args:
        table: Result rows; must carry the schema's required columns.
        schema: Output layout.
        out_dir: Target directory, created when missing.
        meta: Config echo and run facts stored in the .meta file.
        force: Overwrite existing files.
        prefix: File name prefix.

    Returns:
        Paths of the CSV and the .meta file.

    Raises:
        OutputExistsError: A target exists and force is False; nothing is written.
    """
    csv_path, meta_path = output_paths(out_dir, prefix, schema)
    existing = [str(p) for p in (csv_path, meta_path) if p.exists()]
    if existing and not force:
        raise OutputExistsError(f"refusing to overwrite {', '.join(existing)}; pass --force")

    columns = schema.ordered(table)
    body = table[columns].map(format_value) if len(table) else table[columns]
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with open(csv_path, "w", newline="") as f:
        f.write(schema.units_line(columns) + "\n")
        body.to_csv(f, index=False)

    sidecar = {"version": ARTIFACT_VERSION, "table": schema.name, "columns": columns, "rows": len(table), **meta}
    with open(meta_path, "w") as f:
        json.dump(sidecar, f, indent=2, default=_json_default)

    logger.info(f"Wrote {len(table)} rows to {csv_path}")
    return csv_path, meta_path


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (np.ndarray, tuple, set)):
        return list(value)
    return str(value)


def read_output(path: str | Path) -> pd.DataFrame:
    """Parse a CSV written by write_outputs back into numbers (empty cells become NaN)."""
    frame = pd.read_csv(path, comment="#", dtype=str, keep_default_na=False)
    for column in frame.columns:
        text = frame[column].replace({"+inf": "inf", "": np.nan})
        try:
            frame[column] = pd.to_numeric(text)
        except ValueError:
            frame[column] = frame[column].replace({"": None})
    return frame


def read_meta(path: str | Path) -> dict[str, Any]:
    with open(path) as f:
        return json.load(f)
