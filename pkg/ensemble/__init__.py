"""Disorder-ensemble experiments: configuration, per-realization diagnostics, aggregation and figure presets."""
from ensemble.aggregate import EnsembleAccumulator, summarize
from ensemble.config import ExperimentConfig, build_config, load_config, parse_level_ranges
from ensemble.pipeline import diagnose, theory_table
from ensemble.runner import run_ensemble, run_realization
from ensemble.types import EnsembleSummary, RealizationResult

__all__ = [
    "EnsembleAccumulator",
    "EnsembleSummary",
    "ExperimentConfig",
    "RealizationResult",
    "build_config",
    "diagnose",
    "load_config",
    "parse_level_ranges",
    "run_ensemble",
    "run_realization",
    "summarize",
    "theory_table",
]
