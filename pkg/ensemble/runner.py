"""Disorder-ensemble execution: one realization per task, folded in index order."""
import logging
import time
from functools import partial
from multiprocessing import Pool

from ensemble.aggregate import EnsembleAccumulator, summarize
from ensemble.config import ExperimentConfig
from ensemble.pipeline import band_size, diagnose, uses_iterative
from ensemble.types import EnsembleSummary, RealizationResult
from qubit_lattice.errors import QcoreError, RealizationError

logger = logging.getLogger(__name__)


def run_realization(config: ExperimentConfig, r: int) -> RealizationResult:
    """Diagnostics of realization r for every coupling of the experiment.

    Args:
        config: Experiment configuration.
        r: Realization index; the disorder seed is base_seed + r.

    Returns:
        RealizationResult with one record per J.

    Raises:
        RealizationError: Any failure, tagged with the realization index and seed.
    """
    seed = config.base_seed + r
    records = {}
    try:
        for J in config.couplings():
            records[J] = diagnose(config, J, seed)
    except Exception as e:
        raise RealizationError(r, seed, e) from e
    return RealizationResult(index=r, seed=seed, records=records)


def _run_safe(config: ExperimentConfig, r: int) -> RealizationResult:
    try:
        return run_realization(config, r)
    except RealizationError as e:
        return RealizationResult(index=e.index, seed=e.seed, error=str(e))


def run_ensemble(config: ExperimentConfig) -> EnsembleSummary:
    """Run every realization of the experiment and aggregate the diagnostics.

    Realizations run in a process pool when threads > 1, serially otherwise.
    Results are folded in realization order, so the summary does not depend
    on the worker count. Failed realizations are logged, counted and left out.

    Args:
        config: Experiment configuration.

    Returns:
        EnsembleSummary with the per-kind tables.

    Raises:
        CapacityError: The band is too large for the requested diagnostics.
        QcoreError: Every realization failed.
    """
    n_b = band_size(config)
    if uses_iterative(config) and config.solver == "auto":
        logger.warning(
            f"N_B={n_b} exceeds the dense cap {config.dense_cap}; using band-edge Lanczos states instead"
        )

    R = config.n_realizations
    logger.info(
        f"Running {config.kind} on {config.rows}x{config.cols} (N_B={n_b}), "
        f"{len(config.couplings())} couplings x {R} realizations, {config.threads} worker(s)"
    )
    start = time.perf_counter()

    accumulator = EnsembleAccumulator.empty(config.couplings())
    raw = [] if config.keep_raw else None
    tasks = range(R)
    worker = partial(_run_safe, config)

    if config.threads == 1:
        results = map(worker, tasks)
        _fold(accumulator, results, raw, R)
    else:
        with Pool(processes=config.threads) as pool:
            # imap keeps submission order
            _fold(accumulator, pool.imap(worker, tasks), raw, R)

    elapsed = time.perf_counter() - start
    if accumulator.n_completed == 0:
        raise QcoreError(f"all {R} realizations failed; first error: {accumulator.failures[0][1]}")
    logger.info(
        f"Finished {accumulator.n_completed}/{R} realizations in {elapsed:.1f}s ({accumulator.n_failed} failed)"
    )
    return summarize(config, accumulator, raw)


def _fold(
    accumulator: EnsembleAccumulator, results, raw: list[RealizationResult] | None, total: int
) -> None:
    step = max(1, total // 10)
    for result in results:
        if not result.ok:
            logger.warning(f"Excluded {result.error}")
        accumulator.add(result)
        if raw is not None:
            raw.append(result)
        done = accumulator.n_completed + accumulator.n_failed
        if done % step == 0:
            logger.info(f"Progress: {done}/{total} realizations")
