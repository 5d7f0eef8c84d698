"""Trial scheduling. Results never depend on the worker count or completion order."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor

from ..roots import Unresolved
from .config import ExperimentConfig
from .records import TrialRecord, sort_records

__all__ = ["run_experiment", "run_trials"]

log = logging.getLogger(__name__)


def run_trials(cfg: ExperimentConfig, start: int, stop: int) -> list[TrialRecord]:
    """Records for trials [start, stop); an unresolved trial yields one flag record."""
    from .trials import TRIALS

    fn = TRIALS[cfg.experiment]
    out = []
    for t in range(start, stop):
        try:
            out.extend(fn(cfg, t))
        except Unresolved as exc:
            log.warning("%s trial %d unresolved: %s", cfg.experiment, t, exc)
            out.append(TrialRecord(cfg.experiment, cfg.law, cfg.n_max, t, "unresolved", 1))
    return out


def _chunks(m: int, workers: int) -> list[tuple[int, int]]:
    # several chunks per worker keeps the pool busy when trial costs vary
    k = min(m, workers * 8)
    edges = [m * i // k for i in range(k + 1)]
    return [(a, b) for a, b in zip(edges, edges[1:]) if b > a]


def run_experiment(cfg: ExperimentConfig) -> list[TrialRecord]:
    if cfg.workers == 1 or cfg.trials == 1:
        return sort_records(run_trials(cfg, 0, cfg.trials))
    records = []
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        futures = [pool.submit(run_trials, cfg, a, b) for a, b in _chunks(cfg.trials, cfg.workers)]
        for f in futures:
            records.extend(f.result())
    return sort_records(records)
