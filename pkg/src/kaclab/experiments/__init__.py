"""Seeded Monte Carlo experiments on random polynomial roots."""
from .config import EXPERIMENTS, ExperimentConfig, configs_from_ini, configs_to_ini, default_config
from .records import TrialRecord, read_records, write_records
from .runner import run_experiment
from .summary import ExperimentSummary, SlopeFit, Verdict, fit_decay_rate, mean_se, summarize, survival
from .trials import (run_charfn, run_jensen_audit, run_lacunary, run_near_one_max, run_near_zero_tail,
                     run_oracle_check, run_pairing, run_slln_path, run_small_ball, run_variance_trend)

__all__ = [
    "EXPERIMENTS",
    "ExperimentConfig",
    "ExperimentSummary",
    "SlopeFit",
    "TrialRecord",
    "Verdict",
    "configs_from_ini",
    "configs_to_ini",
    "default_config",
    "fit_decay_rate",
    "mean_se",
    "read_records",
    "run_charfn",
    "run_experiment",
    "run_jensen_audit",
    "run_lacunary",
    "run_near_one_max",
    "run_near_zero_tail",
    "run_oracle_check",
    "run_pairing",
    "run_slln_path",
    "run_small_ball",
    "run_variance_trend",
    "summarize",
    "survival",
    "write_records",
]
