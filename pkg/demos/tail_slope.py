"""Survival of T = max_j N_j(-1/4, 1/4) for the three-point law and its fitted decay rate."""
import math

from kaclab.experiments import default_config, run_experiment, summarize

for q0 in (0.25, 0.5, 0.75):
    cfg = default_config("tail0", law=f"three_point:q0={q0}", trials=20_000, nmax=64, seed=3)
    s = summarize(run_experiment(cfg), cfg)
    fit = next((r for r in s.rows if "fit_rate" in r), None)
    rate = f"{fit['fit_rate']:.3f}" if fit else "n/a"
    print(f"q0={q0}: fitted rate {rate}, log(1/q0) = {math.log(1 / q0):.3f}")
