"""Monte Carlo mean of N_n[0,1] against the Kac-Rice integral for a few degrees."""
import sys

from kaclab.experiments import default_config, run_experiment, summarize

trials = int(sys.argv[1]) if len(sys.argv) > 1 else 500
cfg = default_config("lacunary", law="gaussian", trials=trials, degrees=(16, 64, 256), seed=1)
summary = summarize(run_experiment(cfg), cfg)
print(f"{'n':>5} {'mean':>8} {'se':>7} {'expected':>9}")
for row in summary.rows:
    print(f"{row['n']:>5} {row['mean']:8.4f} {row['se']:7.4f} {row['expected']:9.4f}")
