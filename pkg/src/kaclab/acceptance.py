"""Acceptance suite: ten criteria, each run at its stated tolerance and time limit.

Every stochastic criterion runs through the same code path as the CLI and leaves
its outputs (records, summary, plots, manifest) in ``<out>/c<N>.../``.
"""
from __future__ import annotations

import contextlib
import io
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .experiments import default_config
from .experiments.records import atomic_write, read_records
from .experiments.summary import mean_se
from .roots import Interval
from .theory import expected_count, iterated_bound_logs, iterated_moment_log, iterated_moment_quadrature

__all__ = ["CRITERIA", "CriterionResult", "AcceptanceContext", "run_criterion", "run_acceptance"]

# constants frozen after sweeps; the criteria check against these values
SMALL_BALL_K = 5.0
CHARFN_C1 = 0.5
ITERATED_C_MAX = 16.0
CHARFN_W_GRID = (0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0)


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0
    limit: float = math.inf

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return (f"criterion {self.number:2d} [{tag}] {self.name}: {self.detail} "
                f"({self.seconds:.1f} s, limit {self.limit:.0f} s)")


@dataclass
class AcceptanceContext:
    out: Path
    seed: int = 0
    workers: int = 1
    dirs: dict = field(default_factory=dict)

    def run(self, tag: str, configs, command: str):
        from .cli import execute

        d = self.out / tag
        _, summaries = execute(configs, d, command)
        self.dirs[tag] = d
        return summaries

    def cfg(self, experiment, **kw):
        return default_config(experiment, seed=self.seed, workers=self.workers, **kw)


def _verdict(summary, name):
    return next(v for v in summary.verdicts if v.name == name)


def _all_pass(summary, prefix="") -> tuple[bool, list[str]]:
    bad = [f"{v.name}: {v.detail}" for v in summary.verdicts
           if v.gating and (v.name.startswith(prefix) or v.name == "excluded") and not v.passed]
    return not bad, bad


# ---------------------------------------------------------------------------


def c1_oracle(ctx):
    (s,) = ctx.run("c1", [ctx.cfg("oracle")], "oracle-check")
    ok, bad = _all_pass(s)
    return ok, _verdict(s, "descartes_equals_sturm").detail + ("; " + "; ".join(bad) if bad else "")


def c2_kac_expectation(ctx):
    cfg = ctx.cfg("lacunary", law="gaussian", trials=20_000, degrees=(16, 64, 256, 1024))
    (s,) = ctx.run("c2", [cfg], "lacunary")
    ok, bad = _all_pass(s, "mean_vs_expected")
    I = Interval.closed(0, 1)
    slope = (expected_count(4096, I) - expected_count(1024, I)) / math.log(4)
    target = 1 / (2 * math.pi)
    slope_ok = abs(slope - target) <= 0.1 * target
    worst = max(abs(r["mean"] - r["expected"]) / r["se"] for r in s.rows)
    detail = f"max |mean - E|/SE = {worst:.2f} (limit 3); theory slope {slope:.5f} vs 1/(2 pi) = {target:.5f}"
    return ok and slope_ok, detail + ("; " + "; ".join(bad) if bad else "")


def c3_degree_one(ctx):
    e = expected_count(1, Interval.real_line())
    cfg = ctx.cfg("lacunary", law="gaussian", trials=20_000, degrees=(1,), interval="[-1,1]")
    (s,) = ctx.run("c3", [cfg], "lacunary")
    recs = read_records(ctx.dirs["c3"] / "records.csv")
    m, se = mean_se([r.value for r in recs if r.observable == "N"])
    ok = abs(e - 1.0) <= 1e-6 and abs(m - 0.5) <= 3 * se and _all_pass(s, "excluded")[0]
    return ok, f"expected_count(1, R) = {e:.9f}; mean N_1[-1,1] = {m:.4f} (SE {se:.4f}) vs 0.5"


def c4_small_ball(ctx):
    (g,) = ctx.run("c4_gaussian", [ctx.cfg("smallball", law="gaussian", nmax=256, K=SMALL_BALL_K)], "smallball")
    (r,) = ctx.run("c4_rademacher", [ctx.cfg("smallball", law="rademacher", nmax=256, K=SMALL_BALL_K)],
                   "smallball")
    ok = (_all_pass(g, "gaussian_reference")[0] and _all_pass(r, "ratio_bound")[0])
    return ok, (f"gaussian: {_verdict(g, 'gaussian_reference').detail}; "
                f"rademacher: {_verdict(r, 'ratio_bound').detail}")


def c5_tail(ctx):
    (t,) = ctx.run("c5", [ctx.cfg("tail0", law="three_point:q0=0.5", trials=100_000, nmax=128)], "tail0")
    (r,) = ctx.run("c5_rademacher", [ctx.cfg("tail0", law="rademacher", trials=100_000, nmax=128)], "tail0")
    ok = _all_pass(t, "tail_slope")[0] and _all_pass(r, "vanishing_prefix_zero")[0]
    return ok, (f"three_point: {_verdict(t, 'tail_slope').detail}; "
                f"rademacher: {_verdict(r, 'vanishing_prefix_zero').detail}")


def c6_iterated(ctx):
    worst, where = -math.inf, None
    for n in range(1, 513):
        for k in range(1, min(32, n) + 1):
            for y in (0.5, 0.9, 1.0 - math.log(n) / n):
                b1, b2, _ = iterated_bound_logs(n, k, y, y)
                r = iterated_moment_log(n, k, y) - min(b1, b2)
                if r > worst:
                    worst, where = r, (n, k, y)
    cstar = math.exp(worst)
    rel = 0.0
    n = 12
    for k in range(1, n + 1):
        for y in (0.5, 0.9, 1.0 - math.log(n) / n):
            ex = math.exp(iterated_moment_log(n, k, y))
            rel = max(rel, abs(iterated_moment_quadrature(n, k, y) - ex) / ex)
    ok = cstar <= ITERATED_C_MAX and rel <= 1e-6
    atomic_write(ctx.out / "c6" / "summary.txt",
                 f"[iterated]\nC*: {cstar!r}\nworst (n, k, y): {where}\nquadrature max rel err n=12: {rel!r}\n")
    return ok, f"C* = {cstar:.4f} at (n, k, y) = {where} (limit {ITERATED_C_MAX}); n = 12 quadrature rel err {rel:.2e}"


def c7_pairing(ctx):
    (s,) = ctx.run("c7", [ctx.cfg("pairing", law="gaussian", trials=1000, nmax=512)], "pairing")
    ok, bad = _all_pass(s, "defect")
    return ok, _verdict(s, "defect@n=512").detail + ("; " + "; ".join(bad) if bad else "")


def c8_charfn(ctx):
    (g,) = ctx.run("c8_gaussian", [ctx.cfg("charfn", law="gaussian", nmax=256)], "charfn")
    r_cfg = ctx.cfg("charfn", law="rademacher", nmax=256, x=0.9, C1=CHARFN_C1, w_grid=CHARFN_W_GRID)
    (r,) = ctx.run("c8_rademacher", [r_cfg], "charfn")
    ok = _all_pass(g, "gaussian_reference")[0] and _all_pass(r, "charfn_bound")[0]
    return ok, (f"gaussian: {_verdict(g, 'gaussian_reference').detail}; "
                f"rademacher: {_verdict(r, 'charfn_bound').detail}")


def c9_slln(ctx):
    s, a = ctx.run("c9", [ctx.cfg("slln", law="rademacher", trials=1, nmax=2**14),
                          ctx.cfg("jensen_audit", law="rademacher", trials=1000)], "slln")
    ok = _all_pass(s, "ratio_at_nmax")[0] and _all_pass(a, "jensen_dominance")[0]
    return ok, f"{_verdict(s, 'ratio_at_nmax').detail}; audit: {_verdict(a, 'jensen_dominance').detail}"


def c10_determinism(ctx):
    from .cli import main

    src = ctx.dirs.get("c5")
    if src is None:
        ctx.run("c5", [ctx.cfg("tail0", law="three_point:q0=0.5", trials=100_000, nmax=128)], "tail0")
        src = ctx.dirs["c5"]
    manifest = src / "manifest.txt"
    outs = []
    for w in (1, 8):
        d = ctx.out / f"c10_workers{w}"
        with contextlib.redirect_stdout(io.StringIO()):
            main(["tail0", "--config", str(manifest), "--workers", str(w), "--out", str(d)])
        outs.append((d / "records.csv").read_bytes())
    original = (src / "records.csv").read_bytes()
    ok = outs[0] == original and outs[1] == original
    return ok, (f"records.csv from the manifest with workers 1 and 8: "
                f"{'byte-identical' if ok else 'DIFFERENT'} to the original ({len(original)} bytes)")


CRITERIA = {
    1: ("root-engine oracle equivalence", c1_oracle, 300),
    2: ("Kac expectation agreement", c2_kac_expectation, 600),
    3: ("degree-one exact cases", c3_degree_one, 60),
    4: ("small-ball probabilities", c4_small_ball, 300),
    5: ("near-zero tail slope", c5_tail, 300),
    6: ("iterated-bound constant", c6_iterated, 120),
    7: ("pairing stability", c7_pairing, 600),
    8: ("characteristic function", c8_charfn, 180),
    9: ("single-path trend and Jensen audit", c9_slln, 600),
    10: ("determinism", c10_determinism, math.inf),
}


def run_criterion(number: int, ctx: AcceptanceContext) -> CriterionResult:
    name, fn, limit = CRITERIA[number]
    t0 = time.perf_counter()
    ok, detail = fn(ctx)
    dt = time.perf_counter() - t0
    if dt > limit:
        ok, detail = False, detail + "; over the time limit"
    return CriterionResult(number, name, ok, detail, dt, limit)


def run_acceptance(out, only=None, seed: int = 0, workers: int = 1) -> int:
    """Run the selected criteria, print one line each, and return 0 iff all pass."""
    ctx = AcceptanceContext(Path(out), seed=seed, workers=workers)
    lines = []
    for number in sorted(only or CRITERIA):
        res = run_criterion(number, ctx)
        print(res.line(), flush=True)
        lines.append((res.passed, res.line()))
    atomic_write(ctx.out / "acceptance.txt", "\n".join(line for _, line in lines) + "\n")
    return 0 if all(ok for ok, _ in lines) else 1
