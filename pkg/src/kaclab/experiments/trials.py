"""Per-trial work for every experiment.

Each ``trial_<name>(cfg, t)`` draws the coefficient stream of trial ``t`` once and
returns that trial's records; the matching ``run_<name>(cfg)`` runs all trials.
Counts for different degrees within a trial always come from prefixes of the same
stream.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as npoly

from ..laws import parse_law, seeded_stream
from ..poly import PolynomialSample, sample_polynomial, variance_profile
from ..roots import Interval, RootSession, count_roots, double_root_witness
from ..roots.descartes import descartes_count
from ..roots.sturm import sturm_count
from ..theory import jensen_root_bound
from .config import ExperimentConfig
from .records import TrialRecord

__all__ = [
    "TRIALS",
    "m_grid",
    "near_zero_max",
    "run_charfn",
    "run_jensen_audit",
    "run_lacunary",
    "run_near_one_max",
    "run_near_zero_tail",
    "run_oracle_check",
    "run_pairing",
    "run_slln_path",
    "run_small_ball",
    "run_variance_trend",
]

# keeps audit streams disjoint from the trials of the other experiments
AUDIT_OFFSET = 2**32


def _rec(cfg: ExperimentConfig, n, t, name, value, aux1=None, aux2=None) -> TrialRecord:
    return TrialRecord(cfg.experiment, cfg.law, int(n), int(t), name, value, aux1, aux2)


def _sample(cfg: ExperimentConfig, n: int, t: int) -> PolynomialSample:
    return sample_polynomial(parse_law(cfg.law), n, cfg.master_seed, t)


def _frac(x: float) -> Fraction:
    return Fraction(float(x))


def m_grid(n: int, c: float, size: int) -> list[int]:
    """``size`` evenly spaced integers in [n, cn] plus both endpoints."""
    top = int(math.floor(c * n))
    inner = np.linspace(n, top, size + 2)[1:-1] if size > 0 else []
    return sorted({n, top, *(int(round(m)) for m in inner)})


def near_zero_max(sample: PolynomialSample, r: float) -> tuple[int, int, int, bool]:
    """(T, T_distinct, k, shortcut) for T = max_j N_j(-r, r) over nonzero prefixes.

    T counts the root at 0 with multiplicity k (the vanishing prefix length) and
    the other roots as distinct; T_distinct counts every root once. When
    |xi_k| > sum_{i>k} |xi_i| r^(i-k), Rouche's theorem gives exactly k zeros in
    the disk of radius r for every prefix, so no counting is needed.
    """
    c = np.abs(sample.values)
    nz = np.flatnonzero(c)
    n = sample.degree
    if nz.size == 0:
        return n, 0, n + 1, True
    k = int(nz[0])
    tail = math.fsum(c[k + 1:] * r ** np.arange(1, c.size - k))
    if c[k] > tail * (1 + 1e-12):
        return k, int(k > 0), k, True
    I = Interval.open(-_frac(r), _frac(r))
    best, best_distinct = 0, 0
    for j in range(k, n + 1):
        if c[j] == 0:
            continue  # same polynomial as the previous nonzero prefix
        d = count_roots(sample.prefix(j), I).count
        best = max(best, d + k - int(k > 0))
        best_distinct = max(best_distinct, d)
    return best, best_distinct, k, False


# ---------------------------------------------------------------------------


def trial_oracle(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    rng = seeded_stream(cfg.master_seed, t)
    top = cfg.p("coef_max")
    deg = int(rng.integers(1, cfg.n_max + 1))
    coeffs = rng.integers(-top, top + 1, size=deg + 1)
    while not coeffs.any():
        coeffs = rng.integers(-top, top + 1, size=deg + 1)
    s = PolynomialSample.from_coefficients([float(v) for v in coeffs], law_id="integers")
    out = []
    for j, spec in enumerate(cfg.p("intervals")):
        I = Interval.parse(spec)
        ref = sturm_count(s, I).count
        got = descartes_count(s, I).count
        out.append(_rec(cfg, deg, t, f"mismatch@{j}", int(got != ref), ref, got))
    return out


def trial_slln(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    full = _sample(cfg, cfg.n_max, t)
    queries = {
        "N[0,1]": Interval.closed(0, 1),
        "N[-1,0]": Interval.closed(-1, 0),
        "N(0,1]": Interval(Fraction(0), Fraction(1), False, True),
        "N[-1,1]": Interval.closed(-1, 1),
    }
    out = []
    for n in cfg.degrees:
        sess = RootSession(full.prefix(n))
        for name, I in queries.items():
            out.append(_rec(cfg, n, t, name, sess.count(I).count, math.log(n)))
    return out


def trial_jensen_audit(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    n = cfg.n_max
    s = sample_polynomial(parse_law(cfg.law), n, cfg.master_seed, AUDIT_OFFSET + t)
    T, _, k, shortcut = near_zero_max(s, cfg.p("r"))
    bound = jensen_root_bound(s, cfg.p("r"), cfg.p("R"), cfg.p("c0"))
    return [
        _rec(cfg, n, t, "T", T, k, int(shortcut)),
        _rec(cfg, n, t, "bound", bound),
        _rec(cfg, n, t, "dominated", int(T <= bound)),
    ]


def trial_lacunary(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    full = _sample(cfg, cfg.n_max, t)
    I = Interval.parse(cfg.interval)
    return [_rec(cfg, n, t, "N", count_roots(full.prefix(n), I).count) for n in cfg.degrees]


def _z(sample: PolynomialSample, x: float) -> float:
    v = float(variance_profile(sample.degree, x))
    return float(npoly.polyval(x, sample.values)) / math.sqrt(v)


def trial_smallball(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    n = cfg.n_max
    s = _sample(cfg, n, t)
    return [_rec(cfg, n, t, f"z@x={x!r}", _z(s, x), x) for x in cfg.p("x_grid")]


def trial_charfn(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    n = cfg.n_max
    x = cfg.p("x")
    return [_rec(cfg, n, t, "z", _z(_sample(cfg, n, t), x), x)]


def trial_tail0(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    n = cfg.n_max
    T, Td, k, shortcut = near_zero_max(_sample(cfg, n, t), cfg.p("r"))
    return [
        _rec(cfg, n, t, "T", T, int(shortcut)),
        _rec(cfg, n, t, "T_distinct", Td),
        _rec(cfg, n, t, "k", k),
    ]


def trial_near1(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    c = cfg.p("c")
    full = _sample(cfg, int(math.floor(c * cfg.n_max)), t)
    out = []
    for n in cfg.degrees:
        ln = math.log(n)
        J = Interval.closed(_frac(1 - cfg.p("C") * ln / n), 1)
        end = Interval.closed(_frac(1 - ln / (cfg.p("Cp") * n)), 1)
        counts = {m: RootSession(full.prefix(m)).count(J).count for m in m_grid(n, c, cfg.p("grid"))}
        out.append(_rec(cfg, n, t, "max_N", max(counts.values()), max(counts, key=counts.get)))
        out.append(_rec(cfg, n, t, "N_n", counts[n]))
        out.append(_rec(cfg, n, t, "N_end", count_roots(full.prefix(n), end).count))
    return out


def trial_pairing(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    c = cfg.p("c")
    full = _sample(cfg, int(math.floor(c * cfg.n_max)), t)
    out = []
    for n in cfg.degrees:
        I = Interval.closed(_frac(1 / cfg.p("C1")), _frac(1 - cfg.p("C0") * math.log(n) / n))
        counts = {m: count_roots(full.prefix(m), I).count for m in m_grid(n, c, cfg.p("grid"))}
        defects = {m: abs(v - counts[n]) for m, v in counts.items()}
        worst = max(defects, key=defects.get)
        out.append(_rec(cfg, n, t, "defect", defects[worst], worst))
        out.append(_rec(cfg, n, t, "N_n", counts[n]))
        if cfg.p("witness"):
            w = double_root_witness(full.prefix(n), I, cfg.p("B"), cfg.p("A"))
            out.append(_rec(cfg, n, t, "witness", int(w is not None), w))
    return out


def trial_variance(cfg: ExperimentConfig, t: int) -> list[TrialRecord]:
    full = _sample(cfg, cfg.n_max, t)
    I = Interval.parse(cfg.interval)
    return [_rec(cfg, n, t, "N", count_roots(full.prefix(n), I).count) for n in cfg.degrees]


TRIALS = {
    "oracle": trial_oracle,
    "slln": trial_slln,
    "jensen_audit": trial_jensen_audit,
    "lacunary": trial_lacunary,
    "smallball": trial_smallball,
    "charfn": trial_charfn,
    "tail0": trial_tail0,
    "near1": trial_near1,
    "pairing": trial_pairing,
    "variance": trial_variance,
}


def _runner(name):
    def run(cfg: ExperimentConfig) -> list[TrialRecord]:
        from .runner import run_experiment

        if cfg.experiment != name:
            raise ValueError(f"config is for {cfg.experiment!r}, not {name!r}")
        return run_experiment(cfg)

    run.__name__ = f"run_{name}"
    return run


run_oracle_check = _runner("oracle")
run_slln_path = _runner("slln")
run_jensen_audit = _runner("jensen_audit")
run_lacunary = _runner("lacunary")
run_small_ball = _runner("smallball")
run_charfn = _runner("charfn")
run_near_zero_tail = _runner("tail0")
run_near_one_max = _runner("near1")
run_pairing = _runner("pairing")
run_variance_trend = _runner("variance")
