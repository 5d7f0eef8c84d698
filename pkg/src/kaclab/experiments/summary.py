"""Aggregate statistics and pass/fail verdicts for experiment records."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from ..laws import parse_law
from ..poly import variance_profile
from ..roots import Interval
from ..theory import (charfn_admissible, charfn_bound, expected_count, gaussian_charfn, gaussian_small_ball,
                      maslova_variance_slope, reference_tail_slope, small_ball_bound)
from .config import ExperimentConfig, default_config
from .records import TrialRecord

__all__ = ["Verdict", "SlopeFit", "ExperimentSummary", "mean_se", "fit_decay_rate", "survival", "summarize"]

# share of trials that may be excluded as unresolved before the run is failed
MAX_EXCLUDED = 1e-3


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    detail: str
    gating: bool = True  # monitors are reported but never fail a run


@dataclass(frozen=True)
class SlopeFit:
    rate: float
    intercept: float
    residual: float
    t_lo: float
    t_hi: float
    points: int


@dataclass
class ExperimentSummary:
    experiment: str
    law: str
    trials: int
    excluded: int = 0
    rows: list[dict] = field(default_factory=list)
    verdicts: list[Verdict] = field(default_factory=list)
    plots: dict[str, tuple[tuple, list]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts if v.gating)

    def check(self, name: str, passed, detail: str, gating: bool = True) -> None:
        self.verdicts.append(Verdict(name, bool(passed), detail, gating))

    def to_text(self) -> str:
        lines = [f"[{self.experiment}]", f"law: {self.law}", f"trials: {self.trials}",
                 f"excluded: {self.excluded}"]
        for row in self.rows:
            lines.append("row: " + ", ".join(f"{k}={_show(v)}" for k, v in row.items()))
        lines += [f"note: {s}" for s in self.notes]
        for v in self.verdicts:
            tag = "PASS" if v.passed else "FAIL"
            kind = "verdict" if v.gating else "monitor"
            lines.append(f"{kind} {v.name}: {tag} ({v.detail})")
        lines.append(f"status: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _show(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


# ---------------------------------------------------------------------------
# statistics


def mean_se(values) -> tuple[float, float]:
    """Sample mean and standard error (sample std / sqrt M); SE is nan for M < 2."""
    v = np.asarray(values, dtype=np.float64)
    if v.size == 0:
        return math.nan, math.nan
    if v.size == 1:
        return float(v[0]), math.nan
    return float(v.mean()), float(v.std(ddof=1) / math.sqrt(v.size))


def survival(values) -> tuple[np.ndarray, np.ndarray]:
    """t = 0..max and the empirical P(T >= t)."""
    v = np.asarray(values, dtype=np.int64)
    t = np.arange(int(v.max()) + 1 if v.size else 1)
    counts = np.bincount(v, minlength=t.size)
    tail = counts[::-1].cumsum()[::-1]
    return t, tail / max(v.size, 1)


def fit_decay_rate(t, p) -> SlopeFit | str:
    """Least-squares rate a in log p = b - a t; a reason string if the fit is impossible."""
    t = np.asarray(t, dtype=np.float64)
    p = np.asarray(p, dtype=np.float64)
    keep = p > 0
    t, y = t[keep], np.log(p[keep])
    if t.size < 2 or np.ptp(t) == 0:
        return f"only {t.size} usable point(s)"
    slope, intercept = np.polyfit(t, y, 1)
    resid = float(np.sqrt(np.mean((y - (intercept + slope * t)) ** 2)))
    return SlopeFit(float(-slope), float(intercept), resid, float(t[0]), float(t[-1]), int(t.size))


def _complex_mean(z: np.ndarray) -> tuple[float, float]:
    """|mean z| and the standard error of the complex mean."""
    m = z.mean()
    if z.size < 2:
        return float(abs(m)), math.nan
    se = math.sqrt(float(np.sum(np.abs(z - m) ** 2)) / (z.size - 1) / z.size)
    return float(abs(m)), se


# ---------------------------------------------------------------------------


class _Table:
    """Record values keyed by (n, observable), excluding unresolved trials."""

    def __init__(self, records: list[TrialRecord]):
        bad = {r.trial for r in records if r.observable == "unresolved"}
        self.excluded = len(bad)
        self.values = defaultdict(list)
        self.aux = defaultdict(list)
        for r in records:
            if r.trial in bad:
                continue
            self.values[(r.n, r.observable)].append(r.value)
            self.aux[(r.n, r.observable)].append(r.aux1)

    def get(self, n, obs) -> np.ndarray:
        return np.asarray(self.values.get((n, obs), []), dtype=np.float64)

    def ns(self, obs=None) -> list[int]:
        return sorted({n for n, o in self.values if obs is None or o == obs})


def summarize(records: list[TrialRecord], cfg: ExperimentConfig | None = None) -> ExperimentSummary:
    records = list(records)
    if cfg is None:
        if not records:
            raise ValueError("cannot infer the experiment from an empty record set")
        cfg = default_config(records[0].experiment, law=records[0].law)
    tab = _Table(records)
    s = ExperimentSummary(cfg.experiment, cfg.law, cfg.trials, tab.excluded)
    _SUMMARIZERS[cfg.experiment](s, tab, cfg)
    s.check("excluded", tab.excluded <= MAX_EXCLUDED * cfg.trials,
            f"{tab.excluded} unresolved of {cfg.trials}, limit {MAX_EXCLUDED:.1%}")
    return s


def _oracle(s, tab, cfg):
    total, mism = 0, 0
    per = {}
    for (n, obs), vals in tab.values.items():
        j = obs.split("@")[1]
        total += len(vals)
        mism += int(sum(vals))
        per[j] = per.get(j, 0) + int(sum(vals))
    for j, spec in enumerate(cfg.p("intervals")):
        s.rows.append({"interval": spec, "mismatches": per.get(str(j), 0)})
    s.check("descartes_equals_sturm", mism == 0, f"{mism} mismatches in {total} comparisons")


def _slln(s, tab, cfg):
    ratios = []
    header = ("n", "N[0,1]", "N[-1,0]", "N(0,1]", "N[-1,1]", "ratio[0,1]", "ratio[-1,1]")
    plot = []
    additive = True
    for n in tab.ns():
        c = {k: tab.get(n, k) for k in header[1:5]}
        additive &= bool(np.all(c["N[-1,1]"] == c["N[-1,0]"] + c["N(0,1]"]))
        ln = math.log(n)
        r01 = float(c["N[0,1]"].mean()) / ln
        r11 = float(c["N[-1,1]"].mean()) / ln
        ratios.append(r11)
        row = {"n": n, **{k: float(v.mean()) for k, v in c.items()}, "ratio[0,1]": r01, "ratio[-1,1]": r11}
        s.rows.append(row)
        plot.append(tuple(row[h] for h in header))
    s.plots["ratio"] = (header, plot)
    s.check("additivity", additive, "N[-1,1] = N[-1,0] + N(0,1] on every path")
    target, tol = cfg.p("target"), cfg.p("tol")
    last = ratios[-1]
    s.check("ratio_at_nmax", abs(last - target) <= tol,
            f"N[-1,1]/log n = {last:.4f} at n = {tab.ns()[-1]}, band {target:.4f} +/- {tol}")
    if len(ratios) >= 4:
        fl = [max(ratios[i - 2:i + 1]) - min(ratios[i - 2:i + 1]) for i in range(2, len(ratios))]
        s.check("fluctuation_shrinks", fl[-1] <= fl[0],
                "max-min of the ratio over 3 consecutive points: " + ", ".join(f"{v:.3f}" for v in fl),
                gating=False)


def _jensen(s, tab, cfg):
    n = tab.ns()[0]
    T, bound, dom = tab.get(n, "T"), tab.get(n, "bound"), tab.get(n, "dominated")
    s.rows.append({"n": n, "mean_T": float(T.mean()), "max_T": int(T.max()),
                   "min_bound": float(bound.min()), "min_slack": float((bound - T).min())})
    s.check("jensen_dominance", bool(np.all(dom == 1)),
            f"T <= bound in {int(dom.sum())} of {dom.size} trials")


def _lacunary(s, tab, cfg):
    I = Interval.parse(cfg.interval)
    eps, zmax = cfg.p("eps"), cfg.p("z_max")
    gaussian = parse_law(cfg.law).kind == "gaussian"
    header = ("n", "mean", "se", "expected", "variance", "exceed", "exceed_se")
    plot, exceed = [], []
    for n in tab.ns():
        N = tab.get(n, "N")
        m, se = mean_se(N)
        E = expected_count(n, I)
        p, pse = mean_se(np.abs(N - E) >= eps * math.log(n))
        exceed.append(p)
        row = {"n": n, "mean": m, "se": se, "expected": E, "variance": float(N.var(ddof=1)) if N.size > 1 else 0.0,
               "exceed": p, "exceed_se": pse}
        s.rows.append(row)
        plot.append(tuple(row[h] for h in header))
        if gaussian:
            s.check(f"mean_vs_expected@n={n}", abs(m - E) <= zmax * se,
                    f"|{m:.4f} - {E:.4f}| vs {zmax} SE = {zmax * se:.4f}")
    s.plots["lacunary"] = (header, plot)
    s.check("exceedance_nonincreasing", all(b <= a for a, b in zip(exceed, exceed[1:])),
            "P(|N - E| >= eps log n): " + ", ".join(f"{p:.4f}" for p in exceed), gating=False)


def _smallball(s, tab, cfg):
    n = cfg.n_max
    gaussian = parse_law(cfg.law).kind == "gaussian"
    K, c, zmax = cfg.p("K"), cfg.p("c"), cfg.p("z_max")
    header = ("x", "lambda", "prob", "se", "ratio", "gaussian", "floor")
    plot, worst, fails = [], 0.0, []
    for x in cfg.p("x_grid"):
        z = np.abs(tab.get(n, f"z@x={x!r}"))
        V = float(variance_profile(n, x))
        for lam in cfg.p("lam_grid"):
            p, se = mean_se(z <= lam)
            ref = float(gaussian_small_ball(lam))
            _, floor, asserted = small_ball_bound(lam, V, n, K, c)
            row = {"x": x, "lambda": lam, "prob": p, "se": se, "ratio": p / lam, "gaussian": ref, "floor": floor}
            s.rows.append(row)
            plot.append(tuple(row[h] for h in header))
            if asserted:
                worst = max(worst, p / lam)
            if gaussian and abs(p - ref) > zmax * se:
                fails.append(f"x={x}, lambda={lam}: {p:.4f} vs {ref:.4f} (SE {se:.4f})")
    s.plots["smallball"] = (header, plot)
    if gaussian:
        s.check("gaussian_reference", not fails, "; ".join(fails) or f"all points within {zmax} SE of 2Phi(lambda)-1")
    s.check("ratio_bound", worst <= K, f"max P/lambda = {worst:.4f}, K = {K}")


def _charfn(s, tab, cfg):
    n, x = cfg.n_max, cfg.p("x")
    z = tab.get(n, "z")
    V = float(variance_profile(n, x))
    gaussian = parse_law(cfg.law).kind == "gaussian"
    C1, zmax = cfg.p("C1"), cfg.p("z_max")
    header = ("w", "abs_phi", "se", "gaussian", "bound", "admissible")
    plot, fails = [], []
    for w in cfg.p("w_grid"):
        phi, se = _complex_mean(np.exp(2j * math.pi * w * z))
        ref = float(gaussian_charfn(w))
        bound = float(charfn_bound(w, V, C1))
        adm = bool(charfn_admissible(w, n, x, cfg.p("C2"), cfg.p("c0")))
        row = {"w": w, "abs_phi": phi, "se": se, "gaussian": ref, "bound": bound, "admissible": int(adm)}
        s.rows.append(row)
        plot.append(tuple(row[h] for h in header))
        if gaussian:
            if abs(phi - ref) > zmax * se:
                fails.append(f"w={w}: {phi:.5f} vs {ref:.5f} (SE {se:.5f})")
        elif adm and phi > bound:
            fails.append(f"w={w}: {phi:.5f} > {bound:.5f}")
    s.plots["charfn"] = (header, plot)
    if gaussian:
        s.check("gaussian_reference", not fails, "; ".join(fails) or f"all w within {zmax} SE of exp(-2 pi^2 w^2)")
    else:
        s.check("charfn_bound", not fails, "; ".join(fails) or f"|phi| <= exp(-{C1} min(V, w^2)) on admissible w")


def _tail0(s, tab, cfg):
    n = cfg.n_max
    T, k = tab.get(n, "T").astype(np.int64), tab.get(n, "k").astype(np.int64)
    M = T.size
    t, p = survival(T)
    s.plots["survival"] = (("t", "prob"), list(zip(t.tolist(), p.tolist())))
    s.rows.append({"n": n, "mean_T": float(T.mean()), "max_T": int(T.max()), "max_k": int(k.max()),
                   "shortcut_share": float(np.mean(tab.aux[(n, "T")]))})
    ref = reference_tail_slope(parse_law(cfg.law))
    keep = p >= cfg.p("min_count") / M
    fit = fit_decay_rate(t[keep], p[keep])
    if isinstance(fit, str):
        s.notes.append(f"slope fit omitted: {fit}")
    else:
        s.rows.append({"fit_rate": fit.rate, "residual": fit.residual, "t_lo": fit.t_lo, "t_hi": fit.t_hi,
                       "points": fit.points, "reference": ref})
    if math.isfinite(ref):
        lo, hi = cfg.p("slope_lo") * ref, cfg.p("slope_hi") * ref
        ok = not isinstance(fit, str) and lo <= fit.rate <= hi
        rate = "none" if isinstance(fit, str) else f"{fit.rate:.4f}"
        s.check("tail_slope", ok, f"rate {rate} in [{lo:.4f}, {hi:.4f}]")
    else:
        s.check("vanishing_prefix_zero", bool(np.all(k == 0)), f"k = 0 in {int(np.sum(k == 0))} of {M} trials")
    s.check("survival_at_zero", p[0] == 1.0, "P(T >= 0) = 1")


def _near1(s, tab, cfg):
    eps = cfg.p("eps")
    header = ("n", "p_exceed", "se", "mean_N_n", "se_N_n", "mean_max_N", "mean_N_end")
    plot, probs, ordered = [], [], True
    for n in tab.ns():
        mx, Nn, Ne = tab.get(n, "max_N"), tab.get(n, "N_n"), tab.get(n, "N_end")
        ordered &= bool(np.all(mx >= Nn))
        p, pse = mean_se(mx > eps * math.log(n))
        m, mse = mean_se(Nn)
        probs.append(p)
        row = {"n": n, "p_exceed": p, "se": pse, "mean_N_n": m, "se_N_n": mse,
               "mean_max_N": float(mx.mean()), "mean_N_end": float(Ne.mean())}
        s.rows.append(row)
        plot.append(tuple(row[h] for h in header))
    s.plots["near1"] = (header, plot)
    s.check("max_dominates_n", ordered, "max over the m-grid >= the count at m = n")
    s.check("exceedance_decreasing", all(b <= a for a, b in zip(probs, probs[1:])),
            "P(max N > eps log n): " + ", ".join(f"{p:.4f}" for p in probs), gating=False)


def _pairing(s, tab, cfg):
    C2, pmin = cfg.p("C2"), cfg.p("p_min")
    header = ("n", "p_ok", "se", "mean_defect", "max_defect", "witness_freq")
    plot = []
    for n in tab.ns():
        d = tab.get(n, "defect")
        p, se = mean_se(d <= C2)
        wit = tab.get(n, "witness")
        row = {"n": n, "p_ok": p, "se": se, "mean_defect": float(d.mean()), "max_defect": int(d.max()),
               "witness_freq": float(wit.mean()) if wit.size else math.nan}
        s.rows.append(row)
        plot.append(tuple(row[h] for h in header))
        s.check(f"defect@n={n}", p >= pmin, f"P(defect <= {C2}) = {p:.4f} (SE {se:.4f}), need >= {pmin}")
        hist = np.bincount(d.astype(np.int64))
        s.plots[f"defect_hist_n{n}"] = (("defect", "count"), list(enumerate(hist.tolist())))
    s.plots["pairing"] = (header, plot)


def _variance(s, tab, cfg):
    header = ("n", "mean", "variance", "ratio", "skewness")
    plot = []
    ns = tab.ns()
    for n in ns:
        N = tab.get(n, "N")
        var = float(N.var(ddof=1)) if N.size > 1 else 0.0
        skew = float(stats.skew(N)) if N.size > 2 and var > 0 else 0.0
        row = {"n": n, "mean": float(N.mean()), "variance": var, "ratio": var / math.log(n), "skewness": skew}
        s.rows.append(row)
        plot.append(tuple(row[h] for h in header))
        s.check(f"variance_nonnegative@n={n}", var >= 0, f"Var = {var:.4f}")
    s.plots["variance"] = (header, plot)
    s.notes.append(f"reference slope for Var N(R) / log n (Gaussian): {maslova_variance_slope():.5f}")
    last = plot[-1]
    s.check("skewness", abs(last[4]) < 0.5, f"standardized skewness {last[4]:.4f} at n = {last[0]}")
    hist_z = tab.get(ns[-1], "N")
    if hist_z.size > 1 and hist_z.std() > 0:
        zs = (hist_z - hist_z.mean()) / hist_z.std(ddof=1)
        counts, edges = np.histogram(zs, bins=np.arange(-4.0, 4.01, 0.5))
        s.plots["standardized_hist"] = (("z_lo", "z_hi", "count"),
                                        list(zip(edges[:-1].tolist(), edges[1:].tolist(), counts.tolist())))


_SUMMARIZERS = {
    "oracle": _oracle,
    "slln": _slln,
    "jensen_audit": _jensen,
    "lacunary": _lacunary,
    "smallball": _smallball,
    "charfn": _charfn,
    "tail0": _tail0,
    "near1": _near1,
    "pairing": _pairing,
    "variance": _variance,
}
