"""Backend dispatch and the derived root statistics used by experiments."""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.optimize import minimize_scalar

from ..poly import PolynomialSample, evaluate
from .descartes import RootCounter, descartes_count
from .interval import Budget, Interval, RootCountResult, Unresolved
from .sturm import SturmOracle, sturm_count

__all__ = ["count_roots", "RootSession", "double_root_witness", "pairing_defect", "STURM_MAX_DEGREE",
           "FALLBACK_MAX_DEGREE"]

STURM_MAX_DEGREE = 64
# Sturm chains on wide integer coefficients (continuous laws) get slow fast, so
# the exact path is also gated on degree times coefficient bit length
STURM_MAX_COST = 1024
# Sturm chains grow too large beyond this to serve as a fallback
FALLBACK_MAX_DEGREE = 256


def count_roots(sample: PolynomialSample, interval: Interval, budget: Budget | None = None) -> RootCountResult:
    """Distinct real roots in ``interval``: Sturm for low degree, Descartes otherwise."""
    if sample.is_zero():
        raise ValueError("the zero polynomial has no finite root count")
    if use_sturm(sample):
        return sturm_count(sample, interval)
    try:
        return descartes_count(sample, interval, budget)
    except Unresolved:
        if sample.degree > FALLBACK_MAX_DEGREE:
            raise
        res = sturm_count(sample, interval)
        return RootCountResult(res.count, "sturm", escalations=1)


class RootSession:
    """Repeated count queries on one sample, with the same dispatch as count_roots.

    Backend state (Sturm chain, isolated Descartes boxes) is shared between queries.
    """

    def __init__(self, sample: PolynomialSample, budget: Budget | None = None):
        if sample.is_zero():
            raise ValueError("the zero polynomial has no finite root count")
        self.sample = sample
        self._sturm = SturmOracle(sample.integer_form()[0]) if use_sturm(sample) else None
        self._desc = None if self._sturm else RootCounter(sample, budget)
        self.fallbacks = 0

    def count(self, interval: Interval) -> RootCountResult:
        if self._desc is not None:
            try:
                return self._desc.count(interval)
            except Unresolved:
                if self.sample.degree > FALLBACK_MAX_DEGREE:
                    raise
                self._desc = None
                self._sturm = SturmOracle(self.sample.integer_form()[0])
                self.fallbacks += 1
        return RootCountResult(self._sturm.count(interval), "sturm", escalations=self.fallbacks)


def use_sturm(sample: PolynomialSample) -> bool:
    if sample.degree > STURM_MAX_DEGREE:
        return False
    a, _ = sample.integer_form()
    bits = max(abs(c).bit_length() for c in a)
    return sample.degree * bits <= STURM_MAX_COST


def double_root_witness(sample: PolynomialSample, interval: Interval, B: float, A: float = 2.0,
                        max_points: int = 2_000_000):
    """A point of ``interval`` where |p| and |p'| are both <= n**-B, or None.

    Scans a grid of pitch max(n**-A, 1e-7), polishes the smallest local minima of
    max(|p|, |p'|) and returns the first candidate that passes certified evaluation.
    """
    if not interval.bounded:
        raise ValueError("double_root_witness needs a bounded interval")
    n = max(sample.degree, 2)
    thr = float(n) ** -B
    lo, hi = float(interval.lo), float(interval.hi)
    pitch = max(n**-A, 1e-7)
    npts = min(int(math.ceil((hi - lo) / pitch)) + 1, max_points)
    xs = np.linspace(lo, hi, max(npts, 2))
    c = sample.values
    dc = npoly.polyder(c) if c.size > 1 else np.zeros(1)

    def level(x):
        return np.maximum(np.abs(npoly.polyval(x, c)), np.abs(npoly.polyval(x, dc)))

    f = level(xs)
    interior = np.r_[True, f[1:] <= f[:-1]] & np.r_[f[:-1] <= f[1:], True]
    cand = np.flatnonzero(interior)
    cand = cand[np.argsort(f[cand])][:8]
    step = xs[1] - xs[0]
    for i in cand:
        x0 = float(xs[i])
        pts = [x0]
        a, b = max(lo, x0 - step), min(hi, x0 + step)
        if b > a:
            r = minimize_scalar(lambda x: float(level(x)), bounds=(a, b), method="bounded",
                                options={"xatol": 1e-15})
            pts.insert(0, float(r.x))
        for x in pts:
            if not interval.contains(Fraction(x)):
                continue
            v0, v1 = evaluate(sample, x, 0), evaluate(sample, x, 1)
            if abs(v0.value) + v0.radius <= thr and abs(v1.value) + v1.radius <= thr:
                return x
    return None


def pairing_defect(f: PolynomialSample, g: PolynomialSample, interval: Interval) -> int:
    """|N_f(I) - N_g(I)|."""
    return abs(count_roots(f, interval).count - count_roots(g, interval).count)
