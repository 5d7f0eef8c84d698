"""Certified real-root counting by Descartes subdivision in the Bernstein basis.

The real line is cut at -1, 0 and 1.  Roots exactly at those points are found with
integer arithmetic and divided out; each of the four open pieces is mapped onto
(0, 1) by x -> x, -x, 1/x or -1/x.  On (0, 1) dyadic boxes are bisected until the
sign variation of their Bernstein coefficients is 0 or 1.  Coefficients are
doubles carrying rigorous error bounds; a sign is used only when the bound
separates it from zero.  Undecided midpoints are evaluated exactly, and boxes
that go deeper than the float budget continue in exact integer arithmetic.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .. import _intpoly
from . import _bernstein as bern
from .interval import Budget, Interval, RootCountResult, Unresolved

__all__ = ["RootCounter", "descartes_count"]

_U = 2.0**-53
# depth from which boxes with undecided signs switch to exact arithmetic
EXACT_AFTER = 12
REGIONS = ("(-inf,-1)", "(-1,0)", "(0,1)", "(1,inf)")


def _scaled_float(value: int, shift: int) -> tuple[float, float]:
    """Correctly rounded value / 2**shift and a bound on the rounding error."""
    v = value / 2**shift if shift >= 0 else float(value * 2**-shift)
    if value == 0:
        return 0.0, 0.0
    return v, abs(v) * _U + 2.0**-1074


def _float_coefficients(ints: list[int]):
    shift = max(abs(a).bit_length() for a in ints) - 1
    pairs = [_scaled_float(a, shift) for a in ints]
    c = np.array([p[0] for p in pairs])
    e = np.array([p[1] for p in pairs])
    return c, e, shift


def _variations(signs: np.ndarray) -> int:
    s = signs[signs != 0]
    return int(np.count_nonzero(s[1:] != s[:-1]))


class _Box:
    __slots__ = ("k", "d", "b", "e", "exact_poly", "age")

    def __init__(self, k, d, b=None, e=None, exact_poly=None, age=0):
        self.k, self.d, self.b, self.e, self.exact_poly = k, d, b, e, exact_poly
        self.age = age  # generations spent in exact mode

    @property
    def lo(self) -> Fraction:
        return Fraction(self.k, 1 << self.d)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.k + 1, 1 << self.d)


class _UnitIsolator:
    """Lazy root isolation of one integer polynomial on the open interval (0, 1).

    The polynomial must not vanish at 0 or 1.  Boxes are refined only where a
    query window needs them; undecided boxes elsewhere stay pending.
    """

    def __init__(self, ints: list[int], budget: Budget):
        self.ints = ints
        self.m = len(ints) - 1
        self.budget = budget
        self.points: list[Fraction] = []
        self.isolated: list[tuple[Fraction, Fraction, int, list[int] | None]] = []
        self.pending: list[_Box] = []
        self.boxes = 0
        self.escalations = 0
        self._sqf = None
        if self.m < 1:
            return
        self.c, self.ce, self.shift = _float_coefficients(ints)
        self.N = bern.bucket(self.m)
        b, e = bern.to_bernstein(self.c, self.ce, self.N)
        # endpoint coefficients are the exact values at 0 and 1
        b[0], e[0] = _scaled_float(ints[0], self.shift)
        b[-1], e[-1] = _scaled_float(sum(ints), self.shift)
        self.pending.append(_Box(0, 0, b, e))

    # -- exact helpers -------------------------------------------------------
    def _dyadic_value(self, num: int, d: int) -> int:
        """2**(d m) q(num / 2**d), exactly."""
        return _intpoly.homogeneous_value(self.ints, num, 1 << d)

    def sqf(self) -> list[int]:
        if self._sqf is None:
            if self.m > self.budget.exact_degree:
                raise Unresolved(f"degree {self.m} too large for exact refinement")
            self._sqf = _intpoly.squarefree(self.ints)
        return self._sqf

    def sign_at(self, t: Fraction, poly: list[int] | None) -> int:
        """Certified sign of q (or of ``poly`` when given) at a rational t in [0, 1]."""
        if poly is None:
            tf = float(t)
            delta = abs(float(Fraction(tf) - t))
            c = self.c
            ac = np.abs(c)
            val = 0.0
            mag = 0.0
            for cj, aj in zip(c[::-1].tolist(), ac[::-1].tolist()):
                val = val * tf + cj
                mag = mag * tf + aj
            slope = float(np.dot(np.arange(self.m + 1), ac))
            g = bern.gamma(2 * self.m + 2)
            rad = (1 + 4 * g) * (2 * g * mag + float(self.ce.sum()) + 2 * delta * slope) + 2.0**-1000
            if abs(val) > rad:
                return 1 if val > 0 else -1
            poly = self.ints
        self.escalations += 1
        return _intpoly.sign_at(poly, t)

    # -- refinement ----------------------------------------------------------
    def _meets(self, box: _Box, a: Fraction, b: Fraction) -> bool:
        return box.lo < b and box.hi > a

    def refine(self, a: Fraction, b: Fraction):
        """Decide every pending box that meets the closed window [a, b]."""
        while True:
            work = [bx for bx in self.pending if self._meets(bx, a, b)]
            if not work:
                return
            self.pending = [bx for bx in self.pending if not self._meets(bx, a, b)]
            self.boxes += len(work)
            if self.boxes > self.budget.max_boxes:
                raise Unresolved(f"more than {self.budget.max_boxes} boxes")
            floats = [bx for bx in work if bx.exact_poly is None]
            exact = [bx for bx in work if bx.exact_poly is not None]
            to_split = []
            for bx in floats:
                certain = np.abs(bx.b) > bx.e
                known_zero = (bx.b == 0) & (bx.e == 0)
                if np.all(certain | known_zero):
                    signs = np.where(certain, np.sign(bx.b), 0.0)
                    var = _variations(signs)
                    if var == 0:
                        continue
                    if var == 1:
                        s_lo = int(signs[np.flatnonzero(signs)[0]])
                        self.isolated.append((bx.lo, bx.hi, s_lo, None))
                        continue
                    deep = bx.d >= self.budget.float_depth
                else:
                    # some sign is undecided: near a multiple root bisection
                    # alone cannot settle it, so go exact early when affordable
                    deep = bx.d >= self.budget.float_depth or (
                        bx.d >= EXACT_AFTER and self.m <= self.budget.exact_degree)
                if deep:
                    self.escalations += 1
                    exact.append(_Box(bx.k, bx.d, exact_poly=self.ints))
                else:
                    to_split.append(bx)
            if to_split:
                self._split_float(to_split)
            for bx in exact:
                self._exact_step(bx)

    def _split_float(self, boxes: list[_Box]):
        B = np.stack([bx.b for bx in boxes], axis=1)
        E = np.stack([bx.e for bx in boxes], axis=1)
        BL, EL, BR, ER = bern.split(B, E)
        for i, bx in enumerate(boxes):
            k, d = 2 * bx.k, bx.d + 1
            bl, el, br, er = BL[:, i].copy(), EL[:, i].copy(), BR[:, i].copy(), ER[:, i].copy()
            if not (abs(bl[-1]) > el[-1] and abs(br[0]) > er[0]):
                h = self._dyadic_value(k + 1, d)
                self.escalations += 1
                if h == 0:
                    self.points.append(Fraction(k + 1, 1 << d))
                    bl[-1] = el[-1] = br[0] = er[0] = 0.0
                else:
                    v, ev = _scaled_float(h, d * self.m + self.shift)
                    if v == 0.0:  # underflow: keep both halves exact
                        self.pending += [_Box(k, d, exact_poly=self.ints), _Box(k + 1, d, exact_poly=self.ints)]
                        continue
                    bl[-1] = br[0] = v
                    el[-1] = er[0] = ev
            self.pending += [_Box(k, d, bl, el), _Box(k + 1, d, br, er)]

    def _exact_step(self, bx: _Box):
        if bx.age > self.budget.exact_depth:
            raise Unresolved(f"box at depth {bx.d} still undecided")
        if self.m > self.budget.exact_degree:
            raise Unresolved(f"degree {self.m} too large for exact refinement")
        poly = bx.exact_poly
        self.escalations += 1
        T = _intpoly.box_transform(poly, bx.k, bx.d)
        var = _intpoly.sign_variations(T)
        if var == 0:
            return
        if var == 1:
            top = next(c for c in reversed(T) if c)
            self.isolated.append((bx.lo, bx.hi, 1 if top > 0 else -1, poly))
            return
        if bx.age >= 6 and poly is self.ints:
            # persistent variations: repeated roots are likely, drop them
            poly = self.sqf()
        k, d = 2 * bx.k, bx.d + 1
        if _intpoly.homogeneous_value(poly, k + 1, 1 << d) == 0:
            self.points.append(Fraction(k + 1, 1 << d))
        age = bx.age + 1
        self.pending += [_Box(k, d, exact_poly=poly, age=age), _Box(k + 1, d, exact_poly=poly, age=age)]

    # -- counting ------------------------------------------------------------
    def count(self, a: Fraction, a_closed: bool, b: Fraction, b_closed: bool) -> int:
        """Distinct roots in the window between a and b (0 <= a <= b <= 1)."""
        if self.m < 1:
            return 0
        self.refine(a, b)

        def inside(x):
            return (x > a or (a_closed and x == a)) and (x < b or (b_closed and x == b))

        total = sum(1 for x in self.points if inside(x))
        for lo, hi, s_lo, poly in self.isolated:
            if not (lo < b and hi > a):
                continue
            if a <= lo and hi <= b:
                total += 1
                continue
            above = self._side(a, lo, hi, s_lo, poly)  # root vs a
            below = self._side(b, lo, hi, s_lo, poly)
            if (above > 0 or (above == 0 and a_closed)) and (below < 0 or (below == 0 and b_closed)):
                total += 1
        return total

    def _side(self, w, lo, hi, s_lo, poly) -> int:
        """+1 if the box's root lies above w, -1 below, 0 if equal."""
        if w <= lo:
            return 1
        if w >= hi:
            return -1
        s = self.sign_at(w, poly)
        if s == 0:
            return 0
        return 1 if s == s_lo else -1


def _clip(lo, lc, hi, hc, A, B):
    """Intersect the x-window with the open interval (A, B); None if empty."""
    if lo <= A:
        lo, lc = A, False
    if hi >= B:
        hi, hc = B, False
    if lo > hi or (lo == hi and not (lc and hc)):
        return None
    return lo, lc, hi, hc


def _inv(x):
    return Fraction(0) if isinstance(x, float) else 1 / x


class RootCounter:
    """Answers root-count queries for one polynomial, reusing isolation work."""

    def __init__(self, sample, budget: Budget | None = None):
        a, _ = sample.integer_form() if hasattr(sample, "integer_form") else (_intpoly.trim(sample), 0)
        if not a:
            raise ValueError("the zero polynomial has no finite root count")
        self.budget = budget or Budget()
        self.degree = len(a) - 1
        k0 = next(i for i, c in enumerate(a) if c)
        a = a[k0:]
        m_pos, a = _intpoly.multiplicity_at(a, 1, 1)
        m_neg, a = _intpoly.multiplicity_at(a, -1, 1)
        self.vanishing_prefix = k0
        self.special = {Fraction(0): k0 > 0, Fraction(1): m_pos > 0, Fraction(-1): m_neg > 0}
        self.q = _intpoly.primitive(a)
        self._regions: dict[str, _UnitIsolator] = {}

    def _region(self, name: str) -> _UnitIsolator:
        iso = self._regions.get(name)
        if iso is None:
            q = self.q
            if name in ("(1,inf)", "(-inf,-1)"):
                q = q[::-1]
            if name in ("(-1,0)", "(-inf,-1)"):
                q = [c if j % 2 == 0 else -c for j, c in enumerate(q)]
            iso = self._regions[name] = _UnitIsolator(q, self.budget)
        return iso

    @property
    def escalations(self) -> int:
        return sum(r.escalations for r in self._regions.values())

    def region_windows(self, interval: Interval):
        """Yield (region, a, a_closed, b, b_closed) in the unit coordinate t."""
        lo, lc, hi, hc = interval.lo, interval.lo_closed, interval.hi, interval.hi_closed
        one = Fraction(1)
        w = _clip(lo, lc, hi, hc, Fraction(0), one)
        if w:
            yield "(0,1)", w[0], w[1], w[2], w[3]
        w = _clip(lo, lc, hi, hc, -one, Fraction(0))
        if w:
            yield "(-1,0)", -w[2], w[3], -w[0], w[1]
        w = _clip(lo, lc, hi, hc, one, math.inf)
        if w:
            yield "(1,inf)", _inv(w[2]), w[3], 1 / w[0], w[1]
        w = _clip(lo, lc, hi, hc, -math.inf, -one)
        if w:
            yield "(-inf,-1)", -_inv(w[0]), w[1], -1 / w[2], w[3]

    def count_distinct(self, interval: Interval) -> int:
        total = sum(1 for x, hit in self.special.items() if hit and interval.contains(x))
        if len(self.q) > 1:
            for name, a, ac, b, bc in self.region_windows(interval):
                total += self._region(name).count(a, ac, b, bc)
        return total

    def count(self, interval: Interval) -> RootCountResult:
        n = self.count_distinct(interval)
        return RootCountResult(n, "descartes", escalations=self.escalations)


def descartes_count(sample, interval: Interval, budget: Budget | None = None) -> RootCountResult:
    """Certified count of distinct real roots by Descartes subdivision."""
    return RootCounter(sample, budget).count(interval)
