"""Exact root counting with Sturm sequences over the integers."""
from __future__ import annotations

from .. import _intpoly
from .interval import Interval, RootCountResult

__all__ = ["SturmOracle", "sturm_count"]


def _variations_at(chain, x) -> int:
    if isinstance(x, float):
        if x > 0:
            signs = [c[-1] for c in chain]
        else:
            signs = [c[-1] if len(c) % 2 else -c[-1] for c in chain]
    else:
        signs = [_intpoly.homogeneous_value(c, x.numerator, x.denominator) for c in chain]
    return _intpoly.sign_variations(signs)


class SturmOracle:
    """Counts distinct real roots of one fixed integer polynomial.

    The Sturm chain is built once; endpoints that are roots are divided out before
    a separate chain is built for that query.
    """

    def __init__(self, coeffs: list[int]):
        self.poly = _intpoly.trim(coeffs)
        if not self.poly:
            raise ValueError("the zero polynomial has no finite root count")
        self._chain = None
        self._variations = {}

    @property
    def chain(self):
        if self._chain is None:
            self._chain = _intpoly.signed_remainder_chain(self.poly)
        return self._chain

    def count(self, interval: Interval) -> int:
        p = self.poly
        if len(p) == 1:
            return 0
        lo, hi = interval.lo, interval.hi
        if lo == hi:
            return int(_intpoly.sign_at(p, lo) == 0)
        q = p
        extra = 0
        deflated = False
        for x, closed in ((lo, interval.lo_closed), (hi, interval.hi_closed)):
            if isinstance(x, float):
                continue
            mult, q = _intpoly.multiplicity_at(q, x.numerator, x.denominator)
            if mult:
                deflated = True
                extra += closed
        if len(q) == 1:
            return extra
        if not deflated:
            return self._cached_variations(lo) - self._cached_variations(hi) + extra
        chain = _intpoly.signed_remainder_chain(q)
        return _variations_at(chain, lo) - _variations_at(chain, hi) + extra

    def _cached_variations(self, x) -> int:
        v = self._variations.get(x)
        if v is None:
            v = self._variations[x] = _variations_at(self.chain, x)
        return v


def sturm_count(sample, interval: Interval) -> RootCountResult:
    """Exact number of distinct real roots of ``sample`` in ``interval``."""
    coeffs, _ = sample.integer_form()
    return RootCountResult(SturmOracle(coeffs).count(interval), "sturm")
