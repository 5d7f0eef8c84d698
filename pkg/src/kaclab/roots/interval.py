"""Query intervals and result types shared by the root-counting backends."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

__all__ = ["Interval", "RootCountResult", "Unresolved", "Budget"]


class Unresolved(RuntimeError):
    """Subdivision budget exhausted before every box was decided."""


def _endpoint(v):
    if isinstance(v, float) and math.isinf(v):
        return v
    if isinstance(v, str) and v.strip().lstrip("+-") in ("inf", "oo"):
        return -math.inf if v.strip().startswith("-") else math.inf
    return Fraction(v)


@dataclass(frozen=True)
class Interval:
    """Interval with rational (or infinite) endpoints and open/closed flags."""

    lo: Fraction | float
    hi: Fraction | float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        lo, hi = _endpoint(self.lo), _endpoint(self.hi)
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        if lo == math.inf or hi == -math.inf:
            raise ValueError("interval endpoints out of order")
        if isinstance(lo, float):
            object.__setattr__(self, "lo_closed", False)
        if isinstance(hi, float):
            object.__setattr__(self, "hi_closed", False)
        if lo > hi:
            raise ValueError(f"interval lo={lo} exceeds hi={hi}")
        if lo == hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("a point interval must be closed at both ends")

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def real_line(cls) -> "Interval":
        return cls(-math.inf, math.inf, False, False)

    @classmethod
    def parse(cls, text: str) -> "Interval":
        """Parse notation such as ``[0,1]``, ``(-inf, -1]`` or ``[1/2, 0.75)``."""
        m = re.fullmatch(r"\s*([\[(])\s*([^,]+?)\s*,\s*([^,]+?)\s*([\])])\s*", text)
        if not m:
            raise ValueError(f"cannot parse interval {text!r}")
        return cls(m.group(2), m.group(3), m.group(1) == "[", m.group(4) == "]")

    @property
    def bounded(self) -> bool:
        return not (isinstance(self.lo, float) or isinstance(self.hi, float))

    def contains(self, x) -> bool:
        x = Fraction(x)
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def __str__(self):
        return f"{'[' if self.lo_closed else '('}{self.lo}, {self.hi}{']' if self.hi_closed else ')'}"


@dataclass(frozen=True)
class RootCountResult:
    count: int
    method: str
    certified: bool = True
    escalations: int = 0
    multiplicity_policy: str = "distinct"
    repeated_roots: bool = False  # set when the square-free part has lower degree (when known)


@dataclass(frozen=True)
class Budget:
    """Limits for Descartes subdivision.

    Boxes deeper than ``float_depth`` are handled with exact integer arithmetic, at
    most ``exact_depth`` further levels and only up to degree ``exact_degree``.
    """

    max_boxes: int = 200_000
    float_depth: int = 50
    exact_depth: int = 40
    exact_degree: int = 600
