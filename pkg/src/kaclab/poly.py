"""Realized Kac polynomials, certified evaluation and the variance profile."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _intpoly
from .laws import CoefficientLaw, DyadicCoefficient, parse_law, seeded_stream

__all__ = [
    "PolynomialSample",
    "CertifiedValue",
    "evaluate",
    "eval",
    "exact_value",
    "variance_profile",
    "variance_comparability",
    "reciprocal_transform",
    "tail_difference_bound",
    "sample_polynomial",
]

_U = 2.0**-53
_TINY = 2.0**-1074


def _gamma(m: int) -> float:
    return m * _U / (1.0 - m * _U)


@dataclass(frozen=True, eq=False)
class PolynomialSample:
    """p(x) = sum_j values[j] x**j with float64 coefficients read as exact dyadics.

    ``values`` is stored read-only; prefixes are views and share memory.
    """

    values: np.ndarray
    law_id: str = "explicit"
    master_seed: int = 0
    trial_index: int = 0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("need a non-empty 1-d coefficient array")
        if not np.all(np.isfinite(v)):
            raise ValueError("coefficients must be finite")
        if v.flags.writeable:
            v = v.copy()
            v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @classmethod
    def from_coefficients(cls, coeffs, law_id: str = "explicit") -> "PolynomialSample":
        """Build from numbers given constant term first (ints must fit a double exactly)."""
        vals = []
        for c in coeffs:
            f = float(c)
            if isinstance(c, (int, Fraction)) and Fraction(f) != Fraction(c):
                raise ValueError(f"coefficient {c!r} is not exactly representable")
            vals.append(f)
        return cls(np.array(vals), law_id)

    @property
    def degree(self) -> int:
        return self.values.size - 1

    @property
    def seed(self) -> tuple[int, int]:
        return self.master_seed, self.trial_index

    @property
    def coeffs(self) -> tuple[DyadicCoefficient, ...]:
        return tuple(DyadicCoefficient.from_float(float(c)) for c in self.values)

    def __len__(self):
        return self.values.size

    def __eq__(self, other):
        if not isinstance(other, PolynomialSample):
            return NotImplemented
        return (np.array_equal(self.values, other.values) and self.law_id == other.law_id
                and self.seed == other.seed)

    def __hash__(self):
        return hash((self.values.tobytes(), self.law_id, self.seed))

    def prefix(self, m: int) -> "PolynomialSample":
        """The partial sum p_m (coefficients 0..m)."""
        if not 0 <= m <= self.degree:
            raise ValueError(f"prefix degree {m} outside 0..{self.degree}")
        return PolynomialSample(self.values[: m + 1], self.law_id, self.master_seed, self.trial_index)

    def is_zero(self) -> bool:
        return not np.any(self.values)

    def integer_form(self) -> tuple[list[int], int]:
        """(a, s) with p(x) = 2**s * sum_j a[j] x**j, a integral and trailing zeros trimmed."""
        nums = []
        shift = 0
        for c in self.values:
            num, den = float(c).as_integer_ratio()
            e = 1 - den.bit_length()
            nums.append((num, e))
            if num:
                shift = min(shift, e)
        a = [num << (e - shift) if num else 0 for num, e in nums]
        return _intpoly.trim(a), shift

    def dumps(self) -> str:
        lines = [f"{self.degree} {self.law_id} {self.master_seed} {self.trial_index}"]
        lines += [f"{d.mantissa} {d.exponent}" for d in self.coeffs]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "PolynomialSample":
        rows = text.strip().splitlines()
        n, law_id, seed, trial = rows[0].split()
        vals = []
        for row in rows[1:]:
            m, e = row.split()
            vals.append(float(DyadicCoefficient(int(m), int(e))))
        if len(vals) != int(n) + 1:
            raise ValueError(f"expected {int(n) + 1} coefficient lines, got {len(vals)}")
        return cls(np.array(vals), law_id, int(seed), int(trial))


@dataclass(frozen=True)
class CertifiedValue:
    """A real number known to lie in [value - radius, value + radius]."""

    value: float
    radius: float
    exact: Fraction | None = None

    @property
    def sign(self) -> int | None:
        """+1, -1, 0 (only when known exactly) or None if undecided."""
        if self.exact is not None:
            return (self.exact > 0) - (self.exact < 0)
        if abs(self.value) > self.radius:
            return 1 if self.value > 0 else -1
        return None

    def contains(self, y) -> bool:
        if self.exact is not None:
            return Fraction(y) == self.exact
        return abs(Fraction(self.value) - Fraction(y)) <= Fraction(self.radius)


def _taylor_coefficient(c: np.ndarray, x: float, k: int) -> float:
    """p^(k)(x)/k! by k+1 passes of synthetic division (Horner)."""
    b = c.tolist()
    for _ in range(k):
        # quotient of b by (X - x); the remainder is dropped
        q = [0.0] * (len(b) - 1)
        acc = 0.0
        for i in range(len(b) - 1, 0, -1):
            acc = acc * x + b[i]
            q[i - 1] = acc
        b = q
    acc = 0.0
    for v in reversed(b):
        acc = acc * x + v
    return acc


def _horner(c: np.ndarray, x: float) -> float:
    acc = 0.0
    for v in c[::-1].tolist():
        acc = acc * x + v
    return acc


def exact_value(sample: PolynomialSample, x, k: int = 0) -> Fraction:
    """p^(k)(x) as an exact rational."""
    x = Fraction(x)
    a, s = sample.integer_form()
    n = len(a) - 1
    if n < k:
        return Fraction(0)
    # Taylor coefficient sum_j C(j, k) a_j x**(j-k), then times k!
    b = []
    binom = 1
    for j in range(k, n + 1):
        b.append(a[j] * binom)
        binom = binom * (j + 1) // (j + 1 - k)
    u, v = x.numerator, x.denominator
    val = Fraction(_intpoly.homogeneous_value(b, u, v), v ** (n - k)) * math.factorial(k)
    return val * 2**s if s >= 0 else val / 2**-s


def evaluate(sample: PolynomialSample, x, k: int = 0, exact: bool = False) -> CertifiedValue:
    """Certified value of the k-th derivative of ``sample`` at ``x``.

    The float path runs Horner / synthetic division and bounds the rounding error
    with the standard gamma_D estimate applied to the same recurrence on |c|,|x|.
    Points that are not doubles, overflow, or ``exact=True`` use rational arithmetic.
    """
    n = sample.degree
    if k < 0:
        raise ValueError("derivative order must be >= 0")
    if k > n:
        return CertifiedValue(0.0, 0.0, Fraction(0))
    xf = float(x)
    if exact or Fraction(xf) != Fraction(x):
        ev = exact_value(sample, x, k)
        return CertifiedValue(float(ev), 0.0, ev)
    c = sample.values
    if k == 0:
        val = _horner(c, xf)
        mag = _horner(np.abs(c), abs(xf))
        fact = 1.0
    else:
        val = _taylor_coefficient(c, xf, k)
        mag = _taylor_coefficient(np.abs(c), abs(xf), k)
        fact = float(math.factorial(k)) if k <= 170 else math.inf
    depth = (n + 1) * (k + 2) + 2
    if depth * _U >= 0.5:
        ev = exact_value(sample, x, k)
        return CertifiedValue(float(ev), 0.0, ev)
    g = _gamma(depth)
    radius = (g * mag / (1.0 - g) + depth * _TINY) * fact * (1.0 + 4 * _U)
    value = val * fact
    if not (math.isfinite(value) and math.isfinite(radius)):
        ev = exact_value(sample, x, k)
        return CertifiedValue(float(ev), 0.0, ev)
    return CertifiedValue(value, radius)


eval = evaluate  # noqa: A001  (module-level name mirrors the operation)


def variance_profile(n: int, x):
    """V_n(x) = sum_{j=0}^n x**(2j); accepts scalars or arrays."""
    if n < 0:
        raise ValueError("n must be >= 0")
    xa = np.asarray(x, dtype=np.float64)
    d = (1.0 - np.abs(xa)) * (1.0 + np.abs(xa))
    out = np.empty_like(xa)
    near = np.abs(d) < 1e-8
    far = ~near
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        df = d[far]
        out[far] = -np.expm1((n + 1) * np.log1p(-df)) / df
    if np.any(near):
        q = xa[near] ** 2
        j = np.arange(n + 1)
        out[near] = [math.fsum(np.power(qi, j)) for qi in np.atleast_1d(q)]
    return out if out.ndim else float(out)


def variance_comparability(n: int, x: float) -> tuple[float, float, float]:
    """(V_n(x), (1 - x + 1/n)**-1, ratio) for x in [0, 1]."""
    if n < 1 or not 0.0 <= x <= 1.0:
        raise ValueError("need n >= 1 and x in [0, 1]")
    v = variance_profile(n, x)
    comp = 1.0 / (1.0 - x + 1.0 / n)
    return v, comp, v / comp


def reciprocal_transform(sample: PolynomialSample) -> PolynomialSample:
    """x**n p(1/x): the coefficient array reversed."""
    return PolynomialSample(sample.values[::-1].copy(), sample.law_id, sample.master_seed, sample.trial_index)


def tail_difference_bound(n: int, m: int, x: float, cap: float) -> float:
    """Upper bound on |p_m(x) - p_n(x)| when every |xi_j| <= cap and |x| <= 1."""
    if m < n or cap <= 0 or abs(x) > 1:
        raise ValueError("need n <= m, cap > 0 and |x| <= 1")
    ax = abs(x)
    if ax == 1.0:
        return cap * (m - n)
    return cap * ax ** (n + 1) * (1.0 - ax ** (m - n)) / (1.0 - ax)


def sample_polynomial(law: CoefficientLaw | str, n: int, master_seed: int, trial_index: int) -> PolynomialSample:
    """Degree-n sample whose coefficients are the first n+1 draws of the trial stream."""
    if isinstance(law, str):
        law = parse_law(law)
    vals = law.sample(seeded_stream(master_seed, trial_index), n + 1)
    return PolynomialSample(vals, law.spec, int(master_seed), int(trial_index))
