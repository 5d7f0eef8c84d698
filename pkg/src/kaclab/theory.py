"""Closed-form quantities and bound curves to compare simulations against.

Everything with factorials is evaluated in log space.  Densities and expected
counts are for standard Gaussian coefficients.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate
from scipy.special import erf, gammaln, logsumexp

from .laws import CoefficientLaw
from .roots.interval import Interval

__all__ = [
    "BoundCurve",
    "KacDensityTable",
    "kac_density",
    "expected_count",
    "xi_norm_sq",
    "charfn_bound",
    "charfn_admissible",
    "small_ball_bound",
    "small_ball_floor",
    "jensen_root_bound",
    "iterated_moment_exact",
    "iterated_moment_log",
    "iterated_moment_quadrature",
    "iterated_bound_curves",
    "iterated_bound_logs",
    "alpha_grid",
    "pseudo_hyperbolic",
    "near_zero_tail_bound",
    "reference_tail_slope",
    "maslova_variance_slope",
    "gaussian_small_ball",
    "gaussian_charfn",
]


# ---------------------------------------------------------------------------
# Kac density and expected counts


def _density_unit(n: int, x: np.ndarray) -> np.ndarray:
    """Density for |x| <= 1."""
    ax = np.abs(x)
    q = ax * ax
    s = n * (1.0 - q)
    out = np.empty_like(ax)
    # far from |x| = 1 the closed form is accurate
    far = s > 0.5
    if np.any(far):
        qf = q[far]
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            lead = 1.0 / (1.0 - qf) ** 2
            qn = np.exp(n * np.log(qf))
            tail = (n + 1) ** 2 * qn / (-np.expm1((n + 1) * np.log(qf))) ** 2
            tail = np.where(qf == 0.0, 0.0, tail)
        out[far] = np.sqrt(np.maximum(lead - tail, 0.0)) / math.pi
    near = ~far
    if np.any(near):
        j = np.arange(n + 1)
        for i in np.flatnonzero(near):
            # sqrt(A C - B^2)/A = std of j under weights x^(2j), divided by |x|
            lw = 2.0 * j * math.log(ax[i]) if ax[i] > 0 else np.where(j == 0, 0.0, -np.inf)
            w = np.exp(lw - lw.max())
            w /= w.sum()
            mean = float(w @ j)
            var = float(w @ (j - mean) ** 2)
            out[i] = math.sqrt(var) / (math.pi * ax[i])
    return out


def kac_density(n: int, x):
    """Expected density of real roots at x for degree-n Gaussian coefficients."""
    xa = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if n < 1:
        out = np.zeros_like(xa)
    else:
        out = np.empty_like(xa)
        inner = np.abs(xa) <= 1.0
        out[inner] = _density_unit(n, xa[inner])
        outer = ~inner
        if np.any(outer):
            y = 1.0 / xa[outer]
            out[outer] = _density_unit(n, y) * y * y
    return out if np.ndim(x) else float(out[0])


def _unit_integral(n: int, a: float, b: float, tol: float) -> tuple[float, float]:
    """Integral of the density over [a, b] within [0, 1], via x = 1 - exp(-u)."""
    if b <= a:
        return 0.0, 0.0
    ua = -math.log1p(-a)
    ub = math.inf if b >= 1.0 else -math.log1p(-b)

    def f(u):
        return kac_density(n, -math.expm1(-u)) * math.exp(-u)

    # split at the scale of the peak near 1 (u ~ log n) so quad sees it
    cut = [ua]
    for c in (0.5 * math.log(n + 1), math.log(n + 1), math.log(n + 1) + 3.0):
        if ua < c < ub:
            cut.append(c)
    cut.append(ub)
    total = err = 0.0
    for lo, hi in zip(cut[:-1], cut[1:]):
        val, e = integrate.quad(f, lo, hi, epsabs=tol / 10, epsrel=1e-10, limit=400)
        total += val
        err += e
    return total, err


def expected_count(n: int, interval: Interval | tuple = Interval.real_line(), tol: float = 1e-6) -> float:
    """Expected number of real roots in ``interval`` (Gaussian coefficients)."""
    if isinstance(interval, tuple):
        interval = Interval(*interval)
    if n < 1:
        return 0.0
    lo = -math.inf if isinstance(interval.lo, float) else float(interval.lo)
    hi = math.inf if isinstance(interval.hi, float) else float(interval.hi)
    total = err = 0.0
    # pieces on which |x| or 1/|x| runs through a subinterval of [0, 1]
    for a, b in ((-math.inf, -1.0), (-1.0, 0.0), (0.0, 1.0), (1.0, math.inf)):
        l, h = max(lo, a), min(hi, b)
        if l >= h:
            continue
        if a == 0.0:
            s, t = l, h
        elif a == -1.0:
            s, t = -h, -l
        elif b == -1.0:  # x -> -1/x
            s, t = (-1.0 / l if l > -math.inf else 0.0), -1.0 / h
        else:  # x -> 1/x
            s, t = (1.0 / h if h < math.inf else 0.0), 1.0 / l
        v, e = _unit_integral(n, s, t, tol)
        total += v
        err += e
    if err > tol:
        raise RuntimeError(f"quadrature reached only {err:.2e} (target {tol:.0e})")
    return total


@dataclass
class KacDensityTable:
    n: int
    xs: np.ndarray
    rho: np.ndarray = field(init=False)
    integrals: dict = field(default_factory=dict)

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=np.float64)
        self.rho = kac_density(self.n, self.xs)

    def add_interval(self, name: str, interval: Interval) -> float:
        self.integrals[name] = expected_count(self.n, interval)
        return self.integrals[name]


# ---------------------------------------------------------------------------
# Small-ball and characteristic-function side


def _dist_sq_to_integers(z):
    return (z - np.round(z)) ** 2


def xi_norm_sq(w: float, law: CoefficientLaw, with_error: bool = False):
    """E ||w (eta1 - eta2)||^2_{R/Z} for iid copies eta1, eta2 of the law.

    Finite-support laws are enumerated exactly.  Continuous laws use the Fourier
    series of the squared distance to Z, whose coefficients are the values of
    |phi|^2 at 2 pi k w; the truncation error is reported.
    """
    if w == 0:
        return (0.0, 0.0) if with_error else 0.0
    if law.finite_support:
        atoms, probs = law.support()
        diff = atoms[:, None] - atoms[None, :]
        pw = probs[:, None] * probs[None, :]
        val = float(np.sum(pw * _dist_sq_to_integers(w * diff)))
        return (val, 0.0) if with_error else val
    if law.kind == "gaussian":
        def phi2(t):
            return np.exp(-t * t)
    elif law.kind == "uniform_sym":
        def phi2(t):
            return np.sinc(math.sqrt(3.0) * t / math.pi) ** 2
    else:  # pragma: no cover - every built-in law is handled above
        raise ValueError(f"no characteristic function for {law.kind}")
    K = int(min(max(2000, 200 / abs(w)), 5_000_000))
    k = np.arange(1, K + 1, dtype=np.float64)
    terms = (-1.0) ** k / (math.pi**2 * k * k) * phi2(2.0 * math.pi * k * abs(w))
    val = 1.0 / 12.0 + math.fsum(terms)
    err = 1.0 / (math.pi**2 * K)
    if law.kind == "gaussian":
        err = min(err, float(phi2(2.0 * math.pi * (K + 1) * abs(w))) / (math.pi**2))
    return (val, err) if with_error else val


def charfn_bound(w, V: float, C1: float):
    """exp(-C1 min(V, w^2))."""
    if V <= 0:
        raise ValueError("V must be positive")
    w2 = np.square(w)
    return np.exp(-C1 * np.minimum(V, w2))


def charfn_admissible(w, n: int, x: float, C2: float, c0: float = 0.5):
    """|w| <= (1/C2) (1 - x + 1/n)^(-1/2) x^(-c0 n)."""
    with np.errstate(divide="ignore", over="ignore"):
        cap = (1.0 / C2) / math.sqrt(1.0 - x + 1.0 / n) * (math.inf if x == 0 else x ** (-c0 * n))
    return np.abs(w) <= cap


def small_ball_floor(n: int, V: float, c: float = 0.1) -> float:
    """Smallest lambda at which the K lambda bound is asserted: V^(-1/2) n^(-c)."""
    return V**-0.5 * float(n) ** -c


def small_ball_bound(lam: float, V: float, n: int, K: float = 5.0, c: float = 0.1) -> tuple[float, float, bool]:
    """(K lambda, floor, asserted) for P(|p_n(x)| <= lambda sqrt(V_n))."""
    floor = small_ball_floor(n, V, c)
    return K * lam, floor, lam >= floor


def gaussian_small_ball(lam):
    """P(|Z| <= lambda) for standard normal Z."""
    return erf(np.asarray(lam) / math.sqrt(2.0))


def gaussian_charfn(w):
    """|E exp(2 pi i w Z)| for standard normal Z."""
    return np.exp(-2.0 * math.pi**2 * np.square(w))


# ---------------------------------------------------------------------------
# Roots near zero


def jensen_root_bound(sample, r: float, R: float, c0: float) -> float:
    """Upper bound on max_{j<=n} N_j(-r, r) from Jensen's formula applied to p^(k).

    k is the first index with |xi_k| >= c0; without one the degree is returned.
    """
    if not 0 < r < R < 1 or c0 <= 0:
        raise ValueError("need 0 < r < R < 1 and c0 > 0")
    c = np.abs(sample.values)
    big = np.flatnonzero(c >= c0)
    if big.size == 0:
        return float(sample.degree)
    k = int(big[0])
    m = np.arange(k, c.size)
    cm = c[k:]
    nz = cm > 0
    logs = np.log(cm[nz]) + (m[nz] - k) * math.log(R) + gammaln(m[nz] + 1) - gammaln(m[nz] - k + 1)
    log_mk = float(logsumexp(logs))
    return k + (log_mk - float(gammaln(k + 1)) + math.log(1.0 / c0)) / math.log(R / r)


def near_zero_tail_bound(t, c2: float):
    return np.exp(-c2 * np.asarray(t, dtype=np.float64))


def reference_tail_slope(law: CoefficientLaw) -> float:
    """log(1/q0) with q0 the mass at zero; infinite for laws without an atom at 0."""
    if law.kind == "three_point":
        return math.log(1.0 / law.param("q0"))
    if law.kind == "table" and 0.0 in law.atoms:
        return math.log(1.0 / law.probs[law.atoms.index(0.0)])
    return math.inf


# ---------------------------------------------------------------------------
# Iterated integrals near 1


def iterated_moment_log(n: int, k: int, y: float) -> float:
    """log of sum_{j=0}^{n-k} ((j+k)!/j!)^2 (2j)!/(2j+k)! y^(2j+k)."""
    if not 1 <= k <= n or not 0.0 <= y <= 1.0:
        raise ValueError("need 1 <= k <= n and 0 <= y <= 1")
    if y == 0.0:
        return -math.inf
    j = np.arange(n - k + 1)
    terms = (2.0 * (gammaln(j + k + 1) - gammaln(j + 1)) + gammaln(2 * j + 1)
             - gammaln(2 * j + k + 1) + (2 * j + k) * math.log(y))
    return float(logsumexp(terms))


def iterated_moment_exact(n: int, k: int, y: float) -> float:
    return math.exp(iterated_moment_log(n, k, y))


def iterated_moment_quadrature(n: int, k: int, y: float) -> float:
    """The same quantity as a k-fold integral of E|p^(k)|^2 from 0 to y.

    Uses Cauchy's formula for repeated integration, one quad call.
    """
    j = np.arange(n - k + 1)
    w = np.exp(2.0 * (gammaln(j + k + 1) - gammaln(j + 1)))

    def second_moment(t):
        return float(w @ t ** (2 * j))

    val, _ = integrate.quad(lambda t: (y - t) ** (k - 1) * second_moment(t), 0.0, y,
                            epsabs=0.0, epsrel=1e-12, limit=200)
    return val / math.factorial(k - 1)


def iterated_bound_logs(n: int, k: int, x: float, y: float) -> tuple[float, float, float]:
    """Logs of (y^k (n/2)^(k+1), k! sqrt(k) (2(1-y))^-(k+1), n^(2k+1) (1-x)^k / k!)."""
    with np.errstate(divide="ignore"):
        b1 = k * np.log(y) + (k + 1) * math.log(n / 2.0)
        b2 = math.inf if y >= 1.0 else float(gammaln(k + 1)) + 0.5 * math.log(k) - (k + 1) * math.log(2.0 * (1.0 - y))
        dual = -math.inf if x >= 1.0 else (2 * k + 1) * math.log(n) + k * math.log(1.0 - x) - float(gammaln(k + 1))
    return float(b1), b2, dual


def iterated_bound_curves(n: int, k: int, x: float, y: float) -> tuple[float, float, float]:
    if not 1 <= k <= n or not 0.0 <= x <= y <= 1.0:
        raise ValueError("need 1 <= k <= n and 0 <= x <= y <= 1")
    return tuple(math.exp(v) if v < 709 else math.inf for v in iterated_bound_logs(n, k, x, y))


def alpha_grid(n: int, C: float, Cp: float, L: int) -> np.ndarray:
    """alpha_j = 1 - C (Cp C)^(-j/L) log(n)/n for j = 0..L."""
    if C <= 0 or Cp * C <= 1 or L < 1 or n < 3:
        raise ValueError("need C > 0, Cp > 1/C, L >= 1 and n >= 3")
    j = np.arange(L + 1)
    return 1.0 - C * (Cp * C) ** (-j / L) * math.log(n) / n


def pseudo_hyperbolic(x: float, y: float) -> float:
    den = 1.0 - x * y
    if den == 0:
        raise ValueError("pseudo-hyperbolic distance undefined for xy = 1")
    return abs(x - y) / abs(den)


def maslova_variance_slope() -> float:
    """(4/pi)(1 - 2/pi), reference slope of Var N_n(R) against log n."""
    return 4.0 / math.pi * (1.0 - 2.0 / math.pi)


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BoundCurve:
    """A named right-hand side with fixed parameters, evaluated on inputs."""

    name: str
    params: tuple
    evaluator: Callable

    def __call__(self, *inputs):
        return self.evaluator(*inputs, **dict(self.params))

    def to_csv(self, path, input_names: list[str], rows) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow([*input_names, "value"])
            for inp in rows:
                inp = tuple(np.atleast_1d(inp))
                w.writerow([*(repr(float(v)) for v in inp), repr(float(self(*inp)))])
