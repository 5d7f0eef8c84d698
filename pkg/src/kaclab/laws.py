"""Coefficient distributions and reproducible random streams.

Every law has zero mean and unit variance.  Draws are 64-bit floats and are
treated as exact dyadic rationals downstream, so a sampled polynomial is a
concrete object whose real roots can be counted exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

__all__ = [
    "ConfigurationError",
    "CoefficientLaw",
    "DyadicCoefficient",
    "parse_law",
    "gaussian",
    "rademacher",
    "uniform_sym",
    "three_point",
    "table",
    "sample_coefficient",
    "sample_coefficients",
    "derive_small_ball_pair",
    "seeded_stream",
]

KINDS = ("gaussian", "rademacher", "uniform_sym", "three_point", "table")

# P(|xi| < c0) <= q0 must use q0 in (0, 1); laws with no mass near 0 report this.
_TINY_Q0 = 1e-6


class ConfigurationError(ValueError):
    """Invalid law or experiment parameters."""


@dataclass(frozen=True)
class DyadicCoefficient:
    """Exact value ``mantissa * 2**exponent`` with an odd mantissa (or zero)."""

    mantissa: int
    exponent: int

    def __post_init__(self):
        m, e = self.mantissa, self.exponent
        if m == 0:
            object.__setattr__(self, "exponent", 0)
            return
        tz = (m & -m).bit_length() - 1
        if tz:
            object.__setattr__(self, "mantissa", m >> tz)
            object.__setattr__(self, "exponent", e + tz)

    @classmethod
    def from_float(cls, value: float) -> "DyadicCoefficient":
        if not math.isfinite(value):
            raise ValueError(f"non-finite coefficient {value!r}")
        num, den = float(value).as_integer_ratio()
        return cls(num, 1 - den.bit_length())

    def __float__(self) -> float:
        return math.ldexp(self.mantissa, self.exponent)

    def as_fraction(self) -> Fraction:
        if self.exponent >= 0:
            return Fraction(self.mantissa << self.exponent)
        return Fraction(self.mantissa, 1 << -self.exponent)


@dataclass(frozen=True)
class CoefficientLaw:
    kind: str
    params: tuple = ()
    mean: float = 0.0
    variance: float = 1.0
    moment_bound: float = 1.0  # declared bound on E|xi|^(2+epsilon)
    epsilon: float = 1.0
    small_ball_pair: tuple | None = None
    # table laws only: support points and their probabilities
    atoms: tuple = field(default=(), repr=False)
    probs: tuple = field(default=(), repr=False)

    def param(self, name: str) -> float:
        return dict(self.params)[name]

    @property
    def spec(self) -> str:
        """The specification string that parses back to this law."""
        if self.kind == "three_point":
            return f"three_point:q0={self.param('q0')!r}"
        if self.kind == "table":
            atoms = ",".join(repr(a) for a in self.atoms)
            probs = ",".join(repr(p) for p in self.probs)
            return f"table:atoms={atoms};probs={probs}"
        return self.kind

    @property
    def finite_support(self) -> bool:
        return self.kind in ("rademacher", "three_point", "table")

    def support(self) -> tuple[np.ndarray, np.ndarray]:
        """Atoms and probabilities (as sampled floats) of a finite-support law."""
        if self.kind == "rademacher":
            return np.array([-1.0, 1.0]), np.array([0.5, 0.5])
        if self.kind == "three_point":
            q0, a = self.param("q0"), self.param("a")
            return np.array([-a, 0.0, a]), np.array([(1 - q0) / 2, q0, (1 - q0) / 2])
        if self.kind == "table":
            return np.array(self.atoms), np.array(self.probs)
        raise ValueError(f"{self.kind} law has no finite support")

    def sample(self, stream: np.random.Generator, size: int) -> np.ndarray:
        """Draw ``size`` iid coefficients; the i-th draw never depends on ``size``."""
        if self.kind == "gaussian":
            return stream.standard_normal(size)
        u = stream.random(size)
        if self.kind == "rademacher":
            return np.where(u < 0.5, -1.0, 1.0)
        if self.kind == "uniform_sym":
            return math.sqrt(3.0) * (2.0 * u - 1.0)
        if self.kind == "three_point":
            q0, a = self.param("q0"), self.param("a")
            out = np.where(u < q0 + (1 - q0) / 2, -a, a)
            out[u < q0] = 0.0
            return out
        atoms, probs = self.support()
        idx = np.searchsorted(np.cumsum(probs)[:-1], u, side="right")
        return atoms[idx]


def _validate_unit(mean, var, what):
    if abs(mean) > 1e-12 or abs(var - 1.0) > 1e-12:
        raise ConfigurationError(f"{what}: needs mean 0 and variance 1, got mean={mean}, variance={var}")


def gaussian() -> CoefficientLaw:
    return CoefficientLaw("gaussian", moment_bound=2.0 * math.sqrt(2.0 / math.pi),
                          small_ball_pair=(0.5, math.erf(0.5 / math.sqrt(2.0))))


def rademacher() -> CoefficientLaw:
    return CoefficientLaw("rademacher", moment_bound=1.0, small_ball_pair=(0.5, _TINY_Q0))


def uniform_sym() -> CoefficientLaw:
    return CoefficientLaw("uniform_sym", moment_bound=3.0 * math.sqrt(3.0) / 4.0,
                          small_ball_pair=(0.5, 0.5 / math.sqrt(3.0)))


def three_point(q0: float) -> CoefficientLaw:
    q0 = float(q0)
    if not 0.0 < q0 < 1.0:
        raise ConfigurationError(f"three_point: q0 must lie in (0, 1), got {q0}")
    a = math.sqrt(1.0 / (1.0 - q0))
    return CoefficientLaw("three_point", params=(("q0", q0), ("a", a)),
                          moment_bound=(1.0 - q0) * a**3, small_ball_pair=(1.0, q0))


def table(atoms, probs) -> CoefficientLaw:
    atoms = tuple(float(a) for a in atoms)
    probs = tuple(float(p) for p in probs)
    if len(atoms) != len(probs) or len(atoms) < 2:
        raise ConfigurationError("table: atoms and probs must have equal length >= 2")
    if any(p <= 0 for p in probs) or abs(math.fsum(probs) - 1.0) > 1e-12:
        raise ConfigurationError("table: probabilities must be positive and sum to 1")
    mean = math.fsum(a * p for a, p in zip(atoms, probs))
    var = math.fsum(a * a * p for a, p in zip(atoms, probs)) - mean**2
    _validate_unit(mean, var, "table")
    nonzero = [abs(a) for a in atoms if a != 0.0]
    q_zero = math.fsum(p for a, p in zip(atoms, probs) if a == 0.0)
    pair = (min(nonzero) / 2.0, max(q_zero, _TINY_Q0))
    m3 = math.fsum(abs(a) ** 3 * p for a, p in zip(atoms, probs))
    return CoefficientLaw("table", moment_bound=m3, small_ball_pair=pair, atoms=atoms, probs=probs)


def _parse_kv(body: str, sep: str) -> dict[str, str]:
    out = {}
    for part in filter(None, (s.strip() for s in body.split(sep))):
        key, eq, val = part.partition("=")
        if not eq:
            raise ConfigurationError(f"malformed law parameter {part!r}")
        out[key.strip()] = val.strip()
    return out


def parse_law(spec: str) -> CoefficientLaw:
    """Parse ``gaussian``, ``rademacher``, ``uniform_sym``, ``three_point:q0=<float>``
    or ``table:atoms=a,b,..;probs=p,q,..``."""
    kind, _, body = spec.strip().partition(":")
    if kind in ("gaussian", "rademacher", "uniform_sym"):
        if body:
            raise ConfigurationError(f"law {kind} takes no parameters")
        return {"gaussian": gaussian, "rademacher": rademacher, "uniform_sym": uniform_sym}[kind]()
    if kind == "three_point":
        kv = _parse_kv(body, ",")
        if set(kv) != {"q0"}:
            raise ConfigurationError("three_point law needs exactly one parameter q0")
        try:
            return three_point(float(kv["q0"]))
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
    if kind == "table":
        kv = _parse_kv(body, ";")
        if set(kv) != {"atoms", "probs"}:
            raise ConfigurationError("table law needs atoms=... and probs=...")
        try:
            return table([float(x) for x in kv["atoms"].split(",")],
                         [float(x) for x in kv["probs"].split(",")])
        except ValueError as exc:
            raise ConfigurationError(str(exc)) from None
    raise ConfigurationError(f"unknown law {spec!r}; expected one of {', '.join(KINDS)}")


def seeded_stream(master_seed: int, trial_index: int) -> np.random.Generator:
    """Counter-based stream for one trial.

    Philox keyed by the master seed; the trial index selects a disjoint block of
    the 256-bit counter, so streams never overlap and do not depend on the order
    in which trials are executed.
    """
    if not 0 <= trial_index < 2**64:
        raise ValueError("trial_index must fit in 64 bits")
    key = int(master_seed) % 2**64
    return np.random.Generator(np.random.Philox(key=key, counter=[0, 0, int(trial_index), 0]))


def sample_coefficients(law: CoefficientLaw, stream: np.random.Generator, size: int) -> np.ndarray:
    return law.sample(stream, size)


def sample_coefficient(law: CoefficientLaw, stream: np.random.Generator) -> DyadicCoefficient:
    return DyadicCoefficient.from_float(float(law.sample(stream, 1)[0]))


def derive_small_ball_pair(law: CoefficientLaw) -> tuple[float, float]:
    """A pair (c0, q0) with P(|xi| < c0) <= q0, exact for every built-in law."""
    if law.small_ball_pair is not None:
        return law.small_ball_pair
    # no declared pair: Monte Carlo estimate padded by 5 standard errors
    draws = np.abs(law.sample(seeded_stream(0x5B, 0), 10**6))
    c0 = 0.5 * float(np.median(draws))
    p = float(np.mean(draws < c0))
    q0 = min(p + 5.0 * math.sqrt(max(p * (1 - p), 1e-12) / draws.size), 1.0 - 1e-9)
    return c0, max(q0, _TINY_Q0)
