"""Experiment configuration: defaults, validation and the INI text form."""
from __future__ import annotations

import configparser
import io
import math
from dataclasses import dataclass, field, replace

from ..laws import ConfigurationError, parse_law

__all__ = ["ExperimentConfig", "EXPERIMENTS", "default_config", "configs_from_ini", "configs_to_ini", "run_settings"]


def _pow2(lo: int, hi: int) -> tuple[int, ...]:
    return tuple(2**k for k in range(lo, hi + 1))


# experiment -> (law, trials, degrees, interval, params)
_DEFAULTS = {
    "oracle": ("integers", 10_000, (48,), "[-2,2]",
               {"coef_max": 9, "intervals": ("[-2,2]", "[0,1]", "[-1,0]")}),
    "slln": ("rademacher", 1, _pow2(4, 14), "[-1,1]",
             {"target": 1 / math.pi, "tol": 0.08}),
    "jensen_audit": ("rademacher", 1000, (64,), "(-1/4,1/4)",
                     {"r": 0.25, "R": 0.625, "c0": 0.5}),
    "lacunary": ("gaussian", 20_000, (16, 64, 256, 1024), "[0,1]",
                 {"eps": 0.5, "z_max": 3.0}),
    "smallball": ("gaussian", 10_000, (256,), "[0,1]",
                  {"x_grid": (), "lam_grid": (0.05, 0.1, 0.25, 0.5, 1.0, 2.0), "K": 5.0, "c": 0.1,
                   "C0": 1.0, "C1": 1.0, "z_max": 3.0}),
    "charfn": ("gaussian", 20_000, (256,), "[0,1]",
               {"x": 0.9, "w_grid": (0.1, 0.25, 0.5), "C1": 0.5, "C2": 1.0, "c0": 0.5, "z_max": 3.0}),
    "tail0": ("three_point:q0=0.5", 100_000, (128,), "(-1/4,1/4)",
              {"r": 0.25, "slope_lo": 0.7, "slope_hi": 1.3, "min_count": 50}),
    "near1": ("gaussian", 100, (256, 1024), "[0,1]",
              {"C": 8.0, "c": 2.0, "eps": 0.5, "Cp": 16.0, "grid": 32}),
    "pairing": ("gaussian", 1000, (512,), "[0,1]",
                {"c": 2.0, "C1": 2.0, "C0": 8.0, "grid": 32, "C2": 2, "p_min": 0.95,
                 "witness": 0, "B": 3.0, "A": 2.0}),
    "variance": ("gaussian", 300, _pow2(8, 11), "(-inf,inf)", {}),
}

EXPERIMENTS = tuple(_DEFAULTS)

# experiments whose degree list is a schedule (--nmax truncates it) rather than one degree
_SCHEDULED = {"slln", "lacunary", "near1", "variance"}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    law: str
    master_seed: int
    trials: int
    degrees: tuple
    interval: str
    params: dict = field(default_factory=dict)
    workers: int = 1

    def __post_init__(self):
        if self.experiment not in _DEFAULTS:
            raise ConfigurationError(f"experiment: unknown experiment {self.experiment!r}")
        if int(self.trials) < 1:
            raise ConfigurationError(f"trials: must be >= 1, got {self.trials}")
        if int(self.workers) < 1:
            raise ConfigurationError(f"workers: must be >= 1, got {self.workers}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise ConfigurationError("seed: must fit in 64 bits")
        degs = tuple(int(d) for d in self.degrees)
        if not degs or any(d < 1 for d in degs) or any(b <= a for a, b in zip(degs, degs[1:])):
            raise ConfigurationError(f"degrees: need a strictly increasing list of positive ints, got {degs}")
        object.__setattr__(self, "degrees", degs)
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "workers", int(self.workers))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        known = _DEFAULTS[self.experiment][4]
        for key, val in self.params.items():
            if key not in known:
                raise ConfigurationError(f"{key}: unknown parameter for {self.experiment}")
            if isinstance(val, tuple) and key.endswith("_grid"):
                if any(not math.isfinite(v) for v in val) or list(val) != sorted(val):
                    raise ConfigurationError(f"{key}: grid must be finite and sorted")
        if self.experiment != "oracle":
            parse_law(self.law)

    def p(self, name: str):
        return self.params[name]

    @property
    def n_max(self) -> int:
        return self.degrees[-1]

    def with_(self, **changes) -> "ExperimentConfig":
        return replace(self, **changes)


def _resolve_params(experiment: str, degrees, params: dict) -> dict:
    out = dict(_DEFAULTS[experiment][4])
    out.update(params)
    if experiment == "smallball" and not out["x_grid"]:
        # five points across [1 - C0/log n, 1 - C1 log n / n]
        n = degrees[-1]
        lo = 1.0 - out["C0"] / math.log(n)
        hi = 1.0 - out["C1"] * math.log(n) / n
        out["x_grid"] = tuple(round(float(v), 6) for v in
                              [lo + (hi - lo) * i / 4 for i in range(5)])
    return out


def default_config(experiment: str, *, law=None, seed=0, trials=None, nmax=None, workers=1,
                   degrees=None, interval=None, **params) -> ExperimentConfig:
    """Config with documented defaults; keyword arguments override them."""
    if experiment not in _DEFAULTS:
        raise ConfigurationError(f"experiment: unknown experiment {experiment!r}")
    d_law, d_trials, d_degrees, d_interval, _ = _DEFAULTS[experiment]
    degrees = tuple(degrees or d_degrees)
    if nmax is not None:
        nmax = int(nmax)
        if nmax < 1:
            raise ConfigurationError(f"nmax: must be >= 1, got {nmax}")
        if experiment in _SCHEDULED:
            # geometric schedule with the default start and ratio, up to nmax
            ratio = d_degrees[1] // d_degrees[0] if len(d_degrees) > 1 else 2
            sched = [d_degrees[0]]
            while sched[-1] * ratio <= nmax:
                sched.append(sched[-1] * ratio)
            degrees = tuple(d for d in sched if d <= nmax) or (nmax,)
        else:
            degrees = (nmax,)
    return ExperimentConfig(
        experiment=experiment,
        law=law or d_law,
        master_seed=seed,
        trials=trials if trials is not None else d_trials,
        degrees=degrees,
        interval=interval or d_interval,
        params=_resolve_params(experiment, degrees, params),
        workers=workers,
    )


# -- INI text form -----------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, tuple):
        return ", ".join(_fmt(x) for x in v)
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse_value(key: str, text: str, template):
    try:
        if key == "intervals":
            return tuple(s.strip() for s in text.split(";") if s.strip())
        if isinstance(template, tuple):
            return tuple(float(s) for s in text.split(",") if s.strip())
        if isinstance(template, bool):
            return text.strip().lower() in ("1", "true", "yes")
        if isinstance(template, int):
            return int(text)
        if isinstance(template, float):
            return float(text)
        return text.strip()
    except ValueError:
        raise ConfigurationError(f"{key}: cannot parse value {text!r}") from None


_BASE_KEYS = ("law", "trials", "degrees", "interval")


def configs_to_ini(configs: list[ExperimentConfig]) -> str:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    first = configs[0]
    cp["run"] = {"seed": str(first.master_seed), "workers": str(first.workers)}
    for cfg in configs:
        sec = {"law": cfg.law, "trials": str(cfg.trials), "degrees": _fmt(cfg.degrees), "interval": cfg.interval}
        for k in sorted(cfg.params):
            v = cfg.params[k]
            sec[k] = "; ".join(v) if k == "intervals" else _fmt(v)
        cp[cfg.experiment] = sec
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def _read(text: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser(interpolation=None)
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config: {exc}") from None
    return cp


def run_settings(text: str) -> tuple[int, int]:
    """(seed, workers) from the [run] section, defaulting to (0, 1)."""
    cp = _read(text)
    seed, workers = 0, 1
    if cp.has_section("run"):
        for key, val in cp["run"].items():
            if key == "seed":
                seed = _parse_value(key, val, 0)
            elif key == "workers":
                workers = _parse_value(key, val, 0)
            else:
                raise ConfigurationError(f"{key}: unknown key in [run]")
    return seed, workers


def configs_from_ini(text: str, ignore_sections=("manifest",)) -> list[ExperimentConfig]:
    """Parse INI text; unknown sections and keys are rejected by name."""
    cp = _read(text)
    seed, workers = run_settings(text)
    out = []
    for name in cp.sections():
        if name == "run" or name in ignore_sections:
            continue
        if name not in _DEFAULTS:
            raise ConfigurationError(f"[{name}]: unknown experiment section")
        known = _DEFAULTS[name][4]
        kw, params = {}, {}
        for key, val in cp[name].items():
            if key == "law" or key == "interval":
                kw[key] = val.strip()
            elif key == "trials":
                kw[key] = _parse_value(key, val, 0)
            elif key == "degrees":
                kw[key] = tuple(int(float(s)) for s in val.split(",") if s.strip())
            elif key in known:
                params[key] = _parse_value(key, val, known[key])
            else:
                raise ConfigurationError(f"{key}: unknown key in [{name}]")
        out.append(default_config(name, seed=seed, workers=workers, **kw, **params))
    return out
