import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kaclab.experiments import (EXPERIMENTS, TrialRecord, configs_from_ini, configs_to_ini, default_config,
                                fit_decay_rate, mean_se, read_records, run_experiment, summarize, survival,
                                write_records)
from kaclab.experiments.records import format_records
from kaclab.experiments.trials import m_grid, near_zero_max
from kaclab.laws import ConfigurationError
from kaclab.poly import PolynomialSample, sample_polynomial


# -- config ------------------------------------------------------------------

def test_minimal_defaults():
    cfg = default_config("slln", law="gaussian", seed=42, nmax=4096)
    assert cfg.degrees == tuple(2**k for k in range(4, 13))
    assert cfg.p("target") == pytest.approx(1 / math.pi)


@pytest.mark.parametrize("kw", [{"trials": 0}, {"workers": 0}, {"degrees": (8, 4)}, {"law": "cauchy"},
                                {"bogus": 1}, {"w_grid": (0.5, 0.1)}])
def test_validation(kw):
    exp = "charfn" if "w_grid" in kw else "lacunary"
    with pytest.raises(ConfigurationError):
        default_config(exp, **kw)


def test_ini_round_trip_all():
    cfgs = [default_config(e, seed=9, workers=3) for e in EXPERIMENTS]
    assert configs_from_ini(configs_to_ini(cfgs)) == cfgs


@settings(max_examples=40)
@given(st.sampled_from([e for e in EXPERIMENTS if e != "oracle"]),
       st.sampled_from(["gaussian", "rademacher", "three_point:q0=0.25", "uniform_sym"]),
       st.integers(0, 2**64 - 1), st.integers(1, 10**6), st.integers(4, 5000))
def test_ini_round_trip_property(exp, law, seed, trials, nmax):
    cfg = default_config(exp, law=law, seed=seed, trials=trials, nmax=nmax)
    assert configs_from_ini(configs_to_ini([cfg])) == [cfg]


def test_ini_rejects_unknown_keys():
    text = configs_to_ini([default_config("tail0")])
    with pytest.raises(ConfigurationError, match="frobnicate"):
        configs_from_ini(text + "frobnicate = 3\n")
    with pytest.raises(ConfigurationError, match="nosuch"):
        configs_from_ini("[nosuch]\nlaw = gaussian\n")
    # the manifest section is ignored
    assert configs_from_ini(text + "\n[manifest]\nversion = 1\n") == [default_config("tail0")]


# -- records -----------------------------------------------------------------

def test_empty_records_header_only(tmp_path):
    write_records([], tmp_path / "r.csv")
    assert (tmp_path / "r.csv").read_text() == "experiment,law,n,trial,observable,value,aux1,aux2\n"


def test_records_sorted_and_round_trip(tmp_path):
    recs = [TrialRecord("x", "table:atoms=-1.0,1.0;probs=0.5,0.5", n, t, o, v, a)
            for n, t, o, v, a in [(8, 2, "b", 1, None), (4, 9, "a", 0.1 + 0.2, 3), (8, 0, "a", -1e-300, 2.5)]]
    write_records(recs, tmp_path / "r.csv")
    back = read_records(tmp_path / "r.csv")
    assert back == sorted(recs, key=TrialRecord.key)
    assert format_records(recs) == format_records(recs[::-1])


def test_duplicate_records_rejected():
    r = TrialRecord("x", "g", 1, 1, "a", 1)
    with pytest.raises(ValueError):
        format_records([r, r])


def test_large_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    vals = rng.standard_normal(200_000)
    recs = [TrialRecord("x", "gaussian", 16, i, "z", float(v)) for i, v in enumerate(vals)]
    write_records(recs, tmp_path / "r.csv")
    back = read_records(tmp_path / "r.csv")
    assert [r.value for r in back] == vals.tolist()


# -- summary statistics --------------------------------------------------------

def test_mean_se_hand_oracle():
    m, se = mean_se([1, 2, 3, 4, 10])
    assert m == 4.0
    assert se == pytest.approx(math.sqrt(12.5) / math.sqrt(5))
    assert mean_se([7, 7, 7])[1] == 0.0


def test_decay_rate_exact():
    t = np.arange(10)
    fit = fit_decay_rate(t, np.exp(-0.7 * t))
    assert abs(fit.rate - 0.7) < 1e-9 and fit.residual < 1e-9
    assert (fit.t_lo, fit.t_hi, fit.points) == (0.0, 9.0, 10)
    assert isinstance(fit_decay_rate([1], [0.5]), str)


def test_survival():
    t, p = survival([0, 0, 1, 3])
    assert t.tolist() == [0, 1, 2, 3]
    assert p.tolist() == [1.0, 0.5, 0.25, 0.25]


# -- trials ------------------------------------------------------------------

def test_m_grid():
    g = m_grid(512, 2, 32)
    assert g[0] == 512 and g[-1] == 1024 and len(g) == 34
    assert m_grid(10, 1, 4) == [10]


def test_near_zero_shortcut_and_counting_agree():
    # force the counting path by a tiny leading coefficient
    s = PolynomialSample.from_coefficients([0.0, 0.0, 0.01, -1.0, 1.0, 0.5])
    T, Td, k, shortcut = near_zero_max(s, 0.25)
    assert k == 2 and not shortcut
    from kaclab.roots import Interval, count_roots
    I = Interval.open(-0.25, 0.25)
    assert Td == max(count_roots(s.prefix(j), I).count for j in range(2, 6))
    s2 = PolynomialSample.from_coefficients([0.0, 2.0, 0.0, 1.0])
    assert near_zero_max(s2, 0.25) == (1, 1, 1, True)


def test_rademacher_vanishing_prefix_zero():
    cfg = default_config("tail0", law="rademacher", trials=200, nmax=64)
    recs = run_experiment(cfg)
    assert all(r.value == 0 for r in recs if r.observable == "k")
    assert summarize(recs, cfg).passed


def test_slln_additivity_and_prefix_sharing():
    cfg = default_config("slln", law="gaussian", trials=2, nmax=256, seed=5)
    recs = run_experiment(cfg)
    s = summarize(recs, cfg)
    assert next(v for v in s.verdicts if v.name == "additivity").passed


def test_pairing_zero_defect_at_m_equals_n():
    cfg = default_config("pairing", trials=3, nmax=256, grid=4)
    recs = run_experiment(cfg)
    assert all(r.value >= 0 for r in recs if r.observable == "defect")


def test_lacunary_huge_eps_never_exceeds():
    cfg = default_config("lacunary", trials=50, degrees=(16, 64), eps=100.0)
    s = summarize(run_experiment(cfg), cfg)
    assert all(r["exceed"] == 0.0 for r in s.rows)


def test_charfn_w0_is_one():
    cfg = default_config("charfn", trials=100, w_grid=(0.0, 0.5))
    s = summarize(run_experiment(cfg), cfg)
    assert s.rows[0]["abs_phi"] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("exp", ["tail0", "charfn", "lacunary", "oracle"])
def test_worker_count_does_not_change_records(exp):
    cfg = default_config(exp, trials=24, seed=77, nmax=32 if exp != "oracle" else 20)
    one = format_records(run_experiment(cfg))
    many = format_records(run_experiment(cfg.with_(workers=3)))
    assert one == many


def test_unresolved_trials_are_flagged(monkeypatch):
    from kaclab.experiments import runner, trials
    from kaclab.roots import Unresolved

    def boom(cfg, t):
        if t == 1:
            raise Unresolved("budget")
        return [TrialRecord(cfg.experiment, cfg.law, 8, t, "N", 1)]

    monkeypatch.setitem(trials.TRIALS, "variance", boom)
    cfg = default_config("variance", trials=3, degrees=(8,))
    recs = runner.run_experiment(cfg)
    assert [r.observable for r in recs] == ["N", "unresolved", "N"]
    s = summarize(recs, cfg)
    assert s.excluded == 1 and not s.passed
