import math

import numpy as np
import pytest
from scipy import integrate

from kaclab.laws import parse_law, seeded_stream
from kaclab.roots import Interval
from kaclab.theory import (BoundCurve, KacDensityTable, alpha_grid, charfn_admissible, charfn_bound, expected_count,
                           gaussian_charfn, gaussian_small_ball, iterated_bound_curves, iterated_moment_exact,
                           iterated_moment_quadrature, jensen_root_bound, kac_density, maslova_variance_slope,
                           near_zero_tail_bound, pseudo_hyperbolic, reference_tail_slope, small_ball_bound,
                           xi_norm_sq)
from kaclab.poly import PolynomialSample, sample_polynomial


def test_degree_one_expectation():
    assert expected_count(1, Interval.real_line()) == pytest.approx(1.0, abs=1e-6)
    assert expected_count(1, Interval.closed(-1, 1)) == pytest.approx(0.5, abs=1e-6)


def test_density_symmetries():
    for n in (5, 64, 1000):
        for x in (0.2, 0.7, 0.99):
            assert kac_density(n, -x) == pytest.approx(kac_density(n, x), rel=1e-12)
            assert kac_density(n, 1 / x) == pytest.approx(kac_density(n, x) * x * x, rel=1e-9)


def test_density_matches_kac_formula():
    # rho = sqrt(A C - B^2) / (pi A) with A = sum x^2j, B = sum j x^(2j-1), C = sum j^2 x^(2j-2)
    n, x = 20, 0.83
    j = np.arange(n + 1)
    A = np.sum(x ** (2 * j))
    B = np.sum(j * x ** (2 * j - 1))
    C = np.sum(j * j * x ** (2 * j - 2.0))
    assert kac_density(n, x) == pytest.approx(math.sqrt(A * C - B * B) / (math.pi * A), rel=1e-9)


def test_expected_count_additive_and_growing():
    n = 300
    total = expected_count(n)
    parts = sum(expected_count(n, Interval.parse(s)) for s in ("(-inf,-1]", "[-1,0]", "[0,1]", "[1,inf)"))
    assert parts == pytest.approx(total, abs=1e-6)
    assert expected_count(4096) > expected_count(1024)
    # Kac asymptotics: E N_n(R) = (2/pi) log n + 0.6257... + o(1)
    assert expected_count(4096) - 2 / math.pi * math.log(4096) == pytest.approx(0.6257358, abs=2e-3)


def test_density_table():
    t = KacDensityTable(10, np.linspace(-2, 2, 9))
    assert t.rho.shape == (9,)
    assert t.add_interval("all", Interval.real_line()) == pytest.approx(expected_count(10), rel=1e-9)


@pytest.mark.parametrize("spec", ["rademacher", "three_point:q0=0.5", "gaussian", "uniform_sym"])
def test_xi_norm_monte_carlo(spec):
    law = parse_law(spec)
    w = 0.3
    d = law.sample(seeded_stream(1, 0), 400_000) - law.sample(seeded_stream(1, 1), 400_000)
    z = w * d
    mc = np.mean((z - np.round(z)) ** 2)
    val, err = xi_norm_sq(w, law, with_error=True)
    assert abs(val - mc) < 5e-3 + err


def test_xi_norm_rademacher_closed_form():
    # eta1 - eta2 in {0, +-2}: value = (1/2) ||2w||^2
    assert xi_norm_sq(0.1, parse_law("rademacher")) == pytest.approx(0.5 * 0.2**2)
    assert xi_norm_sq(0.5, parse_law("rademacher")) == pytest.approx(0.0, abs=1e-15)


def test_charfn_helpers():
    assert charfn_bound(0.0, 5.0, 1.0) == 1.0
    assert charfn_bound(10.0, 2.0, 1.0) == pytest.approx(math.exp(-2.0))
    assert bool(charfn_admissible(1.0, 256, 0.9, 1.0))
    assert gaussian_charfn(0.5) == pytest.approx(0.00719, abs=1e-5)


def test_small_ball_helpers():
    assert gaussian_small_ball(1.0) == pytest.approx(0.682689, abs=1e-6)
    kl, floor, asserted = small_ball_bound(0.5, 100.0, 256, K=5)
    assert kl == 2.5 and asserted and floor < 0.1


def test_jensen_bound_dominates_prefix_counts():
    from kaclab.experiments.trials import near_zero_max

    for t in range(30):
        s = sample_polynomial("gaussian", 40, 3, t)
        T, _, _, _ = near_zero_max(s, 0.25)
        assert T <= jensen_root_bound(s, 0.25, 0.625, 0.5)


def test_near_zero_tail_and_reference():
    assert near_zero_tail_bound(0, 1.0) == 1.0
    assert reference_tail_slope(parse_law("three_point:q0=0.5")) == pytest.approx(math.log(2))
    assert reference_tail_slope(parse_law("rademacher")) == math.inf


def test_iterated_moment_quadrature_agrees():
    for k in (1, 3, 7, 12):
        for y in (0.5, 0.9, 1 - math.log(12) / 12):
            ex = iterated_moment_exact(12, k, y)
            assert iterated_moment_quadrature(12, k, y) == pytest.approx(ex, rel=1e-6)


def test_iterated_nested_quadrature_small_case():
    # k = 2 by literal nested integration of E|p''|^2
    n, k, y = 5, 2, 0.7
    j = np.arange(n - k + 1)
    w = np.array([(math.factorial(i + k) / math.factorial(i)) ** 2 for i in j])

    def m2(t):
        return float(w @ t ** (2 * j))

    inner = lambda s: integrate.quad(m2, 0, s)[0]  # noqa: E731
    val = integrate.quad(inner, 0, y)[0]
    assert val == pytest.approx(iterated_moment_exact(n, k, y), rel=1e-8)


def test_iterated_bound_n1():
    b1, b2, _ = iterated_bound_curves(1, 1, 1.0, 1.0)
    assert b1 == pytest.approx(0.25) and b2 == math.inf
    assert iterated_moment_exact(1, 1, 1.0) == pytest.approx(1.0)


def test_alpha_grid_and_distance():
    a = alpha_grid(1000, 8, 16, 8)
    assert a[0] == pytest.approx(1 - 8 * math.log(1000) / 1000)
    assert np.all(np.diff(a) > 0) and a[-1] < 1
    assert pseudo_hyperbolic(0.5, 0.5) == 0
    assert pseudo_hyperbolic(0.0, 0.3) == pytest.approx(0.3)


def test_maslova_value():
    assert maslova_variance_slope() == pytest.approx(4 / math.pi * (1 - 2 / math.pi), rel=1e-15)
    assert abs(maslova_variance_slope() - 0.46267) < 1e-5


def test_bound_curve_csv(tmp_path):
    c = BoundCurve("tail", (("c2", 0.5),), near_zero_tail_bound)
    c.to_csv(tmp_path / "t.csv", ["t"], [0.0, 2.0])
    lines = (tmp_path / "t.csv").read_text().splitlines()
    assert lines[0] == "t,value" and lines[2] == f"2.0,{math.exp(-1.0)!r}"
