import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kaclab.poly import PolynomialSample, sample_polynomial
from kaclab.roots import (Interval, RootSession, Unresolved, count_roots, descartes_count, double_root_witness,
                          pairing_defect, sturm_count)
from kaclab.roots.descartes import RootCounter
from kaclab.roots.interval import Budget

INTERVALS = ["[-2,2]", "[0,1]", "[-1,0]", "(0,1)", "(-inf,inf)", "[1,inf)", "(-inf,-1/2]", "[1/3,1/3]"]


def P(*c):
    return PolynomialSample.from_coefficients(c)


@pytest.mark.parametrize("spec", INTERVALS)
def test_known_roots(spec):
    # (x - 1)(x + 1)(3x - 1)(x - 2) roots -1, 1/3, 1, 2
    p = np.polynomial.polynomial.polyfromroots([1, -1, Fraction(1, 3), 2]) * 3
    s = P(*[int(round(c)) for c in p])
    I = Interval.parse(spec)
    expected = sum(I.contains(Fraction(r)) for r in (-1, Fraction(1, 3), 1, 2))
    assert sturm_count(s, I).count == expected
    assert descartes_count(s, I).count == expected


def test_repeated_root_counted_once():
    s = P(1, -6, 9)  # (3x - 1)^2
    for backend in (sturm_count, descartes_count):
        assert backend(s, Interval.closed(0, 1)).count == 1


def test_root_at_zero_and_endpoints():
    s = P(0, 0, -1, 0, 1)  # x^2 (x - 1)(x + 1)
    assert descartes_count(s, Interval.closed(-1, 1)).count == 3
    assert descartes_count(s, Interval.open(-1, 1)).count == 1
    assert sturm_count(s, Interval.open(-1, 1)).count == 1


def test_constant_and_zero():
    assert count_roots(P(3), Interval.real_line()).count == 0
    with pytest.raises(ValueError):
        count_roots(P(0, 0), Interval.real_line())


def test_interval_parse():
    I = Interval.parse("(-1/4, 1/4]")
    assert I.lo == Fraction(-1, 4) and not I.lo_closed and I.hi_closed
    assert not Interval.parse("[0,inf)").bounded
    with pytest.raises(ValueError):
        Interval.parse("[1,0]")


int_polys = st.lists(st.integers(-9, 9), min_size=2, max_size=30).filter(any)


@settings(max_examples=150, deadline=None)
@given(int_polys, st.sampled_from(INTERVALS))
def test_backends_agree(c, spec):
    s = P(*c)
    I = Interval.parse(spec)
    assert descartes_count(s, I).count == sturm_count(s, I).count


@pytest.mark.parametrize("law", ["gaussian", "rademacher", "three_point:q0=0.5"])
def test_high_degree_prefixes_agree(law):
    full = sample_polynomial(law, 512, 1, 0)
    I = Interval.closed(0, 1)
    assert count_roots(full, I).count >= 0
    for m in (20, 48, 64):
        s = full.prefix(m)
        assert descartes_count(s, I).count == sturm_count(s, I).count


def test_session_matches_one_shot():
    s = sample_polynomial("gaussian", 300, 4, 4)
    sess = RootSession(s)
    for spec in INTERVALS:
        I = Interval.parse(spec)
        assert sess.count(I).count == count_roots(s, I).count


def test_additivity_over_real_line():
    s = sample_polynomial("gaussian", 200, 2, 9)
    rc = RootCounter(s)
    whole = rc.count_distinct(Interval.real_line())
    parts = [Interval.parse(x) for x in ("(-inf,-1)", "[-1,0)", "[0,1]", "(1,inf)")]
    assert whole == sum(rc.count_distinct(I) for I in parts)


def test_budget_exhaustion_raises():
    s = P(1, -6, 9)
    with pytest.raises(Unresolved):
        descartes_count(s, Interval.closed(0, 1), Budget(max_boxes=1, float_depth=1, exact_depth=1))


def test_double_root_witness():
    s = P(1, -6, 9)  # double root at 1/3
    x = double_root_witness(s, Interval.closed(0, 1), B=3)
    assert x is not None and abs(x - 1 / 3) < 1e-2
    assert double_root_witness(P(1, 0, 1), Interval.closed(-1, 1), B=3) is None


def test_pairing_defect_zero_for_same():
    s = sample_polynomial("gaussian", 64, 1, 1)
    assert pairing_defect(s, s, Interval.closed(0, 1)) == 0
