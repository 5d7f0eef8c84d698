import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kaclab.poly import (PolynomialSample, evaluate, exact_value, reciprocal_transform, sample_polynomial,
                         tail_difference_bound, variance_comparability, variance_profile)

coeffs = st.lists(st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False), min_size=1, max_size=40)
points = st.floats(-1.5, 1.5, allow_nan=False)


@settings(max_examples=200)
@given(coeffs, points, st.integers(0, 3))
def test_certified_value_contains_exact(c, x, k):
    s = PolynomialSample(np.array(c))
    v = evaluate(s, x, k)
    assert v.contains(exact_value(s, x, k))


def test_exact_fallback_for_rationals():
    s = PolynomialSample.from_coefficients([1, -3])  # 1 - 3x
    v = evaluate(s, Fraction(1, 3))
    assert v.exact == 0 and v.radius == 0.0 and v.sign == 0


def test_sign_is_none_when_undecided():
    s = PolynomialSample.from_coefficients([1.0, -1.0])
    assert evaluate(s, 1.0).sign is None  # float path cannot certify a zero
    assert evaluate(s, 1.0, exact=True).sign == 0
    assert evaluate(s, 0.5).sign == 1


def test_derivatives():
    s = PolynomialSample.from_coefficients([0, 0, 0, 1])  # x^3
    assert evaluate(s, 2.0, 1).contains(12)
    assert evaluate(s, 2.0, 2).contains(12)
    assert evaluate(s, 2.0, 3).contains(6)
    assert evaluate(s, 2.0, 4).value == 0


def test_prefix_shares_stream():
    full = sample_polynomial("gaussian", 100, 5, 2)
    small = sample_polynomial("gaussian", 10, 5, 2)
    assert full.prefix(10) == small
    assert np.shares_memory(full.prefix(10).values, full.values)


def test_values_read_only():
    s = sample_polynomial("rademacher", 5, 1, 1)
    with pytest.raises(ValueError):
        s.values[0] = 3.0


def test_dumps_round_trip():
    s = sample_polynomial("uniform_sym", 30, 123, 7)
    assert PolynomialSample.loads(s.dumps()) == s


def test_integer_form_is_exact():
    s = PolynomialSample.from_coefficients([0.5, 0.0, -0.25, 0.0])
    a, shift = s.integer_form()
    assert a == [2, 0, -1] and shift == -2


@pytest.mark.parametrize("x", [0.0, 0.3, 0.9, 1.0, -1.0, 1 - 1e-10, 2.0])
def test_variance_profile(x):
    n = 50
    assert variance_profile(n, x) == pytest.approx(math.fsum(x ** (2 * j) for j in range(n + 1)), rel=1e-9)


def test_variance_comparability_bounded():
    for n in (10, 100, 1000):
        for x in np.linspace(0, 1, 21):
            _, _, r = variance_comparability(n, float(x))
            assert 0.25 <= r <= 2.0


def test_reciprocal_and_tail_bound():
    s = PolynomialSample.from_coefficients([1, 2, 3])
    assert list(reciprocal_transform(s).values) == [3, 2, 1]
    assert tail_difference_bound(10, 10, 0.5, 1.0) == 0.0
    assert tail_difference_bound(1, 3, 1.0, 2.0) == 4.0
