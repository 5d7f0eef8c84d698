import math
from fractions import Fraction

import numpy as np
import pytest

from kaclab.laws import (ConfigurationError, DyadicCoefficient, derive_small_ball_pair, parse_law, sample_coefficients,
                         seeded_stream, table, three_point)


def test_unit_moments(law):
    x = sample_coefficients(law, seeded_stream(3, 0), 200_000)
    assert abs(x.mean()) < 0.02
    assert abs(x.var() - 1.0) < 0.02


def test_spec_round_trip(law):
    assert parse_law(law.spec) == law


def test_stream_prefix_independent_of_size(law):
    a = law.sample(seeded_stream(11, 5), 10)
    b = law.sample(seeded_stream(11, 5), 1000)
    np.testing.assert_array_equal(a, b[:10])


def test_streams_differ_across_trials():
    a = seeded_stream(1, 0).standard_normal(8)
    b = seeded_stream(1, 1).standard_normal(8)
    assert not np.array_equal(a, b)


def test_three_point_atoms():
    law = three_point(0.5)
    atoms, probs = law.support()
    np.testing.assert_allclose(atoms, [-math.sqrt(2), 0, math.sqrt(2)])
    np.testing.assert_allclose(probs, [0.25, 0.5, 0.25])


def test_table_law_validates():
    law = table([-1, 1], [0.5, 0.5])
    assert parse_law(law.spec) == law
    with pytest.raises(ConfigurationError):
        table([-1, 0, 1], [0.2, 0.6, 0.2])  # variance 0.4
    with pytest.raises(ConfigurationError):
        table([-1, 1], [0.3, 0.3])


@pytest.mark.parametrize("bad", ["cauchy", "three_point:q0=1.5", "gaussian:s=2", "three_point:q=0.5"])
def test_bad_specs(bad):
    with pytest.raises(ConfigurationError):
        parse_law(bad)


def test_dyadic_exact():
    d = DyadicCoefficient.from_float(0.375)
    assert d.as_fraction() == Fraction(3, 8)
    assert float(d) == 0.375
    assert DyadicCoefficient(12, 0) == DyadicCoefficient(3, 2)


def test_small_ball_pair_holds(law):
    c0, q0 = derive_small_ball_pair(law)
    x = np.abs(law.sample(seeded_stream(9, 0), 100_000))
    assert np.mean(x < c0) <= q0 + 0.01
