from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from kaclab import _intpoly as ip

polys = st.lists(st.integers(-20, 20), min_size=2, max_size=12).filter(lambda p: p[-1] != 0)


def test_squarefree_removes_repeated_factor():
    # (3x - 1)^2
    sq = ip.squarefree([1, -6, 9])
    assert sq in ([-1, 3], [1, -3])


def test_divide_linear_and_multiplicity():
    p = [-2, 1, 1]  # (x - 1)(x + 2)
    mult, q = ip.multiplicity_at(p, 1, 1)
    assert mult == 1 and q == [2, 1]


@given(polys, st.integers(-3, 3))
def test_taylor_shift(p, k):
    q = ip.taylor_shift(p, k)
    for x in (-2, 0, 1, 3):
        assert ip.homogeneous_value(q, x, 1) == ip.homogeneous_value(p, x + k, 1)


@given(polys, st.fractions(min_value=-3, max_value=3, max_denominator=7))
def test_sign_at_matches_fraction_eval(p, x):
    v = sum(Fraction(c) * x**i for i, c in enumerate(p))
    assert ip.sign_at(p, x) == (v > 0) - (v < 0)


@settings(max_examples=50)
@given(polys, polys)
def test_gcd_divides(p, q):
    g = ip.gcd(p, q)
    if len(g) > 1:
        ip.polydiv_exact(p, g)
        ip.polydiv_exact(q, g)


def test_sturm_chain_counts_roots():
    # x^3 - x has roots -1, 0, 1
    chain = ip.signed_remainder_chain([0, -1, 0, 1])
    lo = [ip.homogeneous_value(c, -2, 1) for c in chain]
    hi = [ip.homogeneous_value(c, 2, 1) for c in chain]
    assert ip.sign_variations(lo) - ip.sign_variations(hi) == 3
