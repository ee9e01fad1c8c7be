import pytest
from hypothesis import given, settings, strategies as st

from affcluster.laurent import (
    InexactDivision, LaurentPoly, RankMismatch, ZeroPolynomial, denominator_vector, lp_div_exact,
    numerator_constant_term, parse_laurent,
)

RANK = 3
exps = st.tuples(*[st.integers(-3, 3)] * RANK)
polys = st.dictionaries(exps, st.integers(-5, 5), max_size=6).map(lambda d: LaurentPoly(RANK, d))


def test_zero_coefficients_dropped():
    p = LaurentPoly(2, {(1, 0): 0, (0, 1): 2})
    assert p.terms == {(0, 1): 2}


def test_text_round_trip_examples():
    for text in ["x1^-2*x2 + 3", "-x1 - 2*x2^-1", "0", "7"]:
        p = parse_laurent(text, 2)
        assert parse_laurent(str(p), 2) == p


def test_negative_exponents_parse():
    p = parse_laurent("x1^-1*x2^2 + x1^-1", 2)
    assert p.coefficient((-1, 2)) == 1 and p.coefficient((-1, 0)) == 1


def test_rank_mismatch():
    with pytest.raises(RankMismatch):
        LaurentPoly.var(2, 1) + LaurentPoly.var(3, 1)


def test_exact_division():
    x, y = LaurentPoly.var(2, 1), LaurentPoly.var(2, 2)
    num = x * x + 1
    assert lp_div_exact(num * y, y) == num
    with pytest.raises(InexactDivision):
        lp_div_exact(x * x + 1, x + 1)


def test_denominator_and_constant_term():
    p = parse_laurent("x1^2*x2^-1 + x2^-1", 2)
    assert denominator_vector(p) == (0, 1)
    assert numerator_constant_term(p) == 1
    with pytest.raises(ZeroPolynomial):
        denominator_vector(LaurentPoly.zero(2))


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == LaurentPoly.zero(RANK)


@given(polys, polys)
@settings(max_examples=60)
def test_division_undoes_multiplication(a, b):
    if b.is_zero():
        return
    assert lp_div_exact(a * b, b) == a


@given(polys)
def test_text_and_json_round_trip(p):
    assert parse_laurent(p.to_text(), RANK) == p
    assert LaurentPoly.from_json(p.to_json()) == p


@given(polys, exps)
def test_monomial_shift_moves_denominator(p, e):
    if p.is_zero():
        return
    shifted = p * LaurentPoly.monomial(e)
    assert denominator_vector(shifted) == tuple(d - x for d, x in zip(denominator_vector(p), e))
