import itertools

import pytest
from hypothesis import given, settings, strategies as st

from affcluster.basis import MissingBasisElement, build_table, expand, verify_monomial_triangularity
from affcluster.laurent import LaurentPoly, denominator_vector, numerator_constant_term
from affcluster.quiver import atilde_nn, dtilde4, kronecker, lt

KRON = build_table(kronecker(), (-2, -2), (3, 3))


def test_kronecker_box_is_complete():
    box = set(itertools.product(range(-2, 4), repeat=2))
    assert box <= set(KRON.dimvecs())
    for d in box:
        el = KRON[d]
        assert denominator_vector(el.value) == d
        assert numerator_constant_term(el.value) == 1


def test_kronecker_element_kinds():
    assert KRON[(1, 1)].kind == "delta-level"
    assert KRON[(1, 1)].description == ("delta:n=1",)
    assert KRON[(2, 2)].description == ("delta:n=2",)
    assert KRON[(0, 0)].value == LaurentPoly.one(2)
    assert KRON[(-1, 1)].kind == "transjective-monomial"


def test_small_boxes_complete():
    for q, hi in [(atilde_nn(2), (2, 2, 2, 2)), (dtilde4(), (2, 1, 1, 1, 1))]:
        lo = (-1,) * q.n
        table = build_table(q, lo, hi)
        for d in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
            assert d in table


def test_tube_alternatives_recorded():
    table = build_table(dtilde4(), (-1,) * 5, (2, 1, 1, 1, 1))
    labels = {lbl for lbl, _ in table.alternatives[(2, 1, 1, 1, 1)]}
    assert {"E:1,1,2", "E:2,1,2", "E:3,1,2"} <= labels


def test_missing_vector():
    with pytest.raises(MissingBasisElement):
        KRON[(9, 9)]
    with pytest.raises(MissingBasisElement):
        expand(LaurentPoly.monomial((-9, 0)), KRON)


vectors = st.sampled_from(sorted(KRON.elements))


@settings(max_examples=40, deadline=None)
@given(st.dictionaries(vectors, st.integers(-4, 4).filter(bool), min_size=1, max_size=4))
def test_round_trip(coeffs):
    p = sum((KRON[d].value * c for d, c in coeffs.items()), LaurentPoly.zero(2))
    assert expand(p, KRON).as_dict() == coeffs


def test_product_leads_with_one():
    exp = expand(KRON[(1, 0)].value * KRON[(0, 1)].value, KRON).as_dict()
    assert exp[(1, 1)] == 1
    assert all(d == (1, 1) or lt(d, (1, 1)) for d in exp)


def test_monomial_triangularity_example():
    table = build_table(kronecker(), (-8, -8), (2, 2))
    res = verify_monomial_triangularity(table, (2, 1))
    assert res["ok"], res["expansion"].to_text()
