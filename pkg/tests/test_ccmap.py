import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from affcluster.ccmap import cc_exponent, cc_object, cc_variable, check_denominator, module_object, shift_object
from affcluster.laurent import denominator_vector, numerator_constant_term, parse_laurent
from affcluster.quiver import atilde_nn, dtilde4, kronecker
from affcluster.rep import Representation, build_homogeneous, build_tube_module, direct_sum, simple
from affcluster.verify import D4_DELTA_TEXT
from oracles import evaluate, mutation_slices

D4 = dtilde4()


def test_kronecker_simple_projective():
    x = cc_variable(simple(kronecker(), 2))
    assert x == parse_laurent("x1^2*x2^-1 + x2^-1", 2)
    # same as the first mutation of the initial seed
    pt = (3, 5)
    assert evaluate(x, pt) == mutation_slices(kronecker(), 1, pt)[1][2]


def test_kronecker_delta():
    assert cc_variable(build_homogeneous(kronecker(), 1)) == parse_laurent(
        "x1*x2^-1 + x1^-1*x2 + x1^-1*x2^-1", 2)


def test_d4_delta_formula():
    assert cc_variable(build_homogeneous(D4, 1)) == parse_laurent(D4_DELTA_TEXT, 5)


def test_d4_second_level_and_tube_modules():
    xd = cc_variable(build_homogeneous(D4, 1))
    assert cc_variable(build_homogeneous(D4, 2)) == xd * xd - 1
    for tube in (1, 2, 3):
        for socle in (1, 2):
            assert cc_variable(build_tube_module(D4, tube, socle, 2)) == xd + 1


def test_exponent_rule():
    q = kronecker()
    # e = 0 gives x^(d R^T - d); for d = (1, 1) that is x1 x2^-1
    assert cc_exponent(q, (1, 1), (0, 0)) == (1, -1)
    assert cc_exponent(q, (1, 1), (1, 1)) == (-1, 1)


def test_decorated_objects():
    q = kronecker()
    o = shift_object(q, 1) + module_object(simple(q, 2), "S:2")
    assert o.extended_dims == (-1, 1) and o.well_formed()
    assert check_denominator(o)
    assert cc_object(o) == cc_variable(simple(q, 2)) * parse_laurent("x1", 2)
    bad = shift_object(q, 2) + module_object(simple(q, 2))
    assert not bad.well_formed()


@st.composite
def d4_thin(draw):
    # integer matrices whose behaviour does not depend on the prime
    dims = (draw(st.integers(0, 2)),) + tuple(draw(st.integers(0, 1)) for _ in range(4))
    vecs = [(1, 0), (0, 1), (1, 1)] if dims[0] == 2 else [(1,)] if dims[0] == 1 else [()]
    mats = []
    for v in range(1, 5):
        if dims[v] and dims[0]:
            mats.append(np.array(draw(st.sampled_from(vecs + [(0,) * dims[0]])), dtype=np.int64).reshape(dims[0], 1))
        else:
            mats.append(np.zeros((dims[0], dims[v]), dtype=np.int64))
    return Representation(D4, 101, dims, mats)


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(d4_thin(), d4_thin())
def test_multiplicative_on_direct_sums(a, b):
    if not any(a.dims) or not any(b.dims):
        return
    assert cc_variable(direct_sum(a, b)) == cc_variable(a) * cc_variable(b)


@pytest.mark.parametrize("q", [kronecker(), D4, atilde_nn(2)])
def test_simples_denominators_match_dims(q):
    for i in q.vertices:
        x = cc_variable(simple(q, i))
        assert denominator_vector(x) == simple(q, i).dims
        assert numerator_constant_term(x) == 1
