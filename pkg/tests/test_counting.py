import itertools

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from affcluster.counting import BudgetExceeded, count_points
from affcluster.quiver import atilde_nn, dtilde4, kronecker
from affcluster.rep import Representation, build_homogeneous
from oracles import brute_count


@st.composite
def small_reps(draw, quivers=(kronecker(), dtilde4(), atilde_nn(2))):
    q = draw(st.sampled_from(quivers))
    p = draw(st.sampled_from([2, 3]))
    dims = tuple(draw(st.integers(0, 2)) for _ in q.vertices)
    mats = []
    for s, t in q.arrows:
        n = dims[s - 1] * dims[t - 1]
        flat = draw(st.lists(st.integers(0, p - 1), min_size=n, max_size=n))
        mats.append(np.array(flat, dtype=np.int64).reshape(dims[t - 1], dims[s - 1]))
    return Representation(q, p, dims, mats)


def _subvectors(rep):
    return itertools.product(*(range(d + 1) for d in rep.dims))


@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_reps())
def test_engines_match_brute_force(rep):
    for e in _subvectors(rep):
        want = brute_count(rep, e)
        assert count_points(rep, e, engine="batch") == want
        if all(not any(t == v for _, t in rep.quiver.arrows) for v in rep.quiver.sources):
            assert count_points(rep, e, engine="dfs") == want


@st.composite
def invertible(draw, d, p):
    while True:
        flat = draw(st.lists(st.integers(0, p - 1), min_size=d * d, max_size=d * d))
        g = np.array(flat, dtype=np.int64).reshape(d, d)
        if d == 0 or round(np.linalg.det(g)) % p:
            return g


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(small_reps(), st.data())
def test_counts_invariant_under_base_change(rep, data):
    gs = [data.draw(invertible(d, rep.p)) for d in rep.dims]
    other = rep.conjugate(gs)
    for e in _subvectors(rep):
        assert count_points(rep, e) == count_points(other, e)


def test_budget_is_enforced():
    rep = build_homogeneous(dtilde4(), 2).instantiate(101)
    with pytest.raises(BudgetExceeded):
        count_points(rep, (2, 1, 1, 1, 1), budget=1000)


def test_kronecker_regular_simple_lines():
    # subrepresentations of M(lambda) = (F_p, F_p; 1, lambda)
    rep = build_homogeneous(kronecker(), 1).instantiate(7, 3)
    assert [count_points(rep, e) for e in [(0, 0), (1, 0), (0, 1), (1, 1)]] == [1, 0, 1, 1]
