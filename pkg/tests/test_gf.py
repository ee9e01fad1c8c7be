import numpy as np
from hypothesis import given, settings, strategies as st

from affcluster import gf
from oracles import all_subspaces


def test_gaussian_binomial_matches_enumeration():
    for p in (2, 3):
        for d in range(4):
            subs = all_subspaces(d, p)
            for k in range(d + 1):
                assert gf.gaussian_binomial(d, k, p) == len(subs[k])
                assert len(gf.subspaces(d, k, p)) == len(subs[k])


def test_rref_and_nullspace():
    m = np.array([[1, 2, 0], [2, 4, 1]])
    r, piv = gf.rref(m, 5)
    assert list(piv) == [0, 2]
    ns = gf.nullspace(m, 5)
    assert ns.shape[1] == 1
    assert not np.any(m @ ns % 5)


@settings(max_examples=50)
@given(st.integers(1, 4), st.integers(1, 4), st.sampled_from([2, 3, 5, 7]), st.data())
def test_rank_nullity(rows, cols, p, data):
    flat = data.draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
    m = np.array(flat).reshape(rows, cols)
    assert gf.rank(m, p) + gf.nullspace(m, p).shape[1] == cols
    assert gf.rank(m, p) == gf.rank(m.T, p)
