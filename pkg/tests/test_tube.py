import pytest
from hypothesis import given, strategies as st

from affcluster.ccmap import cc_variable
from affcluster.quiver import atilde_nn, dtilde4
from affcluster.rep import build_tube_module
from affcluster.tube import (
    RANK3_EXPANSIONS, FormalSum, RegularLabel, TubeContext, TubeError, basis_change, chebyshev_product,
    delta_variable, multiply_case, normalize, rank3_expansion, tube_context, tube_multiply, tube_variable,
)


def test_labels_and_text():
    assert str(RegularLabel(0, 3)) == "M[3]" and str(RegularLabel(2, 1)) == "E[2;1]"
    fs = FormalSum.parse("E[1;3] + E[1;1] - 2*E[3;1]*E[2;2]")
    assert FormalSum.parse(fs.to_text()) == fs
    assert fs == FormalSum.parse("-2*E[2;2]*E[3;1] + E[1;1] + E[1;3]")  # order does not matter


def test_case_selection():
    assert multiply_case(3, 1, 1, 1, 0, 1) == "1.3"
    assert multiply_case(2, 2, 1, 1, 0, 1) == "1.1"
    assert multiply_case(2, 1, 1, 2, 1, 0) == "2.1"
    assert str(tube_multiply(2, 2, 1, 1, 0, 1)) == "E[2;2] + 1"
    assert str(tube_multiply(3, 1, 1, 2, 0, 1)) == "E[1;2] + 1"
    with pytest.raises(TubeError):
        tube_multiply(3, 1, 3, 1, 0, 2)  # left factor longer than the right one


def test_chebyshev_and_basis_change_text():
    assert str(chebyshev_product(3, 2)) == "M[5] + M[3] + M[1]"
    lhs, rhs = basis_change(2, 1, 2, 2)
    assert str(lhs) == "E[1;4]" and rhs == FormalSum.parse("E[2;4] + E[2;2] - E[1;2]")


@pytest.mark.parametrize("q,tube", [(dtilde4(), 1), (atilde_nn(3), 2)], ids=["d4", "ann:3"])
def test_recursion_agrees_with_cc(q, tube):
    ctx = tube_context(q, tube)
    for i in range(1, ctx.rank + 1):
        for n in range(1, 4):
            assert tube_variable(ctx, i, n) == cc_variable(build_tube_module(q, tube, i, n))


def test_rank3_worked_example():
    ctx = tube_context(atilde_nn(3), 1)
    prod = FormalSum.parse("E[1;1]*E[2;1]*E[3;1]")
    assert normalize(prod, 3).evaluate(ctx) == FormalSum.parse("E[1;3] + E[1;1] + E[3;1]").evaluate(ctx)


@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 1), st.integers(0, 2), st.integers(1, 5))
def test_rule_stays_within_the_tube(i, j, m, l, k):
    if k > 3 * m + l:
        return
    lengths = []
    for coef, labels in tube_multiply(3, i, k, j, m, l).items():
        assert coef == 1
        lengths.append(sum(x.length for x in labels))
    # total quasi-length is kept by the top term and drops in the others
    assert max(lengths) == k + 3 * m + l


def test_rank3_expansions_registered():
    assert len(RANK3_EXPANSIONS) == 9
    lhs, rhs = rank3_expansion("E1[3m+2]*E1[n]", 0, 4)
    assert str(lhs) == "E[1;2]*E[1;4]"
    with pytest.raises(TubeError):
        rank3_expansion("E1[3m+2]*E1[n]", 1, 4)


def test_delta_levels_chebyshev():
    q = dtilde4()
    x1, x2 = delta_variable(q, 1), delta_variable(q, 2)
    assert x2 == x1 * x1 - 1
    assert delta_variable(q, 0).terms == {(0,) * 5: 1}


def test_cap():
    ctx = TubeContext(1, (tube_context(dtilde4(), 1).simple_variables[0],), "x", cap=3)
    with pytest.raises(TubeError):
        tube_variable(ctx, 1, 4)
