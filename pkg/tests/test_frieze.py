import pytest

from affcluster.frieze import NotKnitted, knit
from affcluster.quiver import atilde_nn, dtilde4, kronecker
from affcluster.rep import preinjective, preprojective
from oracles import evaluate, mutation_slices

PRESETS = [kronecker(), dtilde4(), atilde_nn(2), atilde_nn(3)]


@pytest.mark.parametrize("q", PRESETS, ids=lambda q: q.preset)
def test_matches_mutation_oracle(q):
    pt = (2, 3, 5, 7, 11, 13)[: q.n]
    table = knit(q, 3, 3)
    ahead = mutation_slices(q, 3, pt)
    behind = mutation_slices(q.opposite(), 3, pt)
    for m in range(4):
        for j in q.vertices:
            assert evaluate(table.value((m, j)), pt) == ahead[m][j]
            assert evaluate(table.value((-m, j)), pt) == behind[m][j]


@pytest.mark.parametrize("q", PRESETS, ids=lambda q: q.preset)
def test_mesh_dims_and_denominators(q):
    table = knit(q, 3, 3)
    assert table.check_mesh() and table.check_denominators()
    for m in (1, 2, 3):
        for j in q.vertices:
            assert table.dims((m, j)) == preprojective(q, j, m - 1).dims
            assert table.dims((-m, j)) == preinjective(q, j, m - 1).dims


def test_kronecker_values_and_dump():
    table = knit(kronecker(), 1, 1)
    assert table.dump_lines() == [
        "-1 1 (1,0) :: x1^-1*x2^2 + x1^-1",
        "-1 2 (2,1) :: x2^-1 + x1^-2*x2^3 + 2*x1^-2*x2 + x1^-2*x2^-1",
        "0 1 (-1,0) :: x1",
        "0 2 (0,-1) :: x2",
        "1 1 (1,2) :: x1^3*x2^-2 + 2*x1*x2^-2 + x1^-1 + x1^-1*x2^-2",
        "1 2 (0,1) :: x1^2*x2^-1 + x2^-1",
    ]
    assert table.variable_by_dimvec((0, 1)) == table.value((1, 2))
    assert table.coord_of((2, 1)) == (-1, 2)
    assert table.module((0, 1)) is None


def test_outside_window():
    table = knit(dtilde4(), 1, 0)
    with pytest.raises(NotKnitted):
        table.value((2, 1))
    with pytest.raises(NotKnitted):
        table.variable_by_dimvec((9, 9, 9, 9, 9))
