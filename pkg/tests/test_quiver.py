import pytest

from affcluster.quiver import QuiverError, Quiver, atilde_nn, build_preset, dtilde4, kronecker, leq, lt


def test_presets():
    assert kronecker().arrows == ((1, 2), (1, 2))
    assert dtilde4().sinks == (1,)
    q = atilde_nn(2)
    assert q.n == 4 and q.sources == (1, 3) and q.is_bipartite()
    assert build_preset("ann:3").n == 6
    with pytest.raises(QuiverError):
        build_preset("e6")
    with pytest.raises(QuiverError):
        Quiver(2, ((1, 2), (2, 1)))


@pytest.mark.parametrize("tag,delta", [("kronecker", (1, 1)), ("d4", (2, 1, 1, 1, 1)),
                                       ("ann:2", (1, 1, 1, 1)), ("ann:3", (1,) * 6)])
def test_null_root(tag, delta):
    q = build_preset(tag)
    assert q.delta == delta
    for i in q.vertices:
        e = tuple(int(v == i) for v in q.vertices)
        assert q.euler_form(delta, e) + q.euler_form(e, delta) == 0


def test_defect_signs():
    q = kronecker()
    assert q.defect((0, 1)) < 0  # simple projective
    assert q.defect((1, 0)) > 0  # simple injective
    assert q.defect((1, 1)) == 0


def test_order():
    assert leq((0, 1), (1, 1)) and lt((0, 1), (1, 1))
    assert not lt((1, 1), (1, 1)) and not leq((2, 0), (1, 1))
