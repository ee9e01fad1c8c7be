import pytest

from affcluster.quiver import atilde_nn, dtilde4, kronecker
from affcluster.rep import (
    NonPolynomialCount, RepError, Representation, build_homogeneous, build_regular_simple, build_tube_module,
    counting_polynomial, euler_char, excluded_parameters, ext_dim, extension, hom_dim, injective,
    preinjective, preprojective, projective, sample_primes, tau, tau_inverse, tube_simples,
)

D4 = dtilde4()


def test_d4_regular_simples():
    dims = [build_regular_simple(D4, t, s).dims for t in (1, 2, 3) for s in (1, 2)]
    assert dims == [(1, 1, 1, 0, 0), (1, 0, 0, 1, 1), (1, 1, 0, 1, 0), (1, 0, 1, 0, 1),
                    (1, 0, 1, 1, 0), (1, 1, 0, 0, 1)]
    assert tube_simples(D4) == (2, 2, 2)
    assert tube_simples(atilde_nn(3)) == (3, 3)


def test_kronecker_has_only_homogeneous_tubes():
    with pytest.raises(RepError):
        tube_simples(kronecker())


@pytest.mark.parametrize("q", [D4, atilde_nn(2), atilde_nn(3)])
def test_tube_modules_rigid_below_rank(q):
    ranks = tube_simples(q)
    for k, r in enumerate(ranks, start=1):
        for n in range(1, 2 * r + 1):
            m = build_tube_module(q, k, 1, n).instantiate(7)
            # exceptional exactly below the rank
            assert (ext_dim(m, m) == 0) == (n < r)


def test_homogeneous_family():
    for q in (kronecker(), D4, atilde_nn(2)):
        m = build_homogeneous(q, 1).instantiate(11, 3)
        assert m.dims == q.delta
        assert hom_dim(m, m) == 1 and ext_dim(m, m) == 1
    assert excluded_parameters(D4) == frozenset({0, 1})
    with pytest.raises(RepError):
        build_homogeneous(D4, 1).instantiate(11, 12)  # 12 = 1 mod 11


def test_projectives_and_injectives():
    q = kronecker()
    assert projective(q, 1).dims == (1, 2) and projective(q, 2).dims == (0, 1)
    assert injective(q, 1).dims == (1, 0) and injective(q, 2).dims == (2, 1)
    assert [preprojective(q, 1, k).dims for k in range(3)] == [(1, 2), (3, 4), (5, 6)]
    assert [preinjective(q, 2, k).dims for k in range(3)] == [(2, 1), (4, 3), (6, 5)]


def test_coxeter_functors_are_inverse():
    for q in (kronecker(), D4):
        m = preprojective(q, 1, 1).instantiate(7)
        back = tau(tau_inverse(m))
        assert back.dims == m.dims
        assert hom_dim(back, m) == 1 == hom_dim(m, m)


def test_extension_middle_term():
    q = atilde_nn(3)
    e1 = build_regular_simple(q, 1, 1).instantiate(5)
    e2 = build_regular_simple(q, 1, 2).instantiate(5)
    assert ext_dim(e2, e1) + ext_dim(e1, e2) == 1
    x, y = (e2, e1) if ext_dim(e2, e1) else (e1, e2)
    z = extension(x, y, require_unique=True)
    assert z.dims == tuple(a + b for a, b in zip(e1.dims, e2.dims))
    assert hom_dim(z, z) == 1


def test_counting_polynomials():
    m = build_homogeneous(D4, 1)
    assert counting_polynomial(m, (1, 0, 0, 0, 0)).coefficients == (1, 1)  # lines in the plane
    assert euler_char(m, (1, 0, 0, 0, 0)) == 2
    assert euler_char(m, (1, 1, 0, 0, 0)) == 1
    assert counting_polynomial(m, (2, 1, 1, 1, 1)).coefficients == (1,)
    # schedule independence
    assert (counting_polynomial(m, (1, 0, 0, 0, 0), lam=3, stride=2, offset=1).coefficients
            == counting_polynomial(m, (1, 0, 0, 0, 0)).coefficients)


def test_prime_schedules_disjoint():
    a = sample_primes(6, 2, frozenset({0, 1}), stride=2, offset=0)
    b = sample_primes(6, 3, frozenset({0, 1}), stride=2, offset=1)
    assert not set(a) & set(b)
    assert all(p >= 5 for p in a + b)


def test_json_round_trip():
    m = build_tube_module(D4, 2, 1, 2).instantiate(7)
    again = Representation.from_json(m.to_json())
    assert again == m


def test_non_polynomial_count_is_detected():
    # a family whose "module" changes with the prime is not uniform: the counts cannot interpolate
    from affcluster.rep import ParametricFamily
    import numpy as np

    q = kronecker()

    def build(p, lam):
        a = np.eye(2, dtype=np.int64)
        b = np.array([[0, 1], [p % 4 == 1, 0]], dtype=np.int64)
        return Representation(q, p, (2, 2), [a, b])

    fam = ParametricFamily(q, (2, 2), build, ("wobbly",))
    with pytest.raises(NonPolynomialCount):
        counting_polynomial(fam, (1, 1))
