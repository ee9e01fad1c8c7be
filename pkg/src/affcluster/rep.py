"""Explicit quiver representations over F_p and Euler characteristics of their
quiver Grassmannians.

A ``Representation`` stores one matrix per arrow, of shape
``dims[target] x dims[source]``, acting on column vectors.  Modules that make
sense over every prime (projectives, tube modules, the homogeneous families)
are described by a ``ParametricFamily``: a builder ``(p, lam) -> Representation``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from . import gf
from .counting import DEFAULT_BUDGET, BudgetExceeded, candidate_count, count_points, feasible
from .quiver import Quiver, QuiverError, build_preset

__all__ = [
    "Representation", "ParametricFamily", "CountingPolynomial", "RepError",
    "NonPolynomialCount", "BudgetExceeded", "count_subreps", "euler_char",
    "counting_polynomial", "build_regular_simple", "build_homogeneous",
    "build_tube_module", "simple", "projective", "injective", "tau", "tau_inverse",
    "hom_dim", "ext_dim", "extension", "tube_simples", "excluded_parameters",
    "sample_primes", "direct_sum", "preprojective", "preinjective", "degree_bound", "check_budget",
]


class RepError(ValueError):
    pass


class NonPolynomialCount(ArithmeticError):
    pass


class Representation:
    __slots__ = ("quiver", "p", "dims", "mats", "_nullities")

    def __init__(self, quiver: Quiver, p: int, dims: Sequence[int], mats: Sequence):
        if not gf.is_prime(p):
            raise RepError(f"field characteristic {p} is not prime")
        dims = tuple(int(d) for d in dims)
        if len(dims) != quiver.n or any(d < 0 for d in dims):
            raise RepError(f"bad dimension vector {dims}")
        if len(mats) != len(quiver.arrows):
            raise RepError(f"expected {len(quiver.arrows)} matrices, got {len(mats)}")
        out = []
        for (s, t), m in zip(quiver.arrows, mats):
            a = np.array(m, dtype=np.int64).reshape(dims[t - 1], dims[s - 1]) % p
            out.append(a)
        self.quiver, self.p, self.dims, self.mats = quiver, p, dims, tuple(out)
        self._nullities = None

    @property
    def nullities(self) -> tuple:
        """Kernel dimension of each arrow map."""
        if self._nullities is None:
            self._nullities = tuple(
                self.dims[s - 1] - (gf.rank(m, self.p) if m.size else 0)
                for (s, _), m in zip(self.quiver.arrows, self.mats)
            )
        return self._nullities

    @property
    def field_char(self) -> int:
        return self.p

    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def __repr__(self):
        return f"Representation(p={self.p}, dims={self.dims})"

    def __eq__(self, other):
        return (
            isinstance(other, Representation)
            and self.quiver.arrows == other.quiver.arrows
            and self.p == other.p
            and self.dims == other.dims
            and all(np.array_equal(a, b) for a, b in zip(self.mats, other.mats))
        )

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_json(),
            "field_char": self.p,
            "dims": list(self.dims),
            "mats": [m.tolist() for m in self.mats],
        }

    @classmethod
    def from_json(cls, data, quiver: Quiver | None = None) -> "Representation":
        if isinstance(data, str):
            data = json.loads(data)
        if quiver is None:
            q = data.get("quiver")
            if q is None:
                raise RepError("representation JSON needs a quiver")
            quiver = Quiver.from_json(q)
            if quiver.preset:
                quiver = build_preset(quiver.preset)
        dims = data["dims"]
        mats = []
        for (s, t), m in zip(quiver.arrows, data["mats"]):
            a = np.array(m, dtype=np.int64)
            if a.size == 0:
                a = np.zeros((dims[t - 1], dims[s - 1]), dtype=np.int64)
            mats.append(a)
        return cls(quiver, int(data.get("field_char", data.get("p", 0))), dims, mats)

    def reduce_to(self, p: int) -> "Representation":
        """Same integer matrices read modulo another prime."""
        return Representation(self.quiver, p, self.dims, self.mats)

    def conjugate(self, changes: Sequence) -> "Representation":
        """Apply invertible base changes ``g_v``: ``M_a -> g_t M_a g_s^{-1}``."""
        p = self.p
        inv = [_inverse(np.asarray(g), p) for g in changes]
        mats = [
            np.asarray(changes[t - 1]) @ m @ inv[s - 1] % p
            for (s, t), m in zip(self.quiver.arrows, self.mats)
        ]
        return Representation(self.quiver, p, self.dims, mats)


def _inverse(g, p):
    k = g.shape[0]
    if k == 0:
        return g.copy()
    r, piv = gf.rref(np.hstack([g % p, np.eye(k, dtype=np.int64)]), p)
    if piv[:k] != list(range(k)):
        raise RepError("base change is not invertible")
    return r[:, k:]


def direct_sum(*reps: Representation) -> Representation:
    if not reps:
        raise RepError("empty direct sum")
    q, p = reps[0].quiver, reps[0].p
    dims = tuple(sum(r.dims[v] for r in reps) for v in range(q.n))
    mats = []
    for a, (s, t) in enumerate(q.arrows):
        m = np.zeros((dims[t - 1], dims[s - 1]), dtype=np.int64)
        ro = co = 0
        for r in reps:
            blk = r.mats[a]
            m[ro: ro + blk.shape[0], co: co + blk.shape[1]] = blk
            ro += blk.shape[0]
            co += blk.shape[1]
        mats.append(m)
    return Representation(q, p, dims, mats)


# families ------------------------------------------------------------------

@dataclass
class ParametricFamily:
    """A module given uniformly over every prime, possibly depending on a parameter.

    ``key`` identifies the module for caching; it must determine the isomorphism
    class of ``builder(p, lam)`` for each ``(p, lam)``.
    """

    quiver: Quiver
    dims: tuple
    builder: Callable
    key: tuple
    parametric: bool = False
    excluded: frozenset = field(default_factory=frozenset)

    def instantiate(self, p: int, lam: int = 2) -> Representation:
        if self.parametric and lam % p in self.excluded:
            raise RepError(f"parameter {lam} mod {p} hits the excluded set {sorted(self.excluded)}")
        ckey = (self.key, p, lam % p if self.parametric else None)
        rep = _INSTANCES.get(ckey)
        if rep is None:
            rep = self.builder(p, lam % p)
            if rep.dims != tuple(self.dims):
                raise RepError("family builder produced the wrong dimension vector")
            for m in rep.mats:
                m.flags.writeable = False  # shared between callers
            _INSTANCES[ckey] = rep
        return rep


_INSTANCES: dict = {}


def as_family(m) -> ParametricFamily:
    if isinstance(m, ParametricFamily):
        return m
    if isinstance(m, Representation):
        frozen = m.to_json()
        key = ("explicit", json.dumps(frozen, sort_keys=True))
        return ParametricFamily(m.quiver, m.dims, lambda p, lam: m.reduce_to(p), key)
    raise TypeError(f"not a module: {m!r}")


def excluded_parameters(q: Quiver) -> frozenset:
    """Parameter values whose homogeneous family leaves the homogeneous tubes."""
    if q.preset == "kronecker":
        return frozenset()
    if q.preset == "d4":
        return frozenset({0, 1})
    if q.preset and q.preset.startswith("ann:"):
        return frozenset({0})
    raise RepError(f"no homogeneous family for quiver {q.preset!r}")


def _jordan(n, lam, p):
    return (lam * np.eye(n, dtype=np.int64) + np.eye(n, k=1, dtype=np.int64)) % p


def build_homogeneous(q: Quiver, n: int = 1) -> ParametricFamily:
    """Family ``M(lam)[n]`` of quasi-length ``n`` in the homogeneous tube at ``lam``."""
    if n < 1:
        raise RepError(f"quasi-length must be >= 1, got {n}")
    delta = q.delta
    excluded = excluded_parameters(q)
    ident = lambda: np.eye(n, dtype=np.int64)

    if q.preset == "kronecker":
        def build(p, lam):
            return Representation(q, p, (n, n), [ident(), _jordan(n, lam, p)])
    elif q.preset == "d4":
        def build(p, lam):
            z = np.zeros((n, n), dtype=np.int64)
            i = ident()
            mats = [
                np.vstack([i, z]), np.vstack([z, i]), np.vstack([i, i]),
                np.vstack([_jordan(n, lam, p), i]),
            ]
            return Representation(q, p, (2 * n, n, n, n, n), mats)
    else:
        m = q.n

        def build(p, lam):
            mats = [
                _jordan(n, lam, p) if (s, t) == (1, m) else ident()
                for s, t in q.arrows
            ]
            return Representation(q, p, (n,) * m, mats)

    dims = tuple(n * d for d in delta)
    return ParametricFamily(q, dims, build, ("hom", q.preset, n), True, excluded)


# regular simples of the exceptional tubes ------------------------------------

def _string_module(q: Quiver, p: int, support: Sequence[int], arrows: Sequence[int]):
    """Thin module on ``support`` with identity maps along the listed arrows."""
    dims = [0] * q.n
    for v in support:
        dims[v - 1] = 1
    mats = []
    for a, (s, t) in enumerate(q.arrows):
        m = np.zeros((dims[t - 1], dims[s - 1]), dtype=np.int64)
        if a in arrows:
            m[:] = 1
        mats.append(m)
    return Representation(q, p, dims, mats)


@lru_cache(maxsize=None)
def _tube_strings(q: Quiver) -> tuple:
    """Per exceptional tube, the regular simples as (support, arrow indices), tau-ordered."""
    if q.preset == "kronecker":
        raise RepError("the Kronecker quiver has no non-homogeneous tubes")
    if q.preset == "d4":
        # centre 1, arms 2..5 (arrow index a joins arm a+2 to the centre)
        tubes = [
            [((1, 2, 3), (0, 1)), ((1, 4, 5), (2, 3))],
            [((1, 2, 4), (0, 2)), ((1, 3, 5), (1, 3))],
            [((1, 3, 4), (1, 2)), ((1, 2, 5), (0, 3))],
        ]
    elif q.preset and q.preset.startswith("ann:"):
        tubes = []
        half = len(q.arrows) // 2
        for block in (range(half), range(half, 2 * half)):
            simples = []
            for a in block:
                s, t = q.arrows[a]
                simples.append(((s, t), (a,)))
            tubes.append(simples)
    else:
        raise RepError(f"no tube data for quiver {q.preset!r}")
    return tuple(_tau_order(q, t) for t in tubes)


def _dimvec(q, support):
    d = [0] * q.n
    for v in support:
        d[v - 1] = 1
    return tuple(d)


def _tau_order(q: Quiver, simples: list) -> tuple:
    """Order the simples so that ``tau E_{i+1} = E_i`` (read off the Euler form)."""
    r = len(simples)
    if r == 1:
        return tuple(simples)
    dims = [_dimvec(q, s) for s, _ in simples]
    order = [0]
    while len(order) < r:
        cur = dims[order[-1]]
        nxt = [k for k in range(r) if k not in order and q.euler_form(dims[k], cur) == -1]
        if len(nxt) != 1:
            raise RepError("could not determine the Auslander-Reiten order of a tube")
        order.append(nxt[0])
    if r > 2 and q.euler_form(dims[order[0]], dims[order[-1]]) != -1:
        raise RepError("tube order does not close up")
    return tuple(simples[k] for k in order)


def tube_simples(q: Quiver) -> tuple:
    """Number of regular simples in each exceptional tube."""
    return tuple(len(t) for t in _tube_strings(q))


def build_regular_simple(q: Quiver, tube: int, socle: int) -> ParametricFamily:
    tubes = _tube_strings(q)
    if not 1 <= tube <= len(tubes):
        raise RepError(f"tube index {tube} out of range 1..{len(tubes)}")
    if not 1 <= socle <= len(tubes[tube - 1]):
        raise RepError(f"socle index {socle} out of range 1..{len(tubes[tube - 1])}")
    support, arrows = tubes[tube - 1][socle - 1]
    return ParametricFamily(
        q, _dimvec(q, support), lambda p, lam: _string_module(q, p, support, arrows),
        ("E", q.preset, tube, socle, 1),
    )


def build_tube_module(q: Quiver, tube: int, socle: int, length: int) -> ParametricFamily:
    """``E[length]`` with quasi-socle the ``socle``-th simple of ``tube``."""
    if length < 1:
        raise RepError(f"quasi-length must be >= 1, got {length}")
    r = len(_tube_strings(q)[tube - 1]) if 1 <= tube <= len(_tube_strings(q)) else 0
    if r == 0:
        raise RepError(f"tube index {tube} out of range")
    simples = [build_regular_simple(q, tube, k) for k in range(1, r + 1)]
    dims = [0] * q.n
    for k in range(length):
        for v, x in enumerate(simples[(socle - 1 + k) % r].dims):
            dims[v] += x

    def build(p, lam):
        return _tube_module_at(q, p, tube, socle, length)

    return ParametricFamily(q, tuple(dims), build, ("E", q.preset, tube, socle, length))


@lru_cache(maxsize=512)
def _tube_module_at(q, p, tube, socle, length):
    r = len(_tube_strings(q)[tube - 1])
    if length == 1:
        return build_regular_simple(q, tube, socle).instantiate(p)
    sub = _tube_module_at(q, p, tube, socle, length - 1)
    top = build_regular_simple(q, tube, (socle - 1 + length - 1) % r + 1).instantiate(p)
    return extension(top, sub, require_unique=True)


# transjective modules ---------------------------------------------------------

def simple(q: Quiver, i: int) -> ParametricFamily:
    dims = tuple(1 if v == i else 0 for v in q.vertices)
    return ParametricFamily(
        q, dims, lambda p, lam: Representation(q, p, dims, [np.zeros((dims[t - 1], dims[s - 1])) for s, t in q.arrows]),
        ("S", q.preset, q.arrows, i),
    )


def _paths_from(q: Quiver, i: int) -> list:
    """All paths starting at ``i`` as tuples of arrow indices (including the trivial one)."""
    out, stack = [], [()]
    while stack:
        path = stack.pop()
        out.append(path)
        end = q.arrows[path[-1]][1] if path else i
        for a, (s, t) in enumerate(q.arrows):
            if s == end:
                stack.append(path + (a,))
    return out


def _projective_at(q: Quiver, p: int, i: int) -> Representation:
    paths = _paths_from(q, i)
    ends = [q.arrows[path[-1]][1] if path else i for path in paths]
    basis = {v: [k for k, e in enumerate(ends) if e == v] for v in q.vertices}
    dims = [len(basis[v]) for v in q.vertices]
    mats = []
    for a, (s, t) in enumerate(q.arrows):
        m = np.zeros((dims[t - 1], dims[s - 1]), dtype=np.int64)
        for col, k in enumerate(basis[s]):
            target = paths.index(paths[k] + (a,))
            m[basis[t].index(target), col] = 1
        mats.append(m)
    return Representation(q, p, dims, mats)


def _dual(rep: Representation, q_target: Quiver) -> Representation:
    return Representation(q_target, rep.p, rep.dims, [m.T for m in rep.mats])


def projective(q: Quiver, i: int) -> ParametricFamily:
    rep2 = _projective_at(q, 2, i)
    return ParametricFamily(q, rep2.dims, lambda p, lam: _projective_at(q, p, i), ("P", q.preset, q.arrows, i))


def injective(q: Quiver, i: int) -> ParametricFamily:
    qop = q.opposite()
    rep2 = _projective_at(qop, 2, i)
    return ParametricFamily(
        q, rep2.dims, lambda p, lam: _dual(_projective_at(qop, p, i), q), ("I", q.preset, q.arrows, i)
    )


def _reflect_sources(rep: Representation, vertices) -> Representation:
    """Cokernel reflection at a set of pairwise non-adjacent sources; reverses their arrows."""
    q, p = rep.quiver, rep.p
    dims = list(rep.dims)
    mats = [m.copy() for m in rep.mats]
    new_arrows = list(q.arrows)
    for i in vertices:
        out = q.arrows_out_of(i)
        if not out:
            dims[i - 1] = 0
            continue
        phi = np.vstack([rep.mats[a] for a, _ in out]) if out else np.zeros((0, dims[i - 1]))
        # cokernel: rows of a left null space basis of phi
        coker = gf.left_nullspace(phi, p) if phi.shape[0] else np.zeros((0, 0), dtype=np.int64)
        dims[i - 1] = coker.shape[0]
        off = 0
        for a, t in out:
            width = rep.dims[t - 1]
            mats[a] = coker[:, off: off + width] % p
            off += width
            new_arrows[a] = (t, i)
    return Representation(Quiver(q.n, tuple(new_arrows), None), p, dims, mats)


def _reflect_sinks(rep: Representation, vertices) -> Representation:
    """Kernel reflection at a set of pairwise non-adjacent sinks; reverses their arrows."""
    q, p = rep.quiver, rep.p
    dims = list(rep.dims)
    mats = [m.copy() for m in rep.mats]
    new_arrows = list(q.arrows)
    for i in vertices:
        inc = q.arrows_into(i)
        if not inc:
            dims[i - 1] = 0
            continue
        psi = np.hstack([rep.mats[a] for a, _ in inc])
        ker = gf.nullspace(psi, p)
        dims[i - 1] = ker.shape[1]
        off = 0
        for a, s in inc:
            h = rep.dims[s - 1]
            mats[a] = ker[off: off + h, :] % p
            off += h
            new_arrows[a] = (i, s)
    return Representation(Quiver(q.n, tuple(new_arrows), None), p, dims, mats)


def tau_inverse(rep: Representation) -> Representation:
    """Inverse Auslander-Reiten translate on a bipartite quiver (Coxeter functor C^-)."""
    q = rep.quiver
    if not q.is_bipartite():
        raise QuiverError("reflection functors need a bipartite orientation")
    srcs, sinks = q.sources, q.sinks
    mid = _reflect_sources(rep, srcs)
    out = _reflect_sources(mid, sinks)
    return Representation(q, rep.p, out.dims, out.mats)



def tau(rep: Representation) -> Representation:
    """Auslander-Reiten translate on a bipartite quiver (Coxeter functor C^+)."""
    q = rep.quiver
    if not q.is_bipartite():
        raise QuiverError("reflection functors need a bipartite orientation")
    srcs, sinks = q.sources, q.sinks
    mid = _reflect_sinks(rep, sinks)
    out = _reflect_sinks(mid, srcs)
    return Representation(q, rep.p, out.dims, out.mats)


def preprojective(q: Quiver, i: int, k: int) -> ParametricFamily:
    """``tau^{-k} P_i``."""
    base = projective(q, i)
    probe = _iterate(base.instantiate(2), tau_inverse, k)

    def build(p, lam):
        return _iterate(base.instantiate(p), tau_inverse, k)

    return ParametricFamily(q, probe.dims, build, ("preproj", q.preset, q.arrows, i, k))


def preinjective(q: Quiver, i: int, k: int) -> ParametricFamily:
    """``tau^{k} I_i``."""
    base = injective(q, i)
    probe = _iterate(base.instantiate(2), tau, k)

    def build(p, lam):
        return _iterate(base.instantiate(p), tau, k)

    return ParametricFamily(q, probe.dims, build, ("preinj", q.preset, q.arrows, i, k))


def _iterate(rep, fn, k):
    for _ in range(k):
        rep = fn(rep)
    return rep


# Hom and Ext ------------------------------------------------------------------

def _hom_system(x: Representation, y: Representation):
    """Matrix of ``phi -> (Y_a phi_s - phi_t X_a)_a`` in the standard bases."""
    q, p = x.quiver, x.p
    offs, n = [], 0
    for v in q.vertices:
        offs.append(n)
        n += y.dims[v - 1] * x.dims[v - 1]
    rows_off, m = [], 0
    for s, t in q.arrows:
        rows_off.append(m)
        m += y.dims[t - 1] * x.dims[s - 1]
    mat = np.zeros((m, n), dtype=np.int64)
    for a, (s, t) in enumerate(q.arrows):
        ya, xa = y.mats[a], x.mats[a]
        ys, xs = y.dims[s - 1], x.dims[s - 1]
        yt, xt = y.dims[t - 1], x.dims[t - 1]
        r0 = rows_off[a]
        # entry (u, w) of Y_a phi_s: sum_k Y_a[u,k] phi_s[k,w]
        for u in range(yt):
            for w in range(xs):
                row = r0 + u * xs + w
                for k in range(ys):
                    mat[row, offs[s - 1] + k * xs + w] += ya[u, k]
                # minus (phi_t X_a)[u,w] = sum_k phi_t[u,k] X_a[k,w]
                for k in range(xt):
                    mat[row, offs[t - 1] + u * xt + k] -= xa[k, w]
    return mat % p, offs, rows_off


def hom_dim(x: Representation, y: Representation) -> int:
    _check_pair(x, y)
    mat, _, _ = _hom_system(x, y)
    n = mat.shape[1]
    return n - gf.rank(mat, x.p) if mat.shape[0] else n


def ext_dim(x: Representation, y: Representation) -> int:
    """``dim Ext^1(x, y) = dim Hom(x, y) - <dim x, dim y>``."""
    _check_pair(x, y)
    return hom_dim(x, y) - x.quiver.euler_form(x.dims, y.dims)


def _check_pair(x, y):
    if x.quiver.arrows != y.quiver.arrows or x.p != y.p:
        raise RepError("representations live on different quivers or fields")


def extension(x: Representation, y: Representation, require_unique: bool = False) -> Representation:
    """Middle term of a non-split extension ``0 -> y -> Z -> x -> 0``."""
    _check_pair(x, y)
    q, p = x.quiver, x.p
    mat, _, rows_off = _hom_system(x, y)
    m = mat.shape[0]
    base = gf.rank(mat, p) if mat.size else 0
    ext = m - base
    if ext == 0:
        raise RepError("Ext^1 vanishes; no non-split extension")
    if require_unique and ext != 1:
        raise RepError(f"Ext^1 has dimension {ext}, expected 1")
    eta = None
    for k in range(m):
        col = np.zeros((m, 1), dtype=np.int64)
        col[k, 0] = 1
        if gf.rank(np.hstack([mat, col]), p) > base:
            eta = k
            break
    dims = tuple(a + b for a, b in zip(y.dims, x.dims))
    mats = []
    for a, (s, t) in enumerate(q.arrows):
        yt, xs = y.dims[t - 1], x.dims[s - 1]
        blk = np.zeros((yt, xs), dtype=np.int64)
        local = eta - rows_off[a]
        if 0 <= local < yt * xs:
            blk[local // xs, local % xs] = 1
        top = np.hstack([y.mats[a], blk])
        bottom = np.hstack([np.zeros((x.dims[t - 1], y.dims[s - 1]), dtype=np.int64), x.mats[a]])
        mats.append(np.vstack([top, bottom]))
    return Representation(q, p, dims, mats)


# counting and interpolation -----------------------------------------------------

@dataclass(frozen=True)
class CountingPolynomial:
    coefficients: tuple

    def __call__(self, q: int) -> int:
        val = 0
        for c in reversed(self.coefficients):
            val = val * q + c
        return val

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def nonnegative(self) -> bool:
        return all(c >= 0 for c in self.coefficients)


def count_subreps(m: Representation, e, p: int | None = None, budget: int = DEFAULT_BUDGET) -> int:
    """Number of subrepresentations of ``m`` over ``F_p`` with dimension vector ``e``."""
    if isinstance(m, ParametricFamily):
        if p is None:
            raise RepError("a family needs an explicit prime")
        m = m.instantiate(p)
    if p is not None and p != m.p:
        m = m.reduce_to(p)
    return count_points(m, e, budget=budget)


def degree_bound(rep: Representation, e) -> int:
    """Upper bound for the degree of the counting polynomial.

    Non-sink vertices contribute their Grassmannian dimension; a sink ``t`` at
    most ``(e_t - w)(d_t - e_t)`` where every incoming image has dimension
    at least ``w``.
    """
    q, d = rep.quiver, rep.dims
    sinks = set(q.sinks)
    bound = 0
    for v in q.vertices:
        ev, dv = e[v - 1], d[v - 1]
        if v not in sinks:
            bound += ev * (dv - ev)
            continue
        w = 0
        for a, s in q.arrows_into(v):
            w = max(w, e[s - 1] - rep.nullities[a])
        bound += max(ev - w, 0) * (dv - ev)
    return bound


def sample_primes(count: int, lam: int = 2, excluded=frozenset(), start: int = 5, stride: int = 1,
                  offset: int = 0) -> list:
    """``count`` primes from ``start`` on, avoiding parameter collisions.

    ``stride``/``offset`` select every ``stride``-th admissible prime, which gives
    disjoint schedules for consistency checks.
    """
    out, k = [], 0
    for p in gf.primes_from(start):
        if lam % p in excluded:
            continue
        if k % stride == offset:
            out.append(p)
            if len(out) == count:
                return out
        k += 1
    return out


_COUNT_CACHE: dict = {}


def _cached_count(fam: ParametricFamily, e, p, lam, budget):
    key = (fam.key, tuple(e), p, lam % p if fam.parametric else None)
    hit = _COUNT_CACHE.get(key)
    if hit is None:
        hit = count_points(fam.instantiate(p, lam), e, budget=budget)
        _COUNT_CACHE[key] = hit
    return hit


def _interpolate(points):
    """Lagrange interpolation with exact integers; coefficients lowest degree first."""
    n = len(points)
    coeffs = [Fraction(0)] * n
    for i, (xi, yi) in enumerate(points):
        basis = [Fraction(1)]
        denom = 1
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xj * basis[k + 1]
            denom *= xi - xj
        for k in range(n):
            coeffs[k] += Fraction(yi, denom) * basis[k]
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _plan(fam: ParametricFamily, e, lam, stride, offset, start=5) -> list:
    """Primes to sample for ``e``: enough for the degree bound plus one consistency check."""
    excluded = fam.excluded if fam.parametric else frozenset()
    bound = None
    primes: list = []
    while True:
        need = (bound if bound is not None else 0) + 2
        primes = sample_primes(need, lam, excluded, start=start, stride=stride, offset=offset)
        bounds = [degree_bound(fam.instantiate(p, lam), e) for p in primes]
        if bound is not None and max(bounds) <= bound:
            break
        bound = max(bounds)
    return primes[: bound + 2]


def _check_e(fam, e):
    e = tuple(int(x) for x in e)
    if len(e) != fam.quiver.n or any(x < 0 or x > d for x, d in zip(e, fam.dims)):
        raise RepError(f"{e} is not between 0 and {fam.dims}")
    return e


def check_budget(m, e, *, lam: int = 2, budget: int = DEFAULT_BUDGET, stride: int = 1, offset: int = 0,
                 start: int = 5):
    """Raise ``BudgetExceeded`` up front if some sampled prime would need too many candidates."""
    fam = as_family(m)
    e = _check_e(fam, e)
    for p in _plan(fam, e, lam, stride, offset, start):
        rep = fam.instantiate(p, lam)
        if feasible(rep, e) and candidate_count(rep, e) > budget:
            raise BudgetExceeded(f"{e} at p={p} needs more than {budget} echelon candidates")


def counting_polynomial(m, e, *, lam: int = 2, budget: int = DEFAULT_BUDGET, stride: int = 1,
                        offset: int = 0, start: int = 5) -> CountingPolynomial:
    fam = as_family(m)
    e = _check_e(fam, e)
    primes = _plan(fam, e, lam, stride, offset, start)
    values = [(p, _cached_count(fam, e, p, lam, budget)) for p in primes]
    coeffs = _interpolate(values[:-1])
    if any(c.denominator != 1 for c in coeffs):
        raise NonPolynomialCount(f"counts {values} do not interpolate to an integer polynomial")
    poly = CountingPolynomial(tuple(int(c) for c in coeffs))
    p_last, v_last = values[-1]
    if poly(p_last) != v_last:
        raise NonPolynomialCount(
            f"consistency prime {p_last} gives {v_last}, interpolant predicts {poly(p_last)}"
        )
    return poly


def euler_char(m, e, *, lam: int = 2, budget: int = DEFAULT_BUDGET, stride: int = 1,
               offset: int = 0, start: int = 5) -> int:
    """Euler characteristic of the quiver Grassmannian, via its counting polynomial at 1."""
    return counting_polynomial(m, e, lam=lam, budget=budget, stride=stride, offset=offset, start=start)(1)


def clear_cache():
    _COUNT_CACHE.clear()
    _INSTANCES.clear()
