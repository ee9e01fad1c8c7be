"""F_p-point counts of quiver Grassmannians.

Non-sink vertices are enumerated (reduced echelon bases, topological order);
each sink contributes a Gaussian binomial: the subspaces of dimension ``e_t``
containing the span ``W_t`` of the incoming images number
``[d_t - dim W_t, e_t - dim W_t]_p``.

Two engines share that formula.  ``_count_dfs`` is a compiled depth-first
search for quivers whose non-sinks are sources (every preset); ``_count_batch``
handles arbitrary acyclic quivers with vectorised rank computations.
"""
from __future__ import annotations

import math

import numba
import numpy as np

from .gf import batch_rank, gaussian_binomial, subspaces

DEFAULT_BUDGET = 10**7
_CHUNK = 200_000


class BudgetExceeded(RuntimeError):
    pass


@numba.njit(cache=True)
def _insert(basis, piv, rank, v, p, inv):
    # reduce v against an echelon basis (rows with distinct pivots); append if independent
    for r in range(rank):
        c = v[piv[r]]
        if c != 0:
            for k in range(v.shape[0]):
                v[k] = (v[k] - c * basis[r, k]) % p
    for k in range(v.shape[0]):
        if v[k] != 0:
            s = inv[v[k]]
            for j in range(v.shape[0]):
                basis[rank, j] = (v[j] * s) % p
            piv[rank] = k
            return rank + 1
    return rank


@numba.njit(cache=True)
def _count_dfs(images, ncand, gtable, emax, p, inv):
    """images[level, cand, sink, row, :] are image vectors (zero-padded).

    Returns the sum over candidate tuples of prod_t gtable[t, dim W_t].
    """
    nlev = images.shape[0]
    nsink = images.shape[2]
    nrows = images.shape[3]
    dmax = images.shape[4]
    bases = np.zeros((nlev + 1, nsink, dmax + 1, dmax), dtype=np.int64)
    pivs = np.zeros((nlev + 1, nsink, dmax + 1), dtype=np.int64)
    ranks = np.zeros((nlev + 1, nsink), dtype=np.int64)
    idx = np.zeros(nlev + 1, dtype=np.int64)
    v = np.zeros(dmax, dtype=np.int64)
    total = 0
    if nlev == 0:
        prod = 1
        for t in range(nsink):
            prod *= gtable[t, 0]
        return prod
    level = 0
    idx[0] = 0
    while level >= 0:
        if idx[level] >= ncand[level]:
            level -= 1
            if level >= 0:
                idx[level] += 1
            continue
        g = idx[level]
        ok = True
        for t in range(nsink):
            bases[level + 1, t] = bases[level, t]
            pivs[level + 1, t] = pivs[level, t]
            rk = ranks[level, t]
            for r in range(nrows):
                nz = False
                for k in range(dmax):
                    v[k] = images[level, g, t, r, k]
                    if v[k] != 0:
                        nz = True
                if nz:
                    rk = _insert(bases[level + 1, t], pivs[level + 1, t], rk, v, p, inv)
            ranks[level + 1, t] = rk
            if rk > emax[t]:
                ok = False
                break
        if not ok:
            idx[level] += 1
            continue
        if level == nlev - 1:
            prod = 1
            for t in range(nsink):
                prod *= gtable[t, ranks[level + 1, t]]
            total += prod
            idx[level] += 1
        else:
            level += 1
            idx[level] = 0
    return total


def _topological(q) -> list:
    order, seen = [], set()
    preds = {v: [s for s, t in q.arrows if t == v] for v in q.vertices}

    def visit(v):
        if v in seen:
            return
        for u in preds[v]:
            visit(u)
        seen.add(v)
        order.append(v)

    for v in q.vertices:
        visit(v)
    return order


def _sink_table(dims, e, sinks, p):
    width = max((dims[t - 1] for t in sinks), default=0) + 1
    table = np.zeros((len(sinks), width), dtype=object)
    for k, t in enumerate(sinks):
        d, et = dims[t - 1], e[t - 1]
        for w in range(width):
            table[k, w] = gaussian_binomial(d - w, et - w, p) if w <= et else 0
    return table


def candidate_count(rep, e) -> int:
    q = rep.quiver
    sinks = set(q.sinks)
    total = 1
    for v in q.vertices:
        if v not in sinks:
            total *= gaussian_binomial(rep.dims[v - 1], e[v - 1], rep.p)
    return total


def feasible(rep, e) -> bool:
    """Cheap necessary condition: the image of ``U_s`` has dimension >= e_s - dim ker M_a."""
    for a, (s, t) in enumerate(rep.quiver.arrows):
        if e[t - 1] < e[s - 1] - rep.nullities[a]:
            return False
    return True


def count_points(rep, e, budget: int = DEFAULT_BUDGET, engine: str = "auto") -> int:
    """Number of subrepresentations of ``rep`` with dimension vector ``e``."""
    q, p, dims = rep.quiver, rep.p, rep.dims
    e = tuple(int(x) for x in e)
    if len(e) != q.n:
        raise ValueError(f"dimension vector {e} has wrong length")
    if any(x < 0 or x > d for x, d in zip(e, dims)):
        raise ValueError(f"{e} is not between 0 and {dims}")
    if not feasible(rep, e):
        return 0
    cand = candidate_count(rep, e)
    if cand > budget:
        raise BudgetExceeded(f"{cand} echelon candidates exceed the budget {budget}")
    sinks = list(q.sinks)
    enum = [v for v in _topological(q) if v not in set(sinks)]
    pure = all(not any(t == v for _, t in q.arrows) for v in enum)
    table = _sink_table(dims, e, sinks, p)
    # int64 overflow guard for the compiled path
    peak = cand * max([max(row) for row in table.tolist()] + [1])
    if engine == "auto":
        engine = "dfs" if pure and peak < 2**62 else "batch"
    if engine == "dfs":
        if not pure:
            raise ValueError("dfs engine requires every non-sink to be a source")
        return _run_dfs(rep, e, enum, sinks, table)
    return _count_batch(rep, e, enum, sinks, table)


def _images(rep, v, bases, sink):
    """Stacked images ``B_v M_a^T`` for the arrows ``v -> sink``; shape (G, rows, d_sink)."""
    q = rep.quiver
    blocks = [bases @ rep.mats[a].T for a, (s, t) in enumerate(q.arrows) if s == v and t == sink]
    if not blocks:
        return np.zeros((bases.shape[0], 0, rep.dims[sink - 1]), dtype=np.int64)
    return np.concatenate(blocks, axis=1) % rep.p


def _run_dfs(rep, e, enum, sinks, table):
    p = rep.p
    from .gf import inverse_table

    cands = [subspaces(rep.dims[v - 1], e[v - 1], p) for v in enum]
    gmax = max((c.shape[0] for c in cands), default=1)
    dmax = max((rep.dims[t - 1] for t in sinks), default=1) or 1
    per = [[_images(rep, v, c, t) for t in sinks] for v, c in zip(enum, cands)]
    rows = max([blk.shape[1] for lv in per for blk in lv] + [1])
    images = np.zeros((len(enum), gmax, len(sinks), rows, dmax), dtype=np.int64)
    for lv, blocks in enumerate(per):
        for k, blk in enumerate(blocks):
            images[lv, : blk.shape[0], k, : blk.shape[1], : blk.shape[2]] = blk
    ncand = np.array([c.shape[0] for c in cands], dtype=np.int64)
    gtab = np.array(table.tolist(), dtype=np.int64).reshape(len(sinks), -1)
    if gtab.size == 0:
        gtab = np.ones((0, 1), dtype=np.int64)
    emax = np.array([e[t - 1] for t in sinks], dtype=np.int64)
    return int(_count_dfs(images, ncand, gtab, emax, p, inverse_table(p)))


def _count_batch(rep, e, enum, sinks, table):
    q, p = rep.quiver, rep.p
    cands = [subspaces(rep.dims[v - 1], e[v - 1], p) for v in enum]
    shape = tuple(c.shape[0] for c in cands)
    total_n = math.prod(shape)
    pos = {v: k for k, v in enumerate(enum)}
    internal = [(a, s, t) for a, (s, t) in enumerate(q.arrows) if s in pos and t in pos]
    total = 0
    for start in range(0, total_n, _CHUNK):
        flat = np.arange(start, min(total_n, start + _CHUNK))
        idx = np.unravel_index(flat, shape) if shape else ()
        chosen = {v: cands[k][idx[k]] for k, v in enumerate(enum)}
        keep = np.ones(flat.shape[0], dtype=bool)
        for a, s, t in internal:
            if e[s - 1] == 0:
                continue
            img = chosen[s] @ rep.mats[a].T % p
            stacked = np.concatenate([chosen[t], img], axis=1)
            keep &= batch_rank(stacked, p) == e[t - 1]
        weight = np.ones(flat.shape[0], dtype=object)
        for k, t in enumerate(sinks):
            blocks = [
                chosen[s] @ rep.mats[a].T % p
                for a, (s, tt) in enumerate(q.arrows)
                if tt == t and e[s - 1] > 0
            ]
            if blocks:
                w = batch_rank(np.concatenate(blocks, axis=1), p)
            else:
                w = np.zeros(flat.shape[0], dtype=np.int64)
            weight *= table[k][w]
        total += int(weight[keep].sum())
    return total
