"""Slow, obviously-correct reference computations used only by the tests."""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def span(vectors, p):
    """All F_p-linear combinations of ``vectors`` as a frozenset of tuples."""
    vectors = [tuple(int(x) % p for x in v) for v in vectors]
    if not vectors:
        return frozenset()
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        out.add(tuple(sum(c * v[i] for c, v in zip(coeffs, vectors)) % p for i in range(len(vectors[0]))))
    return frozenset(out)


def all_subspaces(d, p):
    """Every subspace of F_p^d, grouped by dimension."""
    by_dim = {0: {frozenset([(0,) * d])}}
    vecs = [v for v in itertools.product(range(p), repeat=d) if any(v)]
    frontier = {frozenset([(0,) * d])}
    for k in range(1, d + 1):
        nxt = set()
        for sub in frontier:
            for v in vecs:
                if v not in sub:
                    # sub + <v> is the union of the cosets sub + c v
                    nxt.add(frozenset(tuple((a + c * b) % p for a, b in zip(s, v))
                                      for s in sub for c in range(p)))
        by_dim[k] = nxt
        frontier = nxt
    return by_dim


def brute_count(rep, e):
    """Number of subrepresentations with dimension vector ``e`` by checking every subspace tuple."""
    q, p = rep.quiver, rep.p
    choices = []
    for v in q.vertices:
        choices.append(sorted(all_subspaces(rep.dims[v - 1], p)[e[v - 1]], key=sorted))
    total = 0
    for pick in itertools.product(*choices):
        ok = True
        for a, (s, t) in enumerate(q.arrows):
            m = rep.mats[a]
            for vec in pick[s - 1]:
                img = tuple(int(x) for x in (m @ np.array(vec, dtype=np.int64)) % p) if rep.dims[t - 1] else ()
                if rep.dims[t - 1] and img not in pick[t - 1]:
                    ok = False
                    break
            if not ok:
                break
        total += ok
    return total


def mutation_slices(q, rounds, point):
    """Cluster variables evaluated at ``point`` by mutating at sinks, one Coxeter round at a time.

    Returns a list of dicts vertex -> value, one per round, starting with the initial seed.
    """
    arrows = {(s, t): 0 for s in q.vertices for t in q.vertices}
    for s, t in q.arrows:
        arrows[(s, t)] += 1
    x = {v: Fraction(point[v - 1]) for v in q.vertices}
    out = [dict(x)]
    for _ in range(rounds):
        done = set()
        while len(done) < q.n:
            k = next(v for v in q.vertices if v not in done
                     and not any(arrows[(v, t)] for t in q.vertices))
            prod = Fraction(1)
            for i in q.vertices:
                prod *= x[i] ** arrows[(i, k)]
            x[k] = (1 + prod) / x[k]
            for i in q.vertices:
                arrows[(k, i)], arrows[(i, k)] = arrows[(i, k)], 0
            done.add(k)
        out.append(dict(x))
    return out


def evaluate(poly, point):
    total = Fraction(0)
    for exp, c in poly.terms.items():
        term = Fraction(c)
        for x, e in zip(point, exp):
            term *= Fraction(x) ** e
        total += term
    return total
