"""Quivers, the Euler form and the affine presets used throughout the package.

Vertices are 1-based.  ``arrows`` is a tuple of ``(source, target)`` pairs;
repeated pairs are parallel arrows.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

import numpy as np


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    n: int
    arrows: tuple
    preset: str | None = None

    def __post_init__(self):
        arrows = tuple((int(s), int(t)) for s, t in self.arrows)
        object.__setattr__(self, "arrows", arrows)
        for s, t in arrows:
            if not (1 <= s <= self.n and 1 <= t <= self.n):
                raise QuiverError(f"arrow {s}->{t} has an endpoint outside 1..{self.n}")
            if s == t:
                raise QuiverError(f"loop at vertex {s}")
        if not self._is_acyclic():
            raise QuiverError("quiver has an oriented cycle")

    def _is_acyclic(self) -> bool:
        indeg = [0] * (self.n + 1)
        for _, t in self.arrows:
            indeg[t] += 1
        ready = [v for v in range(1, self.n + 1) if indeg[v] == 0]
        seen = 0
        while ready:
            v = ready.pop()
            seen += 1
            for s, t in self.arrows:
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        ready.append(t)
        return seen == self.n

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @cached_property
    def arrow_matrix(self) -> np.ndarray:
        """``A[i-1, j-1]`` = number of arrows ``i -> j``.  Also the Ext matrix ``R``."""
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for s, t in self.arrows:
            a[s - 1, t - 1] += 1
        return a

    @property
    def ext_matrix(self) -> np.ndarray:
        return self.arrow_matrix

    @property
    def exchange_matrix(self) -> np.ndarray:
        a = self.arrow_matrix
        return a - a.T

    @cached_property
    def sources(self) -> tuple:
        targets = {t for _, t in self.arrows}
        return tuple(v for v in self.vertices if v not in targets)

    @cached_property
    def sinks(self) -> tuple:
        srcs = {s for s, _ in self.arrows}
        return tuple(v for v in self.vertices if v not in srcs)

    def is_bipartite(self) -> bool:
        """Every vertex is a sink or a source."""
        return set(self.sources) | set(self.sinks) == set(self.vertices)

    def arrows_into(self, v: int) -> list:
        return [(a, s) for a, (s, t) in enumerate(self.arrows) if t == v]

    def arrows_out_of(self, v: int) -> list:
        return [(a, t) for a, (s, t) in enumerate(self.arrows) if s == v]

    def opposite(self) -> "Quiver":
        return Quiver(self.n, tuple((t, s) for s, t in self.arrows), None)

    def to_json(self) -> dict:
        return {"n": self.n, "arrows": [list(a) for a in self.arrows], "preset": self.preset}

    @classmethod
    def from_json(cls, data) -> "Quiver":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["n"], tuple(tuple(a) for a in data["arrows"]), data.get("preset"))

    # Euler form ---------------------------------------------------------
    def euler_form(self, d: Sequence[int], e: Sequence[int]) -> int:
        return euler_form(self, d, e)

    @cached_property
    def delta(self) -> tuple:
        return delta(self)

    def defect(self, d: Sequence[int]) -> int:
        return defect(self, d)


def _check_rank(q: Quiver, *vecs):
    for v in vecs:
        if len(v) != q.n:
            raise QuiverError(f"vector {tuple(v)} has length {len(v)}, expected {q.n}")


def euler_form(q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    _check_rank(q, d, e)
    val = sum(int(x) * int(y) for x, y in zip(d, e))
    for s, t in q.arrows:
        val -= int(d[s - 1]) * int(e[t - 1])
    return val


def _rational_kernel(mat: list[list[int]]) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in row] for row in mat]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][f]
        basis.append(v)
    return basis


def delta(q: Quiver) -> tuple:
    """Minimal positive generator of the radical of the symmetrized Euler form."""
    a = q.arrow_matrix
    sym = 2 * np.eye(q.n, dtype=np.int64) - a - a.T
    kernel = _rational_kernel(sym.tolist())
    if len(kernel) != 1:
        raise QuiverError(f"radical has dimension {len(kernel)}; quiver is not affine")
    v = kernel[0]
    denom = 1
    for x in v:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if all(x <= 0 for x in ints):
        ints = [-x for x in ints]
    if not all(x >= 1 for x in ints):
        raise QuiverError(f"radical generator {ints} is not sincere; quiver is not affine")
    return tuple(ints)


def defect(q: Quiver, d: Sequence[int]) -> int:
    return euler_form(q, q.delta, d)


def leq(d: Sequence[int], e: Sequence[int]) -> bool:
    if len(d) != len(e):
        raise QuiverError("rank mismatch in comparison")
    return all(x <= y for x, y in zip(d, e))


def lt(d: Sequence[int], e: Sequence[int]) -> bool:
    return leq(d, e) and any(x < y for x, y in zip(d, e))


# presets ----------------------------------------------------------------

def kronecker() -> Quiver:
    return Quiver(2, ((1, 2), (1, 2)), "kronecker")


def atilde_nn(n: int) -> Quiver:
    """Alternating ``2n``-cycle: odd vertices are sources, even vertices sinks."""
    if n < 2:
        raise QuiverError("ann:<n> needs n >= 2 (n = 1 is the Kronecker preset)")
    m = 2 * n
    clockwise = [(i, i + 1) for i in range(1, m, 2)]
    counter = [(i, i - 1 if i > 1 else m) for i in range(1, m, 2)]
    return Quiver(m, tuple(clockwise + counter), f"ann:{n}")


def dtilde4() -> Quiver:
    return Quiver(5, ((2, 1), (3, 1), (4, 1), (5, 1)), "d4")


def build_preset(tag: str) -> Quiver:
    tag = tag.strip().lower()
    if tag in ("kronecker", "a11"):
        q = kronecker()
    elif tag in ("d4", "dtilde4"):
        q = dtilde4()
    elif tag.startswith("ann:"):
        try:
            n = int(tag.split(":", 1)[1])
        except ValueError:
            raise QuiverError(f"bad preset {tag!r}") from None
        q = atilde_nn(n)
    else:
        raise QuiverError(f"unknown preset {tag!r}; expected kronecker, ann:<n> or d4")
    if q.preset != "kronecker" and not q.is_bipartite():
        raise QuiverError(f"preset {tag} is not alternating")
    return q


def unit(n: int, i: int, sign: int = 1) -> tuple:
    v = [0] * n
    v[i - 1] = sign
    return tuple(v)
