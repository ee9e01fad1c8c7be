"""Transjective cluster variables by knitting the mesh relations of ``ZQ``.

Coordinates are ``(slice, vertex)``.  Slice 0 holds the initial variables
``x_i`` with extended dimension vector ``-e_i``; slice ``m >= 1`` holds
``tau^{-(m-1)} P_j`` and slice ``-m`` holds ``tau^{m-1} I_j``.

The mesh at ``(m, j)`` reads::

    X(m, j) * X(m-1, j) = 1 + prod_{i -> j} X(m-1, i) * prod_{j -> k} X(m, k)
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .laurent import LaurentPoly, denominator_vector, lp_div_exact, lp_prod
from .quiver import Quiver, QuiverError
from .rep import ParametricFamily, preinjective, preprojective

__all__ = ["FriezeTable", "NotKnitted", "knit", "variable_by_dimvec"]


class NotKnitted(KeyError):
    pass


def _topo(q: Quiver, reverse=False) -> list:
    """Vertices ordered so every arrow points backwards (sinks first)."""
    out, seen = [], set()

    def visit(v):
        if v in seen:
            return
        seen.add(v)
        for _, k in q.arrows_out_of(v):
            visit(k)
        out.append(v)

    for v in q.vertices:
        visit(v)
    return out[::-1] if reverse else out


@dataclass
class FriezeTable:
    quiver: Quiver
    entries: dict = field(default_factory=dict)
    lo: int = 0
    hi: int = 0

    def __post_init__(self):
        if not self.entries:
            n = self.quiver.n
            for i in self.quiver.vertices:
                d = [0] * n
                d[i - 1] = -1
                self.entries[(0, i)] = (tuple(d), LaurentPoly.var(n, i))

    def __contains__(self, coord):
        return coord in self.entries

    def __getitem__(self, coord):
        try:
            return self.entries[coord]
        except KeyError:
            raise NotKnitted(f"{coord} is outside the knitted window {self.lo}..{self.hi}") from None

    def dims(self, coord) -> tuple:
        return self[coord][0]

    def value(self, coord) -> LaurentPoly:
        return self[coord][1]

    def coords(self) -> list:
        return sorted(self.entries)

    # knitting --------------------------------------------------------------
    def _rhs(self, m, j):
        """Middle-term product for the mesh ending at ``(m, j)`` and its dimension vector."""
        q = self.quiver
        mids = [self.entries[(m - 1, i)] for _, i in q.arrows_into(j)]
        mids += [self.entries[(m, k)] for _, k in q.arrows_out_of(j)]
        n = q.n
        prod = lp_prod([x for _, x in mids], n)
        dsum = [sum(d[v] for d, _ in mids) for v in range(n)]
        return prod + 1, dsum

    def extend_forward(self, steps: int = 1):
        for _ in range(steps):
            m = self.hi + 1
            for j in _topo(self.quiver):
                rhs, dsum = self._rhs(m, j)
                dprev, xprev = self.entries[(m - 1, j)]
                x = lp_div_exact(rhs, xprev)
                d = tuple(max(s, 0) - a for s, a in zip(dsum, dprev))
                self.entries[(m, j)] = (d, x)
            self.hi = m
        return self

    def extend_backward(self, steps: int = 1):
        for _ in range(steps):
            m = self.lo
            for j in _topo(self.quiver, reverse=True):
                # the mesh ending at (m, j) determines (m - 1, j)
                q = self.quiver
                mids = [self.entries[(m - 1, i)] for _, i in q.arrows_into(j)]
                mids += [self.entries[(m, k)] for _, k in q.arrows_out_of(j)]
                prod = lp_prod([x for _, x in mids], q.n) + 1
                dsum = [sum(d[v] for d, _ in mids) for v in range(q.n)]
                dcur, xcur = self.entries[(m, j)]
                x = lp_div_exact(prod, xcur)
                d = tuple(max(s, 0) - a for s, a in zip(dsum, dcur))
                self.entries[(m - 1, j)] = (d, x)
            self.lo = m - 1
        return self

    # lookup ----------------------------------------------------------------
    def variable_by_dimvec(self, d) -> LaurentPoly:
        d = tuple(int(x) for x in d)
        hits = [x for dd, x in self.entries.values() if dd == d]
        if not hits:
            raise NotKnitted(f"no entry with dimension vector {d} in slices {self.lo}..{self.hi}")
        return hits[0]

    def coord_of(self, d):
        d = tuple(int(x) for x in d)
        for c, (dd, _) in self.entries.items():
            if dd == d:
                return c
        raise NotKnitted(f"no entry with dimension vector {d} in slices {self.lo}..{self.hi}")

    def module(self, coord) -> ParametricFamily | None:
        """Explicit module at a coordinate; ``None`` on slice 0 (shifted projectives)."""
        m, j = coord
        if coord not in self.entries:
            raise NotKnitted(f"{coord} is outside the knitted window")
        if m == 0:
            return None
        if m > 0:
            return preprojective(self.quiver, j, m - 1)
        return preinjective(self.quiver, j, -m - 1)

    def dump_lines(self) -> list:
        out = []
        for m, j in self.coords():
            d, x = self.entries[(m, j)]
            dv = "(" + ",".join(str(v) for v in d) + ")"
            out.append(f"{m} {j} {dv} :: {x}")
        return out

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_json(),
            "window": [self.lo, self.hi],
            "entries": [
                {"slice": m, "vertex": j, "dims": list(self.entries[(m, j)][0]),
                 "value": self.entries[(m, j)][1].to_json()}
                for m, j in self.coords()
            ],
        }

    def check_mesh(self) -> bool:
        q = self.quiver
        for m in range(self.lo + 1, self.hi + 1):
            for j in q.vertices:
                rhs, _ = self._rhs(m, j)
                if self.entries[(m, j)][1] * self.entries[(m - 1, j)][1] != rhs:
                    return False
        return True

    def check_denominators(self) -> bool:
        return all(tuple(denominator_vector(x)) == d for d, x in self.entries.values())


def knit(q: Quiver, forward: int = 0, backward: int = 0) -> FriezeTable:
    if forward < 0 or backward < 0:
        raise QuiverError("knitting steps must be nonnegative")
    return FriezeTable(q).extend_forward(forward).extend_backward(backward)


def variable_by_dimvec(table: FriezeTable, d) -> LaurentPoly:
    return table.variable_by_dimvec(d)
