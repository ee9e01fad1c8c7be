"""A Z-basis of the cluster algebra restricted to a box of dimension vectors,
and triangular expansion in it.

Elements are indexed by (extended) dimension vectors.  They are

* rigid objects: compatible direct sums of shifted projectives, transjective
  modules and exceptional regular modules;
* ``T + R`` with ``T`` an indecomposable regular module with self-extensions and
  ``R`` a regular rigid module with ``Ext_C(T, R) = 0``.

Compatibility of two modules means ``Ext^1`` vanishes in both directions; a
shift ``TP_i`` is compatible with a module ``M`` iff ``M_i = 0``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .ccmap import cc_variable
from .frieze import knit
from .laurent import LaurentPoly, denominator_vector, lp_prod, numerator_constant_term
from .quiver import Quiver, lt
from .rep import build_homogeneous, build_tube_module, ext_dim, simple, tube_simples
from .tube import delta_variable, tube_context, tube_variable

__all__ = [
    "BasisError", "DuplicateDimVector", "MissingBasisElement", "NonTerminating",
    "Summand", "BasisElement", "BasisTable", "Expansion", "build_table", "expand",
    "verify_monomial_triangularity", "simple_variables", "EXT_PRIME",
]

EXT_PRIME = 101
STEP_CAP = 10**5


class BasisError(ValueError):
    pass


class DuplicateDimVector(BasisError):
    pass


class MissingBasisElement(BasisError, KeyError):
    def __init__(self, d):
        super().__init__(f"no basis element with dimension vector {tuple(d)} in the table")
        self.dimvec = tuple(d)


class NonTerminating(BasisError):
    pass


@dataclass(eq=False)
class Summand:
    """An indecomposable object of the cluster category."""

    kind: str  # shift | transjective | regular | homogeneous
    label: str
    dims: tuple
    rigid: bool
    value: LaurentPoly
    family: object = None
    shift_vertex: int = 0
    tube: int = 0

    @cached_property
    def rep(self):
        return None if self.family is None else self.family.instantiate(EXT_PRIME, 2)


def _compatible(a: Summand, b: Summand) -> bool:
    if a.kind == "shift" and b.kind == "shift":
        return True
    if a.kind == "shift":
        return b.dims[a.shift_vertex - 1] == 0
    if b.kind == "shift":
        return a.dims[b.shift_vertex - 1] == 0
    if a is b:
        return a.rigid
    # homogeneous modules do not extend with anything outside their own tube
    if a.kind == "homogeneous" and b.kind == "regular" or b.kind == "homogeneous" and a.kind == "regular":
        return True
    x, y = a.rep, b.rep
    return ext_dim(x, y) == 0 and ext_dim(y, x) == 0


@dataclass(frozen=True)
class BasisElement:
    dimvec: tuple
    kind: str
    value: LaurentPoly
    description: tuple

    def label(self) -> str:
        return " + ".join(self.description) if self.description else "0"


@dataclass
class Expansion:
    terms: list  # (coef, dimvec)
    kinds: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {d: c for c, d in self.terms}

    def to_json(self) -> list:
        return [{"coef": c, "dim": list(d), "kind": self.kinds.get(d, "")} for c, d in self.terms]

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        return "\n".join(f"{c:+d} X{tuple(d)}" for c, d in self.terms)

    def leading(self):
        return self.terms[0] if self.terms else None


def _in_box(d, lo, hi):
    return all(a <= x <= b for x, a, b in zip(d, lo, hi))


class BasisTable:
    def __init__(self, quiver: Quiver, lo, hi, elements: dict):
        self.quiver = quiver
        self.lo, self.hi = tuple(lo), tuple(hi)
        self.elements = elements
        # every T + R offered with T in a non-homogeneous tube, chosen or not: d -> [(label, value)]
        self.alternatives: dict = {}

    def __contains__(self, d):
        return tuple(d) in self.elements

    def __getitem__(self, d) -> BasisElement:
        d = tuple(int(x) for x in d)
        hit = self.elements.get(d)
        if hit is None:
            hit = self._shifted(d)
        return hit

    def _shifted(self, d) -> BasisElement:
        # Below the box: negative coordinates can only come from shifts TP_i, which
        # force the module part to vanish at i.  A module vanishing somewhere is
        # not sincere, hence rigid, so the element is x^{d-} times the one at d+.
        pos = tuple(max(x, 0) for x in d)
        if pos == d or pos not in self.elements:
            raise MissingBasisElement(d)
        base = self.elements[pos]
        neg = tuple(max(-x, 0) for x in d)
        shifts = tuple(f"{k}*TP:{i + 1}" if k > 1 else f"TP:{i + 1}" for i, k in enumerate(neg) if k)
        kind = "transjective-monomial" if base.kind == "transjective-monomial" else "mixed"
        return BasisElement(d, kind, base.value * LaurentPoly.monomial(neg), shifts + base.description)

    def __len__(self):
        return len(self.elements)

    def dimvecs(self) -> list:
        return sorted(self.elements, key=lambda d: (sum(d), d))

    def dump_lines(self) -> list:
        out = []
        for d in self.dimvecs():
            el = self.elements[d]
            out.append(f"({','.join(map(str, d))}) {el.kind} {el.label()} :: {el.value}")
        return out

    def to_json(self) -> dict:
        return {
            "quiver": self.quiver.to_json(),
            "box": [list(self.lo), list(self.hi)],
            "elements": [
                {"dim": list(d), "kind": self.elements[d].kind,
                 "description": list(self.elements[d].description),
                 "value": self.elements[d].value.to_json()}
                for d in self.dimvecs()
            ],
        }

    def check(self) -> list:
        """Dimension vectors whose element fails the denominator or constant-term check."""
        bad = []
        for d, el in self.elements.items():
            if tuple(denominator_vector(el.value)) != d or numerator_constant_term(el.value) != 1:
                bad.append(d)
        return bad


# catalogue of indecomposables ---------------------------------------------------------

def _transjective(q: Quiver, hi) -> list:
    """Preprojective and preinjective modules with dimension vector <= hi."""
    fits = lambda d: all(0 <= x <= h for x, h in zip(d, hi))
    out = []
    table = knit(q, 1, 1)
    for direction in (1, -1):
        m = direction
        misses = 0
        while misses < 2:
            if direction > 0 and m > table.hi:
                table.extend_forward(1)
            if direction < 0 and m < table.lo:
                table.extend_backward(1)
            found = False
            for j in q.vertices:
                d, x = table[(m, j)]
                if fits(d):
                    found = True
                    lbl = f"frieze:{m},{j}"
                    out.append(Summand("transjective", lbl, d, True, x, table.module((m, j))))
            misses = 0 if found else misses + 1
            m += direction
    return out


def _regular(q: Quiver, hi, delta_budget) -> list:
    fits = lambda d: all(0 <= x <= h for x, h in zip(d, hi))
    out = []
    if q.preset != "kronecker":
        for k, r in enumerate(tube_simples(q), start=1):
            ctx = tube_context(q, k, cap=64)
            for i in range(1, r + 1):
                n = 1
                while True:
                    fam = build_tube_module(q, k, i, n)
                    if not fits(fam.dims):
                        break
                    out.append(Summand("regular", f"E:{k},{i},{n}", fam.dims, n < r,
                                       tube_variable(ctx, i, n), fam, tube=k))
                    n += 1
    delta = q.delta
    n = 1
    while fits(tuple(n * x for x in delta)):
        fam = build_homogeneous(q, n)
        out.append(Summand("homogeneous", f"delta:n={n}", fam.dims, False,
                           delta_variable(q, n, delta_budget), fam))
        n += 1
    return out


def _shifts(q: Quiver, lo) -> list:
    out = []
    for i in q.vertices:
        if lo[i - 1] < 0:
            d = tuple(-1 if v == i else 0 for v in q.vertices)
            out.append(Summand("shift", f"TP:{i}", d, True, LaurentPoly.var(q.n, i), shift_vertex=i))
    return out


# table construction ----------------------------------------------------------------------

def _kind(parts, delta) -> str:
    kinds = {p.kind for p in parts}
    if not parts or kinds <= {"shift", "transjective"}:
        return "transjective-monomial"
    if kinds == {"regular"} and all(p.rigid for p in parts):
        return "regular-exceptional-sum"
    if len(parts) == 1 and not parts[0].rigid:
        d = parts[0].dims
        k = d[0] // delta[0]
        if tuple(k * x for x in delta) == d:
            return "delta-level"
    return "mixed"


def build_table(q: Quiver, lo, hi, delta_budget: int = 10**7) -> BasisTable:
    """Basis elements for all dimension vectors ``d`` with ``lo <= d <= hi``."""
    lo, hi = tuple(int(x) for x in lo), tuple(int(x) for x in hi)
    if len(lo) != q.n or len(hi) != q.n or any(a > b for a, b in zip(lo, hi)):
        raise BasisError(f"bad box {lo}..{hi}")
    mod_hi = tuple(max(h, 0) for h in hi)
    rigid = _shifts(q, lo) + _transjective(q, mod_hi)
    regular = _regular(q, mod_hi, delta_budget)
    rigid += [s for s in regular if s.rigid]
    wild = [s for s in regular if not s.rigid]
    cands = rigid
    ncand = len(cands)
    compat = [[_compatible(a, b) for b in cands] for a in cands]

    objects: list = []  # (parts,)

    def total(mod, sh):
        return tuple(m - s for m, s in zip(mod, sh))

    def dfs(start, parts, mod, sh, idx=()):
        objects.append((tuple(parts), total(mod, sh)))
        for c in range(start, ncand):
            s = cands[c]
            if not compat[c][c] or not all(compat[c][k] for k in idx):
                continue
            if s.kind == "shift":
                v = s.shift_vertex - 1
                if sh[v] + 1 > -lo[v]:
                    continue
                nsh = list(sh)
                nsh[v] += 1
                dfs(c, parts + [s], mod, tuple(nsh), idx + (c,))
            else:
                nmod = tuple(a + b for a, b in zip(mod, s.dims))
                if any(x > h for x, h in zip(nmod, mod_hi)):
                    continue
                dfs(c, parts + [s], nmod, sh, idx + (c,))

    zero = (0,) * q.n
    dfs(0, [], zero, zero)

    chosen: dict = {}  # d -> (priority, parts)

    def offer(d, prio, parts):
        if not _in_box(d, lo, hi):
            return
        old = chosen.get(d)
        if old is None:
            chosen[d] = (prio, parts)
            return
        if old[0][0] == 0 and prio[0] == 0:
            raise DuplicateDimVector(
                f"rigid objects {_describe(old[1])} and {_describe(parts)} share dimension vector {d}")
        if {old[0][0], prio[0]} & {0} and (_has_nonregular(old[1]) or _has_nonregular(parts)):
            raise DuplicateDimVector(
                f"non-regular {_describe(old[1])} and regular {_describe(parts)} share dimension vector {d}")
        if prio < old[0]:
            chosen[d] = (prio, parts)

    regular_rigid = []
    for parts, d in objects:
        offer(d, (0,), parts)
        if all(p.kind == "regular" for p in parts):
            regular_rigid.append(parts)

    alternatives: dict = {}
    for t_idx, t in enumerate(wild):
        homog = t.kind == "homogeneous"
        for r_idx, parts in enumerate(regular_rigid):
            dims = tuple(a + sum(p.dims[v] for p in parts) for v, a in enumerate(t.dims))
            if any(x > h for x, h in zip(dims, hi)):
                continue
            if not all(_compatible(t, p) for p in parts):
                continue
            offer(dims, (2 if homog else 1, t_idx, r_idx), (t,) + tuple(parts))
            if not homog and _in_box(dims, lo, hi):
                alternatives.setdefault(dims, []).append((t,) + tuple(parts))

    elements = {}
    n = q.n
    for d, (prio, parts) in chosen.items():
        value = lp_prod([p.value for p in parts], n) if parts else LaurentPoly.one(n)
        desc = tuple(_collapse(parts))
        elements[d] = BasisElement(d, _kind(list(parts), q.delta), value, desc)
    table = BasisTable(q, lo, hi, elements)
    table.alternatives = {
        d: [(_describe(parts), lp_prod([p.value for p in parts], n)) for parts in alts]
        for d, alts in alternatives.items()
    }
    bad = table.check()
    if bad:
        raise BasisError(f"elements fail the denominator/constant-term checks at {bad[:5]}")
    return table


def _has_nonregular(parts) -> bool:
    return any(p.kind in ("shift", "transjective") for p in parts)


def _describe(parts) -> str:
    return " + ".join(_collapse(parts)) or "0"


def _collapse(parts) -> list:
    out, seen = [], {}
    for p in parts:
        seen[p.label] = seen.get(p.label, 0) + 1
    for lbl, k in seen.items():
        out.append(lbl if k == 1 else f"{k}*{lbl}")
    return out


# expansion -------------------------------------------------------------------------------

def expand(p: LaurentPoly, table: BasisTable, cap: int = STEP_CAP) -> Expansion:
    """Triangular elimination: peel off the basis element whose index is the
    largest (coordinate sum, then lexicographic) candidate denominator."""
    rem = p
    coeffs: dict = {}
    steps = 0
    while not rem.is_zero():
        steps += 1
        if steps > cap:
            raise NonTerminating(f"expansion did not finish in {cap} steps")
        d = max((tuple(-x for x in e) for e in rem.terms), key=lambda v: (sum(v), v))
        c = rem.coefficient(tuple(-x for x in d))
        el = table[d]
        rem = rem - el.value * c
        coeffs[d] = coeffs.get(d, 0) + c
    terms = sorted(((c, d) for d, c in coeffs.items() if c), key=lambda t: (-sum(t[1]), tuple(-x for x in t[1])))
    return Expansion(terms, {d: table[d].kind for _, d in terms})


def simple_variables(q: Quiver) -> list:
    return [cc_variable(simple(q, i)) for i in q.vertices]


def verify_monomial_triangularity(table: BasisTable, d, simples=None) -> dict:
    """Expand ``prod X_{S_i}^{d_i+} * prod x_i^{d_i-}`` and check it leads at ``d``."""
    q = table.quiver
    d = tuple(int(x) for x in d)
    simples = simples or simple_variables(q)
    factors = []
    for i, x in enumerate(d):
        if x > 0:
            factors.append(simples[i] ** x)
        elif x < 0:
            factors.append(LaurentPoly.var(q.n, i + 1) ** (-x))
    mono = lp_prod(factors, q.n)
    exp = expand(mono, table)
    coeffs = exp.as_dict()
    leading = coeffs.get(d, 0) == 1
    lower = all(dd == d or lt(dd, d) for dd in coeffs)
    return {"dim": d, "leading_one": leading, "lower_terms_below": lower, "ok": leading and lower,
            "expansion": exp}
