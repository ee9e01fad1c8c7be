"""Algebra inside a single tube: quasi-length recursion, the inductive
multiplication rule, Chebyshev products, basis change and delta-variables.

Socle indices are taken mod ``r`` with representatives ``1..r``; ``tau E_{i+1} = E_i``.
A label of quasi-length 0 is the zero module, whose variable is 1.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable

from .ccmap import cc_variable
from .laurent import LaurentPoly, lp_prod
from .quiver import Quiver
from .rep import BudgetExceeded, build_homogeneous, build_regular_simple, tube_simples

__all__ = [
    "TubeError", "RegularLabel", "FormalSum", "TubeContext", "tube_context",
    "homogeneous_context", "tube_variable", "tube_multiply", "multiply_case",
    "multiply_labels", "normalize", "chebyshev_product", "basis_change", "delta_variable",
    "DEFAULT_CAP", "RANK3_EXPANSIONS", "rank3_expansion",
]

DEFAULT_CAP = 12


class TubeError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class RegularLabel:
    """``E_socle[length]``; socle 0 marks the homogeneous tube (``M[length]``)."""

    socle: int
    length: int

    def __post_init__(self):
        if self.length < 0:
            raise TubeError(f"negative quasi-length in {self.socle},{self.length}")

    def __str__(self):
        if self.socle == 0:
            return f"M[{self.length}]"
        return f"E[{self.socle};{self.length}]"


def _wrap(i: int, r: int) -> int:
    return (i - 1) % r + 1


def _lab(r, i, n) -> RegularLabel:
    return RegularLabel(_wrap(i, r), n)


def _canon(labels: Iterable[RegularLabel]) -> tuple:
    return tuple(sorted(x for x in labels if x.length > 0))


class FormalSum:
    """Integer combination of products of regular labels."""

    __slots__ = ("terms", "_order")

    def __init__(self, terms=()):
        # products compare as multisets; the first written factor order is kept for rewriting
        acc: dict = {}
        order: dict = {}
        for coef, labels in terms:
            key = _canon(labels)
            acc[key] = acc.get(key, 0) + int(coef)
            order.setdefault(key, tuple(x for x in labels if x.length > 0))
        self.terms = {k: v for k, v in acc.items() if v}
        self._order = {k: order[k] for k in self.terms}

    @classmethod
    def single(cls, *labels) -> "FormalSum":
        return cls([(1, labels)])

    def __add__(self, other):
        return FormalSum(list(self.items()) + list(other.items()))

    def __neg__(self):
        return FormalSum([(-c, k) for c, k in self.items()])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return FormalSum([(c * other, k) for c, k in self.items()])
        return FormalSum([(c1 * c2, k1 + k2) for c1, k1 in self.items() for c2, k2 in other.items()])

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def items(self):
        """``(coef, labels)`` pairs, labels in written order."""
        return [(c, self._order[k]) for k, c in self.terms.items()]

    def __len__(self):
        return len(self.terms)

    def evaluate(self, ctx: "TubeContext") -> LaurentPoly:
        out = LaurentPoly.zero(ctx.nvars)
        for labels, c in self.terms.items():
            val = lp_prod([ctx.variable(x) for x in labels], ctx.nvars)
            out = out + val * c
        return out

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for labels, c in sorted(self.terms.items(), key=lambda kv: (-sum(x.length for x in kv[0]), kv[0])):
            body = "*".join(str(x) for x in self._order[labels]) if labels else "1"
            if c == 1:
                parts.append(("+", body))
            elif c == -1:
                parts.append(("-", body))
            else:
                parts.append(("+" if c > 0 else "-", f"{abs(c)}*{body}"))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    __str__ = to_text

    def __repr__(self):
        return f"FormalSum({self.to_text()!r})"

    def to_json(self) -> list:
        return [
            {"coef": c, "labels": [[x.socle, x.length] for x in labels]}
            for labels, c in sorted(self.terms.items())
        ]

    @classmethod
    def parse(cls, text: str) -> "FormalSum":
        src = text.replace(" ", "")
        if src in ("", "0"):
            return cls()
        terms = []
        for m in re.finditer(r"([+-]?)([^+-]+)", src):
            sign = -1 if m.group(1) == "-" else 1
            coef = 1
            labels = []
            for tok in m.group(2).split("*"):
                if re.fullmatch(r"\d+", tok):
                    coef *= int(tok)
                    continue
                hm = re.fullmatch(r"M\[(\d+)\]", tok)
                em = re.fullmatch(r"E\[(\d+);(\d+)\]", tok)
                if hm:
                    labels.append(RegularLabel(0, int(hm.group(1))))
                elif em:
                    labels.append(RegularLabel(int(em.group(1)), int(em.group(2))))
                else:
                    raise TubeError(f"cannot parse token {tok!r}")
            terms.append((sign * coef, labels))
        return cls(terms)


# contexts -------------------------------------------------------------------------

@dataclass(frozen=True)
class TubeContext:
    rank: int
    simple_variables: tuple
    provenance: str = ""
    cap: int = DEFAULT_CAP
    _memo: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if self.rank < 1 or len(self.simple_variables) != self.rank:
            raise TubeError("tube context needs one simple variable per socle index")

    @property
    def nvars(self) -> int:
        return self.simple_variables[0].rank

    def variable(self, label: RegularLabel) -> LaurentPoly:
        i = 1 if label.socle == 0 and self.rank == 1 else label.socle
        if not 1 <= i <= self.rank:
            raise TubeError(f"socle {label.socle} outside 1..{self.rank}")
        return tube_variable(self, i, label.length)


def tube_variable(ctx: TubeContext, i: int, n: int) -> LaurentPoly:
    """``X_{E_i[n]}`` from ``X_{E_i[n+1]} = X_{E_i[n]} X_{E_{i+n}} - X_{E_i[n-1]}``."""
    if n < 0:
        raise TubeError("negative quasi-length")
    if n > ctx.cap:
        raise TubeError(f"quasi-length {n} exceeds the cap {ctx.cap}")
    i = _wrap(i, ctx.rank)
    key = (i, n)
    hit = ctx._memo.get(key)
    if hit is not None:
        return hit
    if n == 0:
        val = LaurentPoly.one(ctx.nvars)
    elif n == 1:
        val = ctx.simple_variables[i - 1]
    else:
        val = (tube_variable(ctx, i, n - 1) * ctx.simple_variables[_wrap(i + n - 1, ctx.rank) - 1]
               - tube_variable(ctx, i, n - 2))
    ctx._memo.setdefault(key, val)
    return val


def tube_context(q: Quiver, tube: int, cap: int = DEFAULT_CAP) -> TubeContext:
    """Context for an exceptional tube of a preset, seeded by the CC values of its simples."""
    r = tube_simples(q)[tube - 1] if 1 <= tube <= len(tube_simples(q)) else 0
    if r == 0:
        raise TubeError(f"tube index {tube} out of range")
    simples = tuple(cc_variable(build_regular_simple(q, tube, i)) for i in range(1, r + 1))
    return TubeContext(r, simples, f"{q.preset}:{tube}", cap)


def homogeneous_context(q: Quiver, cap: int = DEFAULT_CAP) -> TubeContext:
    """Rank-1 context whose simple is ``X_delta``; its labels are ``M[n]``."""
    return TubeContext(1, (cc_variable(build_homogeneous(q, 1)),), f"{q.preset}:homogeneous", cap)


# the inductive multiplication rule ----------------------------------------------------

def _case_1_1(r, i, k, j, m, l):
    return [
        (_lab(r, i, (m + 1) * r + l + j - i), _lab(r, j, k + i - r - j)),
        (_lab(r, i, r + j - i - 1), _lab(r, k + i + 1, (m + 1) * r + l + j - k - i - 1)),
    ]


def _case_1_2(r, i, k, j, m, l):
    return [
        (_lab(r, j, m * r + k + i - j), _lab(r, i, l + j - i)),
        (_lab(r, j, m * r + i - j - 1), _lab(r, l + j + 1, k + i - l - j - 1)),
    ]


def _case_2_1(r, i, k, j, m, l):
    return [
        (_lab(r, i, j - i - 1), _lab(r, k + i + 1, m * r + l + j - k - i - 1)),
        (_lab(r, i, m * r + l + j - i), _lab(r, j, k + i - j)),
    ]


def _case_2_2(r, i, k, j, m, l):
    return [
        (_lab(r, j, (m + 1) * r + k + i - j), _lab(r, i, l + j - r - i)),
        (_lab(r, j, (m + 1) * r + i - j - 1), _lab(r, l + j + 1, k + r + i - l - j - 1)),
    ]


def _split(r, i, k, j, m, l):
    return [(_lab(r, i, k), _lab(r, j, m * r + l))]


# (name, applies-to, condition, right-hand side); first match wins within a branch
_CASES = (
    ("1.1", lambda i, j: j <= i, lambda r, i, k, j, m, l: k + i >= r + j, _case_1_1),
    ("1.2", lambda i, j: j <= i,
     lambda r, i, k, j, m, l: k + i < r + j and i <= l + j <= k + i - 1, _case_1_2),
    ("1.3", lambda i, j: j <= i, lambda *a: True, _split),
    ("2.1", lambda i, j: j > i, lambda r, i, k, j, m, l: k >= j - i, _case_2_1),
    ("2.2", lambda i, j: j > i,
     lambda r, i, k, j, m, l: k < j - i and i <= l + j - r <= k + i - 1, _case_2_2),
    ("2.3", lambda i, j: j > i, lambda *a: True, _split),
)


def _check_domain(r, i, k, j, m, l):
    if r < 1:
        raise TubeError("tube rank must be positive")
    if not (1 <= i <= r and 1 <= j <= r):
        raise TubeError(f"socle indices {i},{j} outside 1..{r}")
    if not (m >= 0 and 0 <= l <= r - 1):
        raise TubeError(f"need m >= 0 and 0 <= l <= r-1, got m={m}, l={l}")
    if not 1 <= k <= m * r + l:
        raise TubeError(f"need 1 <= k <= mr+l = {m * r + l}, got k={k}")


def multiply_case(r, i, k, j, m, l) -> str:
    """Which branch of the multiplication rule applies, e.g. ``"1.2"``."""
    _check_domain(r, i, k, j, m, l)
    for name, branch, cond, _ in _CASES:
        if branch(i, j) and cond(r, i, k, j, m, l):
            return name
    raise AssertionError("unreachable")


def tube_multiply(r, i, k, j, m, l) -> FormalSum:
    """``X_{E_i[k]} * X_{E_j[mr+l]}`` as a formal sum of products."""
    _check_domain(r, i, k, j, m, l)
    for name, branch, cond, rhs in _CASES:
        if branch(i, j) and cond(r, i, k, j, m, l):
            return FormalSum([(1, pair) for pair in rhs(r, i, k, j, m, l)])
    raise AssertionError("unreachable")


def multiply_labels(r: int, a: RegularLabel, b: RegularLabel) -> FormalSum:
    """Product of two labels of positive length, shorter one on the left (ties keep the order)."""
    if a.length > b.length:
        a, b = b, a
    if a.length == 0:
        return FormalSum.single(b)
    m, l = divmod(b.length, r)
    return tube_multiply(r, a.socle, a.length, b.socle, m, l)


def _is_split(r, a, b) -> bool:
    res = multiply_labels(r, a, b)
    return res == FormalSum.single(a, b)


def normalize(fs: FormalSum, r: int, max_steps: int = 10_000) -> FormalSum:
    """Rewrite with the multiplication rule until every product is a direct sum."""
    pending = list(fs.items())
    done: list = []
    steps = 0
    while pending:
        steps += 1
        if steps > max_steps:
            raise TubeError("normalization did not terminate")
        coef, labels = pending.pop()
        labels = list(labels)
        hit = None
        for x in range(len(labels)):
            for y in range(x + 1, len(labels)):
                if not _is_split(r, labels[x], labels[y]):
                    hit = (x, y)
                    break
            if hit:
                break
        if hit is None:
            done.append((coef, labels))
            continue
        x, y = hit
        rest = [lab for t, lab in enumerate(labels) if t not in hit]
        for c2, pair in multiply_labels(r, labels[x], labels[y]).items():
            pending.append((coef * c2, list(pair) + rest))
    return FormalSum(done)


# homogeneous tubes and basis change -------------------------------------------------

def chebyshev_product(m: int, n: int) -> FormalSum:
    """``X_{M[m]} X_{M[n]} = sum_t X_{M[m+n-2t]}``, ``t = 0..n``."""
    if n > m:
        m, n = n, m
    if n < 0:
        raise TubeError("quasi-lengths must be nonnegative")
    return FormalSum([(1, (RegularLabel(0, m + n - 2 * t),)) for t in range(n + 1)])


def basis_change(r: int, i: int, j: int, m: int) -> tuple:
    """Both sides of ``X_{E_i[mr]} = X_{E_j[mr]} + X_{E_{i+1}[mr-2]} - X_{E_{j+1}[mr-2]}``."""
    if not (1 <= i < j <= r):
        raise TubeError(f"need 1 <= i < j <= r, got i={i}, j={j}, r={r}")
    if m < 1:
        raise TubeError("m must be at least 1")
    n = m * r
    lhs = FormalSum.single(_lab(r, i, n))
    if n < 2:
        rhs = FormalSum.single(_lab(r, j, n))
    else:
        rhs = FormalSum([
            (1, (_lab(r, j, n),)), (1, (_lab(r, i + 1, n - 2),)), (-1, (_lab(r, j + 1, n - 2),)),
        ])
    return lhs, rhs


@lru_cache(maxsize=None)
def _delta_cached(q: Quiver, n: int, budget: int) -> LaurentPoly:
    if n == 0:
        return LaurentPoly.one(q.n)
    try:
        return cc_variable(build_homogeneous(q, n), budget=budget)
    except BudgetExceeded:
        if n == 1:
            raise
    x1 = _delta_cached(q, 1, budget)
    return _delta_cached(q, n - 1, budget) * x1 - _delta_cached(q, n - 2, budget)


def delta_variable(q: Quiver, n: int, budget: int = 10**7) -> LaurentPoly:
    """``X_{n delta}``: the CC value of ``M(lam)[n]``, or the Chebyshev recursion when
    the Grassmannians are too large to enumerate."""
    if n < 0:
        raise TubeError("n must be nonnegative")
    return _delta_cached(q, n, budget)


# rank-3 expansions -------------------------------------------------------------------

def _E(i, n):
    return RegularLabel(i, n)


def _sum(products) -> FormalSum:
    return FormalSum([(1, p) for p in products])


def _e2_3m1(m, n):
    return _sum([((_E(2, 1), _E(1, n + 3 * m - 3 * t)) if t % 2 == 0 else (_E(1, n + 3 * m - 3 * t),))
                 for t in range(2 * m + 1)])


def _e2_3m2(m, n):
    return _sum([((_E(2, n + 3 * m + 2 - 3 * t),) if t % 2 == 0 else (_E(2, 1), _E(2, n + 3 * m + 2 - 3 * t)))
                 for t in range(2 * m + 2)])


def _e2_3m3(m, n):
    prods = []
    for g in range(m + 1):
        s = 6 * g
        prods += [(_E(1, n + 3 * m + 3 - s),), (_E(3, n + 3 * m + 1 - s),), (_E(2, n + 3 * m - 1 - s),)]
    prods.append((_E(1, n - 3 * m - 3),))
    return _sum(prods)


def _e2_3m1_collapsed(m, n):
    return _sum([(_E(1, x),) for x in range(n + 3 * m + 1, n - 3 * m - 2, -2)])


def _e2_3m2_collapsed(m, n):
    return _sum([(_E(2, x),) for x in range(n + 3 * m + 2, n - 3 * m - 3, -2)])


def _e1_3m1(m, n):
    return _sum([((_E(1, 1), _E(1, n + 3 * m - 3 * t)) if t % 2 == 0 else (_E(1, n + 3 * m - 3 * t),))
                 for t in range(2 * m + 1)])


def _e1_3m2(m, n):
    return _sum([(_E(1, 2), _E(1, n + 3 * m - 6 * t)) for t in range(m + 1)])


def _e1_3m3(m, n):
    return _sum([((_E(1, n + 3 * m + 3 - 3 * t),) if t % 2 == 0 else (_E(2, 1), _E(1, n + 3 * m + 3 - 3 * t)))
                 for t in range(2 * m + 3)])


# name -> (left socle, left length offset, admissible(m, n), right-hand side)
RANK3_EXPANSIONS = {
    "E2[3m+1]*E1[n]": (2, 1, lambda m, n: n >= 3 * m + 1, _e2_3m1),
    "E2[3m+2]*E1[n]": (2, 2, lambda m, n: n >= 3 * m + 2, _e2_3m2),
    "E2[3m+3]*E1[n]": (2, 3, lambda m, n: n >= 3 * m + 3, _e2_3m3),
    "E2[3m+1]*E1[n], n=1 mod 3": (2, 1, lambda m, n: n >= 3 * m + 1 and n % 3 == 1, _e2_3m1_collapsed),
    "E2[3m+2]*E1[n], n=1 mod 3": (2, 2, lambda m, n: n >= 3 * m + 2 and n % 3 == 1, _e2_3m2_collapsed),
    "E2[3m+3]*E1[n], n=1 mod 3": (2, 3, lambda m, n: n >= 3 * m + 3 and n % 3 == 1, _e2_3m3),
    "E1[3m+1]*E1[n]": (1, 1, lambda m, n: n >= 3 * m + 1, _e1_3m1),
    "E1[3m+2]*E1[n]": (1, 2, lambda m, n: n >= 3 * m + 2, _e1_3m2),
    "E1[3m+3]*E1[n]": (1, 3, lambda m, n: n >= 3 * m + 3, _e1_3m3),
}


def rank3_expansion(name: str, m: int, n: int) -> tuple:
    """``(lhs, rhs)`` of a displayed rank-3 product expansion."""
    try:
        socle, off, ok, rhs = RANK3_EXPANSIONS[name]
    except KeyError:
        raise TubeError(f"unknown expansion {name!r}") from None
    if m < 0 or not ok(m, n):
        raise TubeError(f"{name} is not stated for m={m}, n={n}")
    return FormalSum.single(_E(socle, 3 * m + off), _E(1, n)), rhs(m, n)
