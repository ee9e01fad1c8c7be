"""Sparse Laurent polynomials with integer coefficients.

A :class:`LaurentPoly` maps exponent tuples (possibly negative) to nonzero
Python ints.  Values are immutable; every operation returns a new object.
"""
from __future__ import annotations

import heapq
import json
import re
from typing import Iterable, Mapping


class LaurentError(ValueError):
    pass


class RankMismatch(LaurentError):
    pass


class InexactDivision(LaurentError):
    """Raised when ``a / b`` has no Laurent-polynomial quotient over the integers."""


class ZeroPolynomial(LaurentError):
    pass


class LaurentPoly:
    __slots__ = ("rank", "_terms", "_hash")

    def __init__(self, rank: int, terms: Mapping[tuple, int] | None = None):
        self.rank = int(rank)
        clean = {}
        if terms:
            for exp, coef in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != self.rank:
                    raise RankMismatch(f"exponent {exp} has length {len(exp)}, expected {self.rank}")
                if coef:
                    clean[exp] = clean.get(exp, 0) + int(coef)
                    if not clean[exp]:
                        del clean[exp]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, rank: int, terms: dict) -> "LaurentPoly":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj.rank = rank
        obj._terms = terms
        obj._hash = None
        return obj

    # constructors -----------------------------------------------------
    @classmethod
    def zero(cls, rank: int) -> "LaurentPoly":
        return cls._raw(rank, {})

    @classmethod
    def one(cls, rank: int) -> "LaurentPoly":
        return cls._raw(rank, {(0,) * rank: 1})

    @classmethod
    def constant(cls, rank: int, c: int) -> "LaurentPoly":
        return cls(rank, {(0,) * rank: c})

    @classmethod
    def monomial(cls, exp: Iterable[int], coef: int = 1) -> "LaurentPoly":
        exp = tuple(int(e) for e in exp)
        return cls(len(exp), {exp: coef})

    @classmethod
    def var(cls, rank: int, i: int) -> "LaurentPoly":
        """The variable ``x_i`` (1-based)."""
        exp = [0] * rank
        exp[i - 1] = 1
        return cls._raw(rank, {tuple(exp): 1})

    # accessors --------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def coefficient(self, exp) -> int:
        return self._terms.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly.constant(self.rank, other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.rank == other.rank and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rank, frozenset(self._terms.items())))
        return self._hash

    # arithmetic -------------------------------------------------------
    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly.constant(self.rank, other)
        if not isinstance(other, LaurentPoly):
            raise TypeError(f"cannot combine LaurentPoly with {type(other).__name__}")
        if other.rank != self.rank:
            raise RankMismatch(f"rank {self.rank} vs {other.rank}")
        return other

    def __add__(self, other):
        return lp_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.rank, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return lp_add(self, -self._coerce(other))

    def __rsub__(self, other):
        return lp_add(self._coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, int):
            if other == 0:
                return LaurentPoly.zero(self.rank)
            return LaurentPoly._raw(self.rank, {e: c * other for e, c in self._terms.items()})
        return lp_mul(self, self._coerce(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are only defined for monomials; use monomial()")
        result = LaurentPoly.one(self.rank)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __floordiv__(self, other):
        return lp_div_exact(self, self._coerce(other))

    def shift(self, exp) -> "LaurentPoly":
        """Multiply by the monomial ``x^exp``."""
        exp = tuple(exp)
        return LaurentPoly._raw(
            self.rank,
            {tuple(a + b for a, b in zip(e, exp)): c for e, c in self._terms.items()},
        )

    # ordering helpers -------------------------------------------------
    def sorted_terms(self):
        """Terms in lexicographically descending exponent order."""
        return sorted(self._terms.items(), reverse=True)

    def leading_exponent(self):
        return max(self._terms)

    def min_exponents(self) -> tuple:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no exponents")
        return tuple(min(col) for col in zip(*self._terms))

    def max_exponents(self) -> tuple:
        if not self._terms:
            raise ZeroPolynomial("zero polynomial has no exponents")
        return tuple(max(col) for col in zip(*self._terms))

    # serialization ----------------------------------------------------
    def to_text(self) -> str:
        return format_laurent(self)

    def __str__(self):
        return format_laurent(self)

    def __repr__(self):
        return f"LaurentPoly({self.rank}, {format_laurent(self)!r})"

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "terms": [{"exp": list(e), "coef": str(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(data["rank"], {tuple(t["exp"]): int(t["coef"]) for t in data["terms"]})

    @classmethod
    def parse(cls, text: str, rank: int) -> "LaurentPoly":
        return parse_laurent(text, rank)


def lp_add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} vs {b.rank}")
    if len(a._terms) < len(b._terms):
        a, b = b, a
    out = dict(a._terms)
    for e, c in b._terms.items():
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return LaurentPoly._raw(a.rank, out)


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} vs {b.rank}")
    if len(a._terms) < len(b._terms):
        a, b = b, a
    out: dict = {}
    get = out.get
    bt = list(b._terms.items())
    for ea, ca in a._terms.items():
        for eb, cb in bt:
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = get(e, 0) + ca * cb
    return LaurentPoly._raw(a.rank, {e: c for e, c in out.items() if c})


def lp_prod(factors: Iterable[LaurentPoly], rank: int) -> LaurentPoly:
    result = LaurentPoly.one(rank)
    for f in factors:
        result = lp_mul(result, f)
    return result


def lp_div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Exact quotient ``a / b`` by lex-leading-term elimination.

    Raises :class:`InexactDivision` as soon as a step is impossible: a
    non-divisible coefficient, or a quotient term outside the exponent box
    forced by the coordinatewise extremes of ``a`` and ``b``.
    """
    if a.rank != b.rank:
        raise RankMismatch(f"rank {a.rank} vs {b.rank}")
    if b.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if a.is_zero():
        return LaurentPoly.zero(a.rank)
    lo = tuple(x - y for x, y in zip(a.min_exponents(), b.min_exponents()))
    hi = tuple(x - y for x, y in zip(a.max_exponents(), b.max_exponents()))
    if any(l > h for l, h in zip(lo, hi)):
        raise InexactDivision("Newton box of the quotient is empty")

    lead_b = b.leading_exponent()
    lead_c = b._terms[lead_b]
    b_terms = list(b._terms.items())
    rem = dict(a._terms)
    heap = [tuple(-x for x in e) for e in rem]
    heapq.heapify(heap)
    quotient: dict = {}
    while rem:
        key = heapq.heappop(heap)
        e = tuple(-x for x in key)
        c = rem.get(e)
        if not c:
            continue
        q, r = divmod(c, lead_c)
        if r:
            raise InexactDivision(f"coefficient {c} not divisible by {lead_c}")
        qe = tuple(x - y for x, y in zip(e, lead_b))
        if any(v < l or v > h for v, l, h in zip(qe, lo, hi)):
            raise InexactDivision(f"quotient term x^{qe} outside the admissible box")
        quotient[qe] = q
        for eb, cb in b_terms:
            t = tuple(x + y for x, y in zip(qe, eb))
            v = rem.get(t, 0) - q * cb
            if v:
                if t not in rem:
                    heapq.heappush(heap, tuple(-x for x in t))
                rem[t] = v
            else:
                rem.pop(t, None)
    return LaurentPoly._raw(a.rank, quotient)


def denominator_vector(p: LaurentPoly) -> tuple:
    """``d`` with ``d_i = -min_i(exponent)``, i.e. ``p = N(x) / x^d`` with ``N`` coprime to every ``x_i``."""
    if p.is_zero():
        raise ZeroPolynomial("denominator vector of the zero polynomial")
    return tuple(-m for m in p.min_exponents())


def numerator_constant_term(p: LaurentPoly) -> int:
    d = denominator_vector(p)
    return p.coefficient(tuple(-x for x in d))


# text format ----------------------------------------------------------

def _format_monomial(exp) -> str:
    parts = []
    for i, e in enumerate(exp, start=1):
        if e == 0:
            continue
        parts.append(f"x{i}" if e == 1 else f"x{i}^{e}")
    return "*".join(parts)


def format_laurent(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    chunks = []
    for idx, (exp, coef) in enumerate(p.sorted_terms()):
        mono = _format_monomial(exp)
        mag = abs(coef)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if idx == 0:
            chunks.append(("-" if coef < 0 else "") + body)
        else:
            chunks.append((" - " if coef < 0 else " + ") + body)
    return "".join(chunks)


_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_FACTOR = re.compile(r"^x(\d+)(?:\^(-?\d+))?$")


def parse_laurent(text: str, rank: int) -> LaurentPoly:
    """Parse the canonical text format (also tolerant of extra whitespace)."""
    s = text.strip()
    if s in ("", "0"):
        return LaurentPoly.zero(rank)
    # split into signed terms; a '-' directly after '^' belongs to an exponent
    tokens = []
    sign = 1
    buf = ""
    for ch in s:
        if ch in "+-" and not buf.rstrip().endswith("^"):
            if buf.strip():
                tokens.append((sign, buf.strip()))
                buf = ""
            sign = -1 if ch == "-" else 1
        else:
            buf += ch
    if buf.strip():
        tokens.append((sign, buf.strip()))
    terms: dict = {}
    for sgn, body in tokens:
        coef = 1
        exp = [0] * rank
        for factor in body.replace(" ", "").split("*"):
            if not factor:
                raise LaurentError(f"empty factor in {body!r}")
            if factor.isdigit():
                coef *= int(factor)
                continue
            m = _FACTOR.match(factor)
            if not m:
                raise LaurentError(f"cannot parse factor {factor!r}")
            idx = int(m.group(1))
            if not 1 <= idx <= rank:
                raise LaurentError(f"variable x{idx} out of range for rank {rank}")
            exp[idx - 1] += int(m.group(2)) if m.group(2) else 1
        key = tuple(exp)
        terms[key] = terms.get(key, 0) + sgn * coef
    return LaurentPoly(rank, terms)
