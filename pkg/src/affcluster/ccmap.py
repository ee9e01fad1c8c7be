"""The Caldero-Chapoton map on decorated objects of the cluster category."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .laurent import LaurentPoly, denominator_vector, lp_prod
from .quiver import Quiver
from .rep import DEFAULT_BUDGET, as_family, check_budget, euler_char

__all__ = ["DecoratedObject", "cc_variable", "cc_object", "cc_exponent", "CCError"]


class CCError(ValueError):
    pass


def cc_exponent(q: Quiver, d, e) -> tuple:
    """Exponent ``eR + (d - e)R^T - d`` of the Grassmannian term for ``e``."""
    r = q.arrow_matrix
    e = np.asarray(e, dtype=np.int64)
    d = np.asarray(d, dtype=np.int64)
    return tuple(int(x) for x in e @ r + (d - e) @ r.T - d)


_CACHE: dict = {}


def cc_variable(m, *, lam: int = 2, budget: int = DEFAULT_BUDGET, stride: int = 1, offset: int = 0,
                start: int = 5) -> LaurentPoly:
    """``X_M = sum_e chi(Gr_e(M)) x^(eR + (d-e)R^T - d)``."""
    fam = as_family(m)
    key = (fam.key, lam if fam.parametric else None, stride, offset, start)
    hit = _CACHE.get(key)
    if hit is not None:
        return hit
    q, d = fam.quiver, fam.dims
    boxes = list(itertools.product(*(range(x + 1) for x in d)))
    # fail fast before any counting if one of the samples is out of budget
    for e in boxes:
        check_budget(fam, e, lam=lam, budget=budget, stride=stride, offset=offset, start=start)
    terms: dict = {}
    for e in boxes:
        chi = euler_char(fam, e, lam=lam, budget=budget, stride=stride, offset=offset, start=start)
        if chi:
            exp = cc_exponent(q, d, e)
            terms[exp] = terms.get(exp, 0) + chi
    out = LaurentPoly(q.n, terms)
    _CACHE[key] = out
    return out


@dataclass(frozen=True)
class DecoratedObject:
    """``M ⊕ (⊕_i TP_i^{s_i})`` with ``M`` a direct sum of modules."""

    quiver: Quiver
    summands: tuple = ()
    shifts: tuple = ()
    label: str = field(default="", compare=False)

    def __post_init__(self):
        shifts = tuple(int(s) for s in self.shifts) or (0,) * self.quiver.n
        if len(shifts) != self.quiver.n or any(s < 0 for s in shifts):
            raise CCError(f"bad shift multiplicities {shifts}")
        object.__setattr__(self, "shifts", shifts)
        object.__setattr__(self, "summands", tuple(as_family(s) for s in self.summands))

    @property
    def module_dims(self) -> tuple:
        d = [0] * self.quiver.n
        for s in self.summands:
            for v, x in enumerate(s.dims):
                d[v] += x
        return tuple(d)

    @property
    def extended_dims(self) -> tuple:
        return tuple(a - b for a, b in zip(self.module_dims, self.shifts))

    def is_zero(self) -> bool:
        return not any(self.module_dims) and not any(self.shifts)

    def well_formed(self) -> bool:
        """``Hom(P_i, M) = 0`` whenever ``TP_i`` occurs."""
        d = self.module_dims
        return all(not (s and d[i]) for i, s in enumerate(self.shifts))

    def __add__(self, other: "DecoratedObject") -> "DecoratedObject":
        if other.quiver != self.quiver:
            raise CCError("objects over different quivers")
        shifts = tuple(a + b for a, b in zip(self.shifts, other.shifts))
        lbl = " + ".join(x for x in (self.label, other.label) if x)
        return DecoratedObject(self.quiver, self.summands + other.summands, shifts, lbl)


def shift_object(q: Quiver, i: int, mult: int = 1) -> DecoratedObject:
    s = [0] * q.n
    s[i - 1] = mult
    return DecoratedObject(q, (), tuple(s), f"TP:{i}")


def module_object(m, label: str = "") -> DecoratedObject:
    fam = as_family(m)
    return DecoratedObject(fam.quiver, (fam,), (), label)


def cc_object(o: DecoratedObject, **kw) -> LaurentPoly:
    """Product of the summands' values times ``x^shifts``."""
    n = o.quiver.n
    factors = [cc_variable(s, **kw) for s in o.summands]
    factors.append(LaurentPoly.monomial(o.shifts))
    return lp_prod(factors, n)


def check_denominator(o: DecoratedObject, value: LaurentPoly | None = None) -> bool:
    value = cc_object(o) if value is None else value
    return tuple(denominator_vector(value)) == o.extended_dims
