"""Command-line front door.

    affcluster var --preset d4 --object delta:n=1
    affcluster gr --preset kronecker --object S:2 --dim 0,1
    affcluster frieze --preset ann:2 --forward 3 --backward 3
    affcluster tube-mul --rank 3 --left 1,1 --right 2,0,1
    affcluster delta --preset kronecker --n 3
    affcluster basis --preset kronecker --lo -2,-2 --hi 2,2
    affcluster expand --preset kronecker --lo -2,-2 --hi 3,3 --object S:1 --object S:2
    affcluster verify --all

Exit codes: 0 success, 1 domain error, 2 invariant breach, 64 usage error.
"""
from __future__ import annotations

import argparse
import itertools
import json
import re
import sys
from dataclasses import dataclass

from .basis import STEP_CAP, BasisError, DuplicateDimVector, NonTerminating, build_table, expand
from .ccmap import CCError, cc_variable
from .counting import DEFAULT_BUDGET, BudgetExceeded
from .frieze import NotKnitted, knit
from .laurent import LaurentError, LaurentPoly, denominator_vector, format_laurent, lp_prod, parse_laurent
from .quiver import Quiver, QuiverError, build_preset
from .rep import (
    NonPolynomialCount, ParametricFamily, Representation, RepError, as_family, build_homogeneous,
    build_tube_module, counting_polynomial, direct_sum, simple, tube_simples,
)
from .tube import (
    DEFAULT_CAP, FormalSum, TubeError, delta_variable, multiply_case, normalize,
    tube_context, tube_multiply, tube_variable,
)

EXIT_OK, EXIT_DOMAIN, EXIT_BREACH, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class InvariantBreach(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *a, **kw):
        super().__init__(*a, **kw)
        # let vectors such as -2,-2 through as values
        self._negative_number_matcher = re.compile(r"^-\d[\d,-]*$")

    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# object specs ---------------------------------------------------------------------------

@dataclass
class Resolved:
    label: str
    dims: tuple  # extended dimension vector
    value: LaurentPoly
    family: ParametricFamily | None = None


def _ints(text: str, what: str) -> list:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"{what} must be comma-separated integers, got {text!r}") from None


def _split_sum(body: str) -> list:
    """``(a)+(b)+...`` into its parenthesised parts."""
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
            if depth == 1:
                cur = ""
                continue
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise UsageError(f"unbalanced parentheses in {body!r}")
            if depth == 0:
                parts.append(cur)
                continue
        elif depth == 0:
            if ch != "+" and not ch.isspace():
                raise UsageError(f"sum parts must be parenthesised: {body!r}")
            continue
        cur += ch
    if depth:
        raise UsageError(f"unbalanced parentheses in {body!r}")
    if not parts:
        raise UsageError("empty sum")
    return parts


def _family_sum(fams: list) -> ParametricFamily:
    q = fams[0].quiver
    dims = tuple(sum(f.dims[v] for f in fams) for v in range(q.n))
    return ParametricFamily(
        q, dims, lambda p, lam: direct_sum(*(f.instantiate(p, lam) for f in fams)),
        ("sum",) + tuple(f.key for f in fams),
        parametric=any(f.parametric for f in fams),
        excluded=frozenset().union(*(f.excluded for f in fams)),
    )


class Resolver:
    def __init__(self, q: Quiver, args):
        self.q = q
        self.kw = dict(lam=args.lam, budget=args.budget, stride=args.stride, offset=args.offset,
                       start=args.prime_start)
        self.cap = args.cap
        self._frieze = None

    def cc(self, fam):
        return cc_variable(fam, **self.kw)

    def frieze(self, m: int):
        if self._frieze is None:
            self._frieze = knit(self.q)
        t = self._frieze
        if m > t.hi:
            t.extend_forward(m - t.hi)
        if m < t.lo:
            t.extend_backward(t.lo - m)
        return t

    def __call__(self, spec: str) -> Resolved:
        q = self.q
        spec = spec.strip()
        kind, sep, body = spec.partition(":")
        if not sep:
            raise UsageError(f"object spec {spec!r} has no ':'")
        if kind == "TP":
            (i,) = _ints(body, "TP index")
            self._vertex(i)
            d = tuple(-1 if v == i else 0 for v in q.vertices)
            return Resolved(spec, d, LaurentPoly.var(q.n, i))
        if kind == "S":
            (i,) = _ints(body, "S index")
            self._vertex(i)
            fam = simple(q, i)
            return Resolved(spec, fam.dims, self.cc(fam), fam)
        if kind == "frieze":
            m, j = _ints(body, "frieze coordinate")
            self._vertex(j)
            t = self.frieze(m)
            d, x = t[(m, j)]
            return Resolved(spec, d, x, t.module((m, j)))
        if kind == "E":
            k, i, n = _ints(body, "E tube,socle,length")
            ranks = tube_simples(q)
            if not 1 <= k <= len(ranks):
                raise TubeError(f"tube {k} outside 1..{len(ranks)}")
            if not 1 <= i <= ranks[k - 1] or n < 1:
                raise TubeError(f"need socle in 1..{ranks[k - 1]} and length >= 1")
            ctx = tube_context(q, k, cap=max(self.cap, n))
            fam = build_tube_module(q, k, i, n)
            return Resolved(spec, fam.dims, tube_variable(ctx, i, n), fam)
        if kind == "delta":
            key, eq, val = body.partition("=")
            if key.strip() != "n" or not eq:
                raise UsageError(f"expected delta:n=<k>, got {spec!r}")
            (n,) = _ints(val, "delta level")
            if n < 1:
                raise UsageError("delta level must be positive")
            fam = build_homogeneous(q, n)
            return Resolved(spec, fam.dims, delta_variable(q, n, budget=self.kw["budget"]), fam)
        if kind == "sum":
            parts = [self(p) for p in _split_sum(body)]
            d = tuple(sum(p.dims[v] for p in parts) for v in range(q.n))
            value = lp_prod([p.value for p in parts], q.n)
            fams = [p.family for p in parts]
            fam = _family_sum(fams) if all(f is not None for f in fams) else None
            return Resolved(spec, d, value, fam)
        if kind == "file":
            with open(body) as fh:
                data = json.load(fh)
            rep = Representation.from_json(data, quiver=None if "quiver" in data else q)
            if rep.quiver.arrows != q.arrows:
                raise RepError("the file's quiver differs from the selected preset")
            fam = as_family(rep)
            return Resolved(spec, fam.dims, self.cc(fam), fam)
        raise UsageError(f"unknown object kind {kind!r}; expected TP, S, frieze, E, delta, sum or file")

    def _vertex(self, i):
        if not 1 <= i <= self.q.n:
            raise QuiverError(f"vertex {i} outside 1..{self.q.n}")


# output helpers -------------------------------------------------------------------------

def fraction_text(p: LaurentPoly) -> str:
    """``p`` as ``(numerator) / (monomial)`` over its common denominator."""
    if p.is_zero():
        return "0"
    d = denominator_vector(p)
    den = [max(x, 0) for x in d]
    num = p * LaurentPoly.monomial(den)
    if not any(den):
        return format_laurent(p)
    den_text = format_laurent(LaurentPoly.monomial(den))
    num_text = format_laurent(num)
    if len(num.terms) > 1:
        num_text = f"({num_text})"
    if sum(1 for x in den if x) > 1 or any(x > 1 for x in den):
        den_text = f"({den_text})"
    return f"{num_text} / {den_text}"


def _emit(out, args, text, payload):
    if args.json:
        out.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        out.write(text + ("" if text.endswith("\n") else "\n"))


def _vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


# subcommands ----------------------------------------------------------------------------

def cmd_var(args, out) -> int:
    q = build_preset(args.preset)
    obj = Resolver(q, args)(args.object)
    if args.check and not obj.value.is_zero() and tuple(denominator_vector(obj.value)) != tuple(obj.dims):
        raise InvariantBreach(
            f"denominator vector {denominator_vector(obj.value)} differs from dimension vector {obj.dims}")
    text = fraction_text(obj.value) if args.form == "fraction" else format_laurent(obj.value)
    _emit(out, args, text, {"object": obj.label, "dims": list(obj.dims), "value": obj.value.to_json()})
    return EXIT_OK


def cmd_gr(args, out) -> int:
    q = build_preset(args.preset)
    r = Resolver(q, args)
    obj = r(args.object)
    if obj.family is None:
        raise RepError(f"{args.object} is not a module; quiver Grassmannians need a module")
    fam = obj.family
    if args.dim:
        es = [tuple(_ints(args.dim, "--dim"))]
        if len(es[0]) != q.n:
            raise UsageError(f"--dim needs {q.n} entries")
    else:
        es = list(itertools.product(*(range(x + 1) for x in fam.dims)))
    rows, lines = [], []
    for e in es:
        poly = counting_polynomial(fam, e, **r.kw)
        if not args.dim and not any(poly.coefficients):
            continue
        chi = poly(1)
        coeffs = list(poly.coefficients)
        rows.append({"e": list(e), "counting_polynomial": coeffs, "euler_characteristic": chi})
        lines.append(f"{_vec(e)} chi={chi} count(q)={_poly_text(coeffs)}")
    _emit(out, args, "\n".join(lines) or "no subrepresentations", {"object": obj.label, "dims": list(fam.dims),
                                                                   "grassmannians": rows})
    return EXIT_OK


def _poly_text(coeffs) -> str:
    terms = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
        if mono and abs(c) == 1:
            body = mono
        else:
            body = f"{abs(c)}*{mono}" if mono else str(abs(c))
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    text = ("-" if terms[-1][0] == "-" else "") + terms[-1][1]
    for sign, body in reversed(terms[:-1]):
        text += f" {sign} {body}"
    return text


def cmd_frieze(args, out) -> int:
    q = build_preset(args.preset)
    t = knit(q, args.forward, args.backward)
    if args.check and not (t.check_mesh() and t.check_denominators()):
        raise InvariantBreach("knitted table fails the mesh or denominator check")
    _emit(out, args, "\n".join(t.dump_lines()), t.to_json())
    return EXIT_OK


def cmd_tube_mul(args, out) -> int:
    r = args.rank
    if args.expr:
        fs = FormalSum.parse(args.expr)
        result = normalize(fs, r)
        case = None
    else:
        if not (args.left and args.right):
            raise UsageError("tube-mul needs --left i,k and --right j,m,l (or --expr)")
        i, k = _ints(args.left, "--left")
        j, m, l = _ints(args.right, "--right")
        result = tube_multiply(r, i, k, j, m, l)
        case = multiply_case(r, i, k, j, m, l)
        if args.normalize:
            result = normalize(result, r)
    payload = {"rank": r, "case": case, "terms": result.to_json(), "text": result.to_text()}
    if args.evaluate:
        q = build_preset(args.evaluate)
        ctx = tube_context(q, args.tube, cap=max(args.cap, 16))
        if ctx.rank != r:
            raise TubeError(f"tube {args.tube} of {q.preset} has rank {ctx.rank}, not {r}")
        payload["value"] = result.evaluate(ctx).to_json()
    _emit(out, args, result.to_text(), payload)
    return EXIT_OK


def cmd_delta(args, out) -> int:
    q = build_preset(args.preset)
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    x = delta_variable(q, args.n, budget=args.budget)
    text = fraction_text(x) if args.form == "fraction" else format_laurent(x)
    _emit(out, args, text, {"preset": q.preset, "n": args.n, "value": x.to_json()})
    return EXIT_OK


def _box(args, q):
    lo = tuple(_ints(args.lo, "--lo"))
    hi = tuple(_ints(args.hi, "--hi"))
    if len(lo) != q.n or len(hi) != q.n:
        raise UsageError(f"--lo and --hi need {q.n} entries")
    return lo, hi


def cmd_basis(args, out) -> int:
    q = build_preset(args.preset)
    lo, hi = _box(args, q)
    table = build_table(q, lo, hi, delta_budget=args.budget)
    _emit(out, args, "\n".join(table.dump_lines()), table.to_json())
    return EXIT_OK


def cmd_expand(args, out) -> int:
    q = build_preset(args.preset)
    lo, hi = _box(args, q)
    if bool(args.object) == bool(args.poly):
        raise UsageError("expand needs either --object (repeatable, multiplied) or --poly")
    if args.poly:
        p = parse_laurent(args.poly, q.n)
    else:
        r = Resolver(q, args)
        p = lp_prod([r(s).value for s in args.object], q.n)
    table = build_table(q, lo, hi, delta_budget=args.budget)
    exp = expand(p, table, cap=args.step_cap)
    _emit(out, args, exp.to_text(), {"input": p.to_json(), "terms": exp.to_json()})
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .verify import CHECKS, run_checks

    if args.all == bool(args.criterion):
        raise UsageError("verify needs exactly one of --all or --criterion N")
    numbers = sorted(CHECKS) if args.all else args.criterion
    unknown = [n for n in numbers if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown criteria {unknown}; expected 1..{max(CHECKS)}")
    results = []
    for res in run_checks(numbers):
        results.append(res)
        if not args.json:
            out.write(res.line() + "\n")
            out.flush()
    failed = [r.number for r in results if not r.ok]
    if args.json:
        out.write(json.dumps([{"criterion": r.number, "title": r.title, "ok": r.ok, "detail": r.detail}
                              for r in results], sort_keys=True) + "\n")
    else:
        out.write(f"{len(results) - len(failed)}/{len(results)} criteria passed\n")
    return EXIT_BREACH if failed else EXIT_OK


# parser ---------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--preset", default="kronecker", help="kronecker, d4 or ann:<n>")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                        help="max echelon candidates per point count (default %(default)s)")
    common.add_argument("--lam", type=int, default=2, help="parameter for homogeneous families")
    common.add_argument("--prime-start", type=int, default=5, help="first prime sampled")
    common.add_argument("--stride", type=int, default=1, help="use every stride-th admissible prime")
    common.add_argument("--offset", type=int, default=0, help="starting position within the stride")
    common.add_argument("--cap", type=int, default=DEFAULT_CAP, help="quasi-length cap for tube recursion")

    p = _Parser(prog="affcluster", description="Cluster variables and bases for affine quivers.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("var", parents=[common], help="CC value of an object")
    s.add_argument("--object", required=True)
    s.add_argument("--form", choices=("fraction", "terms"), default="fraction")
    s.add_argument("--check", action="store_true", help="fail with exit 2 unless the denominator matches")
    s.set_defaults(func=cmd_var)

    s = sub.add_parser("gr", parents=[common], help="quiver Grassmannian counts and Euler characteristics")
    s.add_argument("--object", required=True)
    s.add_argument("--dim", help="subrepresentation dimension vector; all of them if omitted")
    s.set_defaults(func=cmd_gr)

    s = sub.add_parser("frieze", parents=[common], help="knit the mesh relations")
    s.add_argument("--forward", type=int, default=2)
    s.add_argument("--backward", type=int, default=2)
    s.add_argument("--check", action="store_true")
    s.set_defaults(func=cmd_frieze)

    s = sub.add_parser("tube-mul", parents=[common], help="product rule inside a tube")
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--left", help="i,k for E_i[k]")
    s.add_argument("--right", help="j,m,l for E_j[mr+l]")
    s.add_argument("--expr", help="product expression such as 'E[1;1]*E[2;1]*E[3;1]' to normalize")
    s.add_argument("--normalize", action="store_true")
    s.add_argument("--evaluate", metavar="PRESET", help="also evaluate in a tube of this preset")
    s.add_argument("--tube", type=int, default=1)
    s.set_defaults(func=cmd_tube_mul)

    s = sub.add_parser("delta", parents=[common], help="X of the n-th homogeneous level")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--form", choices=("fraction", "terms"), default="terms")
    s.set_defaults(func=cmd_delta)

    for name, func, hlp in (("basis", cmd_basis, "dump the basis table of a box"),
                            ("expand", cmd_expand, "expand in the basis table of a box")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--lo", required=True)
        s.add_argument("--hi", required=True)
        if name == "expand":
            s.add_argument("--object", action="append")
            s.add_argument("--poly")
            s.add_argument("--step-cap", type=int, default=STEP_CAP)
        s.set_defaults(func=func)

    s = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    s.add_argument("--all", action="store_true")
    s.add_argument("--criterion", type=int, action="append")
    s.set_defaults(func=cmd_verify)
    return p


DOMAIN_ERRORS = (RepError, QuiverError, TubeError, BasisError, LaurentError, CCError, BudgetExceeded,
                 NotKnitted, OSError, json.JSONDecodeError)
BREACHES = (InvariantBreach, NonPolynomialCount, DuplicateDimVector, NonTerminating)


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if not getattr(args, "func", None):
            raise UsageError("choose a subcommand: var, gr, frieze, tube-mul, delta, basis, expand, verify")
        return args.func(args, out)
    except UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except BREACHES as exc:
        err.write(f"invariant breach: {exc}\n")
        return EXIT_BREACH
    except DOMAIN_ERRORS as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DOMAIN


def main():
    sys.exit(run())
