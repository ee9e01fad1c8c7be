import io
import json

from affcluster.cli import EXIT_BREACH, EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, fraction_text, run
from affcluster.laurent import parse_laurent
from affcluster.verify import D4_DELTA_TEXT


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_shifted_projective():
    assert call("var", "--preset", "kronecker", "--object", "TP:1") == (EXIT_OK, "x1\n", "")


def test_d4_delta_over_common_denominator():
    code, out, _ = call("var", "--preset", "d4", "--object", "delta:n=1")
    assert code == EXIT_OK
    num, den = out.strip().split(" / ")
    assert den == "(x1^2*x2*x3*x4*x5)"
    value = parse_laurent(num.strip("()"), 5) * parse_laurent("x1^-2*x2^-1*x3^-1*x4^-1*x5^-1", 5)
    assert value == parse_laurent(D4_DELTA_TEXT, 5)


def test_tube_mul():
    assert call("tube-mul", "--rank", "3", "--left", "1,1", "--right", "2,0,1")[1] == "E[1;2] + 1\n"
    code, out, _ = call("tube-mul", "--rank", "3", "--expr", "E[1;1]*E[2;1]*E[3;1]", "--json",
                        "--evaluate", "ann:3")
    data = json.loads(out)
    assert code == EXIT_OK and data["rank"] == 3 and "value" in data


def test_object_grammar():
    code, out, _ = call("var", "--preset", "d4", "--object", "sum:(E:1,1,1)+(E:1,2,1)", "--check", "--json")
    assert code == EXIT_OK and json.loads(out)["dims"] == [2, 1, 1, 1, 1]
    code, out, _ = call("var", "--preset", "kronecker", "--object", "frieze:1,2", "--form", "terms")
    assert out == "x1^2*x2^-1 + x2^-1\n"
    assert call("var", "--preset", "kronecker", "--object", "S:2", "--form", "terms")[1] == out


def test_file_objects(tmp_path):
    from affcluster.quiver import dtilde4
    from affcluster.rep import build_regular_simple

    path = tmp_path / "e1.json"
    path.write_text(json.dumps(build_regular_simple(dtilde4(), 1, 1).instantiate(101).to_json()))
    a = call("var", "--preset", "d4", "--object", f"file:{path}")
    b = call("var", "--preset", "d4", "--object", "E:1,1,1")
    assert a[0] == EXIT_OK and a[1] == b[1]


def test_gr():
    code, out, _ = call("gr", "--preset", "d4", "--object", "delta:n=1", "--dim", "1,0,0,0,0")
    assert code == EXIT_OK and out == "(1,0,0,0,0) chi=2 count(q)=q + 1\n"


def test_frieze_basis_expand_delta():
    assert call("frieze", "--preset", "ann:2", "--forward", "1", "--backward", "1", "--check")[0] == EXIT_OK
    code, out, _ = call("basis", "--preset", "kronecker", "--lo", "-1,-1", "--hi", "1,1")
    assert code == EXIT_OK and "(1,1) delta-level delta:n=1" in out
    code, out, _ = call("expand", "--preset", "kronecker", "--lo", "-2,-2", "--hi", "3,3",
                        "--object", "S:1", "--object", "S:2")
    assert code == EXIT_OK and out.splitlines()[0] == "+1 X(1, 1)"
    assert call("delta", "--preset", "kronecker", "--n", "2")[1].strip() == str(
        parse_laurent("x1*x2^-1 + x1^-1*x2 + x1^-1*x2^-1", 2) ** 2 - 1)


def test_exit_codes():
    assert call("var", "--preset", "nope", "--object", "TP:1")[0] == EXIT_DOMAIN
    assert call("var", "--preset", "kronecker", "--object", "TP:7")[0] == EXIT_DOMAIN
    assert call("gr", "--preset", "kronecker", "--object", "TP:1")[0] == EXIT_DOMAIN
    assert call("var", "--preset", "kronecker")[0] == EXIT_USAGE
    assert call("var", "--preset", "kronecker", "--object", "Q:1")[0] == EXIT_USAGE
    assert call()[0] == EXIT_USAGE
    assert call("verify")[0] == EXIT_USAGE
    assert call("gr", "--preset", "ann:4", "--object", "delta:n=2", "--budget", "10")[0] == EXIT_DOMAIN


def test_breach_exit_code(monkeypatch):
    import affcluster.cli as cli

    monkeypatch.setattr(cli, "denominator_vector", lambda p: (0,) * p.rank)
    assert call("var", "--preset", "kronecker", "--object", "S:1", "--check")[0] == EXIT_BREACH


def test_deterministic_output():
    argv = ("frieze", "--preset", "d4", "--forward", "2", "--backward", "2", "--json")
    assert call(*argv) == call(*argv)


def test_verify_single_criterion():
    code, out, _ = call("verify", "--criterion", "1")
    assert code == EXIT_OK and out.startswith("criterion  1 PASS")


def test_fraction_text():
    assert fraction_text(parse_laurent("x1", 2)) == "x1"
    assert fraction_text(parse_laurent("x1^-1 + x1^-1*x2", 2)) == "(x2 + 1) / x1"
