import io
import json

import pytest

from fracsato import parse_psdo, parse_zseries
from fracsato.cli import main


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def run_json(argv):
    code, text = run(argv + ["--json"])
    return code, json.loads(text)


def test_bc_relate_fractional():
    code, rep = run_json(["bc", "relate", "--p", "(1)*D^1", "--q", "frac((1)*D^2+(1)*D^0;(1)*D^1)", "--nmax", "3"])
    assert code == 0
    assert rep["schema_version"] == 1 and rep["status"] == "ok"
    assert rep["payload"]["relation"] == "w*z - z^2 - 1"


def test_bc_relate_differential():
    code, rep = run_json(["bc", "relate", "--p", "(1)*D^1", "--q", "(1)*D^2"])
    assert code == 0 and rep["payload"]["relation"] == "w - z^2"


def test_plane_kw_example():
    code, rep = run_json(["plane", "kw", "--example", "4.5", "--f", "z", "--depth", "12"])
    assert code == 0
    assert rep["payload"]["quotient_dim"] == 1 and rep["payload"]["stabilized"] is True
    basis = rep["payload"]["plane"]["basis"]
    assert parse_zseries(basis[3]).agrees(parse_zseries("z^3 - 3*z^-1"))


def test_unknown_exit_code():
    code, rep = run_json(["plane", "kw", "--example", "4.5", "--f", "z", "--depth", "2"])
    assert code == 3 and rep["status"] == "unknown-at-precision"


def test_krichever_elliptic():
    code, rep = run_json(["krichever", "elliptic", "--g2", "0", "--g3", "0", "--a", "1", "--b", "2", "--depth", "10"])
    assert code == 0
    assert rep["payload"]["relation"] == "w^2 - 4*z^3"
    assert rep["payload"]["rank_one"] is True


def test_library_error_exit_code():
    code, rep = run_json(["krichever", "elliptic", "--g2", "1", "--g3", "1", "--a", "1", "--b", "2"])
    assert code == 1 and rep["payload"]["code"] == "point-not-on-curve"


@pytest.mark.parametrize(
    "argv",
    [
        ["psdo", "mul", "--a", "D^", "--b", "D"],
        ["plane", "kw", "--f", "z", "--depth", "-1"],
        ["bc", "relate", "--p", "D", "--q", "D", "--bogus"],
        ["nonsense"],
        ["krichever", "elliptic", "--g2", "0.5", "--g3", "0", "--a", "1", "--b", "2"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _ = run(argv)
    assert code == 2


def test_operator_round_trip():
    code, rep = run_json(["psdo", "inv", "--p", "D + x*D^0", "--depth", "4"])
    assert code == 0
    text = rep["payload"]["result"]
    back = parse_psdo(text)
    assert str(back) == text


def test_section_default_depth():
    code, rep = run_json(["krichever", "section", "--g2", "1", "--g3", "-1", "--a", "1", "--b", "2"])
    assert code == 0
    assert rep["payload"]["section"] == "preserving" and rep["payload"]["depth"] == 8
    assert rep["payload"]["conjugate_order"] == 4


def test_frac_commands():
    code, rep = run_json(["frac", "dord", "--p", "frac(1;D)"])
    assert code == 0 and rep["payload"]["dord"] == 1
    code, rep = run_json(["frac", "ore", "--p", "D", "--q", "x*D^0"])
    assert code == 0 and rep["payload"]["L"] == "(x^2) * D^0"
