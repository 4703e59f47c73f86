import json
import shutil
import subprocess
import sys

import pytest

from specseq.algebra import parse_polynomial
from specseq.cli import run
from specseq.drivers.ham import henon_heiles_problem

ODE_A = {"kind": "ode", "coefficients": ["-15*x^3", "15*x^4", "-(6*x^5 - 5/4*x^2 + 9/8)", "x^6 - 5/12*x^3 + 9/8*x"]}
ODE_B = {"kind": "ode", "coefficients": ["-1", "0", "1"]}
MATRIX = {"kind": "matrix", "matrix": [[5, 1, 4, -5], [0, -6, 11, 3], [0, 0, 2, 7], [0, 0, 0, 1]], "diagonal": [9, 8, 7, 6]}
VF_TOP = {"kind": "vf", "variables": ["x1", "x2"], "field": ["x2 + 1/3*x1^3", "x1 + 1/3*x2^3"], "mode": "top", "degree": 5}
VF_BOTTOM = {"kind": "vf", "variables": ["x1", "x2"], "field": ["x1 + 1/2*x1^2", "x2 + 1/2*x2^2"], "mode": "bottom", "order": 4}


@pytest.fixture
def write(tmp_path):
    def _write(data, name="p.json"):
        p = tmp_path / name
        p.write_text(json.dumps(data))
        return str(p)

    return _write


def _run(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ode_text_table(capsys, write):
    code, out, _ = _run(capsys, ["ode", "--input", write(ODE_A)])
    assert code == 0
    header = next(line for line in out.splitlines() if line.lstrip().startswith("line"))
    assert [c.strip() for c in header.split("|")] == ["line", "monomial", "grade level", "f of monomial", "filtration level"]
    assert "105*x^11 - 70*x^8 + 315*x^6" in out
    assert "x^3 + 1/3" in out and "x^5 + 3" in out


def test_ode_json_and_empty_result(capsys, write):
    code, out, _ = _run(capsys, ["ode", "--input", write(ODE_A), "--format", "json"])
    data = json.loads(out)
    assert code == 0 and data["basis"] == ["x", "x^3 + 1/3", "x^5 + 3"]
    code, out, _ = _run(capsys, ["ode", "--input", write(ODE_B), "--format", "json"])
    assert code == 2
    assert json.loads(out)["basis"] == []


def test_matrix(capsys, write):
    code, out, _ = _run(capsys, ["matrix", "--input", write(MATRIX), "--format", "json"])
    assert code == 0
    assert "-13877/1848" in out
    code, out, _ = _run(capsys, ["matrix", "--input", write(MATRIX), "--diagonal", "5,-6,2,1", "--format", "json"])
    assert code == 0


def test_vf_modes(capsys, write):
    code, out, _ = _run(capsys, ["vf", "--input", write(VF_TOP), "--format", "json"])
    assert code == 0
    assert len(json.loads(out)["centralizers"]) == 1
    code, out, _ = _run(capsys, ["vf", "--input", write(VF_BOTTOM), "--order", "3"])
    assert code == 0


def test_ham_json_is_deterministic_and_round_trips(capsys):
    argv = ["ham", "--A", "1", "--B", "9", "--L", "1/6", "--format", "json"]
    code1, out1, _ = _run(capsys, argv)
    code2, out2, _ = _run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    prob = henon_heiles_problem(1, 9, "1/6")
    assert len(data["integrals"]) == 2
    for text in data["integrals"]:
        K = parse_polynomial(text, prob.table)
        assert str(K) == text


def test_ham_symbolic_obstruction(capsys):
    code, out, _ = _run(capsys, ["ham", "--candidate", "3/2*(4*B - A)*(B*q2^2 + p2^2)", "--format", "json"])
    assert code == 0  # the energy is always a witness
    data = json.loads(out)
    (cand,) = data["candidates"]
    assert cand["obstruction"]["page"] == 3
    assert sorted(c["value"] for c in cand["conditions"]["L"]) == ["0", "1/6"]


def test_verify(capsys):
    K = "3/2*(4*B - A)*(B*q2^2 + p2^2) + B*q1*q2^2 + p2*(q2*p1 - q1*p2) + 1/6*q2^2*(q1^2 + 1/4*q2^2)"
    code, out, _ = _run(capsys, ["verify", "--L", "1/6", "--integral", K, "--format", "json"])
    assert code == 0 and json.loads(out)["ok"] is True
    code, out, _ = _run(capsys, ["verify", "--integral", "3/2*(4*B - A)*(B*q2^2 + p2^2)", "--format", "json"])
    data = json.loads(out)
    assert code == 2 and data["ok"] is False
    prob = henon_heiles_problem()
    assert parse_polynomial(data["certificate"], prob.table) == parse_polynomial("6*L*p2*q1*q2*(A - 4*B)", prob.table)


def test_pages(capsys, write):
    code, out, _ = _run(capsys, ["pages", "--A", "1", "--B", "9", "--L", "1/6", "--page", "1", "--page", "2", "--format", "json"])
    assert code == 0
    data = json.loads(out)
    assert [p["page"] for p in data["pages"]] == [1, 2]
    code, out, _ = _run(capsys, ["pages", "--input", write(ODE_A)])
    assert code == 0 and "q=0" in out


def test_output_file(capsys, write, tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = _run(capsys, ["ode", "--input", write(ODE_A), "--format", "json", "--output", str(dest)])
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["basis"]


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["ode"],
        ["ode", "--format", "xml"],
        ["ham", "--max-degree", "two"],
        ["verify"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = _run(capsys, argv)
    assert code == 1
    assert "grammar" in err or "error" in err


def test_bad_expression_exits_1(capsys):
    code, _, err = _run(capsys, ["verify", "--integral", "q1 +* q2"])
    assert code == 1 and "ParseError" in err


def test_wrong_kind_exits_1(capsys, write):
    code, _, _ = _run(capsys, ["matrix", "--input", write(ODE_A)])
    assert code == 1


def test_undeclared_override_rejected(capsys, write):
    data = {"kind": "ham", "variables": ["q1", "p1"], "hamiltonian": "1/2*(p1^2 + q1^2)"}
    code, _, err = _run(capsys, ["ham", "--input", write(data), "--L", "1"])
    assert code == 1 and "not declared" in err


def test_console_script(write):
    exe = shutil.which("specseq")
    cmd = [exe] if exe else [sys.executable, "-m", "specseq.cli"]
    proc = subprocess.run(cmd + ["ode", "--input", write(ODE_B)], capture_output=True, text=True)
    assert proc.returncode == 2
