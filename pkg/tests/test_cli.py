import json
import subprocess
import sys

import pytest

from kpcohft import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, text):
    p = tmp_path / "run.cfg"
    p.write_text(text)
    return str(p)


@pytest.mark.parametrize("argv", [
    ["verify", "inversion", "--w", "3/5", "--beta", "2", "--order", "12"],
    ["verify", "naive-hodge", "--hbar-order", "2"],
    ["verify", "triple-hodge", "--u", "1", "--s", "2", "--hbar-order", "2"],
    ["verify", "triple-hodge", "--u", "0", "--s", "1"],
    ["verify", "mv-lemma", "--w", "1/2", "--beta=-2/3"],
    ["verify", "pluecker", "--weight", "6"],
    ["verify", "tr-compare"],
    ["verify", "torus-action"],
    ["verify", "moebius"],
])
def test_scenarios_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    doc = json.loads(out)
    assert code == 0 and doc["pass"] and doc["schema_version"] == "1"
    assert all(c["pass"] for c in doc["checks"])


def test_naive_hodge_report_has_stirling_rows(capsys):
    _, out, _ = run(capsys, "verify", "naive-hodge")
    T = json.loads(out)["T"]
    assert T["2"] == {"1": "1", "2": "7", "3": "25", "4": "65", "5": "140"}


def test_t_forms_table(capsys):
    code, out, _ = run(capsys, "tables", "t-forms", "--order", "5")
    rows = json.loads(out)["rows"]
    assert code == 0
    assert [list(r["coeffs"].values()) for r in rows] == [["1"] * 5, ["1", "3", "6", "10", "15"],
                                                         ["1", "7", "25", "65", "140"]]


def test_p_of_q_identity(capsys, tmp_path):
    cfg = write_config(tmp_path, "[family]\ntype = identity\n")
    _, out, _ = run(capsys, "tables", "p-of-q", "--config", cfg, "--order", "4")
    rows = json.loads(out)["rows"]
    assert [r["coeffs"] for r in rows] == [{str(k): "1"} for k in range(1, 5)]


def test_tau_coeffs_trivial(capsys, tmp_path):
    cfg = write_config(tmp_path, "[family]\ntype = zero\n")
    _, out, _ = run(capsys, "tables", "tau-coeffs", "--config", cfg)
    assert json.loads(out)["rows"] == [{"nu": [], "coeff": {"0": "1"}}]


def test_omega_table(capsys, tmp_path):
    cfg = write_config(tmp_path, "[run]\ng = 1\nn = 1\n[curve]\nname = naive-hodge\n")
    _, out, _ = run(capsys, "tables", "omega", "--config", cfg)
    [row] = json.loads(out)["rows"]
    assert row["terms"][0] == {"poles": [["1", 2]], "coeff": "-1/24"}


def test_csv_output(capsys):
    code, out, _ = run(capsys, "verify", "moebius", "--format", "csv")
    assert code == 0
    assert out.splitlines() == ["check,pass", "H02-constant,true", "finiteness,true"]


@pytest.mark.parametrize("argv", [
    ["tables", "t-forms", "--order", "5"],
    ["verify", "triple-hodge", "--u", "1", "--s", "2"],
    ["tables", "tau-coeffs", "--format", "csv"],
])
def test_output_is_byte_identical(capsys, tmp_path, argv):
    a, b = tmp_path / "a", tmp_path / "b"
    run(capsys, *argv, "--out", str(a))
    run(capsys, *argv, "--out", str(b))
    assert a.read_bytes() == b.read_bytes() and a.read_bytes()


@pytest.mark.parametrize("argv", [
    ["verify", "nothing"],
    ["verify", "inversion", "--w", "0.5"],
    ["verify", "inversion", "--order", "-3"],
    ["tables", "omega", "--config", "/nonexistent.cfg"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2


@pytest.mark.parametrize("text", [
    "[bogus]\nx = 1\n",
    "[run]\nspeed = 1\n",
    "[family]\ntype = strange\n",
    "[family]\ntype = naive\nalpha = 2\n",
    "[curve]\nname = airy\nw = 2\n",
    "not a config",
])
def test_bad_config_files(capsys, tmp_path, text):
    cfg = write_config(tmp_path, text)
    code, _, err = run(capsys, "tables", "omega", "--config", cfg)
    assert code == 2 and "config error" in err


def test_computation_errors_exit_3(capsys, tmp_path):
    cfg = write_config(tmp_path, "[curve]\ndx_num = z^2\n")
    code, _, err = run(capsys, "tables", "omega", "--config", cfg)
    assert code == 3 and "computation error" in err
    code, _, _ = run(capsys, "verify", "triple-hodge", "--s", "0")
    assert code == 3


def test_failing_check_exits_1(capsys, monkeypatch):
    monkeypatch.setitem(cli.RUNNERS, "moebius", lambda run, cfg: ([cli._check("x", False)], {}))
    code, out, _ = run(capsys, "verify", "moebius")
    assert code == 1 and json.loads(out)["pass"] is False


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "kpcohft", "verify", "moebius"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["pass"]
