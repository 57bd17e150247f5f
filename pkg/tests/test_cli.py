import json
import re
import subprocess
import sys

import pytest

from boxdelta.cli import REPRODUCE, dispatch
from boxdelta.io import RunRecord, csv_text, fmt, input_hash, json_text, to_jsonable


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_json(capsys):
    code, out, _ = run(capsys, "solve", "--family", "sym-rep", "--gamma", "10", "--etaN", "10")
    assert code == 0
    rec = json.loads(out)
    assert rec["left"]["k"] == pytest.approx(3.067, abs=2e-3)
    assert rec["left"]["m"] == pytest.approx(0.433, abs=1e-3)
    assert rec["mu"] == pytest.approx(13.48, abs=0.01)
    assert max(abs(v) for v in rec["residuals"].values()) < 1e-8


def test_asymmetric_record_has_imbalance(capsys):
    code, out, _ = run(capsys, "solve", "--family", "asym-rep", "--gamma", "10", "--etaN", "5")
    assert code == 0
    assert 0 < json.loads(out)["z_ex"] <= 1


def test_elliptic_eval(capsys):
    code, out, _ = run(capsys, "elliptic", "eval", "0.5", "0.3")
    assert code == 0
    vals = dict(line.split() for line in out.splitlines())
    assert set(vals) == {"sn", "cn", "dn", "K", "E", "epsilon"}
    code, out, _ = run(capsys, "elliptic", "eval", "0.5", "0.3", "--format", "json")
    assert json.loads(out)["m"] == 0.3


def test_exit_codes(capsys):
    assert run(capsys, "solve", "--family", "sym-rep", "--gamma", "10")[0] == 1
    assert run(capsys, "solve", "--bogus")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys)[0] == 1
    # wrong sign of the interaction for the family
    assert run(capsys, "solve", "--family", "sym-rep", "--gamma", "10", "--etaN", "-1")[0] == 1
    # no asymmetric state this close to the linear regime
    assert run(capsys, "solve", "--family", "asym-att", "--gamma", "10", "--etaN", "-2.0")[0] == 2
    assert run(capsys, "elliptic", "eval", "0.5", "1.5")[0] == 2


def test_help_lists_defaults(capsys):
    code, out, _ = run(capsys, "sweep", "--help")
    assert code == 0
    assert "default" in out


def test_modes_csv(capsys):
    code, out, _ = run(capsys, "modes", "--gamma", "10", "--count", "4")
    lines = out.splitlines()
    assert lines[0] == "index,parity,parity_index,k,energy"
    assert len(lines) == 5
    assert lines[1].startswith("1,symmetric,1,2.65")


def test_sweep_csv_deterministic_and_formatted(capsys, tmp_path):
    argv = ["sweep", "--family", "asym-att", "--gamma", "10", "--range", "-2.2", "-2.0", "--step", "0.05"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert run(capsys, *argv, "--out", str(a))[0] == 0
    assert run(capsys, *argv, "--out", str(b))[0] == 0
    raw = a.read_bytes()
    assert raw == b.read_bytes()
    assert b"\r" not in raw and raw.endswith(b"\n")
    rows = raw.decode().splitlines()
    assert rows[0] == "etaN,mu,E_per_N,z_ex,node_count,converged"
    assert rows[1].endswith(",true") and rows[-1].endswith(",false")
    mu = rows[1].split(",")[1]
    assert len(re.sub(r"[-.]|e.*", "", mu).lstrip("0")) <= 15
    rec_a = json.loads((tmp_path / "a.csv.run.json").read_text())
    rec_b = json.loads((tmp_path / "b.csv.run.json").read_text())
    assert rec_a["input_hash"] == rec_b["input_hash"]
    assert rec_a["command"] == "sweep" and rec_a["outputs"] == [str(a)]


def test_summary_printed_with_out(capsys, tmp_path):
    code, out, _ = run(capsys, "twomode", "--gamma", "10", "--etaN", "-3", "--out", str(tmp_path / "t.json"))
    assert code == 0 and "->" in out
    data = json.loads((tmp_path / "t.json").read_text())
    assert data["critical"]["variational_attractive"] == pytest.approx(-2.11, abs=0.01)
    assert data["critical"]["variational_repulsive"] == pytest.approx(2.25, abs=0.01)


def test_stability_threads_do_not_change_output(capsys):
    argv = ["stability", "--family", "sym-att", "--gamma", "10", "--etaN-range", "-1", "-3", "--step", "0.25"]
    _, one, _ = run(capsys, *argv)
    _, four, _ = run(capsys, *argv, "--threads", "4")
    assert one == four
    assert one.splitlines()[0] == "etaN,re_lambda1,im_lambda1,re_lambda2,im_lambda2,classification"
    assert "stable" in one and "non_oscillatory_unstable" in one


def test_oracle_ground_and_trajectory(capsys, tmp_path):
    traj = tmp_path / "traj.csv"
    code, out, _ = run(capsys, "oracle", "ground", "--gamma", "10", "--etaN", "-5", "--trajectory", str(traj))
    assert code == 0
    rec = json.loads(out)
    assert rec["z_asym"] > 0.5 and rec["seed"] is not None
    assert traj.read_text().splitlines()[0] == "t,x,density"


def test_critical_csv(capsys):
    code, out, _ = run(capsys, "critical", "--gamma-range", "10", "10", "--step", "1")
    assert code == 0
    header, row = out.splitlines()
    vals = dict(zip(header.split(","), row.split(",")))
    assert float(vals["exact_attractive"]) == pytest.approx(-2.07, abs=0.03)
    assert float(vals["exact_repulsive"]) == pytest.approx(2.34, abs=0.03)


@pytest.mark.parametrize("target", ["fig-antisym-state", "fig-sym-states", "fig-asym-states", "table-two-mode"])
def test_reproduce_targets(capsys, target):
    code, out, _ = run(capsys, "reproduce", target)
    assert code == 0
    assert len(out.splitlines()) > 1


def test_all_energy_columns(capsys):
    _, out, _ = run(capsys, "reproduce", "fig-all-energy")
    lines = out.splitlines()
    assert lines[0] == "etaN,symmetric,antisymmetric,asymmetric"
    assert lines[1].startswith("-6,") and lines[-1].startswith("10,")


def test_reproduce_catalogue_is_described():
    assert all(desc for desc, _ in REPRODUCE.values())


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "boxdelta", "modes", "--gamma", "10", "--count", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.count("\n") == 3


def test_formatting_helpers():
    assert fmt(1 / 3) == "0.333333333333333"
    assert fmt(None) == "" and fmt(True) == "true" and fmt(float("nan")) == "nan"
    assert csv_text(["a", "b"], [(1, 2.5)]) == "a,b\n1,2.5\n"
    assert to_jsonable({"z": 1 + 2j}) == {"z": {"re": 1.0, "im": 2.0}}
    assert json_text({"b": 1, "a": 2}).index('"a"') < json_text({"b": 1, "a": 2}).index('"b"')
    assert input_hash("x", {"p": 1}) == input_hash("x", {"p": 1})
    assert input_hash("x", {"p": 1}) != input_hash("x", {"p": 2})
    rec = RunRecord.create("x", {"p": 1}, ["out.csv"])
    assert len(rec.input_hash) == 40 and rec.outputs == ["out.csv"]
