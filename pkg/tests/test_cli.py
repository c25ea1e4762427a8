from __future__ import annotations

import csv
import json
from pathlib import Path

import mpmath
import pytest

from gaplab.cli import COMMANDS, main

DATA = Path(__file__).parent / "data"

# small but non-trivial parameters for every subcommand
FAST_ARGS = {
    "derive": ["--k", "2"],
    "zero-constants": ["--x", "10000"],
    "maynard": ["--r", "3", "--degree", "2"],
    "gaps": ["--max", "100000", "--k", "2"],
    "mertens": ["--x", "1000,10000"],
    "bt-check": ["--x", "2000", "--qmax", "12"],
    "ub-pairs": ["--x", "7", "--z", "2000", "--pairs", "10", "--seed", "4"],
    "construct": ["--x", "1000", "--c", "1", "--smin", "3", "--y", "5000", "--z", "20", "--seed", "2"],
}


@pytest.fixture(autouse=True)
def no_output_dir(monkeypatch):
    monkeypatch.delenv("GAPLAB_OUTPUT_DIR", raising=False)


def run_to(tmp_path, argv, name="out.json"):
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, out


def test_every_command_has_fast_args():
    assert set(FAST_ARGS) == set(COMMANDS)


@pytest.mark.parametrize("cmd", sorted(FAST_ARGS))
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_rerun_is_byte_identical(tmp_path, cmd, fmt):
    argv = [cmd, *FAST_ARGS[cmd], "--format", fmt]
    c1, p1 = run_to(tmp_path, argv, "a." + fmt)
    c2, p2 = run_to(tmp_path, argv, "b." + fmt)
    assert c1 == c2 == 0
    assert p1.read_bytes() == p2.read_bytes()


@pytest.mark.parametrize("cmd", sorted(FAST_ARGS))
def test_report_embeds_resolved_config(tmp_path, cmd):
    _, p = run_to(tmp_path, [cmd, *FAST_ARGS[cmd]])
    rep = json.loads(p.read_text())
    assert rep["command"] == cmd
    _, _, params = COMMANDS[cmd]
    assert set(rep["config"]) == {q.name for q in params} | {"seed", "threads", "format"}


def test_derive_golden(tmp_path, oracle):
    code, p = run_to(tmp_path, ["derive", "--k", "1"])
    assert code == 0
    golden = DATA / "derive_k1.json"
    assert p.read_bytes() == golden.read_bytes()
    rep = json.loads(golden.read_text())
    with mpmath.workdps(50):
        lo = mpmath.mpf(rep["result"]["c_LG_lo"])
        hi = mpmath.mpf(rep["result"]["c_LG_hi"])
        assert lo <= oracle["c_LG"] <= hi
    assert abs(rep["result"]["c_LG"] - 2.0e-17) / 2.0e-17 < 0.03


def test_derive_k0_is_domain_error(tmp_path, capsys):
    code, p = run_to(tmp_path, ["derive", "--k", "0"])
    assert code == 2 and not p.exists()
    assert "error" in capsys.readouterr().err


def test_maynard_r2_degree0(tmp_path):
    code, p = run_to(tmp_path, ["maynard", "--r", "2", "--degree", "0"])
    assert code == 0
    assert json.loads(p.read_text())["result"]["certified_ratio"] == "2/3"


def test_constraint_violation_exit_3(tmp_path, capsys):
    code, _ = run_to(tmp_path, ["zero-constants", "--c-zfr", "1/10"])
    assert code == 3
    assert "1/(4 R1)" in capsys.readouterr().err


def test_failed_check_writes_report_then_exit_3(tmp_path):
    # c_IJ = 2 asks for J/I >= 2 log r / r, above the r = 8 optimum
    code, p = run_to(tmp_path, ["maynard", "--r", "8", "--degree", "1", "--c-ij", "2"])
    assert code == 3
    assert json.loads(p.read_text())["result"]["cIJ_check"]["passed"] is False


def test_usage_errors_exit_2(tmp_path):
    assert main(["nosuch"]) == 2
    assert main(["derive", "--bogus", "1"]) == 2
    assert main(["derive", "--k", "abc"]) == 2
    assert main(["construct", "--strategy", "clever"]) == 2


def test_io_error_exit_1(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["maynard", "--r", "2", "--degree", "0", "--out", str(blocker / "r.json")]) == 1


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nr = 3\ndegree = 1  # trailing comment\n")
    _, p = run_to(tmp_path, ["maynard", "--config", str(cfg)])
    rep = json.loads(p.read_text())
    assert (rep["config"]["r"], rep["config"]["degree"]) == (3, 1)
    _, p = run_to(tmp_path, ["maynard", "--config", str(cfg), "--degree", "2"], "b.json")
    assert json.loads(p.read_text())["config"]["degree"] == 2


@pytest.mark.parametrize("body", ["rr = 3\n", "r = 2\nr = 3\n", "just words\n"])
def test_bad_config_rejected(tmp_path, body):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(body)
    assert main(["maynard", "--config", str(cfg)]) == 2


def test_rational_config_values(tmp_path):
    cfg = tmp_path / "d.cfg"
    cfg.write_text("theta = 1/2\nc_IJ = 0.25\n")
    _, p = run_to(tmp_path, ["derive", "--config", str(cfg)])
    assert json.loads(p.read_text())["config"]["theta"] == "1/2"


def test_json_and_csv_midpoints_agree(tmp_path):
    _, pj = run_to(tmp_path, ["derive"], "d.json")
    _, pc = run_to(tmp_path, ["derive", "--format", "csv"], "d.csv")
    rows = list(csv.DictReader(line for line in pc.read_text().splitlines() if not line.startswith("#")))
    by_name = {r["name"]: r["midpoint"] for r in rows}
    rep = json.loads(pj.read_text())
    assert float(by_name["c_LG"]) == rep["result"]["c_LG"]

    def walk(node):
        yield node["name"], node["midpoint"]
        for child in node.get("children", []):
            yield from walk(child)

    nodes = list(walk(rep["trace"]))
    assert len(nodes) == len(rows) > 10
    for name, mid in nodes:
        assert float(by_name[name]) == mid


def test_output_dir_env(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("GAPLAB_OUTPUT_DIR", str(tmp_path))
    assert main(["mertens", "--x", "1000"]) == 0
    assert json.loads((tmp_path / "mertens.json").read_text())["rows"][0]["x"] == 1000
    assert main(["mertens", "--x", "1000", "--out", "-"]) == 0
    assert json.loads(capsys.readouterr().out)["command"] == "mertens"


def test_construct_members_file(tmp_path):
    members = tmp_path / "T.txt"
    code, p = run_to(tmp_path, ["construct", *FAST_ARGS["construct"], "--members", str(members)])
    assert code == 0
    values = [int(v) for v in members.read_text().split()]
    rep = json.loads(p.read_text())
    assert len(values) == rep["result"]["size_T"]
    assert sum(b["count"] for b in rep["result"]["bands"]) == len(values)


def test_construct_default_regime_warns(tmp_path, capsys):
    code, _ = run_to(tmp_path, ["construct", "--x", "1000000"])
    assert code == 2
    err = capsys.readouterr().err
    assert "Q is empty" in err


def test_gaps_report(tmp_path):
    _, p = run_to(tmp_path, ["gaps", "--max", "100"])
    res = json.loads(p.read_text())["result"]
    assert (res["G_k"], res["witness"]) == (8, [89, 97])
