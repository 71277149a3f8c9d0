import json
import subprocess
import sys

import pytest

import mlfft.experiment as experiment
from mlfft.cli import main
from mlfft.index_sets import generate_hc
from mlfft.lattice import MultipleLattice, coverage_check


def test_build_then_verify(tmp_path, capsys):
    out = tmp_path / "lat.json"
    assert main(["build", "--set", "hc:d=2,N=8,T=0", "--seed", "4", "--out", str(out)]) == 0
    ml = MultipleLattice.read(out)
    I = generate_hc(2, 8, 0.0)
    assert coverage_check(I, ml)[0]
    assert ml.meta["index_set_hash"] == I.digest() and ml.meta["seed"] == 4
    report = json.loads((tmp_path / "lat.report.json").read_text())
    assert report["covered"] and report["L"] == ml.L
    capsys.readouterr()
    assert main(["verify", str(out), str(tmp_path / "lat.indexset.txt")]) == 0
    text = capsys.readouterr().out
    assert "verdict: covered" in text and "counter histogram" in text


def test_verify_hash_mismatch_and_uncovered(tmp_path, capsys):
    out = tmp_path / "lat.json"
    main(["build", "--set", "hc:d=2,N=8,T=0", "--out", str(out)])
    other = tmp_path / "other.txt"
    generate_hc(2, 16, 0.0).write(other)
    assert main(["verify", str(out), str(other)]) == 66
    # drop the hash and keep only a tiny component: the verdict is "not covered"
    data = json.loads(out.read_text())
    data["index_set_hash"] = None
    data["components"] = [{"z": [1, 1], "M": 3}]
    out.write_text(json.dumps(data))
    capsys.readouterr()
    assert main(["verify", str(out), str(other)]) == 1
    assert "NOT covered" in capsys.readouterr().out


def test_build_not_covered_exit_code(tmp_path, monkeypatch):
    # force a one-component cap so that construction cannot succeed
    original = experiment.ConstructionParams
    monkeypatch.setattr(
        experiment, "ConstructionParams", lambda **kw: original(**kw, l_max_override=1)
    )
    out = tmp_path / "lat.json"
    code = main(["build", "--set", "hc:d=2,N=16,T=0", "--c", "1.05", "--retries", "1", "--out", str(out)])
    assert code == 2
    assert not json.loads((tmp_path / "lat.report.json").read_text())["covered"]


@pytest.mark.parametrize(
    "argv,code",
    [
        (["build", "--set", "hc:d=2,N=oops,T=0"], 64),
        (["build"], 64),
        (["frobnicate"], 64),
        (["experiment", "--dims", "", "--out", "x"], 64),
        (["experiment", "--dims", "a,b", "--out", "x"], 64),
        (["experiment", "--out", "x", "--T", "banana"], 64),
    ],
)
def test_usage_errors(tmp_path, monkeypatch, argv, code):
    monkeypatch.chdir(tmp_path)
    try:
        assert main(argv) == code
    except SystemExit as exc:
        assert exc.code == code


def test_cardinality_cap_exit_code(tmp_path, monkeypatch):
    monkeypatch.setenv("MLFFT_MAX_CARD", "20")
    assert main(["build", "--set", "hc:d=3,N=8,T=0", "--out", str(tmp_path / "l.json")]) == 65


def test_experiment_with_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"function": "g3", "dims": [2], "refinements": [2, 4], "even": True}))
    run = tmp_path / "run"
    assert main(["experiment", "--config", str(cfg), "--seed", "9", "--out", str(run)]) == 0
    saved = json.loads((run / "config.json").read_text())
    assert saved["seed"] == 9 and saved["even"] is True and saved["function"] == "g3"
    assert (run / "results.csv").read_text().count("\n") == 3


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "mlfft", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "verify" in proc.stdout
