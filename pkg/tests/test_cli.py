import json
import shutil
import subprocess

import pytest

from abcel.cli import EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, main
from abcel.io import read_csv

QUICK = ["--iterations", "200", "--burn-in", "100", "--no-tune"]


def test_missing_subcommand(capsys):
    assert main([]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_missing_model_prints_usage(capsys):
    assert main(["coverage"]) == EXIT_USAGE
    err = capsys.readouterr().err
    assert "--model is required" in err and "normal_location" in err


def test_unknown_model(capsys):
    assert main(["profile", "--model", "nope"]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_unknown_summaries(capsys):
    assert main(["profile", "--model", "normal_location", "--summaries",
                 "bogus"]) == EXIT_USAGE
    assert "bogus" in capsys.readouterr().err


def test_bad_grid(capsys):
    assert main(["profile", "--model", "normal_variance", "--grid",
                 "2:8"]) == EXIT_USAGE


def test_runtime_failure_exit_code(tmp_path, capsys):
    code = main(["profile", "--model", "normal_location", "--summaries",
                 "moments4", "--m", "3", "--out", str(tmp_path / "p.csv")])
    assert code == EXIT_RUNTIME
    assert "DimensionError" in capsys.readouterr().err
    assert not (tmp_path / "p.csv").exists()


def test_profile_command(tmp_path, capsys):
    out = tmp_path / "p.csv"
    code = main(["profile", "--model", "normal_variance", "--summaries",
                 "g1", "--grid", "2:8:7", "--m", "25", "--repeats", "5",
                 "--out", str(out)])
    assert code == EXIT_OK
    header, rows = read_csv(out)
    assert header[:4] == ["theta", "mean", "lower", "upper"]
    assert len(rows) == 7
    line = capsys.readouterr().out.strip()
    assert line.count("\n") == 0 and str(out) in line


def test_coverage_rerun_is_byte_identical(tmp_path):
    paths = []
    for name in ("a.csv", "b.csv"):
        out = tmp_path / name
        assert main(["coverage", "--model", "normal_location", "--summaries",
                     "mean", "--replicates", "2", "--seed", "7", *QUICK,
                     "--out", str(out)]) == EXIT_OK
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()
    rep = [p.with_name(p.stem + ".replicates.csv") for p in paths]
    assert rep[0].read_bytes() == rep[1].read_bytes()


def test_repeated_summaries_flag(tmp_path):
    out = tmp_path / "c.csv"
    assert main(["coverage", "--model", "normal_location", "--summaries",
                 "mean", "--summaries", "moments4", "--replicates", "1",
                 *QUICK, "--out", str(out)]) == EXIT_OK
    _, rows = read_csv(out)
    assert [r[0] for r in rows] == ["mean", "moments4"]


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "spec.json"
    cfg.write_text(json.dumps({"model": "normal_variance", "summaries": ["g2"],
                               "grid": [3, 5, 3], "repeats": 2, "m": 30}))
    out = tmp_path / "p.csv"
    assert main(["profile", "--config", str(cfg), "--m", "40",
                 "--out", str(out)]) == EXIT_OK
    meta = json.loads(out.with_suffix(".json").read_text())
    assert meta["spec"]["m"] == 40 and meta["summaries"] == "g2"


def test_config_file_errors(tmp_path):
    assert main(["profile", "--config", str(tmp_path / "none.json")]) \
        == EXIT_USAGE
    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2]")
    assert main(["profile", "--config", str(bad)]) == EXIT_USAGE
    extra = tmp_path / "extra.json"
    extra.write_text(json.dumps({"model": "gk", "colour": "red"}))
    assert main(["profile", "--config", str(extra)]) == EXIT_USAGE


@pytest.mark.skipif(shutil.which("elabc") is None,
                    reason="console script not installed")
def test_console_script_exit_status():
    res = subprocess.run(["elabc", "sample"], capture_output=True, text=True)
    assert res.returncode == 1 and "usage" in res.stderr
