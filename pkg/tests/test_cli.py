import json
import subprocess
import sys

import pytest

from rochehecke.cli import SessionConfig, main
from rochehecke.errors import ConfigError


def run(tmp_path, *args, config=None, name="out.json"):
    argv = list(args)
    if config is not None:
        path = tmp_path / "config.json"
        path.write_text(json.dumps(config))
        argv += ["--config", str(path)]
    out = tmp_path / name
    code = main(argv + ["--out", str(out)])
    return code, out.read_text()


def test_describe(tmp_path):
    code, text = run(tmp_path, "describe")
    assert code == 0
    report = json.loads(text)
    assert report["schema"] == "v1" and report["pass"]
    row = report["results"][0]
    assert row["J_level_matrix"] == [[0, 1], [1, 0]]
    assert row["A_order"] == 36 and row["m"] == 6 and row["regular"]


def test_volume_table_row(tmp_path):
    code, text = run(tmp_path, "volume-table")
    assert code == 0
    rows = {tuple(r["lambda"]): r for r in json.loads(text)["results"]}
    r = rows[(1, 0)]
    assert (r["formula"], r["oracle"], r["match"]) == (3, 3, True)
    assert r["jprime_oracle"] == 108


def test_reports_are_deterministic(tmp_path):
    cfg = {"q": 2, "conductor": 2, "seed": 5, "samples": {"products": 40}}
    a = run(tmp_path, "coset-laws", config=cfg, name="a.json")
    b = run(tmp_path, "coset-laws", config=cfg, name="b.json")
    assert a == b and a[0] == 0


def test_csv_output(tmp_path):
    code, text = run(tmp_path, "semismall", "--format", "csv", config={"q": 2}, name="s.csv")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "lambda,nu,fiber_dim_formula,fiber_dim_oracle,bound,pass"
    assert all(line.endswith("True") for line in lines[1:])


def test_phi_oracle_command(tmp_path):
    code, text = run(tmp_path, "phi-oracle", config={"q": 2, "box": 2})
    assert code == 0
    rows = json.loads(text)["results"]
    assert len(rows) == 25 and all(r["b_times_count"] == "1" for r in rows)


def test_config_errors(tmp_path):
    with pytest.raises(ConfigError):
        SessionConfig.from_dict({"q": 6})
    with pytest.raises(ConfigError):
        SessionConfig.from_dict({"colour": 1})
    with pytest.raises(ConfigError):
        SessionConfig.from_dict({"samples": {"lots": 3}})
    code, text = run(tmp_path, "describe", config={"q": 6})
    assert code == 2
    failure = json.loads(text)
    assert failure["error"] == "ConfigError" and failure["pass"] is False


def test_satake_needs_regular_character(tmp_path):
    code, text = run(tmp_path, "verify-satake", config={"q": 2, "conductor": 1})
    assert code == 2 and "regular" in json.loads(text)["message"]


def test_conductor_mapping(tmp_path):
    cfg = {"q": 3, "N": 3, "conductor": {"1,2": 2, "1,3": 2, "2,3": 1}, "box": 0}
    code, text = run(tmp_path, "describe", config=cfg)
    assert code == 0
    row = json.loads(text)["results"][0]
    assert row["conductors"]["e1-e2"] == 2 and row["conductors"]["e2-e3"] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "rochehecke", "describe"], capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["command"] == "describe"


def test_stability_designated_suite(tmp_path):
    code, text = run(tmp_path, "stability", "--suite", "volume-table", "--suite", "phi-oracle",
                     config={"q": 2})
    assert code == 0
    rows = json.loads(text)["results"]
    assert [r["suite"] for r in rows] == ["volume-table", "phi-oracle"]
    assert all(r["identical"] and r["n_trunc_plus_one"] == r["n_trunc"] + 1 for r in rows)
