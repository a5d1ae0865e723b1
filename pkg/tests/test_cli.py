import json
import subprocess
import sys

import pytest


def run_cli(*args, env=None):
    return subprocess.run(
        [sys.executable, "-m", "heckecells", *args],
        capture_output=True,
        text=True,
        env=env,
    )


def test_cells_json():
    res = run_cli("cells", "A1~", "--bound", "8", "--out", "json")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["type"] == "A1~"
    assert len(report["cells"]) == 2
    assert sorted(c["a_value"] for c in report["cells"]) == [0, 1]
    assert all(c["complete"] for c in report["cells"])
    assert report["order"] == [[1, 0]]
    assert "convention_id" in report


def test_klpoly():
    res = run_cli("klpoly", "A2~", "e", "1.2.1", "--out", "json")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["p"] == [[3, 1]]
    assert report["w"] == "1.2.1"


def test_klpoly_zero_when_incomparable():
    res = run_cli("klpoly", "A1~", "0.1", "1.0", "--out", "json")
    assert res.returncode == 0
    assert json.loads(res.stdout)["p"] == []


def test_duflo_csv():
    res = run_cli("duflo", "A1~", "--bound", "8", "--out", "csv")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "cell,a_value,word"
    assert "1,1,0" in lines and "1,1,1" in lines


def test_phi_json():
    res = run_cli(
        "phi", "A1~", "--cell", "0", "--weight", "2", "--bound", "8",
        "--out", "json",
    )
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["checks"] == {"central": True, "stable": True}
    assert report["result"] == [
        {"t_word": "e", "coefficient": [[-2, 1], [0, 1], [2, 1]]}
    ]


def test_bijection_json():
    res = run_cli("bijection", "A2~", "--bound", "8", "--out", "json")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert len(report["matching"]) == 3
    assert ["0", "[3]"][1] in [m[1] for m in report["matching"]]


def test_jring_gamma_output():
    res = run_cli(
        "jring", "A1~", "--bound", "6", "--cell", "1", "--out", "json"
    )
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["a_value"] == 1 and report["a_exact"]
    rows = {tuple(r[:3]): r[3] for r in report["gamma"]}
    assert rows[("0", "0", "0")] == 1
    assert ("0", "1", "0") not in rows


def test_usage_errors():
    assert run_cli("cells", "B5~").returncode == 2
    assert run_cli("cells").returncode == 2
    assert run_cli("cells", "A1~", "--bound", "99").returncode == 2
    assert run_cli("phi", "A1~", "--weight", "oops").returncode == 2
    assert run_cli("klpoly", "A1~", "0.3", "0").returncode == 2


def test_verify_exit_codes():
    res = run_cli("verify", "kl-suite", "--type", "A1~", "--bound", "6")
    assert res.returncode == 0
    assert "FAIL" not in res.stdout
    res = run_cli("verify", "nope-suite", "--type", "A1~")
    assert res.returncode != 0


def test_determinism_byte_identical(tmp_path):
    cache = str(tmp_path / "kl.jsonl")
    first = run_cli("cells", "A2~", "--bound", "6", "--cache", cache, "--out", "json")
    second = run_cli("cells", "A2~", "--bound", "6", "--cache", cache, "--out", "json")
    assert first.returncode == second.returncode == 0
    assert first.stdout == second.stdout
    # and the cache file itself is stable once warm
    with open(cache, "rb") as fh:
        blob = fh.read()
    run_cli("cells", "A2~", "--bound", "6", "--cache", cache, "--out", "json")
    with open(cache, "rb") as fh:
        assert fh.read() == blob


def test_cache_info(tmp_path):
    cache = str(tmp_path / "kl.jsonl")
    run_cli("cells", "A1~", "--bound", "6", "--cache", cache)
    res = run_cli("cache-info", "--cache", cache, "--out", "json")
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["header"]["type_label"] == "A1~"
    assert report["complete_columns"] > 0
    assert report["records"] >= report["complete_columns"]


def test_cache_env_dir(tmp_path):
    env = {"PATH": "/usr/bin:/bin", "HECKECELLS_CACHE_DIR": str(tmp_path)}
    res = run_cli("cells", "A1~", "--bound", "4", "--out", "json", env=env)
    assert res.returncode == 0
    assert (tmp_path / "kl-A1.jsonl").exists()


def test_bound_exceeded_exit_code(tmp_path):
    # the image of a deep central element escapes the classified region
    # around a small ball; the CLI reports the smallest sufficient bound
    res = run_cli(
        "phi", "A1~", "--cell", "0", "--weight", "12", "--bound", "2",
    )
    assert res.returncode == 3
    assert "bound" in res.stderr.lower()
    assert "12" in res.stderr
