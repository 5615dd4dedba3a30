import json
import subprocess
import sys

import pytest

from columntess.cli import main

BRICK = {"generator": {"family": "brick_wall", "length": 4},
         "zprocess": {"kind": "unit_lattice", "height": 4}}


@pytest.fixture()
def config(tmp_path):
    p = tmp_path / "config.json"
    p.write_text(json.dumps(BRICK))
    return str(p)


def test_generate(config, tmp_path):
    out = tmp_path / "g"
    assert main(["generate", "--config", config, "--out", str(out)]) == 0
    doc = json.loads((out / "planar.json").read_text())
    assert doc["schema"] == "columntess.planar/1"
    assert len(doc["marks"]) == len(doc["cells"])


def test_build_and_estimate(config, tmp_path):
    out = tmp_path / "b"
    assert main(["generate", "--config", config, "--out", str(out)]) == 0
    assert main(["build", "--config", config, "--out", str(out),
                 "--planar", str(out / "planar.json")]) == 0
    assert (out / "column.obj").read_text().startswith("v ")
    assert main(["estimate", "--column", str(out / "column.json"), "--out", str(out)]) == 0
    doc = json.loads((out / "summaries.json").read_text())
    assert set(doc) == {"column", "planar", "marks"}
    assert doc["column"]["values"]["lam_v"] == pytest.approx(6.0)
    assert main(["estimate", "--planar", str(out / "planar.json"), "--out", str(out)]) == 0
    assert json.loads((out / "summaries.json").read_text())["planar"]["values"]["phi"] == 1


def test_predict(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"lam_v": 2, "mu_ve": 3, "phi": 1, "mu_e_vpi": 2, "mu2_ve": 9}))
    assert main(["predict", "--input", str(good), "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "prediction.json").read_text())
    assert doc["prediction"]["values"]["lam_p"] == pytest.approx(7.0)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"lam_v": 2, "mu_ve": 7, "phi": 0, "mu_e_vpi": 0, "mu2_ve": 49}))
    assert main(["predict", "--input", str(bad), "--out", str(tmp_path)]) == 1
    assert "μ'_VE ≤ 6 − 2φ" in capsys.readouterr().err


def test_verify_and_overrides(config, tmp_path, capsys):
    out = tmp_path / "v"
    assert main(["verify", "--config", config, "--out", str(out), "--seed", "3",
                 "--tolerance-topo", "0.05"]) == 0
    report = json.loads((out / "report.json").read_text())
    assert report["verdict"] == "pass"
    assert report["provenance"]["master_seed"] == 3
    assert report["provenance"]["config"]["tolerances"]["topo"] == 0.05
    assert "verdict: pass" in capsys.readouterr().out


def test_verify_fails_with_exit_one(tmp_path):
    # doubled marks double every intensity, which the height-1 forms ignore
    cfg = {"generator": {"family": "poisson_voronoi", "length": 4}, "mark_scale": 2.0,
           "zprocess": {"kind": "poisson", "height": 3}, "prediction": "height1",
           "quantities": ["lam_v"]}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    assert main(["verify", "--config", str(p), "--out", str(tmp_path)]) == 1


def test_library_errors_exit_two(tmp_path, capsys):
    cfg = {"generator": {"family": "brick_wall", "length": 4.5}}
    p = tmp_path / "c.json"
    p.write_text(json.dumps(cfg))
    assert main(["generate", "--config", str(p), "--out", str(tmp_path)]) == 2
    assert "IncommensurateWindow" in capsys.readouterr().err


def test_missing_config():
    with pytest.raises(SystemExit):
        main(["verify"])


def test_module_entry_point(config, tmp_path):
    res = subprocess.run([sys.executable, "-m", "columntess", "verify", "--config", config,
                          "--out", str(tmp_path)], capture_output=True, text=True)
    assert res.returncode == 0, res.stderr
    assert res.stdout.strip().endswith("verdict: pass")
