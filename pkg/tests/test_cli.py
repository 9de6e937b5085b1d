import csv
import json

import numpy as np
import pytest

from hublatent.cli import main
from hublatent.latentfile import read_latents


def run(args):
    return main([str(a) for a in args])


def read_csv_rows(path):
    rows = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].startswith("#"):
                continue
            if not row[0].lstrip("-").isdigit():
                continue
            rows.append([int(x) if x.lstrip("-").isdigit() else x for x in row])
    return rows


@pytest.fixture
def sampled(tmp_path):
    latents = tmp_path / "s.hubl"
    hubs = tmp_path / "hubs.csv"
    hist = tmp_path / "hist.csv"
    assert run(["sample", "--dims", 64, "--count", 500, "--seed", 7,
                "--out", latents]) == 0
    assert run(["hubs", "--in", latents, "--k", 5, "--out", hubs,
                "--hist", hist]) == 0
    return latents, hubs, hist


def test_sample_then_hubs_conservation(sampled):
    _, hubs, hist = sampled
    rows = read_csv_rows(hubs)
    assert len(rows) == 500
    assert sum(m for _, m in rows) == 5 * 500
    hist_rows = read_csv_rows(hist)
    assert sum(c for _, c in hist_rows) == 500


def test_select_hq(sampled, tmp_path):
    latents, hubs, _ = sampled
    out = tmp_path / "hq.hubl"
    assert run(["select", "--in", latents, "--hubs", hubs, "--t", 8,
                "--out", out]) == 0
    report = json.loads((tmp_path / "hq.hubl.json").read_text())
    m = dict((i, v) for i, v in read_csv_rows(hubs))
    assert report["indices"]
    assert all(m[i] >= 8 for i in report["indices"])
    selected = read_latents(out)
    assert selected.count == len(report["indices"])


def test_select_lq(sampled, tmp_path):
    latents, hubs, _ = sampled
    out = tmp_path / "lq.hubl"
    assert run(["select", "--in", latents, "--hubs", hubs, "--t-lq", 1,
                "--out", out]) == 0
    report = json.loads((tmp_path / "lq.hubl.json").read_text())
    m = dict((i, v) for i, v in read_csv_rows(hubs))
    assert all(m[i] <= 1 for i in report["indices"])


def test_select_top_multi_batch(sampled, tmp_path):
    latents, hubs, _ = sampled
    out = tmp_path / "top.hubl"
    assert run(["select", "--in", latents, "--hubs", hubs, "--top", 600,
                "--t", 8, "--batch-factory", "seed0=100,max_batches=20",
                "--out", out]) == 0
    report = json.loads((tmp_path / "top.hubl.json").read_text())
    assert len(report["indices"]) == 600
    assert report["batches_drawn"] >= 2
    assert read_latents(out).count == 600


def test_spectrum(sampled, tmp_path):
    latents, hubs, _ = sampled
    out = tmp_path / "spectrum.csv"
    assert run(["spectrum", "--in", latents, "--hubs", hubs, "--out", out]) == 0
    rows = read_csv_rows(out)
    assert len(rows) == 500
    ms = [m for _, _, m in rows]
    assert ms == sorted(ms, reverse=True)


def test_truncate_command(sampled, tmp_path):
    latents, _, _ = sampled
    out = tmp_path / "trunc.hubl"
    report_path = tmp_path / "trunc.json"
    assert run(["truncate", "--in", latents, "--psi", 0.7, "--out", out,
                "--report", report_path]) == 0
    report = json.loads(report_path.read_text())
    pre = np.array(report["pre_distance"])
    post = np.array(report["post_distance"])
    np.testing.assert_allclose(post, 0.7 * pre, rtol=1e-5)
    assert "run_hash" in report


def test_stats_command(sampled, tmp_path):
    latents, hubs, _ = sampled
    out = tmp_path / "stats.json"
    hist_dir = tmp_path / "hists"
    assert run(["stats", "--in", latents, "--hubs", hubs, "--t", 8,
                "--psis", "0.7,0.8", "--out", out, "--hist-dir", hist_dir]) == 0
    report = json.loads(out.read_text())
    groups = {(g["reference"], g["group"]): g for g in report["groups"]}
    assert groups[("all_mean", "hubs")]["mean_distance"] \
        < groups[("all_mean", "random")]["mean_distance"]
    assert any(hist_dir.iterdir())


def test_wasserstein_command(tmp_path):
    p = tmp_path / "p.csv"
    q = tmp_path / "q.csv"
    p.write_text("class_index,count\n0,1\n1,1\n2,2\n")
    q.write_text("0,2\n1,1\n2,1\n")
    out = tmp_path / "cmp.json"
    assert run(["wasserstein", "--p", p, "--q", q, "--out", out]) == 0
    report = json.loads(out.read_text())
    assert report["metric"] == "w1"
    assert report["distance"] == pytest.approx(0.5)
    out_tv = tmp_path / "cmp_tv.json"
    assert run(["wasserstein", "--p", p, "--q", q, "--metric", "tv",
                "--out", out_tv]) == 0
    assert json.loads(out_tv.read_text())["distance"] == pytest.approx(0.25)


def test_pipeline_deterministic(tmp_path):
    for name in ("run1", "run2"):
        cfg = {"dims": 64, "count": 400, "seed": 11, "k": 5, "t": 7,
               "psis": [0.7], "outdir": str(tmp_path / name)}
        cfg_path = tmp_path / f"{name}.json"
        cfg_same = dict(cfg)
        cfg_same["outdir"] = str(tmp_path / "runX")
        cfg_path.write_text(json.dumps(cfg_same))
        assert run(["pipeline", "--config", cfg_path]) == 0
        manifest = (tmp_path / "runX" / "manifest.json").read_bytes()
        (tmp_path / f"{name}.manifest").write_bytes(manifest)
    assert (tmp_path / "run1.manifest").read_bytes() \
        == (tmp_path / "run2.manifest").read_bytes()


def test_usage_error_exit_code():
    assert run(["select", "--bogus"]) == 1


def test_data_error_exit_code(tmp_path):
    bad = tmp_path / "bad.hubl"
    bad.write_bytes(b"XXXX" + b"\0" * 40)
    assert run(["hubs", "--in", bad, "--k", 5,
                "--out", tmp_path / "h.csv"]) == 2
    assert not (tmp_path / "h.csv").exists()


def test_partial_outputs_removed(tmp_path, sampled):
    latents, hubs, _ = sampled
    out = tmp_path / "never.hubl"
    # t far above max m -> empty selection -> data error, no file left behind
    code = run(["select", "--in", latents, "--hubs", hubs, "--t", 10**6,
                "--out", out])
    assert code == 2
    assert not out.exists()
