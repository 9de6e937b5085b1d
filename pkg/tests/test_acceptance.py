"""Acceptance suite: one test per release criterion, each printing a
pass/fail line with its measured numbers.
"""

import json
import time

import numpy as np
import pytest

from hublatent.cli import main as cli_main
from hublatent.geometry import distances_to, empirical_mean, truncate
from hublatent.hubness import hub_values, select_hq, select_lq, select_top
from hublatent.knn import KnnResult, knn_exact, knn_oracle
from hublatent.latents import SamplerConfig, sample_latents

from test_classbalance import transport_lp  # noqa: E402
from hublatent.classbalance import ClassHistogram, wasserstein_1d


def report(name, ok, detail=""):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_conservation_grid():
    start = time.perf_counter()
    checked = 0
    for d in (8, 64, 512):
        for n in (100, 1000, 10000):
            latents = sample_latents(SamplerConfig(dims=d, count=n, seed=d + n))
            full = knn_exact(latents, 10)
            for k in (1, 5, 10):
                # k-NN lists are prefixes of the k=10 lists
                sliced = KnnResult(k=k, neighbors=full.neighbors[:, :k],
                                   distances=full.distances[:, :k])
                profile = hub_values(sliced, n)
                assert int(profile.hub_values.sum()) == k * n
                checked += 1
    elapsed = time.perf_counter() - start
    report("conservation grid", elapsed < 120,
           f"{checked} (d,n,k) cells, sum(m) == k*n everywhere, {elapsed:.1f}s")


def test_oracle_equivalence_100_instances():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    for trial in range(100):
        n = int(rng.integers(12, 501))
        d = int(rng.integers(1, 65))
        k = int(rng.integers(1, min(11, n)))
        latents = sample_latents(SamplerConfig(dims=d, count=n, seed=trial))
        fast = knn_exact(latents, k)
        slow = knn_oracle(latents, k)
        np.testing.assert_array_equal(fast.neighbors, slow.neighbors)
        np.testing.assert_allclose(fast.distances, slow.distances, rtol=1e-5)
    elapsed = time.perf_counter() - start
    report("oracle equivalence", elapsed < 60,
           f"100 random instances, indices exact, distances rtol 1e-5, {elapsed:.1f}s")


def test_hubness_emergence():
    latents = sample_latents(SamplerConfig(dims=512, count=10000, seed=31))
    profile = hub_values(knn_exact(latents, 5), 10000)
    ok = profile.stats.skewness > 1.0 and profile.stats.max >= 25
    report("hubness emergence", ok,
           f"max m = {profile.stats.max} (>= 25), "
           f"skewness = {profile.stats.skewness:.2f} (> 1)")


def test_central_clustering_10_seeds():
    wins = 0
    ratios = []
    for seed in range(10):
        latents = sample_latents(SamplerConfig(dims=512, count=10000, seed=seed))
        profile = hub_values(knn_exact(latents, 5), 10000)
        mean = empirical_mean(latents)
        dist = distances_to(latents, mean)
        hub_idx = profile.hub_values >= 50
        assert hub_idx.any()
        hub_mean = dist[hub_idx].mean()
        rand_mean = dist.mean()
        ratios.append(hub_mean / rand_mean)
        wins += hub_mean < rand_mean
    report("central clustering", wins == 10,
           f"hub Dist2Mean < random Dist2Mean in {wins}/10 runs, "
           f"mean ratio {np.mean(ratios):.3f}")


def test_truncation_exactness():
    latents = sample_latents(SamplerConfig(dims=128, count=2000, seed=5))
    mean = empirical_mean(latents)
    for psi in (0.7, 0.8, 0.0, 1.0):
        _, rep = truncate(latents, mean, psi)
        np.testing.assert_allclose(rep.post_distance, psi * rep.pre_distance,
                                   rtol=1e-5, atol=1e-7)
    once, _ = truncate(latents, mean, 0.7)
    twice, _ = truncate(once, mean, 0.8)
    direct, _ = truncate(latents, mean, 0.7 * 0.8)
    np.testing.assert_allclose(twice.data, direct.data, rtol=1e-5, atol=1e-6)
    report("truncation exactness", True,
           "post = psi*pre for psi in {0.7, 0.8, 0, 1}; composition psi1*psi2 holds")


def test_selection_semantics():
    latents = sample_latents(SamplerConfig(dims=128, count=2000, seed=6))
    profile = hub_values(knn_exact(latents, 5), 2000)
    prev = None
    for t in range(1, profile.stats.max + 1, 3):
        current = set(select_hq(profile, t).indices)
        if prev is not None:
            assert current <= prev
        prev = current
        combined = sorted(select_hq(profile, t).indices
                          + select_lq(profile, t - 1).indices)
        assert combined == list(range(2000))

    def stream():
        for b in range(50):
            batch = sample_latents(SamplerConfig(dims=128, count=2000, seed=100 + b))
            yield batch, hub_values(knn_exact(batch, 5), 2000)

    t = 15
    n_out = 2500  # larger than one batch to force the multi-batch path
    result = select_top(stream(), t=t, n_out=n_out)
    assert len(result.indices) == n_out
    assert result.batches_drawn >= 2
    for b, i in result.indices:
        if b > 0:
            batch = sample_latents(SamplerConfig(dims=128, count=2000, seed=100 + b))
            mp = hub_values(knn_exact(batch, 5), 2000)
            assert mp.hub_values[i] > t
    report("selection semantics", True,
           f"nesting + boundary partition hold; top-n' drew "
           f"{result.batches_drawn} batches for {n_out} latents, m > {t} beyond batch 1")


def test_wasserstein_against_lp_oracle():
    rng = np.random.default_rng(99)
    worst = 0.0
    for _ in range(100):
        p = rng.random(10)
        q = rng.random(10)
        p, q = p / p.sum(), q / q.sum()
        ours = wasserstein_1d(ClassHistogram(probs=p), ClassHistogram(probs=q))
        lp = transport_lp(p, q)
        worst = max(worst, abs(ours - lp))
    report("wasserstein correctness", worst <= 1e-8,
           f"100 random C=10 pairs, max |cdf - LP| = {worst:.2e}")


def test_scaling_trend():
    def timed(n):
        latents = sample_latents(SamplerConfig(dims=512, count=n, seed=1))
        best = np.inf
        for _ in range(2):
            start = time.perf_counter()
            knn_exact(latents, 5)
            best = min(best, time.perf_counter() - start)
        return best

    t10k = timed(10000)
    t20k = timed(20000)
    ratio = t20k / t10k
    report("scaling trend", 3.0 <= ratio <= 6.0,
           f"time(20k)/time(10k) = {ratio:.2f} "
           f"({t10k:.2f}s -> {t20k:.2f}s), target [3, 6]")


def test_pipeline_determinism(tmp_path):
    manifests = []
    for name in ("a", "b"):
        outdir = tmp_path / "out"
        cfg = {"dims": 128, "count": 1000, "seed": 3, "k": 5, "t": 10,
               "psis": [0.7, 0.8], "outdir": str(outdir)}
        cfg_path = tmp_path / f"{name}.json"
        cfg_path.write_text(json.dumps(cfg))
        assert cli_main(["pipeline", "--config", str(cfg_path)]) == 0
        manifests.append((outdir / "manifest.json").read_bytes())
    report("pipeline determinism", manifests[0] == manifests[1],
           "two runs of one config produced byte-identical manifests")
