"""Command-line surface for the latent sampling pipeline.

Exit codes: 0 success, 1 usage, 2 data error, 3 internal error. Failures
print ``error: <category>: <message>`` on stderr and remove any partially
written outputs. Every CSV/JSON report carries the hash of the invocation
parameters that produced it.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import classbalance, geometry, hubness, knn
from .errors import ConfigError, HublatentError
from .latentfile import read_latents, write_latents
from .latents import RAW, SPHERE, LatentSet, SamplerConfig, sample_latents
from .manifest import RunManifest, params_hash

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


def _default_threads() -> int:
    return os.cpu_count() or 1


def _write_csv(path, run_hash: str, header: list[str], rows, extra_comments=()):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# run_hash={run_hash}\n")
        for line in extra_comments:
            fh.write(f"# {line}\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _write_json(path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _read_hub_csv(path) -> tuple[np.ndarray, int | None]:
    """Read an index,m CSV; returns hub values ordered by index, and k."""
    k = None
    pairs = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            first = row[0].strip()
            if first.startswith("#"):
                text = ",".join(row).lstrip("#").strip()
                if text.startswith("k="):
                    k = int(text[2:])
                continue
            if not first.lstrip("-").isdigit():
                continue  # header
            pairs.append((int(first), int(row[1])))
    if not pairs:
        raise ConfigError(f"no hub rows found in {path}")
    n = max(i for i, _ in pairs) + 1
    m = np.zeros(n, dtype=np.int64)
    for i, v in pairs:
        m[i] = v
    return m, k


def _read_counts_csv(path) -> list[int]:
    """Read a class_index,count CSV (external classifier output)."""
    rows = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            if not row[0].strip().lstrip("-").isdigit():
                continue
            rows[int(row[0])] = int(row[1])
    if not rows:
        raise ConfigError(f"no count rows found in {path}")
    return [rows.get(i, 0) for i in range(max(rows) + 1)]


def _profile_from_values(m: np.ndarray, k: int) -> hubness.HubProfile:
    """Rebuild a HubProfile from hub values read back off disk."""
    from scipy import stats as sp_stats
    values, counts = np.unique(m, return_counts=True)
    skewness = 0.0 if values.size == 1 else float(sp_stats.skew(m, bias=False))
    stats = hubness.HubStats(max=int(m.max()), mean=float(m.mean()),
                             median=float(np.median(m)), skewness=skewness)
    return hubness.HubProfile(k=k, hub_values=m,
                              histogram={int(v): int(c) for v, c in zip(values, counts)},
                              stats=stats)


def _parse_kv(text: str) -> dict:
    out = {}
    for part in text.split(","):
        if not part:
            continue
        key, _, value = part.partition("=")
        out[key.strip().replace("-", "_")] = int(value)
    return out


# ---------------------------------------------------------------- commands

def cmd_sample(args, run_hash, created):
    norm = SPHERE if args.sphere else RAW
    cfg = SamplerConfig(dims=args.dims, count=args.count, seed=args.seed,
                        normalization=norm)
    latents = sample_latents(cfg)
    created.append(args.out)
    write_latents(args.out, latents)


def _hub_profile_for(args, latents):
    result = knn.knn_exact(latents, args.k, threads=args.threads)
    return hubness.hub_values(result, latents.count)


def cmd_hubs(args, run_hash, created):
    latents = read_latents(args.infile)
    profile = _hub_profile_for(args, latents)
    created.append(args.out)
    _write_csv(args.out, run_hash, ["index", "m"],
               [(i, int(v)) for i, v in enumerate(profile.hub_values)],
               extra_comments=[f"k={args.k}"])
    if args.hist:
        created.append(args.hist)
        _write_csv(args.hist, run_hash, ["m", "count"],
                   sorted(profile.histogram.items()),
                   extra_comments=[f"k={args.k}"])


def cmd_select(args, run_hash, created):
    latents = read_latents(args.infile)
    m, k = _read_hub_csv(args.hubs)
    if m.shape[0] != latents.count:
        # hub CSV rows are dense from 0..n-1; pad to the set size
        if m.shape[0] > latents.count:
            raise ConfigError("hub file has more rows than the latent set")
        m = np.concatenate([m, np.zeros(latents.count - m.shape[0], dtype=np.int64)])
    profile = _profile_from_values(m, k or 1)

    modes = [args.t is not None, args.t_lq is not None, args.top is not None]
    if sum(modes) != 1 and not (args.top is not None and args.t is not None):
        raise ConfigError("choose exactly one of --t, --t-lq, or --top (with --t)")

    if args.top is not None:
        if args.t is None:
            raise ConfigError("--top requires --t for the multi-batch rule")
        result = _select_top_cli(args, latents, profile, k)
        vectors = result.vectors
    elif args.t is not None:
        result = hubness.select_hq(profile, args.t)
        vectors = latents.data[result.indices] if result.indices else None
    else:
        result = hubness.select_lq(profile, args.t_lq)
        vectors = latents.data[result.indices] if result.indices else None

    if vectors is None or len(vectors) == 0:
        raise ConfigError("selection is empty; nothing to write")
    selected = LatentSet(data=vectors, normalization=RAW,
                         metadata={**latents.metadata, "selection": result.rule})
    created.append(args.out)
    write_latents(args.out, selected)
    report_path = args.report or (args.out + ".json")
    created.append(report_path)
    _write_json(report_path, {
        "run_hash": run_hash,
        "rule": result.rule,
        "indices": result.indices,
        "batches_drawn": result.batches_drawn,
        "m": [int(v) for v in _selected_m(result, profile, args)],
    })


def _selected_m(result, profile, args):
    if args.top is not None:
        return []  # per-batch hub values are not retained across the stream
    return profile.hub_values[result.indices]


def _select_top_cli(args, latents, profile, k):
    if k is None:
        raise ConfigError("hub CSV lacks a '# k=' comment needed for --top")
    factory = _parse_kv(args.batch_factory) if args.batch_factory else {}
    seed0 = factory.get("seed0", (latents.seed or 0) + 1)
    max_batches = factory.get("max_batches", 16)
    count = factory.get("count", latents.count)

    def stream():
        yield latents, profile
        for j in range(max_batches - 1):
            cfg = SamplerConfig(dims=latents.dims, count=count, seed=seed0 + j,
                                normalization=latents.normalization)
            batch = sample_latents(cfg)
            result = knn.knn_exact(batch, k, threads=args.threads)
            yield batch, hubness.hub_values(result, batch.count)

    return hubness.select_top(stream(), t=args.t, n_out=args.top)


def cmd_spectrum(args, run_hash, created):
    m, k = _read_hub_csv(args.hubs)
    profile = _profile_from_values(m, k or 1)
    order = hubness.spectrum(profile)
    created.append(args.out)
    _write_csv(args.out, run_hash, ["rank", "index", "m"],
               [(rank, idx, int(m[idx])) for rank, idx in enumerate(order)])


def cmd_truncate(args, run_hash, created):
    latents = read_latents(args.infile)
    if args.mean_from:
        mean = geometry.empirical_mean(read_latents(args.mean_from))
    else:
        mean = geometry.empirical_mean(latents)
    truncated, report = geometry.truncate(latents, mean, args.psi)
    created.append(args.out)
    write_latents(args.out, truncated)
    if args.report:
        created.append(args.report)
        _write_json(args.report, {
            "run_hash": run_hash,
            "psi": report.psi,
            "summary": report.summary,
            "pre_distance": report.pre_distance.tolist(),
            "post_distance": report.post_distance.tolist(),
        })


def cmd_stats(args, run_hash, created):
    latents = read_latents(args.infile)
    m, _ = _read_hub_csv(args.hubs)
    profile = _profile_from_values(m, 1)
    psis = [float(p) for p in args.psis.split(",") if p]
    histograms = geometry.central_clustering_report(latents, profile, args.t, psis)
    payload = {
        "run_hash": run_hash,
        "t": args.t,
        "psis": psis,
        "groups": [
            {"reference": h.reference, "group": h.group_label,
             "mean_distance": h.mean_distance,
             "bin_edges": h.bin_edges.tolist(),
             "counts": h.counts.tolist()}
            for h in histograms
        ],
    }
    created.append(args.out)
    _write_json(args.out, payload)
    if args.hist_dir:
        Path(args.hist_dir).mkdir(parents=True, exist_ok=True)
        for h in histograms:
            name = f"{h.reference}__{h.group_label}.csv".replace("(", "_").replace(")", "")
            path = str(Path(args.hist_dir) / name)
            created.append(path)
            rows = [(float(lo), float(hi), int(c)) for lo, hi, c in
                    zip(h.bin_edges[:-1], h.bin_edges[1:], h.counts)]
            _write_csv(path, run_hash, ["bin_lo", "bin_hi", "count"], rows)


def cmd_wasserstein(args, run_hash, created):
    p = classbalance.from_counts(_read_counts_csv(args.p), label=args.p)
    q = classbalance.from_counts(_read_counts_csv(args.q), label=args.q)
    if args.metric == "w1":
        value = classbalance.wasserstein_1d(p, q)
    else:
        value = classbalance.total_variation(p, q)
    created.append(args.out)
    _write_json(args.out, {
        "run_hash": run_hash,
        "metric": args.metric,
        "distance": value,
        "p": args.p,
        "q": args.q,
        "classes": p.classes,
    })


def cmd_pipeline(args, run_hash, created):
    with open(args.config, encoding="utf-8") as fh:
        cfg = json.load(fh)
    # Hash the config contents, not the invocation, so identical configs
    # produce byte-identical outputs regardless of the config file's path.
    run_hash = params_hash(cfg)
    outdir = Path(cfg.get("outdir", "."))
    outdir.mkdir(parents=True, exist_ok=True)
    threads = cfg.get("threads", args.threads)

    latents = sample_latents(SamplerConfig(
        dims=cfg["dims"], count=cfg["count"], seed=cfg["seed"],
        normalization=SPHERE if cfg.get("sphere") else RAW))
    latents_path = outdir / "latents.hubl"
    created.append(str(latents_path))
    write_latents(latents_path, latents)

    k = cfg.get("k", 5)
    result = knn.knn_exact(latents, k, threads=threads)
    profile = hubness.hub_values(result, latents.count)
    hubs_path = outdir / "hubs.csv"
    created.append(str(hubs_path))
    _write_csv(hubs_path, run_hash, ["index", "m"],
               [(i, int(v)) for i, v in enumerate(profile.hub_values)],
               extra_comments=[f"k={k}"])
    hist_path = outdir / "hist.csv"
    created.append(str(hist_path))
    _write_csv(hist_path, run_hash, ["m", "count"],
               sorted(profile.histogram.items()), extra_comments=[f"k={k}"])

    t = cfg.get("t", 50)
    selection = hubness.select_hq(profile, t)
    selected_path = outdir / "selected.hubl"
    if selection.indices:
        created.append(str(selected_path))
        write_latents(selected_path, LatentSet(
            data=latents.data[selection.indices], normalization=RAW,
            metadata={**latents.metadata, "selection": selection.rule}))

    psis = cfg.get("psis", [0.7, 0.8])
    stats_path = outdir / "stats.json"
    if selection.indices:
        histograms = geometry.central_clustering_report(latents, profile, t, psis)
        created.append(str(stats_path))
        _write_json(stats_path, {
            "run_hash": run_hash, "t": t, "psis": psis,
            "groups": [
                {"reference": h.reference, "group": h.group_label,
                 "mean_distance": h.mean_distance,
                 "bin_edges": h.bin_edges.tolist(),
                 "counts": h.counts.tolist()}
                for h in histograms
            ],
        })

    manifest = RunManifest(params=cfg)
    for path in created:
        manifest.add_output(path, outdir)
    manifest_path = outdir / "manifest.json"
    created.append(str(manifest_path))
    manifest.write(manifest_path)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hublatent",
                                     description="Hub-value latent sampling pipeline")
    parser.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker threads for the k-NN kernel")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sample", help="draw Gaussian latents into a .hubl file")
    p.add_argument("--dims", type=int, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sphere", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("hubs", help="compute per-latent hub values")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--hist")
    p.set_defaults(func=cmd_hubs)

    p = sub.add_parser("select", help="select latents by hub-value rule")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--hubs", required=True)
    p.add_argument("--t", type=int)
    p.add_argument("--t-lq", dest="t_lq", type=int)
    p.add_argument("--top", type=int)
    p.add_argument("--batch-factory", dest="batch_factory",
                   help="seed0=INT,max_batches=INT[,count=INT]")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("spectrum", help="full descending-m ranking")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--hubs", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("truncate", help="pull latents toward a mean")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--psi", type=float, required=True)
    p.add_argument("--mean-from", dest="mean_from")
    p.add_argument("--out", required=True)
    p.add_argument("--report")
    p.set_defaults(func=cmd_truncate)

    p = sub.add_parser("stats", help="central-clustering distance report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--hubs", required=True)
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--psis", default="0.7,0.8")
    p.add_argument("--out", required=True)
    p.add_argument("--hist-dir", dest="hist_dir")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("wasserstein", help="compare two class-count files")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--metric", choices=["w1", "tv"], default="w1")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_wasserstein)

    p = sub.add_parser("pipeline", help="sample -> hubs -> select -> stats")
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def _invocation_hash(args: argparse.Namespace) -> str:
    payload = {key: value for key, value in vars(args).items()
               if key != "func" and isinstance(value, (int, float, str, bool, type(None)))}
    return params_hash(payload)


def _cleanup(created: list) -> None:
    for path in created:
        try:
            os.unlink(path)
        except OSError:
            pass


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    created: list = []
    try:
        args.func(args, _invocation_hash(args), created)
    except HublatentError as exc:
        print(f"error: {exc.category}: {exc}", file=sys.stderr)
        _cleanup(created)
        return EXIT_DATA
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: internal: {exc}", file=sys.stderr)
        _cleanup(created)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
