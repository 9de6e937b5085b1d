"""Truncation toward a mean and distance-to-mean analyses.

The truncation map w' = mean + psi * (w - mean) pulls latents toward a
reference mean; distances to that mean scale exactly by psi, which is the
property the reports here make auditable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DimensionMismatchError, EmptyHubSetError, EmptySetError
from .hubness import HubProfile
from .latents import RAW, LatentSet

DEFAULT_PSIS = (0.7, 0.8)

ALL_MEAN = "all_mean"
HUB_MEAN = "hub_mean"


@dataclass(frozen=True)
class TruncationReport:
    psi: float
    mean_vector: np.ndarray
    pre_distance: np.ndarray   # distance to mean before truncation
    post_distance: np.ndarray  # distance to mean after truncation
    summary: dict  # {"pre": {mean,min,max}, "post": {mean,min,max}}


@dataclass(frozen=True)
class DistanceHistogram:
    reference: str    # all_mean | hub_mean
    group_label: str  # random | hubs | truncated(psi)
    bin_edges: np.ndarray
    counts: np.ndarray
    mean_distance: float


def _check_dims(latents: LatentSet, vec: np.ndarray) -> np.ndarray:
    vec = np.asarray(vec, dtype=np.float64).ravel()
    if vec.shape[0] != latents.dims:
        raise DimensionMismatchError(
            f"reference has {vec.shape[0]} components, set has {latents.dims}")
    return vec


def empirical_mean(latents: LatentSet) -> np.ndarray:
    """Per-coordinate arithmetic mean, accumulated in float64."""
    if latents.count < 1:
        raise EmptySetError("cannot average an empty set")
    return latents.data.astype(np.float64).mean(axis=0)


def distances_to(latents: LatentSet, reference: np.ndarray) -> np.ndarray:
    """Euclidean distance from each latent to a reference vector."""
    ref = _check_dims(latents, reference)
    diff = latents.data.astype(np.float64) - ref
    return np.sqrt(np.einsum("ij,ij->i", diff, diff))


def _column_summary(col: np.ndarray) -> dict:
    return {"mean": float(col.mean()), "min": float(col.min()), "max": float(col.max())}


def truncate(latents: LatentSet, mean: np.ndarray, psi: float) -> tuple[LatentSet, TruncationReport]:
    """Map each vector affinely toward `mean` by factor psi in [0, 1]."""
    if not 0.0 <= psi <= 1.0:
        raise ConfigError(f"psi must be in [0, 1], got {psi}")
    ref = _check_dims(latents, mean)
    pre = distances_to(latents, ref)
    data = ref + psi * (latents.data.astype(np.float64) - ref)
    truncated = LatentSet(data=data.astype(np.float32), seed=latents.seed,
                          normalization=RAW,
                          metadata={**latents.metadata, "truncation_psi": psi})
    post = distances_to(truncated, ref)
    report = TruncationReport(
        psi=psi, mean_vector=ref, pre_distance=pre, post_distance=post,
        summary={"pre": _column_summary(pre), "post": _column_summary(post)},
    )
    return truncated, report


def _fd_bin_edges(pooled: np.ndarray) -> np.ndarray:
    """Freedman-Diaconis edges over the pooled distances of all groups."""
    lo, hi = float(pooled.min()), float(pooled.max())
    if hi <= lo:
        return np.array([lo, lo + 1.0])
    q75, q25 = np.percentile(pooled, [75, 25])
    width = 2.0 * (q75 - q25) / np.cbrt(pooled.size)
    if width <= 0.0:
        width = (hi - lo) / 10.0
    nbins = max(1, int(np.ceil((hi - lo) / width)))
    return np.linspace(lo, hi, nbins + 1)


def central_clustering_report(latents: LatentSet, profile: HubProfile, t: int,
                              psis=DEFAULT_PSIS) -> list[DistanceHistogram]:
    """Distance histograms of random, hub, and truncated latents.

    For each reference mean (mean of all latents, mean of hub latents)
    emits one histogram per group with shared bin edges, so the central
    clustering of hubs and its psi-scaled truncation approximation can be
    compared directly.
    """
    m = profile.hub_values
    hub_idx = np.flatnonzero(m >= t)
    if hub_idx.size == 0:
        raise EmptyHubSetError(f"no latents with m >= {t}")

    all_mean = empirical_mean(latents)
    hub_data = latents.data[hub_idx]
    hub_set = LatentSet(data=hub_data, normalization=RAW)
    hub_mean = empirical_mean(hub_set)

    out: list[DistanceHistogram] = []
    for ref_name, ref in ((ALL_MEAN, all_mean), (HUB_MEAN, hub_mean)):
        groups = [("random", distances_to(latents, ref)),
                  ("hubs", distances_to(hub_set, ref))]
        for psi in psis:
            truncated, _ = truncate(latents, all_mean, psi)
            groups.append((f"truncated({psi})", distances_to(truncated, ref)))
        edges = _fd_bin_edges(np.concatenate([d for _, d in groups]))
        for label, dist in groups:
            counts, _ = np.histogram(dist, bins=edges)
            out.append(DistanceHistogram(
                reference=ref_name, group_label=label, bin_edges=edges,
                counts=counts, mean_distance=float(dist.mean())))
    return out
