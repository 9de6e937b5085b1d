"""Hub values and selection rules over k-NN results.

The hub value m_i of latent i is the number of times index i appears in
the neighbor lists of the other latents. Every latent donates exactly k
votes, so sum(m) == k * n and mean(m) == k by construction.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np
from scipy import stats as sp_stats

from .errors import BatchExhaustionError, IndexOutOfRangeError
from .knn import KnnResult
from .latents import LatentSet

SKEWNESS_ESTIMATOR = "adjusted-fisher-pearson"


@dataclass(frozen=True)
class HubStats:
    max: int
    mean: float
    median: float
    skewness: float
    skewness_estimator: str = SKEWNESS_ESTIMATOR


@dataclass(frozen=True)
class HubProfile:
    k: int
    hub_values: np.ndarray  # (n,) non-negative int64
    histogram: dict  # m -> count of latents with that hub value
    stats: HubStats

    @property
    def count(self) -> int:
        return self.hub_values.shape[0]


@dataclass(frozen=True)
class SelectionResult:
    rule: str
    indices: list  # ints, or (batch, index) pairs for the multi-batch rule
    batches_drawn: int = 1
    vectors: np.ndarray | None = None  # copies of the selected latents


def hub_values(knn: KnnResult, n: int) -> HubProfile:
    """Count neighbor-list appearances for each of n latents."""
    flat = knn.neighbors.ravel()
    if flat.size and (flat.min() < 0 or flat.max() >= n):
        raise IndexOutOfRangeError(f"neighbor index outside [0, {n})")
    m = np.bincount(flat, minlength=n).astype(np.int64)
    values, counts = np.unique(m, return_counts=True)
    histogram = {int(v): int(c) for v, c in zip(values, counts)}
    skewness = 0.0 if values.size == 1 else float(sp_stats.skew(m, bias=False))
    stats = HubStats(
        max=int(m.max()),
        mean=float(m.mean()),
        median=float(np.median(m)),
        skewness=skewness,
    )
    return HubProfile(k=knn.k, hub_values=m, histogram=histogram, stats=stats)


def _descending_order(m: np.ndarray) -> np.ndarray:
    # Descending m, ties by ascending index.
    return np.lexsort((np.arange(m.shape[0]), -m))


def select_hq(profile: HubProfile, t: int) -> SelectionResult:
    """All indices with m >= t, best (largest m) first."""
    m = profile.hub_values
    order = _descending_order(m)
    chosen = order[m[order] >= t]
    if chosen.size == 0:
        warnings.warn(
            f"no hub latents at threshold t={t} (k={profile.k}); "
            "small k can leave the hub histogram empty above t",
            stacklevel=2,
        )
    return SelectionResult(rule=f"threshold_hq({t})", indices=[int(i) for i in chosen])


def select_lq(profile: HubProfile, t_lq: int) -> SelectionResult:
    """All indices with m <= t_lq, ascending m then ascending index."""
    m = profile.hub_values
    order = np.lexsort((np.arange(m.shape[0]), m))
    chosen = order[m[order] <= t_lq]
    return SelectionResult(rule=f"threshold_lq({t_lq})", indices=[int(i) for i in chosen])


def spectrum(profile: HubProfile) -> list[int]:
    """All indices ranked by descending hub value (the hubness spectrum)."""
    return [int(i) for i in _descending_order(profile.hub_values)]


def select_top(batches: Iterable[tuple[LatentSet, HubProfile]], t: int,
               n_out: int) -> SelectionResult:
    """Collect exactly n_out latents by hub rank across one or more batches.

    If the first batch holds at least n_out latents, its top n_out by
    descending m are returned. Otherwise the whole first batch is kept (in
    spectrum order) and successive batches contribute their m > t latents
    until n_out are accumulated. Indices are (batch_ordinal, index) pairs.
    """
    stream: Iterator = iter(batches)
    try:
        first_set, first_profile = next(stream)
    except StopIteration:
        raise BatchExhaustionError("batch stream is empty") from None

    picked: list[tuple[int, int]] = []
    chunks: list[np.ndarray] = []

    order = _descending_order(first_profile.hub_values)[:n_out]
    picked.extend((0, int(i)) for i in order)
    chunks.append(first_set.data[order])
    batches_drawn = 1

    while len(picked) < n_out:
        try:
            batch_set, batch_profile = next(stream)
        except StopIteration:
            raise BatchExhaustionError(
                f"collected {len(picked)} of {n_out} latents before the "
                "batch stream ran out"
            ) from None
        batches_drawn += 1
        m = batch_profile.hub_values
        order = _descending_order(m)
        keep = order[m[order] > t][: n_out - len(picked)]
        picked.extend((batches_drawn - 1, int(i)) for i in keep)
        chunks.append(batch_set.data[keep])

    vectors = np.concatenate(chunks, axis=0)
    return SelectionResult(rule=f"top_n({n_out}, t={t})", indices=picked,
                           batches_drawn=batches_drawn, vectors=vectors)
