"""Exact k-nearest neighbors via a chunked brute-force kernel.

Two implementations with one contract:

* ``knn_exact`` — chunked Gram-matrix kernel, the production path.  Peak
  memory is O(chunk * n + n * k); no full n x n matrix is ever built.
* ``knn_oracle`` — deliberately naive per-query loop with a full stable
  sort, kept slow and obvious for cross-validation in tests.

Both exclude the query itself, compare squared distances internally, and
break ties by lower index so results are deterministic even on duplicated
points.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import EmptySetError, KTooLargeError
from .latents import LatentSet

DEFAULT_CHUNK = 256


@dataclass(frozen=True)
class KnnResult:
    k: int
    neighbors: np.ndarray  # (n, k) int64, nearest first
    distances: np.ndarray  # (n, k) float64, non-decreasing per row


def _check_args(latents: LatentSet, k: int) -> None:
    n = latents.count
    if n == 0:
        raise EmptySetError("cannot run k-NN on an empty set")
    if k < 1:
        raise KTooLargeError(f"k must be >= 1, got {k}")
    if k >= n:
        raise KTooLargeError(f"k={k} must be smaller than n={n}")


def _topk_row(sqdist: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Smallest-k of one squared-distance row, ties broken by lower index."""
    # Partition first, then gather every candidate tied with the k-th value
    # so boundary ties resolve exactly like a full stable sort would.
    kth = np.partition(sqdist, k - 1)[k - 1]
    cand = np.flatnonzero(sqdist <= kth)
    order = np.lexsort((cand, sqdist[cand]))[:k]
    idx = cand[order]
    return idx, sqdist[idx]


def knn_exact(latents: LatentSet, k: int, chunk_size: int = DEFAULT_CHUNK,
              threads: int = 1) -> KnnResult:
    """Exact k-NN for every vector in the set.

    Queries are processed in chunks of `chunk_size` against the full set
    using the |x|^2 + |y|^2 - 2<x,y> expansion in float64. Chunks are
    independent; with threads > 1 they run on a thread pool (numpy releases
    the GIL) and results are assembled by index, so scheduling never
    changes the output.
    """
    _check_args(latents, k)
    n = latents.count
    data = latents.data.astype(np.float64)
    sq_norms = np.einsum("ij,ij->i", data, data)

    neighbors = np.empty((n, k), dtype=np.int64)
    distances = np.empty((n, k), dtype=np.float64)

    def process(start: int) -> None:
        stop = min(start + chunk_size, n)
        block = data[start:stop]
        sqd = sq_norms[start:stop, None] + sq_norms[None, :] - 2.0 * (block @ data.T)
        np.maximum(sqd, 0.0, out=sqd)
        for i in range(start, stop):
            row = sqd[i - start]
            row[i] = np.inf  # self excluded
            idx, vals = _topk_row(row, k)
            neighbors[i] = idx
            distances[i] = np.sqrt(vals)

    starts = range(0, n, chunk_size)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(process, starts))
    else:
        for start in starts:
            process(start)
    return KnnResult(k=k, neighbors=neighbors, distances=distances)


def knn_oracle(latents: LatentSet, k: int) -> KnnResult:
    """Reference k-NN: per-query distance scan plus full stable sort."""
    _check_args(latents, k)
    n = latents.count
    data = latents.data.astype(np.float64)
    neighbors = np.empty((n, k), dtype=np.int64)
    distances = np.empty((n, k), dtype=np.float64)
    for i in range(n):
        diff = data - data[i]
        dist = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        dist[i] = np.inf
        order = np.argsort(dist, kind="stable")[:k]
        neighbors[i] = order
        distances[i] = dist[order]
    return KnnResult(k=k, neighbors=neighbors, distances=distances)
