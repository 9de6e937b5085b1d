"""Class-balance comparison of discrete distributions.

Two metrics: 1-D Wasserstein distance with classes at unit-spaced integer
positions, and total variation as a position-free companion. Reports label
which metric produced a number, since the two can disagree by a factor of
C - 1 on the same pair.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AllZeroError, ClassCountMismatchError


@dataclass(frozen=True)
class ClassHistogram:
    probs: np.ndarray  # (C,) non-negative, sums to 1
    label: str = ""

    def __post_init__(self):
        probs = np.asarray(self.probs, dtype=np.float64).ravel()
        if probs.size < 1:
            raise AllZeroError("histogram needs at least one class")
        if np.any(probs < 0):
            raise AllZeroError("negative probability")
        if abs(probs.sum() - 1.0) > 1e-6:
            raise AllZeroError(f"probabilities sum to {probs.sum()}, not 1")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)

    @property
    def classes(self) -> int:
        return self.probs.shape[0]


def from_counts(counts, label: str = "") -> ClassHistogram:
    """Normalize raw per-class counts into a ClassHistogram."""
    arr = np.asarray(counts, dtype=np.float64).ravel()
    if arr.size == 0 or np.any(arr < 0):
        raise AllZeroError("counts must be non-negative with at least one entry")
    total = arr.sum()
    if total <= 0:
        raise AllZeroError("all counts are zero")
    return ClassHistogram(probs=arr / total, label=label)


def _check_pair(p: ClassHistogram, q: ClassHistogram) -> None:
    if p.classes != q.classes:
        raise ClassCountMismatchError(f"{p.classes} classes vs {q.classes}")


def wasserstein_1d(p: ClassHistogram, q: ClassHistogram) -> float:
    """Earth mover's distance with class c at position c on the line.

    For unit-spaced support the optimal transport cost equals the L1
    distance between the cumulative distributions.
    """
    _check_pair(p, q)
    return float(np.abs(np.cumsum(p.probs - q.probs)[:-1]).sum())


def total_variation(p: ClassHistogram, q: ClassHistogram) -> float:
    """0.5 * L1 distance between the probability vectors."""
    _check_pair(p, q)
    return float(0.5 * np.abs(p.probs - q.probs).sum())
