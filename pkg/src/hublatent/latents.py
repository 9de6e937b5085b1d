"""Latent sample sets: reproducible Gaussian sampling and sphere normalization.

Latents are stored as float32 (matching common generator tooling); all
statistics downstream accumulate in float64.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ZeroVectorError

# Counter-based PRNG + variate method, recorded in metadata because they
# determine bit-exactness of exported files.
RNG_ALGORITHM = "philox4x32-10/ziggurat-f32"

RAW = "raw"
SPHERE = "sphere"

# Relative tolerance on the sphere-norm invariant.
SPHERE_NORM_RTOL = 1e-5


@dataclass(frozen=True)
class SamplerConfig:
    dims: int
    count: int
    seed: int
    normalization: str = RAW

    def __post_init__(self):
        if self.dims < 1:
            raise ConfigError(f"dims must be >= 1, got {self.dims}")
        if self.count < 1:
            raise ConfigError(f"count must be >= 1, got {self.count}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.normalization not in (RAW, SPHERE):
            raise ConfigError(f"unknown normalization {self.normalization!r}")


@dataclass(frozen=True)
class LatentSet:
    """An ordered set of n vectors in R^d with provenance metadata.

    Immutable after construction; safe to share across threads for reading.
    """

    data: np.ndarray  # (count, dims) float32
    seed: int | None = None
    normalization: str = RAW
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.ascontiguousarray(self.data, dtype=np.float32)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ConfigError(f"data must be a non-empty 2-D array, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ConfigError("latent data contains non-finite components")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        if self.normalization == SPHERE:
            norms = np.linalg.norm(arr.astype(np.float64), axis=1)
            target = np.sqrt(arr.shape[1])
            if not np.allclose(norms, target, rtol=SPHERE_NORM_RTOL, atol=0.0):
                raise ConfigError("sphere-normalized set has off-sphere vectors")
        elif self.normalization != RAW:
            raise ConfigError(f"unknown normalization {self.normalization!r}")

    @property
    def dims(self) -> int:
        return self.data.shape[1]

    @property
    def count(self) -> int:
        return self.data.shape[0]


def sample_latents(cfg: SamplerConfig) -> LatentSet:
    """Draw cfg.count i.i.d. vectors from N(0, I_dims), reproducibly.

    With sphere normalization each vector is rescaled to norm sqrt(dims)
    after sampling. Single-threaded by design so the output is a pure
    function of the config.
    """
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    data = rng.standard_normal((cfg.count, cfg.dims), dtype=np.float32)
    metadata = {"rng": RNG_ALGORITHM, "seed": cfg.seed}
    if cfg.normalization == SPHERE:
        data = _rescale_to_sphere(data)
        metadata["sphere_radius"] = "sqrt(dims)"
    return LatentSet(data=data, seed=cfg.seed, normalization=cfg.normalization,
                     metadata=metadata)


def _rescale_to_sphere(data: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(data.astype(np.float64), axis=1)
    zero = np.flatnonzero(norms == 0.0)
    if zero.size:
        raise ZeroVectorError(int(zero[0]))
    scale = np.sqrt(data.shape[1]) / norms
    return (data.astype(np.float64) * scale[:, None]).astype(np.float32)


def normalize_sphere(latents: LatentSet) -> LatentSet:
    """Return a copy with every vector rescaled to norm sqrt(dims).

    Order is preserved; idempotent up to float32 rounding.
    """
    data = _rescale_to_sphere(latents.data)
    metadata = dict(latents.metadata)
    metadata["sphere_radius"] = "sqrt(dims)"
    return LatentSet(data=data, seed=latents.seed, normalization=SPHERE,
                     metadata=metadata)
