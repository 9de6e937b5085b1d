"""Bridge configuration: which generator, which latent space, which device.

Checkpoints are TorchScript archives loaded with ``torch.jit.load``. A
checkpoint must expose ``forward(z) -> images`` and, for style-based
models, a ``mapping`` submodule or method ``mapping(z) -> w``. The repo
ships loading adapters, not weights; see the README for where to fetch
the published generators and how to script them.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .errors import BridgeConfigError

Z = "Z"
W = "W"

# Latent dimensionality of each supported family's input (Z) space.
FAMILY_DIMS = {
    "stylegan2": 512,
    "stylegan3": 512,
    "progan": 512,
    "biggan": 128,
}

# Only style-based models have a mapping network and hence a W space.
STYLE_FAMILIES = ("stylegan2", "stylegan3")


@dataclass(frozen=True)
class BridgeConfig:
    family: str
    checkpoint: str
    space: str = Z
    device: str = "cpu"
    class_label: int | None = None
    batch_size: int = 256

    def __post_init__(self):
        if self.family not in FAMILY_DIMS:
            raise BridgeConfigError(
                f"unknown model family {self.family!r}; "
                f"supported: {sorted(FAMILY_DIMS)}")
        if self.space not in (Z, W):
            raise BridgeConfigError(f"space must be 'Z' or 'W', got {self.space!r}")
        if self.space == W and self.family not in STYLE_FAMILIES:
            raise BridgeConfigError(
                f"{self.family} has no mapping network; W space needs one of "
                f"{STYLE_FAMILIES}")
        if self.class_label is not None and self.family != "biggan":
            raise BridgeConfigError("class_label only applies to conditional models")
        if self.batch_size < 1:
            raise BridgeConfigError("batch_size must be >= 1")

    @property
    def z_dims(self) -> int:
        return FAMILY_DIMS[self.family]


def checkpoint_hash(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()
