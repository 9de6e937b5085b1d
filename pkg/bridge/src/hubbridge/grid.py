"""Render selected latents into a row-major image grid.

The index order is preserved, so feeding a hub-ranked (spectrum) ordering
yields a grid whose quality declines left-to-right, top-to-bottom.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
import torch
from PIL import Image

from hublatent.latentfile import read_latents

from .config import BridgeConfig, checkpoint_hash
from .errors import IndexOutOfRangeError
from .model import batched_forward, load_model


def _to_uint8(images: torch.Tensor) -> np.ndarray:
    """(B, C, H, W) float in [-1, 1] -> (B, H, W, C) uint8."""
    arr = images.clamp(-1.0, 1.0).add(1.0).mul(127.5).round().byte()
    return arr.permute(0, 2, 3, 1).cpu().numpy()


def synthesize_grid(cfg: BridgeConfig, latents_path, indices, out,
                    columns: int | None = None) -> dict:
    """Generate images for `indices` and tile them row-major into a PNG.

    Returns the JSON sidecar contents (also written next to the PNG).
    """
    indices = [int(i) for i in indices]
    if not indices:
        raise IndexOutOfRangeError("empty index list; nothing to render")
    latents = read_latents(latents_path)
    for i in indices:
        if not 0 <= i < latents.count:
            raise IndexOutOfRangeError(f"index {i} outside [0, {latents.count})")

    model = load_model(cfg)
    selected = torch.from_numpy(np.asarray(latents.data[indices])).to(cfg.device)
    images = _to_uint8(batched_forward(model, selected, cfg.batch_size))

    count, height, width, channels = images.shape
    cols = columns or math.ceil(math.sqrt(count))
    rows = math.ceil(count / cols)
    canvas = np.zeros((rows * height, cols * width, channels), dtype=np.uint8)
    for cell, img in enumerate(images):
        r, c = divmod(cell, cols)
        canvas[r * height:(r + 1) * height, c * width:(c + 1) * width] = img

    Image.fromarray(canvas.squeeze()).save(out)
    sidecar = {
        "model_family": cfg.family,
        "space": cfg.space,
        "checkpoint_sha256": checkpoint_hash(cfg.checkpoint),
        "indices": indices,
        "grid": [rows, cols],
    }
    sidecar_path = Path(str(out) + ".json")
    sidecar_path.write_text(json.dumps(sidecar, sort_keys=True, indent=2) + "\n",
                            encoding="utf-8")
    return sidecar
