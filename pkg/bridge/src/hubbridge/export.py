"""Export generator latents as LatentFiles consumable by the core pipeline."""

from __future__ import annotations

import numpy as np
import torch

from hublatent.latents import LatentSet, SamplerConfig, sample_latents
from hublatent.latentfile import write_latents

from .config import W, BridgeConfig, checkpoint_hash
from .model import batched_forward, load_model, mapping_network


def sample_z(cfg: BridgeConfig, count: int, seed: int) -> LatentSet:
    """Z-space draws matching the generators' own randn() convention."""
    return sample_latents(SamplerConfig(dims=cfg.z_dims, count=count, seed=seed))


def export_latents(cfg: BridgeConfig, count: int, seed: int, out) -> LatentSet:
    """Write `count` latents to `out` in LatentFile format.

    Z space: raw standard-normal draws. W space: the same draws pushed
    through the checkpoint's mapping network in batches. Metadata records
    the model family, space, seed, and checkpoint hash.
    """
    z = sample_z(cfg, count, seed)
    metadata = {
        **z.metadata,
        "model_family": cfg.family,
        "space": cfg.space,
        "checkpoint_sha256": checkpoint_hash(cfg.checkpoint),
    }
    if cfg.class_label is not None:
        metadata["class_label"] = cfg.class_label

    if cfg.space == W:
        model = load_model(cfg)
        mapping = mapping_network(model, cfg)
        # batch size affects float32 rounding in the mapping forward pass
        metadata["mapping_batch_size"] = cfg.batch_size
        z_t = torch.from_numpy(z.data.copy()).to(cfg.device)
        w = batched_forward(mapping, z_t, cfg.batch_size)
        latents = LatentSet(data=w.cpu().numpy().astype(np.float32),
                            seed=seed, metadata=metadata)
    else:
        latents = LatentSet(data=z.data, seed=seed, metadata=metadata)

    write_latents(out, latents)
    return latents
