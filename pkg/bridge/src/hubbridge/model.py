"""Checkpoint loading and batched forward passes."""

from __future__ import annotations

import torch

from .config import BridgeConfig
from .errors import CheckpointLoadError, DeviceUnavailableError


def load_model(cfg: BridgeConfig) -> torch.jit.ScriptModule:
    if cfg.device.startswith("cuda") and not torch.cuda.is_available():
        raise DeviceUnavailableError(f"device {cfg.device} is not available")
    try:
        model = torch.jit.load(cfg.checkpoint, map_location=cfg.device)
    except (RuntimeError, ValueError, OSError) as exc:
        raise CheckpointLoadError(f"{cfg.checkpoint}: {exc}") from exc
    model.eval()
    return model


def mapping_network(model, cfg: BridgeConfig):
    mapping = getattr(model, "mapping", None)
    if mapping is None:
        raise CheckpointLoadError(
            f"checkpoint for {cfg.family} exposes no 'mapping' network "
            "but W-space export was requested")
    return mapping


def batched_forward(fn, inputs: torch.Tensor, batch_size: int) -> torch.Tensor:
    chunks = []
    with torch.no_grad():
        for start in range(0, inputs.shape[0], batch_size):
            chunks.append(fn(inputs[start:start + batch_size]))
    return torch.cat(chunks, dim=0)
