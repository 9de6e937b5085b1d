"""Bridge between the hub-value core and pretrained image generators."""

from .config import BridgeConfig, checkpoint_hash
from .export import export_latents, sample_z
from .grid import synthesize_grid

__all__ = ["BridgeConfig", "checkpoint_hash", "export_latents", "sample_z",
           "synthesize_grid"]
