import json

import pytest
from PIL import Image

from hubbridge.config import BridgeConfig
from hubbridge.errors import IndexOutOfRangeError
from hubbridge.export import export_latents
from hubbridge.grid import synthesize_grid


@pytest.fixture
def exported(checkpoint, tmp_path):
    cfg = BridgeConfig(family="stylegan2", checkpoint=checkpoint, space="W")
    path = tmp_path / "w.hubl"
    export_latents(cfg, count=30, seed=5, out=path)
    return cfg, path


def test_grid_render(exported, tmp_path):
    cfg, latents = exported
    out = tmp_path / "grid.png"
    sidecar = synthesize_grid(cfg, latents, indices=[5, 1, 9, 2], out=out,
                              columns=2)
    img = Image.open(out)
    assert img.size == (2 * 8, 2 * 8)
    assert sidecar["grid"] == [2, 2]
    assert sidecar["indices"] == [5, 1, 9, 2]
    on_disk = json.loads((tmp_path / "grid.png.json").read_text())
    assert on_disk == sidecar


def test_empty_indices_error(exported, tmp_path):
    cfg, latents = exported
    out = tmp_path / "grid.png"
    with pytest.raises(IndexOutOfRangeError):
        synthesize_grid(cfg, latents, indices=[], out=out)
    assert not out.exists()


def test_out_of_range_index(exported, tmp_path):
    cfg, latents = exported
    with pytest.raises(IndexOutOfRangeError):
        synthesize_grid(cfg, latents, indices=[0, 30], out=tmp_path / "g.png")


def test_grid_deterministic(exported, tmp_path):
    cfg, latents = exported
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    synthesize_grid(cfg, latents, indices=[0, 1, 2, 3], out=a)
    synthesize_grid(cfg, latents, indices=[0, 1, 2, 3], out=b)
    assert a.read_bytes() == b.read_bytes()
