import pytest
import torch


class ToyMapping(torch.nn.Module):
    """Stand-in for a style mapping network: 512 -> 512 MLP."""

    def __init__(self, dims=512):
        super().__init__()
        self.net = torch.nn.Sequential(
            torch.nn.Linear(dims, dims),
            torch.nn.LeakyReLU(0.2),
            torch.nn.Linear(dims, dims),
        )

    def forward(self, z):
        return self.net(z)


class ToyGenerator(torch.nn.Module):
    """Scriptable checkpoint with the bridge's expected surface.

    `forward` maps a latent batch to (B, 3, 8, 8) images in [-1, 1];
    `mapping` is the W-space network. Deterministic given fixed weights.
    """

    def __init__(self, dims=512):
        super().__init__()
        self.mapping = ToyMapping(dims)
        self.to_pixels = torch.nn.Linear(dims, 3 * 8 * 8)

    def forward(self, latent):
        img = self.to_pixels(latent).view(-1, 3, 8, 8)
        return torch.tanh(img)


def make_checkpoint(path, dims=512, seed=0):
    torch.manual_seed(seed)
    model = ToyGenerator(dims)
    torch.jit.script(model).save(str(path))
    return str(path)


@pytest.fixture(scope="session")
def checkpoint(tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt") / "toy_stylegan.pt"
    return make_checkpoint(path)


@pytest.fixture(scope="session")
def biggan_checkpoint(tmp_path_factory):
    path = tmp_path_factory.mktemp("ckpt") / "toy_biggan.pt"
    return make_checkpoint(path, dims=128)
