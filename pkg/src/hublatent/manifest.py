"""Run manifests: parameters plus content hashes of every output file.

Manifests are serialized as canonical JSON (sorted keys, no timestamps),
so one config run twice yields byte-identical manifests.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path


def sha256_file(path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def params_hash(params: dict) -> str:
    canonical = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class RunManifest:
    params: dict
    outputs: dict = field(default_factory=dict)  # relative path -> sha256

    def add_output(self, path, base_dir) -> None:
        rel = str(Path(path).relative_to(base_dir))
        self.outputs[rel] = sha256_file(path)

    @property
    def run_hash(self) -> str:
        return params_hash({"params": self.params, "outputs": self.outputs})

    def to_json(self) -> str:
        body = {"params": self.params, "outputs": self.outputs,
                "run_hash": self.run_hash}
        return json.dumps(body, sort_keys=True, indent=2) + "\n"

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())

    def verify(self, base_dir) -> bool:
        return all(sha256_file(Path(base_dir) / rel) == digest
                   for rel, digest in self.outputs.items())
