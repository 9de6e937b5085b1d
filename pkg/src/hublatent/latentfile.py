"""Binary latent file format ("HUBL").

Layout, all little-endian:

    magic        4 bytes  b"HUBL"
    version      u32      1
    dims         u32
    count        u64
    dtype        u8       0 = float32
    normalization u8      0 = raw, 1 = sphere
    metadata_len u32
    metadata     UTF-8 JSON (seed, rng algorithm id, provenance notes)
    payload      count * dims scalars, row-major

Round-trips are bit-exact for float32 payloads.
"""

from __future__ import annotations

import json
import struct

import numpy as np

from .errors import (BadMagicError, MetadataParseError, TruncatedPayloadError,
                     UnsupportedVersionError)
from .latents import RAW, SPHERE, LatentSet

MAGIC = b"HUBL"
VERSION = 1
_HEADER = struct.Struct("<4sIIQBBI")

_NORM_TO_BYTE = {RAW: 0, SPHERE: 1}
_BYTE_TO_NORM = {0: RAW, 1: SPHERE}


def write_latents(path, latents: LatentSet) -> None:
    metadata = dict(latents.metadata)
    if latents.seed is not None:
        metadata.setdefault("seed", latents.seed)
    meta_bytes = json.dumps(metadata, sort_keys=True).encode("utf-8")
    header = _HEADER.pack(MAGIC, VERSION, latents.dims, latents.count,
                          0, _NORM_TO_BYTE[latents.normalization],
                          len(meta_bytes))
    payload = np.ascontiguousarray(latents.data, dtype="<f4").tobytes()
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(meta_bytes)
        fh.write(payload)


def read_latents(path) -> LatentSet:
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < _HEADER.size:
        raise TruncatedPayloadError("file shorter than header")
    magic, version, dims, count, dtype, norm_byte, meta_len = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagicError(f"expected {MAGIC!r}, found {magic!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"version {version} not supported")
    if dtype != 0:
        raise UnsupportedVersionError(f"dtype byte {dtype} not supported")
    if norm_byte not in _BYTE_TO_NORM:
        raise MetadataParseError(f"unknown normalization byte {norm_byte}")

    meta_start = _HEADER.size
    meta_end = meta_start + meta_len
    if len(raw) < meta_end:
        raise TruncatedPayloadError("metadata extends past end of file")
    try:
        metadata = json.loads(raw[meta_start:meta_end].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MetadataParseError(str(exc)) from exc
    if not isinstance(metadata, dict):
        raise MetadataParseError("metadata must be a JSON object")

    expected = count * dims * 4
    payload = raw[meta_end:]
    if len(payload) < expected:
        raise TruncatedPayloadError(
            f"payload has {len(payload)} bytes, header claims {expected}")
    data = np.frombuffer(payload[:expected], dtype="<f4").reshape(count, dims)
    seed = metadata.get("seed")
    return LatentSet(data=data, seed=seed,
                     normalization=_BYTE_TO_NORM[norm_byte], metadata=metadata)
