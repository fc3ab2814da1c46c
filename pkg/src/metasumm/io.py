"""Versioned binary container and atomic-write helpers.

Container layout (all little-endian):

    bytes 0..3    magic (4 ASCII bytes, e.g. "D2V1" / "MSP1")
    bytes 4..7    uint32 header length H
    bytes 8..8+H  header: UTF-8 JSON with sorted keys; its "arrays" list
                  gives (name, dtype, shape) for each payload array in order
    remainder     raw array payloads, concatenated in header order

The same model state always serializes to identical bytes, which the
pipeline's reproducibility guarantees rely on.
"""

from __future__ import annotations

import hashlib
import json
import os
import struct
import tempfile
from pathlib import Path

import numpy as np

from .errors import DataError


def dumps_json(obj) -> str:
    """Canonical JSON used everywhere a byte-stable rendering matters."""
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def atomic_write_bytes(path: str | Path, data: bytes) -> None:
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def atomic_write_text(path: str | Path, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def pack_container(magic: str, meta: dict, arrays: dict[str, np.ndarray]) -> bytes:
    if len(magic) != 4:
        raise ValueError(f"magic must be 4 characters, got {magic!r}")
    specs = []
    payloads = []
    for name, arr in arrays.items():
        arr = np.ascontiguousarray(arr)
        le = arr.dtype.newbyteorder("<")
        specs.append({"name": name, "dtype": le.str, "shape": list(arr.shape)})
        payloads.append(arr.astype(le, copy=False).tobytes())
    header = dumps_json({"meta": meta, "arrays": specs}).encode("utf-8")
    out = bytearray()
    out += magic.encode("ascii")
    out += struct.pack("<I", len(header))
    out += header
    for p in payloads:
        out += p
    return bytes(out)


def unpack_container(data: bytes, magic: str) -> tuple[dict, dict[str, np.ndarray]]:
    if len(data) < 8 or data[:4] != magic.encode("ascii"):
        raise DataError(f"not a {magic} container")
    (hlen,) = struct.unpack("<I", data[4:8])
    header = json.loads(data[8 : 8 + hlen].decode("utf-8"))
    arrays: dict[str, np.ndarray] = {}
    offset = 8 + hlen
    for spec in header["arrays"]:
        dtype = np.dtype(spec["dtype"])
        shape = tuple(spec["shape"])
        nbytes = dtype.itemsize * int(np.prod(shape)) if shape else dtype.itemsize
        chunk = data[offset : offset + nbytes]
        if len(chunk) != nbytes:
            raise DataError(f"truncated container: array {spec['name']}")
        arrays[spec["name"]] = np.frombuffer(chunk, dtype=dtype).reshape(shape).copy()
        offset += nbytes
    return header["meta"], arrays


def write_container(path: str | Path, magic: str, meta: dict, arrays: dict[str, np.ndarray]) -> None:
    atomic_write_bytes(path, pack_container(magic, meta, arrays))


def read_container(path: str | Path, magic: str) -> tuple[dict, dict[str, np.ndarray]]:
    return unpack_container(Path(path).read_bytes(), magic)


def stable_seed(*parts) -> int:
    """64-bit seed derived from the parts; stable across runs and processes."""
    key = "\x1f".join(str(p) for p in parts).encode("utf-8")
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")
