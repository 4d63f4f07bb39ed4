"""Self-describing binary checkpoints with per-section integrity hashes.

Layout: magic, format version, a JSON header (section table with dtype,
shape, byte offsets and sha256 digests, plus an arbitrary metadata mapping
such as the config echo), then raw little-endian array payloads.  Loading
verifies every digest and refuses mismatches loudly; arrays round-trip
bitwise.
"""

from __future__ import annotations

import hashlib
import json
import struct

import numpy as np

MAGIC = b"GLCK"
VERSION = 1


class CheckpointError(RuntimeError):
    pass


def _canon(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    if a.dtype.byteorder == ">":
        a = a.astype(a.dtype.newbyteorder("<"))
    return a


def save_checkpoint(path, arrays: dict[str, np.ndarray], meta: dict | None = None) -> None:
    """Write named arrays plus a JSON-compatible metadata mapping."""
    sections = []
    payloads = []
    offset = 0
    for name, arr in arrays.items():
        arr = _canon(np.asarray(arr))
        raw = arr.tobytes()
        sections.append({
            "name": name,
            "dtype": arr.dtype.str,
            "shape": list(arr.shape),
            "offset": offset,
            "nbytes": len(raw),
            "sha256": hashlib.sha256(raw).hexdigest(),
        })
        payloads.append(raw)
        offset += len(raw)
    header = json.dumps({"sections": sections, "meta": meta or {}},
                        sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", VERSION))
        fh.write(struct.pack("<Q", len(header)))
        fh.write(header)
        for raw in payloads:
            fh.write(raw)


def load_checkpoint(path) -> tuple[dict[str, np.ndarray], dict]:
    """Read back (arrays, meta); any corruption or version skew is a refusal."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 16 or blob[:4] != MAGIC:
        raise CheckpointError(f"{path}: not a checkpoint (bad magic)")
    (version,) = struct.unpack("<I", blob[4:8])
    if version != VERSION:
        raise CheckpointError(f"{path}: format version {version}, expected {VERSION}")
    (hlen,) = struct.unpack("<Q", blob[8:16])
    if 16 + hlen > len(blob):
        raise CheckpointError(f"{path}: truncated header ({hlen} bytes declared)")
    try:
        header = json.loads(blob[16:16 + hlen].decode())
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path}: unreadable header: {exc}") from exc
    base = 16 + hlen
    arrays: dict[str, np.ndarray] = {}
    for sec in header["sections"]:
        lo = base + sec["offset"]
        hi = lo + sec["nbytes"]
        if hi > len(blob):
            raise CheckpointError(f"{path}: section {sec['name']!r} truncated")
        raw = blob[lo:hi]
        digest = hashlib.sha256(raw).hexdigest()
        if digest != sec["sha256"]:
            raise CheckpointError(
                f"{path}: checksum mismatch in section {sec['name']!r} "
                f"(stored {sec['sha256'][:12]}..., computed {digest[:12]}...)"
            )
        arrays[sec["name"]] = np.frombuffer(raw, dtype=np.dtype(sec["dtype"])).reshape(
            sec["shape"]
        ).copy()
    return arrays, header["meta"]
