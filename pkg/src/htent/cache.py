"""Binary matrix cache with a small versioned container format.

Layout: magic "HTE1", uint32 ndim, ndim x uint64 dims, then the float64
payload row-major, all little-endian.  Files are keyed by a content hash
of the generating parameters, so any parameter change produces a new
cache entry instead of a stale hit.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"HTE1"


def save_matrix(path: str | Path, arr: np.ndarray) -> None:
    arr = np.ascontiguousarray(arr, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", arr.ndim))
        fh.write(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        fh.write(arr.tobytes())


def load_matrix(path: str | Path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ValueError(f"{path}: not an HTE1 container")
        (ndim,) = struct.unpack("<I", fh.read(4))
        dims = struct.unpack(f"<{ndim}Q", fh.read(8 * ndim))
        data = np.frombuffer(fh.read(), dtype="<f8")
    return data.reshape(dims).copy()


def cache_key(**params) -> str:
    """Stable hash of a flat parameter mapping (values must be JSON-able)."""
    blob = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:32]


class CacheStore:
    """Directory of HTE1 files addressed by parameter hash."""

    def __init__(self, root: str | Path | None):
        self.root = Path(root) if root is not None else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)

    def path(self, key: str) -> Path:
        return self.root / f"{key}.hte1"

    def get_or_build(self, key: str, builder) -> np.ndarray:
        if self.root is None:
            return builder()
        p = self.path(key)
        if p.exists():
            return load_matrix(p)
        arr = builder()
        save_matrix(p, arr)
        return arr
