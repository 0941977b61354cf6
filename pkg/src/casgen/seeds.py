"""Deterministic seed derivation.

Every randomized operation in this package draws from a ``numpy`` PCG64
generator whose seed is derived from a master seed and a path of context
labels, e.g. ``derive(master, "run", 3, "fold", 7, "member", 12)``.  The
rule is fixed and platform independent: the path items are rendered to
text, joined with ``/``, hashed with SHA-256, and the first 8 bytes of
the digest (big endian) become the child seed.  Re-deriving any node of
the tree therefore needs nothing but the master seed and the coordinates
of the thing being reproduced.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["derive", "generator"]


def derive(seed: int, *path: int | str) -> int:
    """Derive a child seed from ``seed`` and a path of context labels."""
    text = "/".join([str(int(seed))] + [str(p) for p in path])
    digest = hashlib.sha256(text.encode("ascii")).digest()
    return int.from_bytes(digest[:8], "big")


def generator(seed: int, *path: int | str) -> np.random.Generator:
    """A fresh PCG64 generator for ``seed`` (optionally derived via ``path``)."""
    if path:
        seed = derive(seed, *path)
    return np.random.Generator(np.random.PCG64(seed))
