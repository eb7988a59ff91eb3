"""Deterministic seed derivation shared by the simulator and the orchestrator.

Per-record and per-cell seeds are hashes of (master seed, context labels), so
work units can run in any order or in parallel and still reproduce the same
stream of randomness.
"""

from __future__ import annotations

import hashlib

import numpy as np

_MASK64 = (1 << 64) - 1


def derive_seed(*parts: int | str) -> int:
    """Stable 64-bit seed from a master seed plus context labels.

    Accepts ints and strings; identical parts give an identical seed on any
    platform and any Python version.
    """
    h = hashlib.blake2b(digest_size=8)
    for part in parts:
        if isinstance(part, str):
            h.update(b"s")
            h.update(part.encode("utf-8"))
        else:
            h.update(b"i")
            h.update((int(part) & _MASK64).to_bytes(8, "little"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")


def rng_from(*parts: int | str) -> np.random.Generator:
    """PCG64 generator seeded from derive_seed(*parts)."""
    return np.random.Generator(np.random.PCG64(derive_seed(*parts)))
