"""Deterministic RNG streams derived from structured keys.

Every stochastic step in the package draws from a ``random.Random``
seeded by hashing a tuple of labels (master seed, purpose, instance
index, ...).  Streams for different keys are independent, and the same
key always yields the same stream, which is what makes parallel and
serial dataset generation produce identical bytes.
"""

from __future__ import annotations

import hashlib
import random


def derive_seed(*parts) -> int:
    """Hash a key tuple into a 128-bit integer seed."""
    token = "\x1f".join(f"{type(p).__name__}:{p!r}" for p in parts)
    digest = hashlib.sha256(token.encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "big")


def derive_rng(*parts) -> random.Random:
    return random.Random(derive_seed(*parts))
