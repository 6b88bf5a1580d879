"""Deterministic RNG derivation.

Every randomized stage draws from its own generator, seeded by hashing
the user seed together with a stage name. Stages therefore never share
or perturb each other's streams, which keeps outputs stable when stages
are added, reordered, or fanned out across workers.
"""

from __future__ import annotations

import hashlib
import random


def derive_rng(seed: int, purpose: str) -> random.Random:
    """Return a Random seeded from (seed, purpose), stable across runs."""
    digest = hashlib.sha256(f"{seed}:{purpose}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))
