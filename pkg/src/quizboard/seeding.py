"""Seed derivation for the deterministic RNG streams.

All randomness flows through ``random.Random`` (CPython's Mersenne Twister)
instances seeded from the 64-bit game seed. Independent streams (dice,
question selection, per-game simulation seeds) are derived with a
splitmix64-style mix so that consuming one stream never perturbs another.
"""

from __future__ import annotations

MASK64 = 0xFFFFFFFFFFFFFFFF

# Fixed salts for the engine's sub-streams.
DICE_STREAM = 0x01
QUESTION_STREAM = 0x02
POLICY_STREAM = 0x03


def mix_seed(seed: int, salt: int) -> int:
    """Derive a 64-bit sub-seed from (seed, salt) via the splitmix64 finalizer."""
    z = (seed + 0x9E3779B97F4A7C15 * (salt + 1)) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def game_seed(master: int, index: int) -> int:
    """Per-game seed for simulation game ``index`` under ``master``."""
    return mix_seed(master, 0x10000 + index)
