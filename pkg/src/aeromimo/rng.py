"""Deterministic RNG stream derivation.

One master seed governs a whole run. Every consumer (deployment draw, pilot
assignment, trial t, ...) gets its own `numpy.random.Generator` derived from
the master seed plus a label path, so parallel execution over trials produces
bit-identical results to serial execution.

The split function: each label (string or int) is mapped to a 32-bit word --
ints directly, strings through sha256 -- and the words become the spawn_key of
a `SeedSequence` rooted at the master seed.
"""

import hashlib

import numpy as np

__all__ = ["stream", "spawn_key"]


def _label_word(label) -> int:
    if isinstance(label, (int, np.integer)):
        if label < 0:
            raise ValueError(f"stream labels must be nonnegative, got {label}")
        return int(label)
    digest = hashlib.sha256(str(label).encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def spawn_key(*labels) -> tuple:
    """Map a label path to the SeedSequence spawn key it resolves to."""
    return tuple(_label_word(lab) for lab in labels)


def stream(seed: int, *labels) -> np.random.Generator:
    """Derive the named random stream for `labels` under the master `seed`."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=spawn_key(*labels))
    return np.random.default_rng(ss)
