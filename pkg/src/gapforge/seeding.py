"""Reproducible random streams.

One integer seed drives a whole run; each stage draws from its own substream
derived from a fixed text label, so adding a stage never shifts the numbers
another stage sees.
"""

from __future__ import annotations

import zlib

import numpy as np


def substream(seed: int, label: str) -> np.random.Generator:
    """Independent generator for stage ``label`` under the run seed."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(zlib.crc32(label.encode()),))
    return np.random.default_rng(ss)


def as_rng(rng: np.random.Generator | int | None) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)
