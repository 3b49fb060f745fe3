"""Deterministic random-stream derivation.

A single experiment seed expands into independent substreams through a
counter-based rule: every consumer asks for ``stream(seed, *path)`` where
``path`` is a tuple of small integers identifying the subsystem and, for
batch work, the run index.  Identical (seed, path) pairs always yield the
same generator, and distinct paths yield statistically independent streams,
so batch runs may execute in parallel without sharing state.
"""

from __future__ import annotations

import numpy as np

# Subsystem identifiers used as the first path component.
STREAM_CHANNEL = 1
STREAM_SAMPLING = 2
STREAM_PROTOCOL = 3
STREAM_EXTRAPOLATION = 4
STREAM_TRACE = 5


def stream(seed: int, *path: int) -> np.random.Generator:
    """Return the generator for substream ``path`` of ``seed``."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=path))
