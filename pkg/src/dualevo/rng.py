"""Seeded random streams.

Stream-splitting rule: sub-stream ``i`` of a run seeded with ``seed`` is
``PCG64(SeedSequence(seed, spawn_key=(i,)))``. This is the same stream
``SeedSequence(seed).spawn(n)[i]`` yields, so ensembles give identical
results whether trajectories are generated serially or in parallel.
"""
from __future__ import annotations

import numpy as np

__all__ = ["root_stream", "substream"]


def root_stream(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def substream(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))
