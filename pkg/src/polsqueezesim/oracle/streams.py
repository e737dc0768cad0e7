"""
Seeded random sub-streams

Layout: the root numpy ``SeedSequence(seed)`` is spawned into one child per
chunk of ``chunk_size`` samples, in chunk order, and every child drives a
``Philox`` counter-based bit generator. A chunk's draws depend only on
(seed, chunk index, chunk size), never on how many workers consume them.
"""
import math
from typing import List

import numpy as np

from src.polsqueezesim.exceptions import SamplingError

BIT_GENERATOR = "Philox"


def chunk_sizes(total: int, chunk_size: int) -> List[int]:
    if total <= 0 or chunk_size <= 0:
        raise SamplingError(f"sample count and chunk size must be positive, got {total} and {chunk_size}")
    count = math.ceil(total / chunk_size)
    sizes = [chunk_size] * count
    sizes[-1] = total - chunk_size * (count - 1)
    return sizes


def spawn_generators(seed: int, count: int) -> List[np.random.Generator]:
    if not 0 <= seed < 2**64:
        raise SamplingError(f"seed must be an unsigned 64-bit integer, got {seed}")
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(child)) for child in children]


def named_generators(seed: int, *names: str) -> dict:
    """One independent generator per name, in argument order"""
    return dict(zip(names, spawn_generators(seed, len(names))))
