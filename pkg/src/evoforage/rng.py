"""Derivation of independent, reproducible random streams.

Every source of randomness in an experiment is a stream addressed by
(run_seed, generation, index, purpose).  Streams are derived by chaining a
splitmix-style 64-bit finalizer over the address words, so any stream can be
reconstructed in isolation: evaluation order and worker count never matter.
"""
from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1

# purpose tags
FOOD = 0
SPAWN = 1
REPRO = 2
INIT = 3


def mix64(value: int) -> int:
    """Splitmix-style finalizer: avalanche one 64-bit word."""
    z = (value + 0x9E3779B97F4A7C15) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def stream_seed(run_seed: int, generation: int, index: int, purpose: int) -> int:
    """64-bit seed for the stream addressed by the four words."""
    z = mix64(run_seed & _MASK)
    z = mix64(z ^ (generation & _MASK))
    z = mix64(z ^ (index & _MASK))
    z = mix64(z ^ (purpose & _MASK))
    return z


def stream(run_seed: int, generation: int, index: int, purpose: int) -> np.random.Generator:
    """Fresh generator for the addressed stream."""
    return np.random.Generator(np.random.PCG64(stream_seed(run_seed, generation, index, purpose)))
