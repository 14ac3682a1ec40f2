"""Seeded, splittable random streams.

Every stream is numpy's Philox4x64 counter-based generator keyed by the
128-bit value ``seed | (stream << 64)``. Child streams come from a fixed
SplitMix64 mix of (parent stream, index), so any sample block can be
regenerated on its own:

    substream(seed, stream, index) = (seed, splitmix64(stream ^ ((index + 1) * GOLDEN)))

Bulk samplers cut their work into blocks of ``BLOCK`` samples; block ``b``
always uses ``substream(b)`` of the caller's generator. Workers only decide
which thread fills which block, so output depends on (seed, count) and not
on the worker count.
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import kernels

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
BLOCK = 4096


def splitmix64(x: int) -> int:
    x = (x + GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class SeededGenerator:
    def __init__(self, seed: int = 42, stream: int = 0):
        self.seed = int(seed) & MASK64
        self.stream = int(stream) & MASK64
        key = self.seed | (self.stream << 64)
        self._gen = np.random.Generator(np.random.Philox(key=key))

    def __repr__(self):
        return f"SeededGenerator(seed={self.seed}, stream={self.stream:#x})"

    def substream(self, index: int) -> "SeededGenerator":
        child = splitmix64(self.stream ^ (((int(index) + 1) * GOLDEN) & MASK64))
        return SeededGenerator(self.seed, child)

    def uniform(self, size) -> np.ndarray:
        """Doubles in [0, 1) with 53 random bits."""
        return self._gen.random(size)

    def complex_normal(self, size) -> np.ndarray:
        """Complex numbers with independent N(0, 1) real and imaginary parts."""
        if isinstance(size, int):
            size = (size,)
        return kernels.box_muller(self.uniform(tuple(size) + (2,)))

    def normal(self, size) -> np.ndarray:
        """Real standard normals (real parts of Box-Muller pairs, then imaginary)."""
        n = int(np.prod(size))
        z = self.complex_normal((n + 1) // 2)
        return np.concatenate([z.real, z.imag])[:n].reshape(size)

    def integers(self, high: int, size) -> np.ndarray:
        return self._gen.integers(0, high, size=size)


def as_generator(rng) -> SeededGenerator:
    if isinstance(rng, SeededGenerator):
        return rng
    if rng is None:
        return SeededGenerator()
    return SeededGenerator(int(rng))


def default_workers() -> int:
    try:
        w = int(os.environ.get("JNRANGE_WORKERS", "1"))
    except ValueError:
        w = 1
    return max(1, w)


def map_blocks(fn, count: int, rng: SeededGenerator, workers: int | None = None):
    """Apply ``fn(sub_rng, n)`` to each block of ``count`` samples, in block order."""
    workers = default_workers() if workers is None else max(1, int(workers))
    sizes = [min(BLOCK, count - start) for start in range(0, count, BLOCK)]
    jobs = [(rng.substream(b), n) for b, n in enumerate(sizes)]
    if workers == 1 or len(jobs) <= 1:
        return [fn(sub, n) for sub, n in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))
