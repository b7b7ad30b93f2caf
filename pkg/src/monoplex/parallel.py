"""Deterministic chunked parallel map.

Work is split into chunks with fixed sizes; chunk ``i`` always receives the
``i``-th child of ``SeedSequence(seed)``. Results are returned in chunk
order, so the output depends on the seed and the chunk size only, never on
the worker count or on scheduling.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence, TypeVar

import numpy as np

T = TypeVar("T")

DEFAULT_CHUNK = 10_000


def chunk_sizes(total: int, chunk: int = DEFAULT_CHUNK) -> list[int]:
    if total < 0:
        raise ValueError("total must be nonnegative")
    if chunk < 1:
        raise ValueError("chunk must be positive")
    full, rest = divmod(total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def spawn_seeds(seed, count: int) -> list[np.random.SeedSequence]:
    """``count`` independent child seed sequences derived from ``seed``."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return ss.spawn(count)


def chunked_map(
    fn: Callable[[int, np.random.Generator], T],
    sizes: Sequence[int],
    seeds: Sequence[np.random.SeedSequence],
    workers: int = 1,
) -> list[T]:
    """Evaluate ``fn(size_i, Generator(seed_i))`` for every chunk, in chunk order."""
    if len(sizes) != len(seeds):
        raise ValueError("one seed per chunk required")
    if workers < 1:
        raise ValueError("workers must be positive")
    jobs = [(s, np.random.default_rng(ss)) for s, ss in zip(sizes, seeds)]
    if workers == 1 or len(jobs) <= 1:
        return [fn(s, rng) for s, rng in jobs]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda job: fn(*job), jobs))


def sample_rows(
    fn: Callable[[int, np.random.Generator], np.ndarray],
    count: int,
    seed,
    *,
    chunk: int = DEFAULT_CHUNK,
    workers: int = 1,
) -> np.ndarray:
    """Stack the row blocks produced by ``fn`` over deterministic chunks."""
    sizes = chunk_sizes(count, chunk)
    if not sizes:
        probe = fn(0, np.random.default_rng(0))
        return probe[:0]
    parts = chunked_map(fn, sizes, spawn_seeds(seed, len(sizes)), workers=workers)
    return np.concatenate(parts, axis=0)


def as_seed(rng_or_seed) -> np.random.SeedSequence | int:
    """Accept an int seed, a SeedSequence or a Generator and return something spawnable."""
    if isinstance(rng_or_seed, np.random.Generator):
        return np.random.SeedSequence(int(rng_or_seed.integers(0, 2**63)))
    if rng_or_seed is None:
        return np.random.SeedSequence(0)
    return rng_or_seed
