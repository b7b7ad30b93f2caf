"""Homomorphism-style tensor contractions via ``numpy.einsum``.

A pattern with vertices ``0..k-1`` and an edge list is turned into an
einsum expression over one index per vertex. Each edge contributes the
edge matrix, each vertex an optional weight vector. Repeated edges are
kept (a doubled edge contributes the squared entry).
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations
from typing import Sequence

import numpy as np

_LETTERS = "abcdefghijklmnopqrstuvwxy"
_BATCH = "z"
# greedy path search otherwise caps intermediates at the largest operand size
_MAX_INTERMEDIATE = 2**24


def contract(
    k: int,
    edges: Sequence[tuple[int, int]],
    edge_matrix: np.ndarray,
    weights: np.ndarray | None = None,
    out: Sequence[int] = (),
    batch_weights: np.ndarray | None = None,
    skip_weight: Sequence[int] = (),
) -> np.ndarray:
    """Sum over maps ``phi: [k] -> [m]`` of prod edge_matrix[phi(u), phi(v)] * prod weights[phi(v)].

    ``out`` lists pattern vertices kept as free output axes. ``weights`` is a
    length-``m`` vector applied to every vertex not in ``skip_weight``;
    ``batch_weights`` of shape ``(B, m)`` adds a leading batch axis instead.
    Vertices with neither an edge nor a weight contribute a factor ``m``.
    """
    if k > len(_LETTERS):
        raise ValueError("pattern too large for einsum contraction")
    m = edge_matrix.shape[0]
    operands: list[np.ndarray] = []
    subs: list[str] = []
    touched = set()
    for u, v in edges:
        subs.append(_LETTERS[u] + _LETTERS[v])
        operands.append(edge_matrix)
        touched.update((u, v))
    skip = set(skip_weight)
    for v in range(k):
        if v in skip:
            continue
        if batch_weights is not None:
            subs.append(_BATCH + _LETTERS[v])
            operands.append(batch_weights)
            touched.add(v)
        elif weights is not None:
            subs.append(_LETTERS[v])
            operands.append(weights)
            touched.add(v)
    factor = 1.0
    for v in range(k):
        if v not in touched:
            if v in out:
                subs.append(_LETTERS[v])
                operands.append(np.ones(m))
            else:
                factor *= m
    out_sub = (_BATCH if batch_weights is not None else "") + "".join(_LETTERS[v] for v in out)
    if not operands:
        return np.asarray(factor)
    expr = ",".join(subs) + "->" + out_sub
    max_size = max(_MAX_INTERMEDIATE, max(op.size for op in operands))
    res = np.einsum(expr, *operands, optimize=("greedy", max_size))
    return res * factor if factor != 1.0 else res


def set_partitions(items: Sequence[int]):
    """All set partitions of ``items`` as lists of blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def _mobius(part) -> int:
    mu = 1
    for block in part:
        s = len(block)
        sign = -1 if (s - 1) % 2 else 1
        f = 1
        for i in range(2, s):
            f *= i
        mu *= sign * f
    return mu


@lru_cache(maxsize=256)
def quotients(k: int, edges: tuple[tuple[int, int], ...], pins: tuple[int, ...] = ()):
    """Loop-free quotients of a pattern for Moebius inversion of injective counts.

    Returns tuples ``(mu, q, q_edges, q_pins)`` over set partitions of the
    vertex set that keep the pinned vertices in distinct blocks. Quotients
    with an edge inside a block are dropped (they contribute zero on a
    loopless host graph); parallel edges are merged.
    """
    result = []
    for part in set_partitions(range(k)):
        block_of = {}
        for i, block in enumerate(part):
            for v in block:
                block_of[v] = i
        if len({block_of[p] for p in pins}) != len(pins):
            continue
        q_edges = set()
        loop = False
        for u, v in edges:
            x, y = block_of[u], block_of[v]
            if x == y:
                loop = True
                break
            q_edges.add((min(x, y), max(x, y)))
        if loop:
            continue
        result.append((_mobius(part), len(part), tuple(sorted(q_edges)), tuple(block_of[p] for p in pins)))
    return tuple(result)


def distinct_mask(n: int, r: int) -> np.ndarray:
    """Boolean array over ``[n]^r`` that is true exactly on tuples with distinct entries."""
    mask = np.ones((n,) * r, dtype=bool)
    grids = np.indices((n,) * r, sparse=True)
    for i, j in combinations(range(r), 2):
        mask &= grids[i] != grids[j]
    return mask
