"""Simple graphs, multiplexes and vertex colorings.

Vertices are 0-based integers internally. JSON files use the 1-based
labels ``1..n`` and colors ``1..c``; the translation happens in
:mod:`monoplex.io`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import BudgetError, InputError

MAX_AUTOMORPHISM_VERTICES = 10

Edge = tuple[int, int]


def _normalize_edges(n: int, edges: Iterable[Sequence[int]], *, dedupe: bool) -> frozenset[Edge]:
    out: set[Edge] = set()
    for e in edges:
        if len(e) != 2:
            raise InputError(f"edge {e!r} is not a vertex pair")
        u, v = int(e[0]), int(e[1])
        if u == v:
            raise InputError(f"self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise InputError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        pair = (u, v) if u < v else (v, u)
        if pair in out and not dedupe:
            raise InputError(f"duplicate edge {pair}")
        out.add(pair)
    return frozenset(out)


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``."""

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise InputError("vertex count must be nonnegative")
        object.__setattr__(self, "edges", _normalize_edges(self.n, self.edges, dedupe=True))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], *, dedupe: bool = False) -> "Graph":
        return cls(n, _normalize_edges(n, edges, dedupe=dedupe))

    @classmethod
    def from_adjacency(cls, adj: np.ndarray) -> "Graph":
        adj = np.asarray(adj)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InputError("adjacency matrix must be square")
        if not np.array_equal(adj, adj.T):
            raise InputError("adjacency matrix must be symmetric")
        if np.any(np.diag(adj)):
            raise InputError("adjacency matrix has self-loops")
        iu, ju = np.nonzero(np.triu(adj, 1))
        return cls(adj.shape[0], frozenset(zip(iu.tolist(), ju.tolist())))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @cached_property
    def sorted_edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.edges))

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int8)
        if self.edges:
            e = np.array(self.sorted_edges)
            a[e[:, 0], e[:, 1]] = 1
            a[e[:, 1], e[:, 0]] = 1
        a.setflags(write=False)
        return a

    @cached_property
    def neighbor_bits(self) -> tuple[int, ...]:
        """Adjacency rows packed into Python ints (bit ``v`` of row ``u`` is ``a_uv``)."""
        rows = [0] * self.n
        for u, v in self.edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return tuple(rows)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(b.bit_count() for b in self.neighbor_bits)

    def has_edge(self, u: int, v: int) -> bool:
        return (self.neighbor_bits[u] >> v) & 1 == 1

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen, frontier = 1, 1
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= self.neighbor_bits[v]
            frontier = nxt & ~seen
            seen |= nxt
        return seen == (1 << self.n) - 1

    def induced(self, vertices: Sequence[int]) -> "Graph":
        index = {v: i for i, v in enumerate(vertices)}
        return Graph(
            len(vertices),
            frozenset(
                (index[u], index[v]) if index[u] < index[v] else (index[v], index[u])
                for u, v in self.edges
                if u in index and v in index
            ),
        )


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


# ---------------------------------------------------------------- named graphs


def empty(n: int) -> Graph:
    return Graph(n)


def complete(n: int) -> Graph:
    return Graph(n, frozenset((u, v) for u in range(n) for v in range(u + 1, n)))


def path(n: int) -> Graph:
    return Graph(n, frozenset((i, i + 1) for i in range(n - 1)))


def cycle(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph(n, frozenset((min(i, (i + 1) % n), max(i, (i + 1) % n)) for i in range(n)))


PATTERNS = {
    "k2": lambda: complete(2),
    "k3": lambda: complete(3),
    "k4": lambda: complete(4),
    "p3": lambda: path(3),
    "p4": lambda: path(4),
    "c4": lambda: cycle(4),
    "c5": lambda: cycle(5),
}


def pattern(name: str) -> Graph:
    """Built-in pattern graph by name (k2, k3, k4, p3, p4, c4, c5)."""
    try:
        return PATTERNS[name.lower()]()
    except KeyError:
        raise InputError(f"unknown pattern {name!r}; choose from {sorted(PATTERNS)}") from None


# ---------------------------------------------------------------- structure


def automorphism_count(h: Graph) -> int:
    """Number of vertex permutations of ``h`` that preserve its edge set.

    Plain backtracking over partial permutations; a partial map is extended
    only if degrees agree and adjacency to every already-mapped vertex is
    preserved in both directions.
    """
    if h.n > MAX_AUTOMORPHISM_VERTICES:
        raise BudgetError(f"automorphism search limited to {MAX_AUTOMORPHISM_VERTICES} vertices, got {h.n}")
    n = h.n
    deg = h.degrees
    nb = h.neighbor_bits
    image = [-1] * n
    used = [False] * n
    count = 0

    def extend(i: int) -> None:
        nonlocal count
        if i == n:
            count += 1
            return
        for cand in range(n):
            if used[cand] or deg[cand] != deg[i]:
                continue
            ok = True
            for j in range(i):
                if ((nb[i] >> j) & 1) != ((nb[cand] >> image[j]) & 1):
                    ok = False
                    break
            if ok:
                image[i] = cand
                used[cand] = True
                extend(i + 1)
                used[cand] = False
        image[i] = -1

    extend(0)
    return count


def _check_pins(h: Graph, pins: tuple[int, int]) -> None:
    a, b = pins
    if a == b or not (0 <= a < h.n and 0 <= b < h.n):
        raise InputError(f"invalid pin pair {pins} for a graph on {h.n} vertices")


def _join_relabel(h1: Graph, h2: Graph, pins1, pins2) -> tuple[int, dict[int, int]]:
    _check_pins(h1, pins1)
    _check_pins(h2, pins2)
    relabel = {pins2[0]: pins1[0], pins2[1]: pins1[1]}
    nxt = h1.n
    for v in range(h2.n):
        if v not in relabel:
            relabel[v] = nxt
            nxt += 1
    return nxt, relabel


def graph_join(h1: Graph, h2: Graph, pins1: tuple[int, int], pins2: tuple[int, int]) -> Graph:
    """The ``(a, b), (a', b')``-join: identify ``a`` with ``a'`` and ``b`` with ``b'``.

    Vertices of ``h1`` keep their labels; the remaining vertices of ``h2``
    follow in increasing order. Coinciding edges are merged, so the result
    is simple.
    """
    n, edges = join_edge_list(h1, h2, pins1, pins2)
    return Graph(n, frozenset(edges))


def join_edge_list(h1: Graph, h2: Graph, pins1: tuple[int, int], pins2: tuple[int, int]) -> tuple[int, list[Edge]]:
    """Like :func:`graph_join` but keeps a coinciding edge twice (multigraph join)."""
    n, relabel = _join_relabel(h1, h2, pins1, pins2)
    edges = list(h1.sorted_edges)
    for u, v in h2.sorted_edges:
        x, y = relabel[u], relabel[v]
        edges.append((x, y) if x < y else (y, x))
    return n, edges


def complement(g: Graph) -> Graph:
    return Graph(
        g.n,
        frozenset((u, v) for u in range(g.n) for v in range(u + 1, g.n) if (u, v) not in g.edges),
    )


# ---------------------------------------------------------------- multiplex / coloring


@dataclass(frozen=True)
class Multiplex:
    """``d`` graphs on one shared vertex set."""

    layers: tuple[Graph, ...]

    def __post_init__(self):
        layers = tuple(self.layers)
        if not layers:
            raise InputError("a multiplex needs at least one layer")
        sizes = {g.n for g in layers}
        if len(sizes) != 1:
            raise InputError(f"layers disagree on vertex count: {sorted(sizes)}")
        object.__setattr__(self, "layers", layers)

    @property
    def n(self) -> int:
        return self.layers[0].n

    @property
    def d(self) -> int:
        return len(self.layers)

    def __getitem__(self, i: int) -> Graph:
        return self.layers[i]


@dataclass(frozen=True, eq=False)
class Coloring:
    """Vertex coloring with ``c`` colors stored 0-based (``0..c-1``)."""

    colors: np.ndarray
    c: int

    def __post_init__(self):
        if self.c < 2:
            raise InputError("need at least 2 colors")
        arr = np.array(self.colors, dtype=np.int64)
        if arr.ndim != 1:
            raise InputError("coloring must be a vector")
        if arr.size and (arr.min() < 0 or arr.max() >= self.c):
            raise InputError(f"color values must lie in [0, {self.c})")
        arr.setflags(write=False)
        object.__setattr__(self, "colors", arr)

    @classmethod
    def random(cls, n: int, c: int, rng: np.random.Generator) -> "Coloring":
        return cls(rng.integers(0, c, size=n), c)

    @classmethod
    def constant(cls, n: int, c: int, color: int = 0) -> "Coloring":
        return cls(np.full(n, color), c)

    def __len__(self) -> int:
        return self.colors.size

    def __eq__(self, other) -> bool:
        return isinstance(other, Coloring) and self.c == other.c and np.array_equal(self.colors, other.colors)

    def class_bits(self) -> list[int]:
        """Color classes packed into Python ints, one per color."""
        masks = [0] * self.c
        for v, a in enumerate(self.colors.tolist()):
            masks[a] |= 1 << v
        return masks

    def one_hot(self) -> np.ndarray:
        return np.eye(self.c)[self.colors]

    def check_length(self, n: int) -> None:
        if len(self) != n:
            raise InputError(f"coloring has length {len(self)} but the graph has {n} vertices")
