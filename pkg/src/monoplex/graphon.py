"""Step kernels and step graphons on ``[0, 1]``.

A step kernel is described by block measures ``mu`` (positive, summing to
1) and a symmetric ``k x k`` value matrix. Block ``u`` occupies the
interval ``[sum(mu[:u]), sum(mu[:u+1]))``. Every integral below is an exact
finite block sum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations
from typing import Sequence

import numpy as np

from . import _contract
from .errors import BudgetError, InputError
from .graphs import Graph, graph_join, join_edge_list

MEASURE_TOL = 1e-12
HOM_BUDGET = 10**10
CUT_NORM_MAX_BLOCKS = 20
ALIGN_MAX_BLOCKS = 9


@dataclass(frozen=True, eq=False)
class StepKernel:
    """Symmetric block-constant kernel with entries bounded by ``bound`` in absolute value."""

    measures: np.ndarray
    values: np.ndarray
    bound: float = math.inf

    def __post_init__(self):
        mu = np.array(self.measures, dtype=np.float64).ravel()
        v = np.array(self.values, dtype=np.float64)
        if mu.size == 0:
            raise InputError("need at least one block")
        if v.shape != (mu.size, mu.size):
            raise InputError(f"values must be {mu.size}x{mu.size}, got {v.shape}")
        if np.any(mu <= 0):
            raise InputError("block measures must be positive")
        if abs(mu.sum() - 1.0) > MEASURE_TOL * max(1, mu.size):
            raise InputError(f"block measures sum to {mu.sum()!r}, not 1")
        if not np.allclose(v, v.T, rtol=0, atol=1e-12):
            raise InputError("kernel values must be symmetric")
        v = (v + v.T) / 2
        bound = float(np.abs(v).max()) if math.isinf(self.bound) else float(self.bound)
        if np.abs(v).max() > bound * (1 + 1e-12) + 1e-15:
            raise InputError(f"kernel entries exceed the stated bound {bound}")
        mu.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "measures", mu)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "bound", bound)

    @classmethod
    def uniform(cls, values, bound: float = math.inf) -> "StepKernel":
        v = np.asarray(values, dtype=np.float64)
        return cls(np.full(v.shape[0], 1.0 / v.shape[0]), v, bound)

    @property
    def k(self) -> int:
        return self.measures.size

    @property
    def boundaries(self) -> np.ndarray:
        """Right endpoints of the blocks (the last one is exactly 1)."""
        b = np.cumsum(self.measures)
        b[-1] = 1.0
        return b

    def weighted(self) -> np.ndarray:
        """``diag(mu) V diag(mu)``: the integral of the kernel over each block rectangle."""
        return self.measures[:, None] * self.values * self.measures[None, :]

    def integral(self) -> float:
        return float(self.weighted().sum())

    def l1_norm(self) -> float:
        return float(np.abs(self.weighted()).sum())

    def l2_norm(self) -> float:
        return math.sqrt(kernel_inner_product(self, self))

    def sup_norm(self) -> float:
        return float(np.abs(self.values).max())

    def permuted(self, perm: Sequence[int]) -> "StepKernel":
        """Kernel with blocks reordered so that new block ``u`` is old block ``perm[u]``."""
        p = np.asarray(perm)
        return type(self)(self.measures[p], self.values[np.ix_(p, p)], self.bound)

    def refine(self, boundaries: np.ndarray) -> "StepKernel":
        """Re-express on a finer partition whose boundaries include this kernel's."""
        idx = _block_index(self.boundaries, boundaries)
        mu = np.diff(np.concatenate([[0.0], boundaries]))
        return type(self)(mu / mu.sum(), self.values[np.ix_(idx, idx)], self.bound)

    def as_kernel(self) -> "StepKernel":
        return StepKernel(self.measures, self.values, self.bound)

    def _binary(self, other, op, bound):
        if isinstance(other, StepKernel):
            a, b = common_refinement(self, other)
            return StepKernel(a.measures, op(a.values, b.values), bound(a.bound, b.bound))
        s = float(other)
        return StepKernel(self.measures, op(self.values, s), bound(self.bound, abs(s)))

    def __add__(self, other):
        return self._binary(other, np.add, lambda x, y: x + y)

    def __sub__(self, other):
        return self._binary(other, np.subtract, lambda x, y: x + y)

    def __mul__(self, other):
        return self._binary(other, np.multiply, lambda x, y: x * y)

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return StepKernel(self.measures, -self.values, self.bound)

    def to_dict(self) -> dict:
        return {"measures": self.measures.tolist(), "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, obj: dict) -> "StepKernel":
        try:
            return cls(obj["measures"], obj["values"])
        except KeyError as e:
            raise InputError(f"step kernel is missing the {e.args[0]!r} field") from None


class StepGraphon(StepKernel):
    """Step kernel with entries in ``[0, 1]``."""

    def __post_init__(self):
        object.__setattr__(self, "bound", 1.0)
        super().__post_init__()
        if self.values.min() < 0:
            raise InputError("graphon values must lie in [0, 1]")


def _block_index(coarse: np.ndarray, fine: np.ndarray) -> np.ndarray:
    """For each fine block, the index of the coarse block containing it."""
    mids = np.concatenate([[0.0], fine[:-1]])
    mids = (mids + fine) / 2
    return np.minimum(np.searchsorted(coarse, mids, side="right"), coarse.size - 1)


def common_boundaries(*kernels: StepKernel, tol: float = 1e-12) -> np.ndarray:
    pts = np.sort(np.concatenate([k.boundaries for k in kernels]))
    merged = [pts[0]]
    for x in pts[1:]:
        if x - merged[-1] > tol:
            merged.append(x)
        else:
            merged[-1] = max(merged[-1], x)
    merged[-1] = 1.0
    return np.array(merged)


def same_partition(a: StepKernel, b: StepKernel, tol: float = 1e-12) -> bool:
    return a.k == b.k and bool(np.all(np.abs(a.measures - b.measures) <= tol))


def common_refinement(*kernels: StepKernel) -> list[StepKernel]:
    """All kernels re-expressed on the coarsest partition refining each of them."""
    if all(same_partition(kernels[0], k) for k in kernels[1:]):
        return list(kernels)
    b = common_boundaries(*kernels)
    return [k.refine(b) for k in kernels]


# ---------------------------------------------------------------- constructors


def empirical_graphon(g: Graph) -> StepGraphon:
    """The ``n``-block 0/1 step graphon of ``g``'s adjacency matrix."""
    if g.n < 1:
        raise InputError("empirical graphon needs at least one vertex")
    return StepGraphon(np.full(g.n, 1.0 / g.n), g.adjacency.astype(np.float64))


def constant(p: float) -> StepGraphon:
    return StepGraphon(np.ones(1), np.array([[float(p)]]))


def random_step_graphon(
    k: int, rng: np.random.Generator, *, binary: bool = False, uniform_measures: bool = False
) -> StepGraphon:
    """Random ``k``-block graphon; measures are Dirichlet(1,...,1) unless uniform."""
    mu = np.full(k, 1.0 / k) if uniform_measures else rng.dirichlet(np.ones(k))
    v = rng.random((k, k))
    if binary:
        v = (v < 0.5).astype(np.float64)
    return StepGraphon(mu, np.triu(v) + np.triu(v, 1).T)


def random_step_kernel(k: int, rng: np.random.Generator, scale: float = 1.0) -> StepKernel:
    mu = rng.dirichlet(np.ones(k))
    v = rng.uniform(-scale, scale, (k, k))
    return StepKernel(mu, np.triu(v) + np.triu(v, 1).T)


# ---------------------------------------------------------------- densities


def _check_budget(k: int, vertices: int, budget: int) -> None:
    if float(k) ** vertices > budget:
        raise BudgetError(f"{k}^{vertices} block assignments exceed the budget {budget}")


def hom_density(f: Graph, w: StepKernel, budget: int = HOM_BUDGET) -> float:
    """``t(F, W)``: sum over block maps of vertex measures times edge values."""
    _check_budget(w.k, f.n, budget)
    return float(_contract.contract(f.n, f.sorted_edges, w.values, weights=w.measures))


def _edge_list_density(k_vertices: int, edges, w: StepKernel, budget: int) -> float:
    _check_budget(w.k, k_vertices, budget)
    return float(_contract.contract(k_vertices, edges, w.values, weights=w.measures))


def two_point_kernel(h: Graph, w: StepKernel, budget: int = HOM_BUDGET) -> StepKernel:
    """``W_H``: for blocks ``(i, j)``, sum over ordered pairs ``a != b`` of ``h`` of the
    integral of the edge product with ``a`` pinned to block ``i`` and ``b`` to block ``j``."""
    if h.n < 2:
        raise InputError("the pattern needs at least two vertices")
    _check_budget(w.k, h.n, budget)
    out = np.zeros((w.k, w.k))
    for a in range(h.n):
        for b in range(h.n):
            if a != b:
                out += _contract.contract(
                    h.n, h.sorted_edges, w.values, weights=w.measures, out=(a, b), skip_weight=(a, b)
                )
    bound = h.n * (h.n - 1) * w.bound ** h.edge_count
    return StepKernel(w.measures, (out + out.T) / 2, bound)


def kernel_inner_product(k1: StepKernel, k2: StepKernel) -> float:
    a, b = common_refinement(k1, k2)
    mu = a.measures
    return float(np.einsum("u,v,uv,uv->", mu, mu, a.values, b.values))


def join_density_sum(h1: Graph, h2: Graph, w: StepKernel, *, simple: bool = True, budget: int = HOM_BUDGET) -> float:
    """Sum of ``t(H1 (a,b),(a',b')-join H2, W)`` over ordered pin pairs of both graphs.

    With ``simple=True`` coinciding edges of the join are merged, following
    the graph join. With ``simple=False`` they are kept as parallel edges,
    which makes the sum equal ``<W_{H1}, W_{H2}>`` for every kernel; the two
    agree whenever ``W`` is 0/1-valued.
    """
    total = []
    for a in range(h1.n):
        for b in range(h1.n):
            if a == b:
                continue
            for a2 in range(h2.n):
                for b2 in range(h2.n):
                    if a2 == b2:
                        continue
                    if simple:
                        j = graph_join(h1, h2, (a, b), (a2, b2))
                        total.append(hom_density(j, w, budget))
                    else:
                        n, edges = join_edge_list(h1, h2, (a, b), (a2, b2))
                        total.append(_edge_list_density(n, edges, w, budget))
    return math.fsum(total)


# ---------------------------------------------------------------- cut norm


def _subset_matrix(k: int) -> np.ndarray:
    return ((np.arange(2**k)[:, None] >> np.arange(k)[None, :]) & 1).astype(np.float64)


def _cut_norm_weighted(m: np.ndarray) -> float:
    """max over S, T of |sum_{S x T} m| for a (possibly batched) block-integral matrix."""
    k = m.shape[-1]
    if k > CUT_NORM_MAX_BLOCKS:
        raise BudgetError(f"exact cut norm limited to {CUT_NORM_MAX_BLOCKS} blocks, got {k}")
    lo_bits = min(k, 10)
    hi_bits = k - lo_bits
    lo = _subset_matrix(lo_bits) @ m[..., :lo_bits, :]
    best = np.zeros(m.shape[:-2])
    hi_sets = _subset_matrix(hi_bits)
    for start in range(0, hi_sets.shape[0], 64):
        hi = hi_sets[start : start + 64] @ m[..., lo_bits:, :]
        rows = lo[..., None, :, :] + hi[..., :, None, :]
        pos = np.clip(rows, 0, None).sum(axis=-1)
        neg = -np.clip(rows, None, 0).sum(axis=-1)
        best = np.maximum(best, np.maximum(pos, neg).max(axis=(-1, -2)))
    return best


def cut_norm(kernel: StepKernel) -> float:
    """Exact cut norm: the optimal sets are unions of blocks, so enumerate row
    subsets ``S`` and take the best column set for each."""
    return float(_cut_norm_weighted(kernel.weighted()))


def cut_distance_aligned(w1: StepKernel, w2: StepKernel) -> float:
    """Minimum over block permutations ``pi`` of ``cut_norm(W1^pi - W2)``."""
    if w1.k != w2.k:
        raise InputError("aligned cut distance needs equal block counts")
    if not (np.allclose(w1.measures, 1.0 / w1.k, atol=1e-12) and np.allclose(w2.measures, 1.0 / w2.k, atol=1e-12)):
        raise InputError("aligned cut distance needs uniform block measures")
    k = w1.k
    if k > ALIGN_MAX_BLOCKS:
        raise BudgetError(f"permutation search limited to {ALIGN_MAX_BLOCKS} blocks, got {k}")
    mu2 = 1.0 / k**2
    best = math.inf
    perms = list(permutations(range(k)))
    for start in range(0, len(perms), 2048):
        p = np.array(perms[start : start + 2048])
        diff = w1.values[p[:, :, None], p[:, None, :]] - w2.values[None]
        best = min(best, float(_cut_norm_weighted(diff * mu2).min()))
    return best


# ---------------------------------------------------------------- Lipschitz probe


@dataclass(frozen=True)
class LipschitzProbe:
    scales: tuple[float, ...]
    differences: tuple[float, ...]
    ratios: tuple[float, ...]
    perturbation_cut_norm: float

    @property
    def spread(self) -> float:
        """max/min ratio across scales (1 when every ratio is equal, inf if one vanishes)."""
        r = np.abs(self.ratios)
        if r.max() == 0:
            return 1.0
        return float(r.max() / r.min()) if r.min() > 0 else math.inf


def lipschitz_probe(h: Graph, w: StepKernel, r: StepKernel, scales: Sequence[float]) -> LipschitzProbe:
    """Ratios ``cut_norm(W_H[W + tR] - W_H[W]) / (t cut_norm(R))`` for each ``t`` in ``scales``."""
    w, r = common_refinement(w.as_kernel(), r.as_kernel())
    base = two_point_kernel(h, w)
    rn = cut_norm(r)
    diffs, ratios = [], []
    for t in scales:
        if t == 0:
            raise InputError("scales must be nonzero")
        pert = StepKernel(w.measures, w.values + t * r.values)
        d = cut_norm(StepKernel(w.measures, two_point_kernel(h, pert).values - base.values))
        diffs.append(d)
        ratios.append(d / (abs(t) * rn) if rn > 0 else 0.0)
    return LipschitzProbe(tuple(float(t) for t in scales), tuple(diffs), tuple(ratios), rn)


__all__ = [
    "StepKernel",
    "StepGraphon",
    "common_refinement",
    "same_partition",
    "empirical_graphon",
    "constant",
    "random_step_graphon",
    "random_step_kernel",
    "hom_density",
    "two_point_kernel",
    "kernel_inner_product",
    "join_density_sum",
    "cut_norm",
    "cut_distance_aligned",
    "lipschitz_probe",
    "LipschitzProbe",
]
