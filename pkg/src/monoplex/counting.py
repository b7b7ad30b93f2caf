"""Monochromatic subgraph counts, the standardized statistic and multilinear forms.

Two independent counting routes are provided:

* backtracking over bit-packed adjacency rows (``count_copies``,
  ``count_monochromatic``), the reference implementation;
* Moebius inversion over set partitions of the pattern combined with
  ``einsum`` homomorphism sums (``MonochromaticCounter``,
  ``pinned_counts``), which vectorizes over many colorings at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _contract
from .errors import BudgetError, InputError
from .graphs import Coloring, Graph, Multiplex, automorphism_count
from .parallel import chunked_map, chunk_sizes, spawn_seeds

MAX_EXHAUSTIVE_COLORINGS = 10**7
DENSE_ARITY_LIMIT = 3


# ---------------------------------------------------------------- backtracking


def _search_order(h: Graph) -> list[int]:
    """Vertex order for backtracking: start at a max-degree vertex, then
    repeatedly take the vertex with most already-placed neighbours."""
    if h.n == 0:
        return []
    deg = h.degrees
    placed: list[int] = []
    rest = set(range(h.n))
    while rest:
        best = max(
            rest,
            key=lambda v: (sum(1 for p in placed if h.has_edge(v, p)), deg[v], -v),
        )
        placed.append(best)
        rest.remove(best)
    return placed


def _extension_count(
    h: Graph,
    g: Graph,
    fixed: dict[int, int] | None = None,
    allowed: int | None = None,
) -> int:
    """Number of injective homomorphisms ``h -> g`` extending ``fixed``.

    ``allowed`` restricts the images of all vertices to a bitmask of host
    vertices. The last free vertex is counted by popcount instead of being
    iterated.
    """
    fixed = dict(fixed or {})
    full = (1 << g.n) - 1
    allowed = full if allowed is None else allowed
    nb = g.neighbor_bits
    used = 0
    for hv, gv in fixed.items():
        if not (allowed >> gv) & 1 or (used >> gv) & 1:
            return 0
        used |= 1 << gv
    for u, v in h.edges:
        if u in fixed and v in fixed and not g.has_edge(fixed[u], fixed[v]):
            return 0
    order = [v for v in _search_order(h) if v not in fixed]
    if not order:
        return 1
    # constraints[i]: neighbours of order[i] among fixed vertices and order[:i]
    pos = {v: i for i, v in enumerate(order)}
    fixed_mask = []
    back_nbrs = []
    for i, v in enumerate(order):
        m = allowed
        for f, gv in fixed.items():
            if h.has_edge(v, f):
                m &= nb[gv]
        fixed_mask.append(m)
        back_nbrs.append([pos[w] for w in range(h.n) if w in pos and pos[w] < i and h.has_edge(v, w)])
    image = [0] * len(order)
    last = len(order) - 1

    def rec(i: int, used: int) -> int:
        cand = fixed_mask[i] & ~used
        for j in back_nbrs[i]:
            cand &= nb[image[j]]
            if not cand:
                return 0
        if i == last:
            return cand.bit_count()
        total = 0
        while cand:
            low = cand & -cand
            image[i] = low.bit_length() - 1
            total += rec(i + 1, used | low)
            cand ^= low
        return total

    return rec(0, used)


def injective_hom_count(h: Graph, g: Graph, allowed: int | None = None) -> int:
    return _extension_count(h, g, allowed=allowed)


def iter_injective_homs(h: Graph, g: Graph) -> Iterator[tuple[int, ...]]:
    """Yield every injective homomorphism as the tuple ``(s_1, ..., s_|V(H)|)``."""
    order = _search_order(h)
    nb = g.neighbor_bits
    full = (1 << g.n) - 1
    pos = {v: i for i, v in enumerate(order)}
    back = [[pos[w] for w in range(h.n) if pos[w] < i and h.has_edge(v, w)] for i, v in enumerate(order)]
    image = [0] * len(order)

    def rec(i: int, used: int):
        if i == len(order):
            s = [0] * h.n
            for j, v in enumerate(order):
                s[v] = image[j]
            yield tuple(s)
            return
        cand = full & ~used
        for j in back[i]:
            cand &= nb[image[j]]
        while cand:
            low = cand & -cand
            image[i] = low.bit_length() - 1
            yield from rec(i + 1, used | low)
            cand ^= low

    yield from rec(0, 0)


# ---------------------------------------------------------------- counts and Gamma


def count_copies(h: Graph, g: Graph) -> int:
    """Number of copies of ``h`` in ``g``: injective homomorphisms over ``|Aut(h)|``."""
    if h.n > g.n:
        return 0
    inj = injective_hom_count(h, g)
    aut = automorphism_count(h)
    q, r = divmod(inj, aut)
    assert r == 0, "injective count not divisible by |Aut(H)|"
    return q


def count_monochromatic(h: Graph, g: Graph, coloring: Coloring) -> int:
    """Number of copies of ``h`` in ``g`` whose vertices all share one color."""
    coloring.check_length(g.n)
    if h.n > g.n:
        return 0
    aut = automorphism_count(h)
    inj = sum(injective_hom_count(h, g, allowed=m) for m in coloring.class_bits() if m)
    q, r = divmod(inj, aut)
    assert r == 0
    return q


def expected_count(h: Graph, g: Graph, c: int) -> float:
    """Mean of the monochromatic count under a uniform ``c``-coloring."""
    return float(_expected_fraction(count_copies(h, g), h.n, c))


def _expected_fraction(copies: int, h_n: int, c: int) -> Fraction:
    if c < 2:
        raise InputError("need at least 2 colors")
    return Fraction(copies, c ** (h_n - 1))


def gamma_scale(h: Graph, n: int, c: int) -> float:
    """Factor multiplying ``T - E T`` in the standardized statistic."""
    return automorphism_count(h) * c ** (h.n - 1.5) / n ** (h.n - 1)


def gamma(h: Graph, g: Graph, coloring: Coloring, c: int | None = None) -> float:
    """Standardized monochromatic count ``|Aut H| c^{|V(H)|-3/2} (T - E T) / n^{|V(H)|-1}``."""
    c = coloring.c if c is None else c
    t = count_monochromatic(h, g, coloring)
    diff = t - _expected_fraction(count_copies(h, g), h.n, c)
    return float(diff) * gamma_scale(h, g.n, c)


def gamma_vector(patterns: Sequence[Graph], multiplex: Multiplex, coloring: Coloring, c: int | None = None) -> np.ndarray:
    if len(patterns) != multiplex.d:
        raise InputError(f"{len(patterns)} patterns for {multiplex.d} layers")
    return np.array([gamma(h, g, coloring, c) for h, g in zip(patterns, multiplex.layers)])


# ---------------------------------------------------------------- vectorized counting


class MonochromaticCounter:
    """Monochromatic counts of a fixed pattern in a fixed host graph for
    batches of colorings.

    Uses ``inj(H, G[class]) = sum_pi mu(pi) hom(H/pi, G[class])`` with the
    homomorphism sums evaluated by ``einsum`` with color-indicator vertex
    weights.
    """

    def __init__(self, h: Graph, g: Graph):
        self.h, self.g = h, g
        self.aut = automorphism_count(h)
        self.copies = count_copies(h, g)
        self._adj = g.adjacency.astype(np.float64)
        self._quot = _contract.quotients(h.n, h.sorted_edges)
        self._is_edge = h.n == 2 and h.edge_count == 1
        # einsum may materialize (batch, n, n) intermediates
        self._batch = max(1, 4_000_000 // max(1, g.n * g.n))

    def expected(self, c: int) -> float:
        return float(_expected_fraction(self.copies, self.h.n, c))

    def counts(self, colors: np.ndarray, c: int) -> np.ndarray:
        """Monochromatic counts for a ``(B, n)`` array of 0-based colorings."""
        colors = np.atleast_2d(colors)
        if not self._is_edge and colors.shape[0] > self._batch:
            return np.concatenate(
                [self.counts(colors[i : i + self._batch], c) for i in range(0, colors.shape[0], self._batch)]
            )
        total = np.zeros(colors.shape[0])
        for a in range(c):
            m = (colors == a).astype(np.float64)
            if self._is_edge:
                total += 0.5 * np.einsum("bi,bi->b", m @ self._adj, m)
                continue
            for mu, q, q_edges, _ in self._quot:
                total += mu * _contract.contract(q, q_edges, self._adj, batch_weights=m) / self.aut
        return np.rint(total)

    def gammas(self, colors: np.ndarray, c: int) -> np.ndarray:
        t = self.counts(colors, c)
        return (t - self.expected(c)) * gamma_scale(self.h, self.g.n, c)


def pinned_counts(h: Graph, g: Graph, pins: Sequence[int]) -> np.ndarray:
    """Tensor over ``[n]^|pins|``: number of injective homomorphisms with
    ``s_pins = t``; zero off the distinct tuples."""
    pins = tuple(pins)
    n = g.n
    adj = g.adjacency.astype(np.float64)
    out = np.zeros((n,) * len(pins))
    for mu, q, q_edges, q_pins in _contract.quotients(h.n, h.sorted_edges, pins):
        out += mu * _contract.contract(q, q_edges, adj, out=q_pins)
    out *= _contract.distinct_mask(n, len(pins))
    return np.rint(out)


# ---------------------------------------------------------------- tuple functions


@dataclass(frozen=True, eq=False)
class TupleFunction:
    """Real function on ``[n]_r``, the ``r``-tuples of distinct indices.

    Stored densely as an ``[n]^r`` array that vanishes off the distinct
    tuples, or as a closure evaluated on demand (used for ``r > 3``).
    """

    r: int
    n: int
    values: np.ndarray | None = None
    func: Callable[[tuple[int, ...]], float] | None = None
    bound: float = 1.0

    @classmethod
    def from_array(cls, values: np.ndarray, bound: float | None = None) -> "TupleFunction":
        values = np.array(values, dtype=np.float64)
        r, n = values.ndim, values.shape[0]
        if any(s != n for s in values.shape):
            raise InputError("tuple function array must have equal side lengths")
        values = values * _contract.distinct_mask(n, r)
        values.setflags(write=False)
        b = float(np.abs(values).max(initial=0.0)) if bound is None else float(bound)
        return cls(r, n, values, None, b)

    @classmethod
    def from_callable(cls, r: int, n: int, func: Callable, bound: float) -> "TupleFunction":
        return cls(r, n, None, func, float(bound))

    @property
    def is_dense(self) -> bool:
        return self.values is not None

    def __call__(self, t: Sequence[int]) -> float:
        t = tuple(int(x) for x in t)
        if len(t) != self.r or len(set(t)) != self.r:
            raise InputError(f"{t} is not a tuple of {self.r} distinct indices")
        if self.values is not None:
            return float(self.values[t])
        return float(self.func(t))

    def dense(self, budget: int = 10**7) -> np.ndarray:
        if self.values is not None:
            return self.values
        if self.n**self.r > budget:
            raise BudgetError(f"dense form needs {self.n}^{self.r} entries")
        out = np.zeros((self.n,) * self.r)
        for t in permutations(range(self.n), self.r):
            out[t] = self.func(t)
        return out

    def tuples(self) -> Iterator[tuple[int, ...]]:
        return permutations(range(self.n), self.r)

    def symmetrized(self) -> "TupleFunction":
        v = self.dense()
        perms = list(permutations(range(self.r)))
        sym = sum(np.transpose(v, p) for p in perms) / len(perms)
        return TupleFunction.from_array(sym, bound=self.bound)

    def __add__(self, other: "TupleFunction") -> "TupleFunction":
        _check_compatible(self, other)
        return TupleFunction.from_array(self.dense() + other.dense(), bound=self.bound + other.bound)

    def __mul__(self, s: float) -> "TupleFunction":
        return TupleFunction.from_array(self.dense() * s, bound=abs(s) * self.bound)

    __rmul__ = __mul__


def _check_compatible(f: TupleFunction, g: TupleFunction) -> None:
    if f.r != g.r:
        raise InputError(f"arity mismatch: {f.r} vs {g.r}")
    if f.n != g.n:
        raise InputError(f"domain size mismatch: {f.n} vs {g.n}")


def color_matrix(coloring: Coloring) -> np.ndarray:
    """Centered color indicators ``sqrt(c) (1{X_v = a} - 1/c)`` as an ``n x c`` matrix."""
    c = coloring.c
    return math.sqrt(c) * (coloring.one_hot() - 1.0 / c)


def color_matrices(colors: np.ndarray, c: int) -> np.ndarray:
    """Batched :func:`color_matrix` for a ``(B, n)`` array of colorings."""
    return math.sqrt(c) * (np.eye(c)[colors] - 1.0 / c)


def gaussian_color_matrix(n: int, c: int, rng: np.random.Generator) -> np.ndarray:
    """Gaussian counterpart ``Z_{v,a} - mean_b Z_{v,b}`` with i.i.d. standard normal ``Z``."""
    z = rng.standard_normal((n, c))
    return z - z.mean(axis=1, keepdims=True)


def multilinear_form(f: TupleFunction, m: np.ndarray) -> float:
    """``n^{-r/2} c^{-1/2} sum_a sum_{s in [n]_r} f(s) prod_j m[s_j, a]``."""
    m = np.asarray(m, dtype=np.float64)
    n, c = m.shape
    if n != f.n:
        raise InputError(f"matrix has {n} rows, function domain is {f.n}")
    norm = n ** (-f.r / 2) / math.sqrt(c)
    if f.is_dense:
        terms = []
        for a in range(c):
            val = f.values
            x = m[:, a]
            for _ in range(f.r):
                val = np.tensordot(x, val, axes=(0, 0))
            terms.append(float(val))
        return norm * math.fsum(terms)
    terms = []
    for t in f.tuples():
        ft = f.func(t)
        if ft:
            for a in range(c):
                terms.append(ft * math.prod(m[s, a] for s in t))
    return norm * math.fsum(terms)


def multilinear_form_batch(f: TupleFunction, ms: np.ndarray) -> np.ndarray:
    """:func:`multilinear_form` for a ``(B, n, c)`` stack of matrices."""
    vals = f.dense()
    b, n, c = ms.shape
    if n != f.n:
        raise InputError(f"matrices have {n} rows, function domain is {f.n}")
    out = np.zeros(b)
    flat = vals.reshape(n, -1)
    for a in range(c):
        # a strided slice would make matmul skip BLAS
        x = np.ascontiguousarray(ms[:, :, a])
        acc = x @ flat
        for _ in range(f.r - 1):
            acc = np.einsum("bi...,bi->b...", acc.reshape((b, n) + (-1,)), x).reshape(b, -1)
        out += acc.reshape(b)
    return out * n ** (-f.r / 2) / math.sqrt(c)


# ---------------------------------------------------------------- f_{H,J} and the expansion


def f_HJ(h: Graph, g: Graph, J: Sequence[int], t: Sequence[int]) -> float:
    """``n^{-(|V(H)|-|J|)}`` times the number of injective homomorphisms with ``s_J = t``."""
    J = tuple(J)
    if list(J) != sorted(set(J)) or len(J) < 2:
        raise InputError("J must be a sorted vertex subset of size at least 2")
    if len(set(t)) != len(t) or len(t) != len(J):
        raise InputError("t must be a tuple of distinct host vertices, one per element of J")
    cnt = _extension_count(h, g, fixed=dict(zip(J, (int(x) for x in t))))
    return cnt / g.n ** (h.n - len(J))


def f_HJ_function(h: Graph, g: Graph, J: Sequence[int]) -> TupleFunction:
    J = tuple(J)
    scale = g.n ** (h.n - len(J))
    if len(J) <= DENSE_ARITY_LIMIT:
        return TupleFunction.from_array(pinned_counts(h, g, J) / scale, bound=1.0)
    return TupleFunction.from_callable(len(J), g.n, lambda t: f_HJ(h, g, J, t), bound=1.0)


def pair_function(h: Graph, g: Graph) -> TupleFunction:
    """``sum_{|J| = 2} f_{H,J}`` as an arity-2 tuple function."""
    total = np.zeros((g.n, g.n))
    for J in combinations(range(h.n), 2):
        total += pinned_counts(h, g, J)
    return TupleFunction.from_array(total / g.n ** (h.n - 2), bound=math.comb(h.n, 2))


def conditional_pair_matrix(h: Graph, g: Graph) -> np.ndarray:
    """Block values of the finite-n two-point kernel restricted to distinct tuples.

    Entry ``(i, j)`` sums, over ordered vertex pairs ``u != v`` of ``h``, the
    number of injective homomorphisms with ``s_u = i, s_v = j`` divided by
    ``n^{|V(H)|-2}``; equivalently ``F + F^T`` for ``F`` the pair function.
    """
    f = pair_function(h, g).values
    return f + f.T


def expansion_value(h: Graph, g: Graph, coloring: Coloring, c: int | None = None) -> float:
    """Right-hand side of the multilinear expansion of ``T - E T`` over vertex subsets ``|J| >= 2``."""
    c = coloring.c if c is None else c
    coloring.check_length(g.n)
    n, k = g.n, h.n
    m = color_matrix(coloring)
    aut = automorphism_count(h)
    terms = []
    for size in range(2, k + 1):
        for J in combinations(range(k), size):
            f = f_HJ_function(h, g, J)
            terms.append(multilinear_form(f, m) * n ** (k - size / 2) / c ** (k - size / 2 - 0.5))
    return math.fsum(terms) / aut


# ---------------------------------------------------------------- covariance structure


def eta(r: int, c: int) -> float:
    return (1 - 1 / c) ** r + (c - 1) * (-1 / c) ** r


def inner_product(f: TupleFunction, g: TupleFunction) -> float:
    _check_compatible(f, g)
    return math.fsum((f.dense() * g.dense()).ravel()) / f.n**f.r


def bullet_inner_product(f: TupleFunction, g: TupleFunction) -> float:
    """``<f, g>_bullet = <f, sym(g)>``: pairs tuples with equal underlying sets."""
    _check_compatible(f, g)
    return inner_product(f, g.symmetrized())


def covariance_formula(f: TupleFunction, g: TupleFunction, c: int) -> float:
    """Closed-form covariance of two multilinear forms under a uniform coloring."""
    if f.n != g.n:
        raise InputError("domain size mismatch")
    if f.r != g.r:
        return 0.0
    return eta(f.r, c) * math.factorial(f.r) * bullet_inner_product(f, g)


def all_colorings(n: int, c: int, chunk: int = 50_000) -> Iterator[np.ndarray]:
    """All ``c^n`` colorings in lexicographic order, in ``(B, n)`` chunks."""
    total = c**n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        digits = np.empty((idx.size, n), dtype=np.int64)
        for v in range(n - 1, -1, -1):
            digits[:, v] = idx % c
            idx = idx // c
        yield digits


def _check_exhaustive_budget(n: int, c: int, budget: int = MAX_EXHAUSTIVE_COLORINGS) -> None:
    if c**n > budget:
        raise BudgetError(f"exhaustive enumeration needs {c}^{n} = {c**n} colorings (budget {budget})")


def covariance_bruteforce(f: TupleFunction, g: TupleFunction, c: int) -> float:
    """Exact covariance of the two forms, averaging over all ``c^n`` colorings."""
    if f.n != g.n:
        raise InputError("domain size mismatch")
    n = f.n
    _check_exhaustive_budget(n, c)
    fx, gx, fg = [], [], []
    for colors in all_colorings(n, c):
        ms = color_matrices(colors, c)
        a = multilinear_form_batch(f, ms)
        b = multilinear_form_batch(g, ms)
        fx.append(a)
        gx.append(b)
        fg.append(a * b)
    total = c**n
    ef = math.fsum(np.concatenate(fx)) / total
    eg = math.fsum(np.concatenate(gx)) / total
    return math.fsum(np.concatenate(fg)) / total - ef * eg


# ---------------------------------------------------------------- invariance principle


@dataclass(frozen=True)
class MomentGap:
    """Mixed moment ``E prod_{k <= order} T(f_k; .)`` under colorings and Gaussians."""

    order: int
    coloring_moment: float
    gaussian_moment: float
    gap: float
    stderr: float
    draws: int
    exhaustive: bool


def _form_values(fs: Sequence[TupleFunction], ms: np.ndarray) -> np.ndarray:
    # repeated functions (e.g. a fourth moment) are evaluated once
    cache: dict[int, np.ndarray] = {}
    for f in fs:
        if id(f) not in cache:
            cache[id(f)] = multilinear_form_batch(f, ms)
    return np.stack([cache[id(f)] for f in fs], axis=1)


def _control_columns(fs, c: int, vx: np.ndarray, vz: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Statistics with exactly known means, for control variates.

    Pairwise products have mean ``covariance_formula`` under both colorings
    and Gaussians. For ``c = 2`` triple products also agree in mean on both
    sides (all odd moments vanish and no vertex appears four times), so their
    paired difference has mean zero; they are used for fourth-order moments.
    """
    ids = [id(f) for f in fs]
    cx, cz = [], []
    seen = set()
    for i, j in combinations(range(len(fs)), 2):
        key = tuple(sorted((ids[i], ids[j])))
        if key in seen:
            continue
        seen.add(key)
        v = covariance_formula(fs[i], fs[j], c)
        cx.append(vx[:, i] * vx[:, j] - v)
        cz.append(vz[:, i] * vz[:, j] - v)
    if c == 2 and len(fs) > 3:
        for i, j, l in combinations(range(len(fs)), 3):
            key = tuple(sorted((ids[i], ids[j], ids[l])))
            if key in seen:
                continue
            seen.add(key)
            diff = vx[:, i] * vx[:, j] * vx[:, l] - vz[:, i] * vz[:, j] * vz[:, l]
            cx.append(diff)
            cz.append(diff)
    return np.stack(cx, axis=1), np.stack(cz, axis=1)


def _adjusted(y: np.ndarray, ctrl: np.ndarray) -> np.ndarray:
    """``y`` minus its least-squares projection on zero-mean controls."""
    beta, *_ = np.linalg.lstsq(ctrl - ctrl.mean(axis=0), y - y.mean(), rcond=None)
    return y - ctrl @ beta


def invariance_moment_gap(
    fs: Sequence[TupleFunction],
    c: int,
    draws: int,
    seed=0,
    *,
    coupling: str = "argmax",
    exhaustive_limit: int = 200_000,
    chunk: int = 2_000,
    workers: int = 1,
    control_variates: bool = False,
) -> list[MomentGap]:
    """Estimate ``E prod_k T(f_k; X~) - E prod_k T(f_k; Z~)`` for each prefix of ``fs``.

    When ``c^n <= exhaustive_limit`` the coloring side is computed exactly and
    only the Gaussian side is sampled. Otherwise both sides are sampled;
    with ``coupling="argmax"`` each coloring is ``X_v = argmax_a Z_{v,a}``
    from the same Gaussian array, which is exactly uniform and makes the
    paired difference far less noisy than independent draws.

    ``control_variates=True`` (sampled, argmax coupling, orders >= 3)
    regresses the paired difference on lower-order products whose means
    are known exactly (see :func:`_control_columns`), which shrinks the
    stderr of the higher-order gaps without biasing them. The reported
    per-side moments are then adjusted separately, so ``gap`` need not
    equal their difference exactly.
    """
    if not fs:
        raise InputError("need at least one function")
    if len(fs) > 4:
        raise InputError("at most 4 functions")
    n = fs[0].n
    if any(f.n != n for f in fs):
        raise InputError("all functions must share a domain size")
    if coupling not in ("argmax", "independent"):
        raise InputError(f"unknown coupling {coupling!r}")
    if control_variates and coupling != "argmax":
        raise InputError("control variates need the argmax coupling")
    k = len(fs)
    exhaustive = c**n <= exhaustive_limit

    exact_x = None
    if exhaustive:
        sums = np.zeros(k)
        for colors in all_colorings(n, c):
            vals = np.cumprod(_form_values(fs, color_matrices(colors, c)), axis=1)
            sums += vals.sum(axis=0)
        exact_x = sums / c**n

    def work(size: int, rng: np.random.Generator) -> np.ndarray:
        z = rng.standard_normal((size, n, c))
        zt = z - z.mean(axis=2, keepdims=True)
        gz = _form_values(fs, zt)
        if exhaustive:
            return gz
        if coupling == "argmax":
            colors = z.argmax(axis=2)
        else:
            colors = rng.integers(0, c, size=(size, n))
        gx = _form_values(fs, color_matrices(colors, c))
        return np.concatenate([gx, gz], axis=1)

    sizes = chunk_sizes(draws, chunk)
    parts = chunked_map(work, sizes, spawn_seeds(seed, len(sizes)), workers=workers)
    data = np.concatenate(parts, axis=0)

    out = []
    if exhaustive:
        pz = np.cumprod(data, axis=1)
        for m in range(k):
            z = pz[:, m]
            zm = float(z.mean())
            se = float(z.std(ddof=1) / math.sqrt(draws)) if draws > 1 else float("nan")
            xm = float(exact_x[m])
            out.append(MomentGap(m + 1, xm, zm, xm - zm, se, draws, exhaustive))
        return out
    vx, vz = data[:, :k], data[:, k:]
    px, pz = np.cumprod(vx, axis=1), np.cumprod(vz, axis=1)
    for m in range(k):
        x, z = px[:, m], pz[:, m]
        if control_variates and m >= 2:
            cx, cz = _control_columns(fs[: m + 1], c, vx[:, : m + 1], vz[:, : m + 1])
            # the gap uses one regression of the paired difference on both control sets
            d = _adjusted(x - z, np.concatenate([cx, cz], axis=1))
            xm, zm = float(_adjusted(x, cx).mean()), float(_adjusted(z, cz).mean())
            out.append(MomentGap(m + 1, xm, zm, float(d.mean()), float(d.std(ddof=1) / math.sqrt(draws)), draws, False))
            continue
        xm, zm = float(x.mean()), float(z.mean())
        if coupling == "argmax":
            se = float((x - z).std(ddof=1) / math.sqrt(draws))
        else:
            se = float(math.sqrt((x.var(ddof=1) + z.var(ddof=1)) / draws))
        out.append(MomentGap(m + 1, xm, zm, xm - zm, se, draws, exhaustive))
    return out


def exhaustive_moments(h: Graph, g: Graph, c: int) -> tuple[float, float]:
    """Exact mean and variance of the monochromatic count over all ``c^n`` colorings."""
    _check_exhaustive_budget(g.n, c)
    counter = MonochromaticCounter(h, g)
    s1 = s2 = 0.0
    for colors in all_colorings(g.n, c):
        t = counter.counts(colors, c)
        s1 += math.fsum(t)
        s2 += math.fsum(t * t)
    total = c**g.n
    mean = s1 / total
    return mean, s2 / total - mean * mean


def brute_force_count(h: Graph, g: Graph, coloring: Coloring | None = None) -> int:
    """Definition-literal count over all injective vertex tuples (test oracle, tiny graphs)."""
    aut = automorphism_count(h)
    total = 0
    for s in permutations(range(g.n), h.n):
        if coloring is not None and len({int(coloring.colors[v]) for v in s}) != 1:
            continue
        if all(g.has_edge(s[a], s[b]) for a, b in h.edges):
            total += 1
    return total // aut


__all__ = [
    "count_copies",
    "count_monochromatic",
    "expected_count",
    "gamma",
    "gamma_vector",
    "gamma_scale",
    "MonochromaticCounter",
    "pinned_counts",
    "TupleFunction",
    "color_matrix",
    "color_matrices",
    "gaussian_color_matrix",
    "multilinear_form",
    "multilinear_form_batch",
    "f_HJ",
    "f_HJ_function",
    "pair_function",
    "conditional_pair_matrix",
    "expansion_value",
    "eta",
    "inner_product",
    "bullet_inner_product",
    "covariance_formula",
    "covariance_bruteforce",
    "invariance_moment_gap",
    "MomentGap",
    "exhaustive_moments",
    "all_colorings",
    "iter_injective_homs",
    "injective_hom_count",
    "brute_force_count",
]
