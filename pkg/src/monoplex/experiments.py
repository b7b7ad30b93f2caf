"""Random multiplex generators, the Monte Carlo coloring engine and empirical-vs-limit reports."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .counting import MonochromaticCounter
from .errors import InputError
from .graphon import StepGraphon, constant, join_density_sum
from .graphs import Graph, Multiplex, complement, pattern
from .limitlaw import SIGMA_LIMIT, LimitSpec, limit_sample, rho_finite
from .parallel import as_seed, chunk_sizes, chunked_map, spawn_seeds

# ---------------------------------------------------------------- generators


def _pair_uniforms(n: int, seed) -> np.ndarray:
    """One uniform per vertex pair ``u < v`` in row-major order.

    A Philox counter-based stream keyed by ``seed``: the value for pair
    index ``i`` is the ``i``-th output, independent of how the work is split.
    """
    ss = as_seed(seed)
    ss = ss if isinstance(ss, np.random.SeedSequence) else np.random.SeedSequence(ss)
    key = int(ss.generate_state(1, np.uint64)[0])
    bitgen = np.random.Philox(key=key)
    return np.random.Generator(bitgen).random(n * (n - 1) // 2)


def _graph_from_mask(n: int, mask: np.ndarray) -> Graph:
    iu, ju = np.triu_indices(n, 1)
    return Graph(n, frozenset(zip(iu[mask].tolist(), ju[mask].tolist())))


def erdos_renyi(n: int, p: float, seed=0) -> Graph:
    if not 0 <= p <= 1:
        raise InputError("edge probability must lie in [0, 1]")
    return _graph_from_mask(n, _pair_uniforms(n, seed) < p)


def sample_correlated_er(n: int, p: float, q: float, rho: float, seed=0) -> Multiplex:
    """Two layers where each pair is an edge of both with probability ``p12 = rho + pq``,
    of layer 1 only with ``p - p12`` and of layer 2 only with ``q - p12``."""
    if not (0 < p < 1 and 0 < q < 1):
        raise InputError("p and q must lie in (0, 1)")
    p12 = rho + p * q
    lo, hi = max(p + q - 1, 0.0), min(p, q)
    if not lo - 1e-12 <= p12 <= hi + 1e-12:
        raise InputError(f"infeasible coupling: p12 = {p12:.6g} outside [{lo:.6g}, {hi:.6g}]")
    u = _pair_uniforms(n, seed)
    both = u < p12
    first = u < p
    second = both | ((u >= p) & (u < p + q - p12))
    return Multiplex((_graph_from_mask(n, first), _graph_from_mask(n, second)))


def complement_multiplex(n: int, p: float, seed=0) -> Multiplex:
    if not 0 < p < 1:
        raise InputError("p must lie in (0, 1)")
    g = erdos_renyi(n, p, seed)
    return Multiplex((g, complement(g)))


def _complete_bipartite(blocks: Sequence[range], pairs: Sequence[tuple[int, int]]) -> set:
    edges = set()
    for s, t in pairs:
        for u in blocks[s]:
            for v in blocks[t]:
                edges.add((u, v) if u < v else (v, u))
    return edges


def path_blowup_multiplexes(n: int) -> tuple[Multiplex, Multiplex]:
    """Blow-up of the 4-vertex path with blocks of size ``n``.

    Returns ``A = (P, B12)`` and ``B = (P, B23)`` where ``P`` joins consecutive
    blocks and ``Bst`` is the complete bipartite graph between blocks ``s`` and ``t``.
    """
    if n < 1:
        raise InputError("block size must be positive")
    blocks = [range(s * n, (s + 1) * n) for s in range(4)]
    total = 4 * n
    g1 = Graph(total, frozenset(_complete_bipartite(blocks, [(0, 1), (1, 2), (2, 3)])))
    g2 = Graph(total, frozenset(_complete_bipartite(blocks, [(0, 1)])))
    g3 = Graph(total, frozenset(_complete_bipartite(blocks, [(1, 2)])))
    return Multiplex((g1, g2)), Multiplex((g1, g3))


def path_blowup_graphons() -> tuple[StepGraphon, StepGraphon, StepGraphon]:
    """Limit graphons of the three path blow-up layers on four equal blocks."""
    mats = []
    for pairs in ([(0, 1), (1, 2), (2, 3)], [(0, 1)], [(1, 2)]):
        m = np.zeros((4, 4))
        for s, t in pairs:
            m[s, t] = m[t, s] = 1.0
        mats.append(StepGraphon(np.full(4, 0.25), m))
    return tuple(mats)


def correlated_er_rho(patterns: Sequence[Graph], p: float, q: float, rho: float) -> np.ndarray:
    """Limiting overlaps for the correlated Erdos-Renyi pair.

    For the cross term each ordered pin pair contributes ``p^{e1} q^{e2}``,
    except when both pinned pairs are edges, where the shared pair is an
    edge of both layers with probability ``p12 = rho + pq``.
    """
    if len(patterns) != 2:
        raise InputError("the correlated model has two layers")
    h1, h2 = patterns
    e1, e2 = h1.edge_count, h2.edge_count
    p12 = rho + p * q
    cross = []
    for a in range(h1.n):
        for b in range(h1.n):
            if a == b:
                continue
            for a2 in range(h2.n):
                for b2 in range(h2.n):
                    if a2 == b2:
                        continue
                    if h1.has_edge(a, b) and h2.has_edge(a2, b2):
                        cross.append(p ** (e1 - 1) * q ** (e2 - 1) * p12)
                    else:
                        cross.append(p**e1 * q**e2)
    off = math.fsum(cross)
    return np.array(
        [[join_density_sum(h1, h1, constant(p)), off], [off, join_density_sum(h2, h2, constant(q))]]
    )


# ---------------------------------------------------------------- Monte Carlo


@dataclass(frozen=True, eq=False)
class EmpiricalDistribution:
    """Draws of a ``d``-dimensional statistic with moment summaries."""

    draws: np.ndarray

    def __post_init__(self):
        x = np.array(self.draws, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] < 2:
            raise InputError("need a (count, d) array with at least two draws")
        x.setflags(write=False)
        object.__setattr__(self, "draws", x)

    @property
    def count(self) -> int:
        return self.draws.shape[0]

    @property
    def d(self) -> int:
        return self.draws.shape[1]

    @property
    def mean(self) -> np.ndarray:
        return self.draws.mean(axis=0)

    @property
    def covariance(self) -> np.ndarray:
        return np.atleast_2d(np.cov(self.draws, rowvar=False))

    def central_moment(self, order: int) -> np.ndarray:
        return ((self.draws - self.mean) ** order).mean(axis=0)

    def difference_moment(self, i: int, j: int, order: int = 4) -> float:
        """Raw moment ``E (Y_i - Y_j)^order``."""
        return float(((self.draws[:, i] - self.draws[:, j]) ** order).mean())

    def summary(self) -> dict:
        out = {
            "count": self.count,
            "mean": self.mean.tolist(),
            "covariance": self.covariance.tolist(),
            "third_central": self.central_moment(3).tolist(),
            "fourth_central": self.central_moment(4).tolist(),
        }
        if self.d > 1:
            out["difference_fourth"] = {
                f"{i},{j}": self.difference_moment(i, j) for i in range(self.d) for j in range(i + 1, self.d)
            }
        return out


def gamma_draws(
    patterns: Sequence[Graph],
    multiplex: Multiplex,
    c: int,
    count: int,
    seed=0,
    *,
    workers: int = 1,
    chunk: int = 1000,
) -> np.ndarray:
    """Standardized counts for ``count`` uniform colorings shared by all layers, shape ``(count, d)``."""
    if len(patterns) != multiplex.d:
        raise InputError(f"{len(patterns)} patterns for {multiplex.d} layers")
    counters = [MonochromaticCounter(h, g) for h, g in zip(patterns, multiplex.layers)]
    n = multiplex.n

    def draw(size: int, rng: np.random.Generator) -> np.ndarray:
        colors = rng.integers(0, c, size=(size, n))
        return np.stack([ct.gammas(colors, c) for ct in counters], axis=1)

    sizes = chunk_sizes(count, chunk)
    return np.concatenate(chunked_map(draw, sizes, spawn_seeds(seed, len(sizes)), workers=workers), axis=0)


def mc_empirical(
    patterns: Sequence[Graph], multiplex: Multiplex, c: int, num_colorings: int, seed=0, *, workers: int = 1
) -> EmpiricalDistribution:
    return EmpiricalDistribution(gamma_draws(patterns, multiplex, c, num_colorings, seed, workers=workers))


# ---------------------------------------------------------------- comparison


@dataclass(frozen=True)
class GapRow:
    name: str
    empirical: float
    limit: float
    gap: float
    stderr: float
    tagged: bool = True

    def within(self, multiplier: float) -> bool:
        return abs(self.gap) <= multiplier * self.stderr


def _mean_row(name: str, a: np.ndarray, b: np.ndarray, tagged: bool = True) -> GapRow:
    ea, eb = float(a.mean()), float(b.mean())
    se = math.sqrt(a.var(ddof=1) / a.size + b.var(ddof=1) / b.size)
    return GapRow(name, ea, eb, ea - eb, se, tagged)


def compare(empirical: EmpiricalDistribution, limit_draws: np.ndarray, *, tag_higher: bool = True) -> list[GapRow]:
    """Moment gaps between empirical draws and limit-law draws, each with a pooled stderr.

    Each statistic is the mean of a per-draw quantity (centered at each
    sample's own mean for the central moments), and its stderr is the
    usual ``std / sqrt(count)`` pooled across both samples.
    """
    lim = EmpiricalDistribution(limit_draws)
    if lim.d != empirical.d:
        raise InputError(f"dimension mismatch: {empirical.d} vs {lim.d}")
    x, y = empirical.draws, lim.draws
    xc, yc = x - x.mean(axis=0), y - y.mean(axis=0)
    rows = []
    for i in range(empirical.d):
        rows.append(_mean_row(f"mean[{i}]", x[:, i], y[:, i]))
    for i in range(empirical.d):
        for j in range(i, empirical.d):
            rows.append(_mean_row(f"cov[{i},{j}]", xc[:, i] * xc[:, j], yc[:, i] * yc[:, j]))
    for i in range(empirical.d):
        rows.append(_mean_row(f"m3[{i}]", xc[:, i] ** 3, yc[:, i] ** 3, tag_higher))
        rows.append(_mean_row(f"m4[{i}]", xc[:, i] ** 4, yc[:, i] ** 4, tag_higher))
    for i in range(empirical.d):
        for j in range(i + 1, empirical.d):
            rows.append(_mean_row(f"diff4[{i},{j}]", (x[:, i] - x[:, j]) ** 4, (y[:, i] - y[:, j]) ** 4, tag_higher))
    return rows


def ks_statistics(empirical: EmpiricalDistribution, limit_draws: np.ndarray) -> list[float]:
    """Two-sample Kolmogorov-Smirnov distance per marginal (descriptive only)."""
    y = np.atleast_2d(np.asarray(limit_draws).T).T
    return [float(stats.ks_2samp(empirical.draws[:, i], y[:, i]).statistic) for i in range(empirical.d)]


@dataclass
class ExperimentReport:
    config: dict
    empirical: dict
    limit: dict
    rows: list[GapRow]
    ks: list[float] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    multiplier: float = 4.0

    @property
    def failures(self) -> list[GapRow]:
        return [r for r in self.rows if r.tagged and not r.within(self.multiplier)]

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "empirical": self.empirical,
            "limit": self.limit,
            "rows": [asdict(r) for r in self.rows],
            "ks": self.ks,
            "extra": self.extra,
            "multiplier": self.multiplier,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "empirical", "limit", "gap", "stderr"])
        for r in self.rows:
            w.writerow([r.name] + [format_float(v) for v in (r.empirical, r.limit, r.gap, r.stderr)])
        return buf.getvalue()


def format_float(x: float) -> str:
    return f"{x:.12g}"


# ---------------------------------------------------------------- presets


PRESETS = ("er-correlated", "complement", "path-blowup", "custom")


@dataclass
class ExperimentConfig:
    """Parameters shared by every preset; unused fields are ignored by a preset."""

    preset: str = "custom"
    n: int = 200
    p: float = 0.5
    q: float = 0.5
    rho: float = 0.0
    c: int = 2
    patterns: tuple[str, ...] = ()
    colorings: int = 10_000
    limit_draws: int = 100_000
    seed: int = 0
    workers: int = 1
    multiplier: float = 4.0

    def __post_init__(self):
        if self.preset not in PRESETS:
            raise InputError(f"unknown preset {self.preset!r}; choose from {', '.join(PRESETS)}")
        if self.c < 2:
            raise InputError("need at least 2 colors")
        if self.n < 1 or self.colorings < 2 or self.limit_draws < 2:
            raise InputError("n must be positive and draw counts at least 2")
        self.patterns = tuple(self.patterns)

    def pattern_graphs(self, default: Sequence[str]) -> list[Graph]:
        return [pattern(name) for name in (self.patterns or default)]


def _seeds(seed: int) -> tuple[np.random.SeedSequence, ...]:
    return tuple(np.random.SeedSequence(seed).spawn(3))


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Run a preset: build the multiplex, simulate colorings, sample the limit, compare."""
    graph_seed, mc_seed, limit_seed = _seeds(cfg.seed)
    extra: dict = {}
    if cfg.preset == "er-correlated":
        hs = cfg.pattern_graphs(("k2", "k2"))
        mux = sample_correlated_er(cfg.n, cfg.p, cfg.q, cfg.rho, graph_seed)
        spec = LimitSpec.from_patterns(hs, [constant(cfg.p), constant(cfg.q)], cfg.c,
                                       rho=correlated_er_rho(hs, cfg.p, cfg.q, cfg.rho))
        extra["edge_overlap"] = len(mux[0].edges & mux[1].edges) / (cfg.n * (cfg.n - 1) / 2)
    elif cfg.preset == "complement":
        hs = cfg.pattern_graphs(("k3", "k3"))
        mux = complement_multiplex(cfg.n, cfg.p, graph_seed)
        q = 1 - cfg.p
        spec = LimitSpec.from_patterns(hs, [constant(cfg.p), constant(q)], cfg.c,
                                       rho=correlated_er_rho(hs, cfg.p, q, -cfg.p * q))
        lam, vec = np.linalg.eigh(spec.sigma)
        extra["sigma_eigenvalues"] = lam.tolist()
        extra["sigma_rank"] = int(np.sum(lam > 1e-12 * max(1.0, lam.max())))
        extra["gaussian_direction"] = _normalize(vec[:, -1])
        extra["gaussian_direction_target"] = _normalize([cfg.p**2, -(q**2)])
    elif cfg.preset == "path-blowup":
        hs = cfg.pattern_graphs(("k2", "k2"))
        mux, mux_b = path_blowup_multiplexes(cfg.n)
        w1, w2, w3 = path_blowup_graphons()
        spec = _blowup_spec(hs, w1, w2, cfg.c)
        spec_b = _blowup_spec(hs, w1, w3, cfg.c)
        for name, m in (("A", mux), ("B", mux_b)):
            extra[f"overlap_{name}"] = 2 * len(m[0].edges & m[1].edges) / m.n**2
        extra["rho_finite_A"] = rho_finite(hs[0], hs[1], mux[0], mux[1])
        extra["targets"] = {
            "diff4_A": 36 / 64,
            "diff4_B": 24 / 64,
            "diff4_A_half_square": 36 / 256,
            "diff4_B_half_square": 24 / 256,
        }
    else:
        hs = cfg.pattern_graphs(("k3",))
        g = erdos_renyi(cfg.n, cfg.p, graph_seed)
        mux = Multiplex((g,) * len(hs)) if len(hs) > 1 else Multiplex((g,))
        spec = LimitSpec.from_patterns(hs, [constant(cfg.p)] * len(hs), cfg.c)

    emp = mc_empirical(hs, mux, cfg.c, cfg.colorings, mc_seed, workers=cfg.workers)
    lim = limit_sample(spec, cfg.limit_draws, limit_seed, workers=cfg.workers)
    rows = compare(emp, lim)
    if cfg.preset == "path-blowup":
        lim_b = limit_sample(spec_b, cfg.limit_draws, np.random.SeedSequence(cfg.seed).spawn(4)[3], workers=cfg.workers)
        d = (emp.draws[:, 0] - emp.draws[:, 1]) ** 4
        db = (lim_b[:, 0] - lim_b[:, 1]) ** 4
        mismatch = _mean_row("diff4[0,1] vs B", d, db, tagged=False)
        rows.append(mismatch)
        extra["mismatch_sigmas"] = abs(mismatch.gap) / mismatch.stderr
    config = asdict(cfg)
    config["patterns"] = list(cfg.patterns) or None
    limit_summary = EmpiricalDistribution(lim).summary()
    limit_summary["exact_covariance"] = spec.covariance().tolist()
    limit_summary["sigma"] = spec.sigma.tolist()
    limit_summary["sigma_source"] = spec.sigma_source
    return ExperimentReport(config, emp.summary(), limit_summary, rows, ks_statistics(emp, lim), extra, cfg.multiplier)


def _blowup_spec(hs, wa, wb, c) -> LimitSpec:
    from .graphon import kernel_inner_product, two_point_kernel

    off = kernel_inner_product(two_point_kernel(hs[0], wa), two_point_kernel(hs[1], wb))
    rho = np.array([[0.0, off], [off, 0.0]])
    return LimitSpec.from_patterns(hs, [wa, wb], c, rho=rho, sigma_source=SIGMA_LIMIT)


def _normalize(v):
    """Scale to unit max-norm with a positive first entry."""
    v = np.asarray(v, dtype=np.float64)
    v = v if v[0] >= 0 else -v
    return (v / np.abs(v).max()).tolist()


__all__ = [
    "erdos_renyi",
    "sample_correlated_er",
    "complement_multiplex",
    "path_blowup_multiplexes",
    "path_blowup_graphons",
    "correlated_er_rho",
    "EmpiricalDistribution",
    "gamma_draws",
    "mc_empirical",
    "GapRow",
    "compare",
    "ks_statistics",
    "ExperimentReport",
    "ExperimentConfig",
    "run_experiment",
    "PRESETS",
    "format_float",
]
