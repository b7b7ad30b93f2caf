"""Covariance matrix and samplers for the joint limit of standardized monochromatic counts.

The limit of the vector of standardized counts is

    sqrt((c-1)/(2c)) Z  +  (1/(2 sqrt(c))) sum_{a=1}^{c-1} int int K_i dB^(a) dB^(a)

with ``Z ~ N(0, Sigma)`` independent of the Brownian motions ``B^(a)`` and
``K_i`` the two-point kernel of pattern ``i`` on graphon ``i``. All kernels
are step functions, so the double Wiener-Ito integrals reduce to Gaussian
quadratic forms in the block increments of ``B`` minus their trace.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .counting import conditional_pair_matrix
from .errors import InconsistentSigmaError, InputError
from .graphon import (
    StepKernel,
    common_refinement,
    empirical_graphon,
    join_density_sum,
    kernel_inner_product,
    same_partition,
    two_point_kernel,
)
from .graphs import Graph
from .parallel import DEFAULT_CHUNK, sample_rows
from .spectral import Spectrum, spectrum, weighted_chisq_sample

PSD_TOL = 1e-10

SIGMA_LIMIT = "limit"
SIGMA_PLUGIN = "finite-n plug-in"


def _psd_clamp(sigma: np.ndarray, tol: float = PSD_TOL) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.ndim != 2 or sigma.shape[0] != sigma.shape[1]:
        raise InputError("sigma must be a square matrix")
    if not np.allclose(sigma, sigma.T, rtol=0, atol=1e-12):
        raise InputError("sigma must be symmetric")
    sigma = (sigma + sigma.T) / 2
    lam, vec = np.linalg.eigh(sigma)
    if lam.size and lam.min() < -tol:
        raise InconsistentSigmaError(
            f"sigma has eigenvalue {lam.min():.3e} below -{tol:g}; the overlap inputs are inconsistent"
        )
    if lam.size and lam.min() < 0:
        sigma = (vec * np.clip(lam, 0, None)) @ vec.T
        sigma = (sigma + sigma.T) / 2
    return sigma


def gram_matrix(kernels: Sequence[StepKernel]) -> np.ndarray:
    d = len(kernels)
    g = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            g[i, j] = g[j, i] = kernel_inner_product(kernels[i], kernels[j])
    return g


def overlap_matrix(patterns: Sequence[Graph], graphon: StepKernel) -> np.ndarray:
    """Overlaps ``rho_ij`` when every layer shares ``graphon``: join density sums."""
    d = len(patterns)
    rho = np.empty((d, d))
    for i in range(d):
        for j in range(i, d):
            rho[i, j] = rho[j, i] = join_density_sum(patterns[i], patterns[j], graphon)
    return rho


def sigma_matrix(
    patterns: Sequence[Graph],
    graphons: Sequence[StepKernel],
    rho: np.ndarray | None = None,
) -> np.ndarray:
    """Covariance ``Sigma`` of the Gaussian part.

    ``sigma_ii = sum of t(H_i join H_i, W_i) over ordered pin pairs - ||(W_i)_{H_i}||^2`` and
    ``sigma_ij = rho_ij - <(W_i)_{H_i}, (W_j)_{H_j}>`` off the diagonal. Without
    ``rho`` all layers must share one graphon, and the overlaps are join density sums.
    """
    if len(patterns) != len(graphons):
        raise InputError(f"{len(patterns)} patterns for {len(graphons)} graphons")
    d = len(patterns)
    kernels = [two_point_kernel(h, w) for h, w in zip(patterns, graphons)]
    full = _overlaps(patterns, graphons, rho)
    return _psd_clamp(full - gram_matrix(kernels))


def _overlaps(patterns, graphons, rho) -> np.ndarray:
    d = len(patterns)
    if rho is None:
        first = graphons[0]
        for w in graphons[1:]:
            if not (same_partition(first, w) and np.array_equal(first.values, w.values)):
                raise InputError("overlaps rho are required when layers have different graphons")
        return overlap_matrix(patterns, first)
    rho = np.array(rho, dtype=np.float64)
    if rho.shape != (d, d):
        raise InputError(f"rho must be {d}x{d}, got {rho.shape}")
    if not np.allclose(rho, rho.T, rtol=0, atol=1e-12):
        raise InputError("rho must be symmetric")
    for i in range(d):
        rho[i, i] = join_density_sum(patterns[i], patterns[i], graphons[i])
    return rho


def rho_finite(hi: Graph, hj: Graph, gi: Graph, gj: Graph) -> float:
    """``<W^{G_i}_{H_i}, W^{G_j}_{H_j}>`` on the empirical graphons of two layers."""
    if gi.n != gj.n:
        raise InputError(f"layers have {gi.n} and {gj.n} vertices")
    ki = two_point_kernel(hi, empirical_graphon(gi))
    kj = ki if (hi == hj and gi == gj) else two_point_kernel(hj, empirical_graphon(gj))
    return kernel_inner_product(ki, kj)


# ---------------------------------------------------------------- LimitSpec


@dataclass(frozen=True, eq=False)
class LimitSpec:
    """Everything needed to sample the limit law.

    ``kernels`` are the two-point kernels of the layers on one shared
    partition; ``sigma`` is the covariance of the Gaussian part.
    """

    c: int
    kernels: tuple[StepKernel, ...]
    sigma: np.ndarray
    rho: np.ndarray | None = None
    sigma_source: str = SIGMA_LIMIT

    def __post_init__(self):
        if int(self.c) != self.c or self.c < 2:
            raise InputError("need an integer color count c >= 2")
        kernels = tuple(self.kernels)
        if not kernels:
            raise InputError("need at least one kernel")
        if any(not same_partition(kernels[0], k) for k in kernels[1:]):
            raise InputError("kernels must share one block partition")
        sigma = _psd_clamp(self.sigma)
        if sigma.shape != (len(kernels), len(kernels)):
            raise InputError(f"sigma must be {len(kernels)}x{len(kernels)}")
        sigma.setflags(write=False)
        object.__setattr__(self, "c", int(self.c))
        object.__setattr__(self, "kernels", kernels)
        object.__setattr__(self, "sigma", sigma)
        if self.rho is not None:
            rho = np.array(self.rho, dtype=np.float64)
            if rho.shape != sigma.shape:
                raise InputError("rho and sigma shapes differ")
            rho.setflags(write=False)
            object.__setattr__(self, "rho", rho)

    @property
    def d(self) -> int:
        return len(self.kernels)

    @property
    def measures(self) -> np.ndarray:
        return self.kernels[0].measures

    @classmethod
    def from_patterns(
        cls,
        patterns: Sequence[Graph],
        graphons: Sequence[StepKernel],
        c: int,
        rho: np.ndarray | None = None,
        sigma_source: str | None = None,
    ) -> "LimitSpec":
        """Build kernels and ``Sigma`` from patterns and per-layer graphons."""
        if len(patterns) != len(graphons):
            raise InputError(f"{len(patterns)} patterns for {len(graphons)} graphons")
        ws = common_refinement(*graphons)
        kernels = [two_point_kernel(h, w) for h, w in zip(patterns, ws)]
        full = _overlaps(patterns, ws, rho)
        sigma = _psd_clamp(full - gram_matrix(kernels))
        return cls(c, tuple(kernels), sigma, full, sigma_source or SIGMA_LIMIT)

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "kernels": [k.to_dict() for k in self.kernels],
            "sigma": self.sigma.tolist(),
            "rho": None if self.rho is None else self.rho.tolist(),
            "sigma_source": self.sigma_source,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "LimitSpec":
        try:
            kernels = tuple(StepKernel.from_dict(k) for k in obj["kernels"])
            return cls(obj["c"], kernels, np.array(obj["sigma"], dtype=np.float64), obj.get("rho"),
                       obj.get("sigma_source", SIGMA_LIMIT))
        except KeyError as e:
            raise InputError(f"limit spec is missing the {e.args[0]!r} field") from None

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "LimitSpec":
        return cls.from_dict(json.loads(text))

    def gaussian_factor(self) -> np.ndarray:
        """``L`` with ``L L^T = Sigma`` (eigen-based, valid for singular ``Sigma``)."""
        lam, vec = np.linalg.eigh(self.sigma)
        return vec * np.sqrt(np.clip(lam, 0, None))

    def integral_covariance(self) -> np.ndarray:
        """Exact covariance of the stochastic-integral part: ``(c-1)/(2c) <K_i, K_j>``."""
        return (self.c - 1) / (2 * self.c) * gram_matrix(self.kernels)

    def covariance(self) -> np.ndarray:
        """Exact covariance of the limit law."""
        return (self.c - 1) / (2 * self.c) * self.sigma + self.integral_covariance()


# ---------------------------------------------------------------- samplers


def _integral_draws(spec: LimitSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    mu = spec.measures
    sd = np.sqrt(mu)
    out = np.zeros((size, spec.d))
    for _ in range(spec.c - 1):
        xi = rng.standard_normal((size, mu.size)) * sd
        for i, k in enumerate(spec.kernels):
            quad = np.einsum("bu,bu->b", xi @ k.values, xi)
            out[:, i] += quad - float(np.dot(np.diag(k.values), mu))
    return out / (2 * math.sqrt(spec.c))


def stochastic_integral_sample(spec: LimitSpec, count: int, seed=0, *, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> np.ndarray:
    """Draws of the integral part, shape ``(count, d)``; the Brownian increments are shared across layers."""
    return sample_rows(lambda s, rng: _integral_draws(spec, s, rng), count, seed, chunk=chunk, workers=workers)


def chi_square_representation(kernel: StepKernel, c: int) -> Spectrum:
    """Weights ``lambda_s`` with ``int int K dB dB`` summed over ``c-1`` colors equal in law to
    ``sum_s lambda_s (chi2_{c-1} - (c-1))``."""
    if c < 2:
        raise InputError("need at least 2 colors")
    return spectrum(kernel)


def chi_square_sample(kernel: StepKernel, c: int, count: int, seed=0, *, workers: int = 1) -> np.ndarray:
    """Single-layer integral part via ``(1/(2 sqrt c)) sum_s lambda_s (chi2_{c-1} - (c-1))``."""
    lam = chi_square_representation(kernel, c).eigenvalues
    return weighted_chisq_sample(lam / (2 * math.sqrt(c)), c - 1, count, seed, workers=workers)


def limit_sample(spec: LimitSpec, count: int, seed=0, *, workers: int = 1, chunk: int = DEFAULT_CHUNK) -> np.ndarray:
    """Draws of the full limit law, shape ``(count, d)``."""
    factor = spec.gaussian_factor()
    g_scale = math.sqrt((spec.c - 1) / (2 * spec.c))

    def draw(size: int, rng: np.random.Generator) -> np.ndarray:
        g = rng.standard_normal((size, spec.d)) @ factor.T
        return g_scale * g + _integral_draws(spec, size, rng)

    return sample_rows(draw, count, seed, chunk=chunk, workers=workers)


def q2_finite_sample(h: Graph, g: Graph, c: int, count: int, seed=0, *, workers: int = 1, chunk: int | None = None) -> np.ndarray:
    """Draws of the Gaussian proxy ``(1/(2n sqrt c)) sum_a sum_{u != v} W~(u, v) Z~_{u,a} Z~_{v,a}``."""
    if c < 2:
        raise InputError("need at least 2 colors")
    w = conditional_pair_matrix(h, g)
    n = g.n
    if chunk is None:
        chunk = max(1, 2_000_000 // max(1, n * c))

    def draw(size: int, rng: np.random.Generator) -> np.ndarray:
        z = rng.standard_normal((size, n, c))
        z -= z.mean(axis=2, keepdims=True)
        out = np.zeros(size)
        for a in range(c):
            za = np.ascontiguousarray(z[:, :, a])
            out += np.einsum("bu,bu->b", za @ w, za)
        return out / (2 * n * math.sqrt(c))

    return sample_rows(draw, count, seed, chunk=chunk, workers=workers)


def q2_variance(h: Graph, g: Graph, c: int) -> float:
    """Exact variance of the Gaussian proxy.

    With ``Z~`` rows of covariance ``I - J/c``, the quadratic form has variance
    ``2 (c-1) ||W~||_F^2 / (4 n^2 c)``.
    """
    w = conditional_pair_matrix(h, g)
    return 2 * (c - 1) * math.fsum((w * w).ravel()) / (4 * g.n**2 * c)


# ---------------------------------------------------------------- independence diagnostics


def independence_diagnostics(r: StepKernel, w: StepKernel) -> tuple[float, float]:
    """``(int int R W, int int (int R(x,z) W(z,y) dz)^2)`` as exact block sums."""
    r, w = common_refinement(r.as_kernel(), w.as_kernel())
    mu = r.measures
    first = float(np.einsum("u,v,uv,uv->", mu, mu, r.values, w.values))
    m = r.values @ (mu[:, None] * w.values)
    second = float(np.einsum("u,v,uv->", mu, mu, m * m))
    return first, second


def checkerboard_kernel(m: int) -> StepKernel:
    """Uniform ``m``-block kernel with values ``(-1)^(i+j)``."""
    s = (-1.0) ** np.arange(m)
    return StepKernel.uniform(np.outer(s, s))


__all__ = [
    "LimitSpec",
    "sigma_matrix",
    "gram_matrix",
    "overlap_matrix",
    "rho_finite",
    "stochastic_integral_sample",
    "chi_square_representation",
    "chi_square_sample",
    "limit_sample",
    "q2_finite_sample",
    "q2_variance",
    "independence_diagnostics",
    "checkerboard_kernel",
    "SIGMA_LIMIT",
    "SIGMA_PLUGIN",
]
