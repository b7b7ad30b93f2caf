"""Eigenvalues of step kernels and weighted chi-square sums.

The integral operator ``f -> int K(., y) f(y) dy`` of a step kernel has the
same nonzero spectrum as ``D^{1/2} V D^{1/2}`` with ``D = diag(mu)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import BudgetError, InputError
from .graphon import StepKernel
from .parallel import sample_rows

JACOBI_MAX_SIZE = 64
SPECTRUM_MAX_SIZE = 2000
JACOBI_TOL = 1e-12


def jacobi_eigenvalues(a: np.ndarray, tol: float = JACOBI_TOL, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius mass drops below
    ``tol * max(1, ||A||_F)``.
    """
    a = np.array(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InputError("matrix must be square")
    a = (a + a.T) / 2
    k = a.shape[0]
    scale = max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = float(np.linalg.norm(a - np.diag(np.diag(a))))
        if off < tol * scale:
            break
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    # rotation angle underflows; the entry is negligible
                    a[p, q] = a[q, p] = 0.0
                    continue
                theta = diff / (2 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                cs = 1.0 / math.hypot(t, 1.0)
                sn = t * cs
                rp, rq = a[p].copy(), a[q].copy()
                a[p], a[q] = cs * rp - sn * rq, sn * rp + cs * rq
                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p], a[:, q] = cs * cp - sn * cq, sn * cp + cs * cq
                a[p, q] = a[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    return np.diag(a).copy()


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues of a step kernel ordered by decreasing magnitude."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        lam = np.asarray(self.eigenvalues, dtype=np.float64)
        lam = lam[np.argsort(-np.abs(lam), kind="stable")]
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    def __len__(self) -> int:
        return self.eigenvalues.size

    def power_sum(self, p: int) -> float:
        return math.fsum(self.eigenvalues**p)

    @property
    def max_abs(self) -> float:
        return float(np.abs(self.eigenvalues).max(initial=0.0))


def measure_weighted_matrix(kernel: StepKernel) -> np.ndarray:
    s = np.sqrt(kernel.measures)
    return s[:, None] * kernel.values * s[None, :]


def spectrum(kernel: StepKernel, method: str = "auto") -> Spectrum:
    """Spectrum of the integral operator of ``kernel``.

    ``method="jacobi"`` uses the cyclic Jacobi solver, ``"lapack"`` uses
    ``numpy.linalg.eigvalsh``; ``"auto"`` picks Jacobi up to
    ``JACOBI_MAX_SIZE`` blocks.
    """
    k = kernel.k
    if k > SPECTRUM_MAX_SIZE:
        raise BudgetError(f"spectrum limited to {SPECTRUM_MAX_SIZE} blocks, got {k}")
    m = measure_weighted_matrix(kernel)
    if method == "auto":
        method = "jacobi" if k <= JACOBI_MAX_SIZE else "lapack"
    if method == "jacobi":
        return Spectrum(jacobi_eigenvalues(m))
    if method == "lapack":
        return Spectrum(np.linalg.eigvalsh(m))
    raise InputError(f"unknown eigen method {method!r}")


def _chisq_rows(weights: np.ndarray, dof: int):
    nw = weights.size

    def draw(size: int, rng: np.random.Generator) -> np.ndarray:
        if nw == 0:
            return np.zeros(size)
        acc = np.zeros((size, nw))
        for _ in range(dof):
            z = rng.standard_normal((size, nw))
            acc += z * z
        return (acc - dof) @ weights

    return draw


def weighted_chisq_sample(
    weights: Sequence[float], dof: int, count: int, seed=0, *, workers: int = 1, chunk: int | None = None
) -> np.ndarray:
    """I.i.d. draws of ``sum_s a_s (chi2_dof - dof)`` built from squared standard normals."""
    w = np.asarray(weights, dtype=np.float64).ravel()
    if dof < 1:
        raise InputError("degrees of freedom must be at least 1")
    if not np.all(np.isfinite(w)):
        raise InputError("weights must be finite")
    if chunk is None:
        chunk = max(1, 4_000_000 // max(1, w.size * dof))
    return sample_rows(_chisq_rows(w, dof), count, seed, chunk=chunk, workers=workers)


@dataclass(frozen=True)
class ConditionRow:
    n: int
    max_abs: float
    sum_squares: float


def clt_condition_report(sequences: Mapping[int, Sequence[float]] | Iterable[tuple[int, Sequence[float]]]) -> list[ConditionRow]:
    """``(max_s |a_s|, sum_s a_s^2)`` for each weight sequence, in increasing ``n``."""
    items = sequences.items() if isinstance(sequences, Mapping) else sequences
    rows = []
    for n, a in sorted(items, key=lambda kv: kv[0]):
        a = np.asarray(a, dtype=np.float64)
        rows.append(ConditionRow(int(n), float(np.abs(a).max(initial=0.0)), math.fsum(a * a)))
    return rows


def hadamard_kernel(m: int) -> StepKernel:
    """Uniform ``m``-block kernel with the Sylvester-Hadamard sign pattern.

    Its eigenvalues are ``+-1/sqrt(m)``, so the largest one shrinks while
    the sum of squares stays 1.
    """
    if m < 1 or m & (m - 1):
        raise InputError("block count must be a power of two")
    h = np.ones((1, 1))
    while h.shape[0] < m:
        h = np.block([[h, h], [h, -h]])
    return StepKernel.uniform(h)


__all__ = [
    "jacobi_eigenvalues",
    "Spectrum",
    "spectrum",
    "measure_weighted_matrix",
    "weighted_chisq_sample",
    "clt_condition_report",
    "ConditionRow",
    "hadamard_kernel",
]
