"""When is a weighted chi-square sum close to Gaussian?

Part one samples sum_s a_s (chi2_1 - 1) with L equal weights 1/sqrt(L) and
prints variance and skewness. Part two lists the spectra of Hadamard sign
kernels, whose largest eigenvalue shrinks while the sum of squares stays 1.
"""
import argparse
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from monoplex.spectral import clt_condition_report, hadamard_kernel, spectrum, weighted_chisq_sample


@dataclass
class Config:
    lengths: list = field(default_factory=lambda: [1, 10, 100, 1000])
    draws: int = 1_000_000
    seed: int = 0
    workers: int = 1


def main(cfg: Config) -> None:
    print(f"{'L':>6}{'variance':>10}{'skewness':>10}{'exact skew':>12}")
    for L in cfg.lengths:
        x = weighted_chisq_sample(np.full(L, 1 / math.sqrt(L)), 1, cfg.draws, [cfg.seed, L], workers=cfg.workers)
        print(f"{L:>6}{x.var(ddof=1):>10.4f}{stats.skew(x):>10.4f}{2 * math.sqrt(2 / L):>12.4f}")
    rows = clt_condition_report({m: spectrum(hadamard_kernel(m)).eigenvalues for m in (1, 2, 4, 8, 16, 32)})
    print(f"\n{'blocks':>6}{'max |l|':>10}{'sum l^2':>10}")
    for r in rows:
        print(f"{r.n:>6}{r.max_abs:>10.4f}{r.sum_squares:>10.4f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--lengths", type=int, nargs="+", default=Config().lengths)
    p.add_argument("--draws", type=int, default=Config.draws)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--workers", type=int, default=Config.workers)
    main(Config(**vars(p.parse_args())))
