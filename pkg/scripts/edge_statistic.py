"""Standardized monochromatic edge count on G(n, p) against its Gaussian-plus-chaos limit.

For each n the script draws one graph, colors it uniformly many times and
compares the empirical mean, variance and fourth moment with limit-law draws.
"""
import argparse
from dataclasses import dataclass, field

import numpy as np

from monoplex.experiments import EmpiricalDistribution, compare, erdos_renyi, gamma_draws
from monoplex.graphon import constant
from monoplex.graphs import Multiplex, pattern
from monoplex.limitlaw import LimitSpec, limit_sample


@dataclass
class Config:
    sizes: list = field(default_factory=lambda: [100, 300, 1000])
    p: float = 0.5
    c: int = 2
    pattern: str = "k2"
    colorings: int = 20_000
    limit_draws: int = 200_000
    seed: int = 0
    workers: int = 1


def main(cfg: Config) -> None:
    h = pattern(cfg.pattern)
    spec = LimitSpec.from_patterns([h], [constant(cfg.p)], cfg.c)
    lim = limit_sample(spec, cfg.limit_draws, np.random.SeedSequence([cfg.seed, 0]), workers=cfg.workers)
    print(f"limit variance (exact) {spec.covariance()[0, 0]:.5f}")
    print(f"{'n':>6}{'mean':>10}{'variance':>10}{'m4 gap':>10}{'stderr':>10}")
    for n in cfg.sizes:
        ss = np.random.SeedSequence([cfg.seed, n]).spawn(2)
        g = erdos_renyi(n, cfg.p, ss[0])
        emp = EmpiricalDistribution(gamma_draws([h], Multiplex((g,)), cfg.c, cfg.colorings, ss[1], workers=cfg.workers))
        m4 = next(r for r in compare(emp, lim) if r.name == "m4[0]")
        print(f"{n:>6}{emp.mean[0]:>10.4f}{emp.covariance[0, 0]:>10.4f}{m4.gap:>10.4f}{m4.stderr:>10.4f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--sizes", type=int, nargs="+", default=Config().sizes)
    p.add_argument("--p", type=float, default=Config.p)
    p.add_argument("--c", type=int, default=Config.c)
    p.add_argument("--pattern", default=Config.pattern)
    p.add_argument("--colorings", type=int, default=Config.colorings)
    p.add_argument("--limit-draws", type=int, default=Config.limit_draws)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--workers", type=int, default=Config.workers)
    main(Config(**vars(p.parse_args())))
