"""Moment gaps between colorings and Gaussians for the pair function of a pattern.

Prints the estimated gaps of the first four moments of T(f; X~) and
T(f; Z~), where f is the summed two-vertex pinned count of the pattern in
G(n, p), for increasing n.
"""
import argparse
from dataclasses import dataclass, field

import numpy as np

from monoplex.counting import invariance_moment_gap, pair_function
from monoplex.experiments import erdos_renyi
from monoplex.graphs import pattern


@dataclass
class Config:
    sizes: list = field(default_factory=lambda: [50, 200, 800])
    p: float = 0.5
    c: int = 2
    pattern: str = "k3"
    draws: int = 100_000
    seed: int = 0
    workers: int = 1
    plain: bool = False


def main(cfg: Config) -> None:
    h = pattern(cfg.pattern)
    print(f"{'n':>6}" + "".join(f"{'gap' + str(k):>12}{'se':>9}" for k in range(1, 5)))
    for n in cfg.sizes:
        ss = np.random.SeedSequence([cfg.seed, n]).spawn(2)
        f = pair_function(h, erdos_renyi(n, cfg.p, ss[0]))
        gaps = invariance_moment_gap([f] * 4, cfg.c, cfg.draws, ss[1], workers=cfg.workers,
                                     control_variates=not cfg.plain)
        print(f"{n:>6}" + "".join(f"{g.gap:>12.5f}{g.stderr:>9.5f}" for g in gaps))


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    p.add_argument("--sizes", type=int, nargs="+", default=Config().sizes)
    p.add_argument("--p", type=float, default=Config.p)
    p.add_argument("--c", type=int, default=Config.c)
    p.add_argument("--pattern", default=Config.pattern)
    p.add_argument("--draws", type=int, default=Config.draws)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--workers", type=int, default=Config.workers)
    p.add_argument("--plain", action="store_true", help="disable control variates")
    main(Config(**vars(p.parse_args())))
