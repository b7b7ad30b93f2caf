"""Run every experiment preset and write JSON and CSV reports to a directory."""
import argparse
from dataclasses import dataclass
from pathlib import Path

from monoplex.experiments import ExperimentConfig, run_experiment
from monoplex.io import write_atomic

SETTINGS = {
    "er-correlated": dict(n=200, p=0.5, q=0.4, rho=0.05, patterns=("k2", "k3")),
    "complement": dict(n=200, p=0.3),
    "path-blowup": dict(n=50),
    "custom": dict(n=200, patterns=("k3",)),
}


@dataclass
class Config:
    out: str = "reports"
    colorings: int = 10_000
    limit_draws: int = 100_000
    seed: int = 0
    workers: int = 1


def main(cfg: Config) -> None:
    out = Path(cfg.out)
    for preset, kw in SETTINGS.items():
        report = run_experiment(ExperimentConfig(preset=preset, colorings=cfg.colorings, limit_draws=cfg.limit_draws,
                                                 seed=cfg.seed, workers=cfg.workers, **kw))
        write_atomic(out / f"{preset}.json", report.to_json() + "\n")
        write_atomic(out / f"{preset}.csv", report.to_csv())
        worst = max((abs(r.gap) / r.stderr for r in report.rows if r.tagged and r.stderr > 0), default=0.0)
        print(f"{preset:<14} {'pass' if report.passed else 'FAIL'}  worst tagged gap {worst:.2f} se")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--out", default=Config.out)
    p.add_argument("--colorings", type=int, default=Config.colorings)
    p.add_argument("--limit-draws", type=int, default=Config.limit_draws)
    p.add_argument("--seed", type=int, default=Config.seed)
    p.add_argument("--workers", type=int, default=Config.workers)
    main(Config(**vars(p.parse_args())))
