"""Command-line interface.

    monoplex count GRAPH --pattern k3 (--coloring FILE | --random) --c 2 [--exhaustive]
    monoplex kernel PATTERN GRAPHON
    monoplex spectrum KERNEL
    monoplex sample SPEC --limit-draws N
    monoplex experiment PRESET [--n ... --p ... --colorings N --limit-draws N --out PATH]

Exit codes: 0 success, 2 input error, 3 budget error, 4 acceptance-gap failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import io as mio
from .counting import MAX_EXHAUSTIVE_COLORINGS, count_copies, count_monochromatic, exhaustive_moments, gamma
from .errors import BudgetError, InconsistentSigmaError, InputError
from .experiments import PRESETS, EmpiricalDistribution, ExperimentConfig, format_float, run_experiment
from .graphs import Coloring
from .graphon import two_point_kernel
from .limitlaw import limit_sample
from .spectral import spectrum

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_GAP = 4


@dataclass(frozen=True)
class RunConfig:
    """Settings shared by all commands. The seed defaults to 0."""

    seed: int = 0
    workers: int = 1
    fmt: str = "json"
    out: str | None = None
    max_n: int = 5000
    max_k: int = 2000
    max_colorings: int = 10**7

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be a 64-bit unsigned integer")
        if self.workers < 1:
            raise InputError("workers must be positive")
        if self.fmt not in ("json", "csv"):
            raise InputError("format must be json or csv")

    def check_n(self, n: int) -> None:
        if n > self.max_n:
            raise BudgetError(f"graph has {n} vertices, above --max-n {self.max_n}")

    def check_k(self, k: int) -> None:
        if k > self.max_k:
            raise BudgetError(f"kernel has {k} blocks, above --max-k {self.max_k}")

    def check_draws(self, count: int) -> None:
        if count > self.max_colorings:
            raise BudgetError(f"{count} draws requested, above --max-colorings {self.max_colorings}")


def _rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([format_float(x) if isinstance(x, float) else x for x in row])
    return buf.getvalue()


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        mio.write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- commands


def cmd_count(args, cfg: RunConfig) -> int:
    mux = mio.load_graph_or_multiplex(args.graph)
    if mux.d != 1:
        raise InputError("count expects a single graph, not a multiplex")
    g = mux[0]
    cfg.check_n(g.n)
    h = mio.load_pattern(args.pattern)
    if args.random == (args.coloring is not None):
        raise InputError("give exactly one of --coloring FILE or --random")
    if args.random:
        if args.c is None:
            raise InputError("--random needs --c")
        col = Coloring.random(g.n, args.c, np.random.default_rng(cfg.seed))
    else:
        col = mio.coloring_from_dict(mio.load_json(args.coloring), args.c)
        if args.c is not None and args.c != col.c:
            raise InputError(f"--c {args.c} disagrees with the coloring file (c = {col.c})")
    col.check_length(g.n)
    c = col.c
    if args.exhaustive and c**g.n > min(cfg.max_colorings, MAX_EXHAUSTIVE_COLORINGS):
        raise BudgetError(f"--exhaustive needs {c}^{g.n} colorings")
    t = count_monochromatic(h, g, col)
    copies = count_copies(h, g)
    result = {
        "T": t,
        "ET": copies / c ** (h.n - 1),
        "gamma": gamma(h, g, col, c),
        "copies": copies,
        "n": g.n,
        "c": c,
    }
    if args.exhaustive:
        mean, var = exhaustive_moments(h, g, c)
        result["exhaustive_mean"] = mean
        result["exhaustive_variance"] = var
    if cfg.fmt == "json":
        _emit(cfg, mio.dumps(result))
    else:
        _emit(cfg, _rows_csv([["statistic", "value"]] + [[k, float(v)] for k, v in result.items()]))
    return EXIT_OK


def cmd_kernel(args, cfg: RunConfig) -> int:
    h = mio.load_pattern(args.pattern)
    if h.edge_count == 0:
        raise InputError("pattern has no edges")
    if not h.is_connected():
        raise InputError("pattern must be connected")
    w = mio.load_kernel(args.graphon)
    cfg.check_k(w.k)
    k = two_point_kernel(h, w)
    if cfg.fmt == "json":
        _emit(cfg, mio.dumps(k.to_dict()))
    else:
        rows = [["block", "measure"] + [f"v{j + 1}" for j in range(k.k)]]
        for i in range(k.k):
            rows.append([i + 1, float(k.measures[i])] + [float(x) for x in k.values[i]])
        _emit(cfg, _rows_csv(rows))
    return EXIT_OK


def cmd_spectrum(args, cfg: RunConfig) -> int:
    k = mio.load_kernel(args.kernel)
    cfg.check_k(k.k)
    s = spectrum(k)
    if cfg.fmt == "json":
        _emit(cfg, mio.dumps({"eigenvalues": s.eigenvalues.tolist(), "sum_squares": s.power_sum(2),
                              "sum_fourth": s.power_sum(4)}))
    else:
        _emit(cfg, _rows_csv([["index", "eigenvalue"]] + [[i + 1, float(x)] for i, x in enumerate(s.eigenvalues)]))
    return EXIT_OK


def cmd_sample(args, cfg: RunConfig) -> int:
    spec = mio.load_limit_spec(args.spec)
    cfg.check_k(spec.kernels[0].k)
    cfg.check_draws(args.limit_draws)
    draws = limit_sample(spec, args.limit_draws, cfg.seed, workers=cfg.workers)
    if cfg.fmt == "json":
        summary = EmpiricalDistribution(draws).summary()
        summary["exact_covariance"] = spec.covariance().tolist()
        summary["sigma_source"] = spec.sigma_source
        _emit(cfg, mio.dumps(summary))
    else:
        rows = [[f"y{i + 1}" for i in range(spec.d)]] + [[float(x) for x in row] for row in draws]
        _emit(cfg, _rows_csv(rows))
    return EXIT_OK


def cmd_experiment(args, cfg: RunConfig) -> int:
    patterns = tuple(p for p in (args.patterns or "").split(",") if p)
    exp = ExperimentConfig(
        preset=args.preset,
        n=args.n,
        p=args.p,
        q=args.q,
        rho=args.rho,
        c=args.c if args.c is not None else 2,
        patterns=patterns,
        colorings=args.colorings,
        limit_draws=args.limit_draws,
        seed=cfg.seed,
        workers=cfg.workers,
        multiplier=args.multiplier,
    )
    vertices = 4 * exp.n if exp.preset == "path-blowup" else exp.n
    cfg.check_n(vertices)
    cfg.check_draws(max(exp.colorings, exp.limit_draws))
    report = run_experiment(exp)
    if cfg.out:
        base = Path(cfg.out)
        stem = base.with_suffix("") if base.suffix in (".json", ".csv") else base
        mio.write_atomic(stem.with_suffix(".json"), report.to_json() + "\n")
        mio.write_atomic(stem.with_suffix(".csv"), report.to_csv())
    else:
        sys.stdout.write(report.to_json() + "\n" if cfg.fmt == "json" else report.to_csv())
    for row in report.failures:
        print(f"gap failure: {row.name} gap={row.gap:.6g} stderr={row.stderr:.6g}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_GAP


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    common.add_argument("--workers", type=int, default=1, help="worker threads for Monte Carlo")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="output path (written atomically)")
    common.add_argument("--max-n", type=int, default=5000, help="largest graph accepted")
    common.add_argument("--max-k", type=int, default=2000, help="largest block count accepted")
    common.add_argument("--max-colorings", type=int, default=10**7, help="largest draw count accepted")

    parser = argparse.ArgumentParser(prog="monoplex", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="monochromatic count, its mean and the standardized statistic")
    p.add_argument("graph", help="graph JSON file")
    p.add_argument("--pattern", default="k2", help="built-in name (k2,k3,k4,p3,p4,c4,c5) or graph JSON")
    p.add_argument("--coloring", help="coloring JSON file (colors 1..c)")
    p.add_argument("--random", action="store_true", help="draw a uniform coloring from --seed")
    p.add_argument("--c", type=int, default=None, help="number of colors")
    p.add_argument("--exhaustive", action="store_true", help="also report exact mean/variance over all colorings")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("kernel", parents=[common], help="two-point conditional kernel of a pattern")
    p.add_argument("pattern")
    p.add_argument("graphon", help="step kernel JSON file")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues of a step kernel")
    p.add_argument("kernel", help="step kernel JSON file")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sample", parents=[common], help="draw from a limit law given as JSON")
    p.add_argument("spec", help="limit spec JSON file")
    p.add_argument("--limit-draws", type=int, default=100_000)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("experiment", parents=[common], help="simulate a preset and compare with its limit law")
    p.add_argument("preset", choices=PRESETS)
    p.add_argument("--n", type=int, default=200, help="vertex count (block size for path-blowup)")
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--rho", type=float, default=0.0, help="edge covariance for er-correlated")
    p.add_argument("--c", type=int, default=None, help="number of colors (default 2)")
    p.add_argument("--patterns", default=None, help="comma-separated pattern names, one per layer")
    p.add_argument("--colorings", type=int, default=10_000)
    p.add_argument("--limit-draws", type=int, default=100_000)
    p.add_argument("--multiplier", type=float, default=4.0, help="allowed |gap| in pooled stderrs")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = RunConfig(args.seed, args.workers, args.format, args.out, args.max_n, args.max_k, args.max_colorings)
        return args.func(args, cfg)
    except (InputError, InconsistentSigmaError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
