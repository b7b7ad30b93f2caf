"""JSON formats for graphs, multiplexes, colorings, kernels and limit specs.

Files use 1-based vertex labels ``1..n`` and colors ``1..c``; everything
in memory is 0-based.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .errors import InputError
from .graphon import StepKernel
from .graphs import Coloring, Graph, Multiplex, pattern
from .limitlaw import LimitSpec


def load_json(path: str | os.PathLike) -> object:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from None


def _int(obj, name: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise InputError(f"{name} must be an integer, got {obj!r}")
    return obj


def _edges(n: int, raw, where: str) -> Graph:
    if not isinstance(raw, list):
        raise InputError(f"{where}: edges must be a list of [u, v] pairs")
    pairs = []
    for e in raw:
        if not isinstance(e, list) or len(e) != 2:
            raise InputError(f"{where}: edge {e!r} is not a [u, v] pair")
        u, v = (_int(x, "vertex label") for x in e)
        if not (1 <= u <= n and 1 <= v <= n):
            raise InputError(f"{where}: edge [{u}, {v}] has an endpoint outside 1..{n}")
        pairs.append((u - 1, v - 1))
    return Graph.from_edges(n, pairs)


def graph_from_dict(obj) -> Graph:
    if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
        raise InputError('graph JSON must look like {"n": <int>, "edges": [[u, v], ...]}')
    n = _int(obj["n"], "n")
    if n < 0:
        raise InputError("n must be nonnegative")
    return _edges(n, obj["edges"], "graph")


def graph_to_dict(g: Graph) -> dict:
    return {"n": g.n, "edges": [[u + 1, v + 1] for u, v in g.sorted_edges]}


def multiplex_from_dict(obj) -> Multiplex:
    if not isinstance(obj, dict) or "n" not in obj or "layers" not in obj:
        raise InputError('multiplex JSON must look like {"n": <int>, "layers": [<edge list>, ...]}')
    n = _int(obj["n"], "n")
    layers = obj["layers"]
    if not isinstance(layers, list) or not layers:
        raise InputError("layers must be a nonempty list of edge lists")
    return Multiplex(tuple(_edges(n, raw, f"layer {i + 1}") for i, raw in enumerate(layers)))


def multiplex_to_dict(m: Multiplex) -> dict:
    return {"n": m.n, "layers": [graph_to_dict(g)["edges"] for g in m.layers]}


def load_graph_or_multiplex(path) -> Multiplex:
    obj = load_json(path)
    if isinstance(obj, dict) and "layers" in obj:
        return multiplex_from_dict(obj)
    return Multiplex((graph_from_dict(obj),))


def coloring_from_dict(obj, c: int | None = None) -> Coloring:
    """Accepts ``{"c": <int>, "colors": [...]}`` or a bare list of colors in ``1..c``."""
    if isinstance(obj, dict):
        colors = obj.get("colors")
        c = obj.get("c", c)
    else:
        colors = obj
    if c is None:
        raise InputError("the number of colors c is not given")
    c = _int(c, "c")
    if not isinstance(colors, list):
        raise InputError("colors must be a list")
    vals = [_int(x, "color") for x in colors]
    if any(not 1 <= x <= c for x in vals):
        raise InputError(f"colors must lie in 1..{c}")
    return Coloring(np.array(vals, dtype=np.int64) - 1, c)


def coloring_to_dict(col: Coloring) -> dict:
    return {"c": col.c, "colors": (col.colors + 1).tolist()}


def load_pattern(spec: str) -> Graph:
    """A built-in pattern name or a path to a graph JSON file."""
    if Path(spec).suffix == ".json" or os.path.sep in spec:
        return graph_from_dict(load_json(spec))
    return pattern(spec)


def kernel_from_dict(obj) -> StepKernel:
    if not isinstance(obj, dict):
        raise InputError('kernel JSON must look like {"measures": [...], "values": [[...]]}')
    return StepKernel.from_dict(obj)


def load_kernel(path) -> StepKernel:
    return kernel_from_dict(load_json(path))


def load_limit_spec(path) -> LimitSpec:
    obj = load_json(path)
    if not isinstance(obj, dict):
        raise InputError("limit spec JSON must be an object")
    return LimitSpec.from_dict(obj)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    directory.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
