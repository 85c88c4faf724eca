"""Plain-text matroid files, JSON round trips, and instance loading.

Matrix file::

    field GF 3          (or: field Q, field QT)
    2 4
    1 0 1 2
    0 1 1 1

Rationals are written ``a/b``; QT entries are coefficient lists ``[c0 c1 c2]``.

Graph file: ``graph <V>`` then one ``u v`` edge per line.
Explicit file: ``explicit <n>`` then one basis per line.
Lines starting with ``#`` are ignored everywhere.
"""
from __future__ import annotations

import json
import random
import re
from pathlib import Path

from .algebra import ExactMatrix, field_from_name
from .catalog import build_family
from .matroid import (
    ExplicitMatroid,
    FreeMatroid,
    GraphicMatroid,
    LinearMatroid,
    Matroid,
    UniformMatroid,
    enumerate_basis_masks,
)
from .subsets import members


class ParseError(ValueError):
    """A matroid or instance file is malformed."""


_TOKEN = re.compile(r"\[[^\]]*\]|\S+")


def _lines(text: str) -> list[str]:
    return [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]


def parse_matrix(text: str) -> ExactMatrix:
    lines = _lines(text)
    if len(lines) < 2 or not lines[0].lower().startswith("field"):
        raise ParseError("matrix file must start with 'field <name>' and '<r> <n>'")
    try:
        field = field_from_name(lines[0][5:])
        r, n = map(int, lines[1].split())
    except ValueError as exc:
        raise ParseError(f"bad matrix header: {exc}") from None
    body = lines[2:]
    if len(body) != r:
        raise ParseError(f"expected {r} matrix rows, found {len(body)}")
    rows = []
    for i, ln in enumerate(body):
        toks = _TOKEN.findall(ln)
        if len(toks) != n:
            raise ParseError(f"row {i} has {len(toks)} entries, expected {n}")
        try:
            rows.append([field.parse(t) for t in toks])
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"row {i}: {exc}") from None
    return ExactMatrix(rows, field)


def format_matrix(M: ExactMatrix) -> str:
    f = M.field
    head = f"field GF {f.p}" if f.characteristic else f"field {f.name}"
    out = [head, f"{M.nrows} {M.ncols}"]
    out += [" ".join(f.format(x) for x in row) for row in M.rows]
    return "\n".join(out) + "\n"


def parse_graph(text: str) -> GraphicMatroid:
    lines = _lines(text)
    try:
        kind, v = lines[0].split()
        if kind.lower() != "graph":
            raise ValueError
        edges = [tuple(map(int, ln.split())) for ln in lines[1:]]
        if any(len(e) != 2 for e in edges):
            raise ValueError
        return GraphicMatroid(int(v), edges)
    except (ValueError, IndexError):
        raise ParseError("graph file must be 'graph <V>' followed by 'u v' lines") from None


def parse_explicit(text: str, validate: bool = False) -> ExplicitMatroid:
    """Basis list; ``validate=False`` keeps defective families so the axioms can be checked."""
    lines = _lines(text)
    try:
        kind, n = lines[0].split()
        if kind.lower() != "explicit":
            raise ValueError
        bases = [list(map(int, ln.split())) for ln in lines[1:]]
        return ExplicitMatroid(int(n), bases, validate=validate)
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad explicit matroid file: {exc}") from None


def load_matroid_file(path, validate: bool = False) -> Matroid:
    """Dispatch on the first word of the file (field / graph / explicit)."""
    text = Path(path).read_text()
    lines = _lines(text)
    if not lines:
        raise ParseError(f"{path} is empty")
    head = lines[0].split()[0].lower()
    if head == "field":
        return LinearMatroid(parse_matrix(text))
    if head == "graph":
        return parse_graph(text)
    if head == "explicit":
        return parse_explicit(text, validate)
    raise ParseError(f"{path}: unknown file kind {head!r}")


def matroid_to_json(m: Matroid) -> dict:
    if isinstance(m, FreeMatroid):
        return {"kind": "free", "n": m.n}
    if isinstance(m, UniformMatroid):
        return {"kind": "uniform", "r": m.full_rank, "n": m.n}
    if isinstance(m, GraphicMatroid):
        return {"kind": "graphic", "vertices": m.num_vertices, "edges": [list(e) for e in m.edges]}
    if isinstance(m, LinearMatroid):
        f = m.field
        return {"kind": "linear", "field": f.name, "rows": [[f.to_json(x) for x in r] for r in m.matrix.rows]}
    if isinstance(m, ExplicitMatroid):
        return {"kind": "explicit", "n": m.n, "bases": [list(members(b)) for b in m.bases]}
    return {"kind": "explicit", "n": m.n, "bases": [list(members(b)) for b in enumerate_basis_masks(m)]}


def matroid_from_json(obj: dict, base_dir=None, validate: bool = True) -> Matroid:
    """Inverse of :func:`matroid_to_json`; also accepts {"path": ...} and {"kind": "family", "spec", "seed"}."""
    if "path" in obj:
        p = Path(obj["path"])
        if base_dir is not None and not p.is_absolute():
            p = Path(base_dir) / p
        return load_matroid_file(p, validate=validate)
    kind = obj.get("kind")
    try:
        if kind == "free":
            return FreeMatroid(int(obj["n"]))
        if kind == "uniform":
            return UniformMatroid(int(obj["r"]), int(obj["n"]))
        if kind == "graphic":
            return GraphicMatroid(int(obj["vertices"]), [tuple(e) for e in obj["edges"]])
        if kind == "linear":
            f = field_from_name(obj["field"])
            rows = [[f.parse(str(x)) for x in r] for r in obj["rows"]]
            return LinearMatroid(ExactMatrix(rows, f))
        if kind == "explicit":
            return ExplicitMatroid(int(obj["n"]), obj["bases"], validate=validate)
        if kind == "family":
            return build_family(obj["spec"], random.Random(obj.get("seed", 0)))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"matroid record missing or malformed field: {exc}") from None
    raise ParseError(f"unknown matroid kind {kind!r}")


def load_instance(path) -> dict:
    """Read an instance JSON; the matroid may point at a file relative to the JSON file."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from None
    if "matroid" not in obj or "A" not in obj or "B" not in obj:
        raise ParseError(f"{path}: instance needs matroid, A and B")
    out = {
        "matroid": matroid_from_json(obj["matroid"], path.parent),
        "A": frozenset(obj["A"]),
        "B": frozenset(obj["B"]),
        "X": frozenset(obj.get("X", ())),
        "Y": frozenset(obj.get("Y", ())),
    }
    if "p" in obj:
        out["p"] = int(obj["p"])
    return out


__all__ = [
    "ParseError",
    "parse_matrix",
    "format_matrix",
    "parse_graph",
    "parse_explicit",
    "load_matroid_file",
    "matroid_to_json",
    "matroid_from_json",
    "load_instance",
]
