"""Named matroid families and seeded random members.

Family specs are short strings::

    uniform(2,4)        U(r, n)
    free(5)
    graphic(K4)         complete graph on 4 vertices
    linear(GF2,4,8)     random r x n matrix; field Q, GFp or QT; optional entry bound
    linear(Q,3,6,2)
"""
from __future__ import annotations

import random
import re

from .algebra import field_from_name, random_matrix
from .matroid import FreeMatroid, GraphicMatroid, LinearMatroid, Matroid, UniformMatroid

_SPEC = re.compile(r"^\s*(\w+)\s*\((.*)\)\s*$")


def parse_family(spec: str) -> tuple[str, list[str]]:
    m = _SPEC.match(spec)
    if not m:
        raise ValueError(f"bad family spec {spec!r}")
    args = [a.strip() for a in m.group(2).split(",") if a.strip()]
    return m.group(1).lower(), args


def build_family(spec: str, rng: random.Random | None = None) -> Matroid:
    """Instantiate a family; random families draw from ``rng``."""
    kind, args = parse_family(spec)
    if kind == "uniform":
        r, n = map(int, args)
        return UniformMatroid(r, n)
    if kind == "free":
        return FreeMatroid(int(args[0]))
    if kind == "graphic":
        (g,) = args
        if not g.upper().startswith("K"):
            raise ValueError("graphic families are written graphic(K<m>)")
        return GraphicMatroid.complete(int(g[1:]))
    if kind == "linear":
        if len(args) not in (3, 4):
            raise ValueError("linear(field, r, n[, bound])")
        field = field_from_name(args[0])
        r, n = int(args[1]), int(args[2])
        bound = int(args[3]) if len(args) == 4 else 3
        rng = rng or random.Random(0)
        return LinearMatroid(random_matrix(field, r, n, rng, bound))
    raise ValueError(f"unknown family {kind!r}")


def default_catalog() -> list[str]:
    """Families used by the batch campaigns and the totality checks."""
    out = [f"uniform({r},{n})" for n in range(2, 9) for r in range(1, min(4, n - 1) + 1)]
    out += ["graphic(K4)", "graphic(K5)"]
    for field in ("Q", "GF2", "GF3"):
        out += [f"linear({field},2,5)", f"linear({field},3,6)", f"linear({field},3,8)",
                f"linear({field},4,8)", f"linear({field},4,10)", f"linear({field},5,10)"]
    return out


BUNDLED_FIXTURES = {
    "u24_instance.json": "U(2,4), A={0,1}, B={2,3}, X={0}, Y={2}",
    "k4_instance.json": "graphic K4, two disjoint spanning trees",
    "nonbasis_instance.json": "rank2.matrix with a dependent A (rejected)",
    "corrupted_explicit.txt": "basis family on 4 elements violating the exchange axiom",
    "k4.graph": "graph file of K4",
    "rank2.matrix": "2 x 4 rational matrix",
}
