"""Greedy minimum-weight bases and weighted matroid intersection with weight splitting."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .matroid import Matroid
from .subsets import members, popcount, to_mask, to_set


class NoCommonBasis(ValueError):
    """The two matroids have no common basis."""


def _weights(w, n: int) -> list:
    w = list(w)
    if len(w) != n:
        raise ValueError(f"expected {n} weights, got {len(w)}")
    return w


def greedy_chain(m: Matroid, c: Sequence) -> tuple[int, object]:
    """Sort by (weight, index), keep the elements where the prefix rank grows.

    Returns the basis mask and sum_i (r(S_i) - r(S_{i-1})) * c(e_i).
    """
    order = sorted(range(m.n), key=lambda e: (c[e], e))
    basis = 0
    value = 0
    prefix = 0
    prev_rank = 0
    target = m.full_rank
    for e in order:
        if prev_rank == target:
            break
        prefix |= 1 << e
        r = m.rank(prefix)
        if r > prev_rank:
            basis |= 1 << e
            value += c[e]
            prev_rank = r
    return basis, value


def min_weight_basis(m: Matroid, c) -> tuple[frozenset[int], object]:
    """Minimum ``c``-weight basis of ``m`` and its weight (greedy)."""
    c = _weights(c, m.n)
    basis, value = greedy_chain(m, c)
    return to_set(basis), value


@dataclass(frozen=True)
class WeightSplitCertificate:
    """``c + d = w`` with the witness minimizing ``c`` over M1 and ``d`` over M2."""

    c: tuple[int, ...]
    d: tuple[int, ...]
    basis: frozenset[int]
    c_min: int
    d_min: int

    def to_json(self) -> dict:
        return {
            "c": list(self.c),
            "d": list(self.d),
            "basis": sorted(self.basis),
            "c_min": self.c_min,
            "d_min": self.d_min,
        }


def _shortest_path(nodes, arcs, length, sources, sinks):
    """Bellman-Ford on node lengths, minimizing (length, arcs); ties keep the first found.

    Returns the node list of the best source-sink path, or None.
    """
    INF = None
    best = {v: INF for v in nodes}
    pred = {}
    for s in sorted(sources):
        best[s] = (length[s], 0)
        pred[s] = None
    for _ in range(len(nodes) + 1):
        changed = False
        for u in sorted(nodes):
            bu = best[u]
            if bu is None:
                continue
            for v in arcs[u]:
                cand = (bu[0] + length[v], bu[1] + 1)
                if best[v] is None or cand < best[v]:
                    best[v] = cand
                    pred[v] = u
                    changed = True
        if not changed:
            break
    else:
        raise RuntimeError("negative cycle in exchange graph; current set is not extreme")
    reached = [t for t in sorted(sinks) if best[t] is not None]
    if not reached:
        return None
    t = min(reached, key=lambda v: (best[v], v))
    path = []
    while t is not None:
        path.append(t)
        t = pred[t]
    return path[::-1]


def _exchange_graph(m1: Matroid, m2: Matroid, indep: int):
    """Arcs y -> x when I - y + x is M1-independent, x -> y when M2-independent."""
    n = m1.n
    size = popcount(indep)
    inside = members(indep)
    outside = [e for e in range(n) if not indep >> e & 1]
    arcs = {v: [] for v in range(n)}
    sources, sinks = [], []
    for x in outside:
        ix = indep | 1 << x
        if m1.rank(ix) == size + 1:
            sources.append(x)
        if m2.rank(ix) == size + 1:
            sinks.append(x)
        for y in inside:
            swapped = ix & ~(1 << y)
            if m1.rank(swapped) == size:
                arcs[y].append(x)
            if m2.rank(swapped) == size:
                arcs[x].append(y)
    return arcs, sources, sinks


def _split_weights(m1: Matroid, m2: Matroid, w: list[int], basis: int) -> tuple[list[int], list[int]]:
    """Integral potentials c on the exchange graph of an optimal common basis.

    Requires c(x) >= c(y) whenever B - y + x is an M1-basis and
    d(x) >= d(y) (d = w - c) whenever it is an M2-basis; solved as a system of
    difference constraints.
    """
    n = m1.n
    r = popcount(basis)
    edges = []
    for y in members(basis):
        for x in range(n):
            if basis >> x & 1:
                continue
            swapped = (basis | 1 << x) & ~(1 << y)
            if m1.rank(swapped) == r:
                edges.append((x, y, 0))
            if m2.rank(swapped) == r:
                edges.append((y, x, w[x] - w[y]))
    c = [0] * n
    for _ in range(n + 1):
        changed = False
        for u, v, wt in edges:
            if c[u] + wt < c[v]:
                c[v] = c[u] + wt
                changed = True
        if not changed:
            break
    else:
        raise RuntimeError("no feasible weight split: basis is not optimal")
    low = min(c) if c else 0
    c = [x - low for x in c]
    d = [w[e] - c[e] for e in range(n)]
    return c, d


def min_weight_common_basis(m1: Matroid, m2: Matroid, w) -> tuple[frozenset[int], int, WeightSplitCertificate]:
    """Minimum-weight common basis by shortest augmenting paths.

    Weights must be integers.  Among all optimal common bases the
    lexicographically smallest (as a sorted tuple) is returned; any optimum
    would do for the min-max statement.  The weight split is re-verified
    against fresh greedy runs before returning.
    """
    if m1.n != m2.n:
        raise ValueError("matroids must share the ground set")
    n = m1.n
    w = _weights(w, n)
    for x in w:
        if isinstance(x, Fraction) and x.denominator == 1:
            continue
        if not isinstance(x, int):
            raise TypeError("intersection weights must be integers")
    w = [int(x) for x in w]
    r = m1.full_rank
    if m2.full_rank != r:
        raise NoCommonBasis(f"ranks differ ({r} vs {m2.full_rank})")
    # scale and perturb so the optimum is unique and lexicographically first
    scale = 1 << n
    big = [w[e] * scale - (1 << (n - 1 - e)) for e in range(n)]

    indep = 0
    while popcount(indep) < r:
        arcs, sources, sinks = _exchange_graph(m1, m2, indep)
        length = {v: (-big[v] if indep >> v & 1 else big[v]) for v in range(n)}
        path = _shortest_path(range(n), arcs, length, sources, sinks)
        if path is None:
            raise NoCommonBasis(f"largest common independent set has size {popcount(indep)} < rank {r}")
        for v in path:
            indep ^= 1 << v

    c, d = _split_weights(m1, m2, w, indep)
    basis = to_set(indep)
    value = sum(w[e] for e in basis)
    _, c_min = greedy_chain(m1, c)
    _, d_min = greedy_chain(m2, d)
    cert = WeightSplitCertificate(tuple(c), tuple(d), basis, c_min, d_min)
    if not verify_weight_split(m1, m2, w, cert) or c_min + d_min != value:
        raise RuntimeError("weight split failed verification")
    return basis, value, cert


def verify_weight_split(m1: Matroid, m2: Matroid, w, cert: WeightSplitCertificate) -> bool:
    """Check c + d = w, that the witness is a common basis, and both greedy minima."""
    n = m1.n
    w = list(w)
    if len(cert.c) != n or len(cert.d) != n or len(w) != n:
        return False
    if any(cert.c[e] + cert.d[e] != w[e] for e in range(n)):
        return False
    b = to_mask(cert.basis)
    if not (m1.is_basis(b) and m2.is_basis(b)):
        return False
    _, c_min = greedy_chain(m1, cert.c)
    _, d_min = greedy_chain(m2, cert.d)
    cb = sum(cert.c[e] for e in cert.basis)
    db = sum(cert.d[e] for e in cert.basis)
    return cb == c_min == cert.c_min and db == d_min == cert.d_min
