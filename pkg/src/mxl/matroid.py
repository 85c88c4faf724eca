"""Rank oracles, concrete matroid families, duals and minors, and axiom checkers.

Every matroid here is a rank oracle over the ground set ``{0, ..., n-1}``.
Subsets may be passed as any iterable of ints or as a bit mask (``int``).
"""
from __future__ import annotations

import itertools
import random
import threading
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

from .algebra import ExactMatrix
from .subsets import full, members, popcount, subsets_of_size, to_mask, to_set


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured budget."""


DEFAULT_BUDGET = 10**6


class Matroid:
    """Base rank oracle.  Subclasses implement ``_rank(mask)``."""

    def __init__(self, n: int, labels: Sequence[str] | None = None):
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != n or len(set(labels)) != n:
                raise ValueError("labels must be distinct and number exactly n")
        self.n = n
        self.labels = labels
        self._calls = 0
        self._lock = threading.Lock()
        self._full_rank = None

    # -- oracle interface ---------------------------------------------------

    @property
    def calls(self) -> int:
        """Number of rank queries answered so far."""
        return self._calls

    def _check(self, mask: int) -> int:
        if mask < 0 or mask >> self.n:
            raise ValueError(f"subset {members(mask) if mask >= 0 else mask} not inside ground set of size {self.n}")
        return mask

    def rank(self, s) -> int:
        mask = self._check(to_mask(s))
        with self._lock:
            self._calls += 1
        return self._rank(mask)

    def _rank(self, mask: int) -> int:
        raise NotImplementedError

    @property
    def ground(self) -> int:
        return full(self.n)

    @property
    def full_rank(self) -> int:
        if self._full_rank is None:
            self._full_rank = self.rank(self.ground)
        return self._full_rank

    def is_independent(self, s) -> bool:
        m = to_mask(s)
        return self.rank(m) == popcount(m)

    def is_spanning(self, s) -> bool:
        return self.rank(s) == self.full_rank

    def is_basis(self, s) -> bool:
        m = to_mask(s)
        return popcount(m) == self.full_rank and self.rank(m) == self.full_rank

    # -- derived matroids ---------------------------------------------------

    def dual(self) -> "DualView":
        return DualView(self)

    def minor(self, contract=0, delete=0) -> "MinorView":
        return MinorView(self, contract, delete)

    def contract(self, f) -> "MinorView":
        return MinorView(self, f, 0)

    def delete(self, f) -> "MinorView":
        return MinorView(self, 0, f)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n})"


class UniformMatroid(Matroid):
    def __init__(self, r: int, n: int):
        if not 0 <= r <= n:
            raise ValueError("need 0 <= r <= n")
        super().__init__(n)
        self.r = r

    def _rank(self, mask):
        return min(popcount(mask), self.r)

    def __repr__(self):
        return f"UniformMatroid({self.r}, {self.n})"


class FreeMatroid(UniformMatroid):
    def __init__(self, n: int):
        super().__init__(n, n)


class PartitionMatroid(Matroid):
    """Independent sets pick at most ``capacities[i]`` elements from ``blocks[i]``."""

    def __init__(self, blocks: Sequence[Iterable[int]], capacities: Sequence[int] | None = None, n: int | None = None):
        blocks = [tuple(sorted(b)) for b in blocks]
        seen = [e for b in blocks for e in b]
        if len(seen) != len(set(seen)):
            raise ValueError("blocks overlap")
        n = n if n is not None else (max(seen) + 1 if seen else 0)
        super().__init__(n)
        self.blocks = blocks
        self.capacities = list(capacities) if capacities is not None else [1] * len(blocks)
        self._block_masks = [to_mask(b) for b in blocks]

    def _rank(self, mask):
        return sum(min(popcount(mask & bm), c) for bm, c in zip(self._block_masks, self.capacities))


class GraphicMatroid(Matroid):
    """Cycle matroid of a multigraph; rank is |V| minus components of (V, S)."""

    def __init__(self, num_vertices: int, edges: Sequence[tuple[int, int]]):
        edges = [(int(u), int(v)) for u, v in edges]
        for u, v in edges:
            if not (0 <= u < num_vertices and 0 <= v < num_vertices):
                raise ValueError(f"edge {(u, v)} uses a vertex outside 0..{num_vertices - 1}")
        super().__init__(len(edges))
        self.num_vertices = num_vertices
        self.edges = edges

    @classmethod
    def complete(cls, m: int) -> "GraphicMatroid":
        return cls(m, list(itertools.combinations(range(m), 2)))

    def _rank(self, mask):
        parent = list(range(self.num_vertices))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        r = 0
        for e in members(mask):
            u, v = self.edges[e]
            a, b = find(u), find(v)
            if a != b:
                parent[a] = b
                r += 1
        return r

    def __repr__(self):
        return f"GraphicMatroid({self.num_vertices}, {self.edges})"


class LinearMatroid(Matroid):
    """Column matroid of an :class:`ExactMatrix`; subset ranks are memoized."""

    def __init__(self, matrix: ExactMatrix, labels=None, cache_size: int = 1 << 20):
        if not isinstance(matrix, ExactMatrix):
            matrix = ExactMatrix(matrix)
        super().__init__(matrix.ncols, labels)
        self.matrix = matrix
        self.cache_size = cache_size
        self._cache: dict[int, int] = {}

    @property
    def field(self):
        return self.matrix.field

    def _rank(self, mask):
        r = self._cache.get(mask)
        if r is None:
            cols = members(mask)
            r = self.matrix.field.rank(self.matrix.columns(cols)) if cols and self.matrix.nrows else 0
            if len(self._cache) < self.cache_size:
                self._cache[mask] = r
        return r

    def __repr__(self):
        return f"LinearMatroid({self.matrix!r})"


class ExplicitMatroid(Matroid):
    """Matroid given by its list of bases; rank(S) = max |S & B|."""

    def __init__(self, n: int, bases: Iterable[Iterable[int]], validate: bool = True):
        super().__init__(n)
        masks = sorted({to_mask(b) for b in bases})
        if not masks:
            raise ValueError("basis family must be nonempty")
        sizes = {popcount(b) for b in masks}
        if len(sizes) != 1:
            raise ValueError("bases must all have the same size")
        for b in masks:
            self._check(b)
        self.bases = masks
        self._basis_set = frozenset(masks)
        if validate:
            report = check_exchange_axiom(self)
            if not report.ok:
                raise ValueError(f"family violates the exchange axiom: {report.violations[0]}")

    def _rank(self, mask):
        return max(popcount(mask & b) for b in self.bases)

    def is_basis(self, s) -> bool:
        with self._lock:
            self._calls += 1
        return to_mask(s) in self._basis_set


class RankFunctionMatroid(Matroid):
    """Wraps an arbitrary rank function; nothing is validated (use the checkers)."""

    def __init__(self, n: int, fn):
        super().__init__(n)
        self.fn = fn

    def _rank(self, mask):
        return self.fn(mask)


class DualView(Matroid):
    """Lazy dual: r*(S) = r(E - S) + |S| - r(E)."""

    def __init__(self, inner: Matroid):
        super().__init__(inner.n, inner.labels)
        self.inner = inner

    def _rank(self, mask):
        inner = self.inner
        return inner.rank(inner.ground & ~mask) + popcount(mask) - inner.full_rank

    def dual(self):
        return self.inner

    def __repr__(self):
        return f"DualView({self.inner!r})"


class MinorView(Matroid):
    """Lazy ``M / contracted \\ deleted`` on the remaining elements, reindexed 0..m-1.

    ``elements[i]`` is the inner element that local element ``i`` stands for.
    """

    def __init__(self, inner: Matroid, contract=0, delete=0):
        c, d = to_mask(contract), to_mask(delete)
        inner._check(c)
        inner._check(d)
        if c & d:
            raise ValueError("contracted and deleted sets overlap")
        if (c | d) == inner.ground and inner.n:
            raise ValueError("a minor must keep at least one element")
        self.inner = inner
        self.contracted = c
        self.deleted = d
        self.elements = tuple(e for e in range(inner.n) if not (c | d) >> e & 1)
        labels = [inner.labels[e] for e in self.elements] if inner.labels else None
        super().__init__(len(self.elements), labels)
        self._r_contracted = inner.rank(c)

    def lift(self, s) -> int:
        """Map a local subset to the inner ground set."""
        out = 0
        for i in members(to_mask(s)):
            out |= 1 << self.elements[i]
        return out

    def localize(self, s) -> int:
        """Map an inner subset (inside the kept elements) to local indices."""
        m = to_mask(s)
        index = {e: i for i, e in enumerate(self.elements)}
        out = 0
        for e in members(m):
            if e not in index:
                raise ValueError(f"element {e} was contracted or deleted")
            out |= 1 << index[e]
        return out

    def _rank(self, mask):
        return self.inner.rank(self.lift(mask) | self.contracted) - self._r_contracted

    def __repr__(self):
        return f"MinorView({self.inner!r}, contract={members(self.contracted)}, delete={members(self.deleted)})"


# ---------------------------------------------------------------------------
# enumeration and checkers


def enumerate_basis_masks(m: Matroid, budget: int = DEFAULT_BUDGET) -> list[int]:
    r = m.full_rank
    if comb(m.n, r) > budget:
        raise BudgetExceeded(f"C({m.n},{r}) = {comb(m.n, r)} exceeds budget {budget}")
    return [b for b in subsets_of_size(range(m.n), r) if m.rank(b) == r]


def enumerate_bases(m: Matroid, budget: int = DEFAULT_BUDGET) -> list[frozenset[int]]:
    """All bases, in lexicographic order of their sorted element tuples."""
    return [to_set(b) for b in enumerate_basis_masks(m, budget)]


@dataclass
class AxiomReport:
    checked: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_rank_axioms(m: Matroid, mode: str | int = "exhaustive", seed: int = 0) -> AxiomReport:
    """Validate normalization, bounds, unit increase, monotonicity and submodularity.

    ``mode="exhaustive"`` (n <= 16) tabulates every subset and checks the local
    form of submodularity r(S+e) + r(S+f) >= r(S) + r(S+e+f), which is
    equivalent to the general inequality.  An int ``mode`` samples that many
    random (S, T) pairs against r(S) + r(T) >= r(S & T) + r(S | T).
    Violations are ``(kind, S, T)`` with S, T as sorted tuples.
    """
    n = m.n
    rep = AxiomReport()
    if mode == "exhaustive":
        if n > 16:
            raise BudgetExceeded("exhaustive axiom check needs n <= 16")
        table = [m.rank(s) for s in range(1 << n)]
        rep.checked += 1
        if table[0] != 0:
            rep.violations.append(("normalization", (), ()))
        for s in range(1 << n):
            rs = table[s]
            if not 0 <= rs <= popcount(s):
                rep.violations.append(("bounds", members(s), ()))
            for e in range(n):
                if s >> e & 1:
                    continue
                se = s | 1 << e
                rep.checked += 1
                if not rs <= table[se] <= rs + 1:
                    rep.violations.append(("unit_increase", members(s), members(se)))
                for f in range(e + 1, n):
                    if s >> f & 1:
                        continue
                    sf = s | 1 << f
                    rep.checked += 1
                    if table[se] + table[sf] < rs + table[se | sf]:
                        rep.violations.append(("submodularity", members(se), members(sf)))
        return rep

    count = int(mode)
    rng = random.Random(seed)
    g = full(n)
    if m.rank(0) != 0:
        rep.violations.append(("normalization", (), ()))
    for _ in range(count):
        s = rng.getrandbits(n) & g if n else 0
        t = rng.getrandbits(n) & g if n else 0
        rs, rt = m.rank(s), m.rank(t)
        rep.checked += 1
        if m.rank(s & t) + m.rank(s | t) > rs + rt:
            rep.violations.append(("submodularity", members(s), members(t)))
        if not 0 <= rs <= popcount(s):
            rep.violations.append(("bounds", members(s), ()))
        outside = [e for e in range(n) if not s >> e & 1]
        if outside:
            se = s | 1 << rng.choice(outside)
            if not rs <= m.rank(se) <= rs + 1:
                rep.violations.append(("unit_increase", members(s), members(se)))
    return rep


def check_exchange_axiom(m) -> AxiomReport:
    """For every basis pair (A, B) and x in A - B, look for y in B - A with A - x + y a basis.

    Accepts an :class:`ExplicitMatroid` or any iterable of bases.
    """
    if isinstance(m, ExplicitMatroid):
        family = m.bases
    else:
        family = sorted({to_mask(b) for b in m})
    fam = set(family)
    rep = AxiomReport()
    for a in family:
        for b in family:
            for x in members(a & ~b):
                rep.checked += 1
                ax = a & ~(1 << x)
                if not any(ax | 1 << y in fam for y in members(b & ~a)):
                    rep.violations.append(("exchange", members(a), members(b), x))
    return rep

