"""Exchange theorems for matroid bases as executable, self-checking operations.

Everything works on rank oracles.  Subsets are accepted as iterables or bit
masks and returned as frozensets.  Every pair handed back to the caller has
been re-verified with fresh rank queries.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import comb
from typing import Iterable

from .catalog import build_family
from .matroid import DEFAULT_BUDGET, BudgetExceeded, LinearMatroid, Matroid, MinorView
from .optimize import min_weight_common_basis
from .subsets import members, popcount, subsets_of_size, to_mask, to_set


class InvalidInstance(ValueError):
    """A or B is not a basis, or X, Y are not inside A - B, B - A."""


class PreconditionError(ValueError):
    """The inputs fall outside the statement being executed."""


def _fs(s) -> frozenset[int]:
    return to_set(s) if isinstance(s, int) else frozenset(s)


@dataclass(frozen=True)
class ExchangeInstance:
    matroid: Matroid
    A: frozenset
    B: frozenset
    X: frozenset = frozenset()
    Y: frozenset = frozenset()

    def __post_init__(self):
        for name in "ABXY":
            object.__setattr__(self, name, _fs(getattr(self, name)))
        m = self.matroid
        if not m.is_basis(self.A):
            raise InvalidInstance(f"A = {sorted(self.A)} is not a basis")
        if not m.is_basis(self.B):
            raise InvalidInstance(f"B = {sorted(self.B)} is not a basis")
        if not self.X <= self.A - self.B:
            raise InvalidInstance("X must be a subset of A - B")
        if not self.Y <= self.B - self.A:
            raise InvalidInstance("Y must be a subset of B - A")

    @property
    def masks(self) -> tuple[int, int, int, int]:
        return to_mask(self.A), to_mask(self.B), to_mask(self.X), to_mask(self.Y)

    def to_json(self) -> dict:
        from .io import matroid_to_json

        return {
            "matroid": matroid_to_json(self.matroid),
            "A": sorted(self.A),
            "B": sorted(self.B),
            "X": sorted(self.X),
            "Y": sorted(self.Y),
        }


@dataclass(frozen=True)
class ExchangePair:
    U: frozenset
    V: frozenset
    swap_a_basis: bool
    swap_b_basis: bool

    @property
    def size(self) -> int:
        return len(self.U)

    @property
    def valid(self) -> bool:
        return self.swap_a_basis and self.swap_b_basis and len(self.U) == len(self.V)

    @classmethod
    def check(cls, m: Matroid, A, B, U, V) -> "ExchangePair":
        """Build a pair with both basis flags evaluated by rank queries."""
        a, b, u, v = (to_mask(s) for s in (A, B, U, V))
        return cls(to_set(u), to_set(v), m.is_basis((a & ~u) | v), m.is_basis((b | u) & ~v))

    def to_json(self) -> dict:
        return {
            "U": sorted(self.U),
            "V": sorted(self.V),
            "size": self.size,
            "swap_a_basis": self.swap_a_basis,
            "swap_b_basis": self.swap_b_basis,
        }


@dataclass(frozen=True)
class CardinalityConstraint:
    """Restricts (|U & X1|, |U & X2|, |V & Y1|, |V & Y2|) to ``allowed`` (None = anything)."""

    X1: frozenset
    X2: frozenset
    Y1: frozenset
    Y2: frozenset
    allowed: frozenset | None = None

    def __post_init__(self):
        for name in ("X1", "X2", "Y1", "Y2"):
            object.__setattr__(self, name, _fs(getattr(self, name)))
        if self.allowed is not None:
            allowed = frozenset(tuple(t) for t in self.allowed)
            caps = (len(self.X1), len(self.X2), len(self.Y1), len(self.Y2))
            for t in allowed:
                if len(t) != 4 or any(not 0 <= a <= c for a, c in zip(t, caps)):
                    raise ValueError(f"tuple {t} outside the box {caps}")
            object.__setattr__(self, "allowed", allowed)

    def signature(self, U, V) -> tuple[int, int, int, int]:
        U, V = _fs(U), _fs(V)
        return len(U & self.X1), len(U & self.X2), len(V & self.Y1), len(V & self.Y2)

    def admits(self, U, V) -> bool:
        return self.allowed is None or self.signature(U, V) in self.allowed

    def check_partitions(self, A, B):
        A, B = _fs(A), _fs(B)
        if self.X1 & self.X2 or self.X1 | self.X2 != A - B:
            raise PreconditionError("{X1, X2} must partition A - B")
        if self.Y1 & self.Y2 or self.Y1 | self.Y2 != B - A:
            raise PreconditionError("{Y1, Y2} must partition B - A")


# ---------------------------------------------------------------------------
# brute force


def _scan(m: Matroid, a: int, b: int, sizes: Iterable[int], keep_u=None, keep_v=None, first: bool = False):
    """Pairs (U, V) of masks with both swaps bases, ordered by (size, U, V)."""
    a_only = members(a & ~b)
    b_only = members(b & ~a)
    out = []
    for u in sizes:
        for U in subsets_of_size(a_only, u):
            if keep_u is not None and not keep_u(U):
                continue
            base_a = a & ~U
            base_b = b | U
            for V in subsets_of_size(b_only, u):
                if keep_v is not None and not keep_v(V):
                    continue
                if m.is_basis(base_a | V) and m.is_basis(base_b & ~V):
                    out.append((U, V))
                    if first:
                        return out
    return out


def _pair_budget(k: int, cap: int) -> int:
    return sum(comb(k, u) ** 2 for u in range(min(cap, k) + 1))


def brute_force_exchange(
    inst: ExchangeInstance,
    constraint: CardinalityConstraint | None = None,
    size_cap: int | None = None,
    require_xy: bool = True,
    budget: int = DEFAULT_BUDGET,
) -> list[ExchangePair]:
    """Every (U, V) with both swaps bases, sorted by (|U|, U, V) lexicographically.

    With ``require_xy`` only pairs with X <= U and Y <= V are listed.
    """
    a, b, x, y = inst.masks
    k = popcount(a & ~b)
    if k > 16:
        raise BudgetExceeded("brute force needs |A - B| <= 16")
    cap = k if size_cap is None else min(size_cap, k)
    if _pair_budget(k, cap) > budget:
        raise BudgetExceeded(f"{_pair_budget(k, cap)} candidate pairs exceed budget {budget}")
    if constraint is not None:
        constraint.check_partitions(inst.A, inst.B)
    keep_u = (lambda U: U & x == x) if require_xy else None
    keep_v = (lambda V: V & y == y) if require_xy else None
    found = _scan(inst.matroid, a, b, range(cap + 1), keep_u, keep_v)
    pairs = [ExchangePair(to_set(U), to_set(V), True, True) for U, V in found]
    if constraint is not None:
        pairs = [p for p in pairs if constraint.admits(p.U, p.V)]
    return pairs


# ---------------------------------------------------------------------------
# the weighted-intersection algorithm


def _reduce(m: Matroid, a: int, b: int) -> MinorView:
    """Contract A & B and delete everything outside A | B."""
    return m.minor(a & b, m.ground & ~(a | b))


def _exchange_disjoint(m0: Matroid, a0: int, b0: int, x: int, y: int) -> tuple[int, int]:
    """Core construction for disjoint bases covering the ground set.

    A valid (U, V) corresponds to a common basis B' of M/X\\Y and M*/X\\Y
    through B' = B + (U - X) - V; minimizing |B' & (A - X)| minimizes |U|.
    """
    if not x and not y:
        return 0, 0
    rest = m0.ground & ~(x | y)
    if not rest:
        return x, y
    m1 = m0.minor(x, y)
    m2 = m0.dual().minor(x, y)
    a_rest = a0 & ~x
    w = [1 if a_rest >> e & 1 else 0 for e in m1.elements]
    local, _, _ = min_weight_common_basis(m1, m2, w)
    bp = m1.lift(local)
    return x | (bp & a_rest), y | ((b0 & ~y) & ~bp)


def exchange_bound(m: Matroid, A, B, X, Y) -> int:
    """r(X + Y + (A & B)) - |A & B|."""
    a, b, x, y = (to_mask(s) for s in (A, B, X, Y))
    common = a & b
    return m.rank(x | y | common) - popcount(common)


def find_exchange(inst: ExchangeInstance) -> ExchangePair:
    """(U, V) with X <= U, Y <= V, |U| = |V| <= r(X+Y+(A&B)) - |A&B| and both swaps bases.

    The returned pair minimizes |U| among all valid pairs.
    """
    m = inst.matroid
    a, b, x, y = inst.masks
    if not x and not y:
        return ExchangePair.check(m, a, b, 0, 0)
    m0 = _reduce(m, a, b)
    u0, v0 = _exchange_disjoint(m0, m0.localize(a & ~b), m0.localize(b & ~a), m0.localize(x), m0.localize(y))
    u, v = m0.lift(u0), m0.lift(v0)
    pair = ExchangePair.check(m, a, b, u, v)
    bound = exchange_bound(m, a, b, x, y)
    ok = (
        pair.valid
        and u & x == x
        and v & y == y
        and u & ~(a & ~b) == 0
        and v & ~(b & ~a) == 0
        and popcount(u) <= bound
    )
    if not ok:
        raise RuntimeError(f"exchange certificate failed re-verification: {pair}")
    return pair


# ---------------------------------------------------------------------------
# interval, Greene and relaxed orderability constructions


def _check_bases(m: Matroid, a: int, b: int):
    if not m.is_basis(a):
        raise InvalidInstance(f"A = {members(a)} is not a basis")
    if not m.is_basis(b):
        raise InvalidInstance(f"B = {members(b)} is not a basis")


def _partition_masks(A, B, x_parts, y_parts):
    a, b = to_mask(A), to_mask(B)
    x1, x2 = (to_mask(s) for s in x_parts)
    y1, y2 = (to_mask(s) for s in y_parts)
    if x1 & x2 or x1 | x2 != a & ~b:
        raise PreconditionError("{X1, X2} must partition A - B")
    if y1 & y2 or y1 | y2 != b & ~a:
        raise PreconditionError("{Y1, Y2} must partition B - A")
    return a, b, x1, x2, y1, y2


def _complement_exchange(m0: Matroid, a0: int, b0: int, x1: int, x2: int, y1: int, y2: int, s: int):
    """Pair inside (X1, Y1) with s <= |U| <= s + r(X2+Y2) - max(|X2|, |Y2|); bases disjoint, covering."""
    flipped = popcount(x2) < popcount(y2)
    if flipped:
        a0, b0, x1, x2, y1, y2 = b0, a0, y1, y2, x1, x2
    slack = m0.full_rank - m0.rank(x2 | y2) - s
    grow = 0
    for e in members(x1)[:slack]:
        grow |= 1 << e
    u_big, v_big = _exchange_disjoint(m0, a0, b0, x2 | grow, y2)
    u, v = a0 & ~u_big, b0 & ~v_big
    return (v, u) if flipped else (u, v)


def interval_exchange(m: Matroid, A, B, x_parts, y_parts, s: int, variant: str = "b") -> ExchangePair:
    """Pair with U <= X1, V <= Y1 whose size lies in a prescribed interval.

    Ranks are taken in M / (A & B), so A - B and B - A play the role of
    disjoint bases.  Variant ``"b"`` needs s <= r(E) - r(X2+Y2) and gives
    s <= |U| <= s + r(X2+Y2) - max(|X2|, |Y2|); variant ``"a"`` needs
    s <= |X1+Y1| - r(X1+Y1) and gives s <= |U| <= s + r(X1+Y1) - max(|X1|, |Y1|).
    """
    a, b, x1, x2, y1, y2 = _partition_masks(A, B, x_parts, y_parts)
    _check_bases(m, a, b)
    if variant not in ("a", "b"):
        raise ValueError("variant must be 'a' or 'b'")
    if s < 0:
        raise PreconditionError("s must be nonnegative")
    if a == b:
        raise PreconditionError("A - B is empty")
    m0 = _reduce(m, a, b)
    la, lb = m0.localize(a & ~b), m0.localize(b & ~a)
    lx1, lx2, ly1, ly2 = (m0.localize(t) for t in (x1, x2, y1, y2))
    if variant == "b":
        top = m0.full_rank - m0.rank(lx2 | ly2)
        if s > top:
            raise PreconditionError(f"variant b needs s <= r(E) - r(X2+Y2) = {top}")
        u0, v0 = _complement_exchange(m0, la, lb, lx1, lx2, ly1, ly2, s)
        upper = s + m0.rank(lx2 | ly2) - max(popcount(x2), popcount(y2))
    else:
        r1 = m0.rank(lx1 | ly1)
        top = popcount(x1 | y1) - r1
        if s > top:
            raise PreconditionError(f"variant a needs s <= |X1+Y1| - r(X1+Y1) = {top}")
        u0, v0 = _complement_exchange(m0.dual(), la, lb, lx1, lx2, ly1, ly2, s)
        upper = s + r1 - max(popcount(x1), popcount(y1))
    u, v = m0.lift(u0), m0.lift(v0)
    pair = ExchangePair.check(m, a, b, u, v)
    if not (pair.valid and u & ~x1 == 0 and v & ~y1 == 0 and s <= popcount(u) <= upper):
        raise RuntimeError(f"interval exchange failed re-verification: {pair}")
    return pair


def greene_exchange(m: Matroid, A, B, x_parts, y_parts) -> ExchangePair:
    """Nonempty U <= X1, V <= Y1 with |U| <= min(|X2|, |Y2|) + 1; needs |X1+Y1| > |A - B|."""
    a, b, x1, x2, y1, y2 = _partition_masks(A, B, x_parts, y_parts)
    if popcount(x1 | y1) < popcount(a & ~b) + 1:
        raise PreconditionError("need |X1 + Y1| >= |A - B| + 1")
    pair = interval_exchange(m, a, b, (x1, x2), (y1, y2), 1, "b")
    if not 1 <= pair.size <= min(popcount(x2), popcount(y2)) + 1:
        raise RuntimeError(f"greene exchange out of bounds: {pair}")
    return pair


def _check_power(A, B, k: int) -> tuple[int, int]:
    a, b = to_mask(A), to_mask(B)
    if k < 0 or (1 << k) - 1 > popcount(a & ~b):
        raise PreconditionError(f"need 2^k - 1 <= |A - B| (k={k}, |A - B|={popcount(a & ~b)})")
    return a, b


def relaxed_base_orderable(m: Matroid, A, B, k: int) -> list[ExchangePair]:
    """k pairwise disjoint nonempty pairs, the i-th of size at most 2^(i-1)."""
    a, b = _check_power(A, B, k)
    _check_bases(m, a, b)
    used_a = used_b = 0
    pairs = []
    for i in range(1, k + 1):
        x1, y1 = (a & ~b) & ~used_a, (b & ~a) & ~used_b
        pair = greene_exchange(m, a, b, (x1, used_a), (y1, used_b))
        u, v = to_mask(pair.U), to_mask(pair.V)
        if not 1 <= pair.size <= 1 << (i - 1) or u & used_a or v & used_b:
            raise RuntimeError(f"step {i} produced an invalid pair {pair}")
        used_a |= u
        used_b |= v
        pairs.append(pair)
    return pairs


def relaxed_gabow_chain(m: Matroid, A, B, k: int) -> list[ExchangePair]:
    """Strictly nested nonempty pairs U_1 < ... < U_k with |U_i| <= 2^i - 1."""
    a, b = _check_power(A, B, k)
    _check_bases(m, a, b)
    u = v = 0
    chain = []
    for i in range(1, k + 1):
        a2, b2 = (a & ~u) | v, (b | u) & ~v
        x1, y1 = (a & ~b) & ~u, (b & ~a) & ~v
        step = greene_exchange(m, a2, b2, (x1, v), (y1, u))
        u |= to_mask(step.U)
        v |= to_mask(step.V)
        pair = ExchangePair.check(m, a, b, u, v)
        if not pair.valid or pair.size > (1 << i) - 1:
            raise RuntimeError(f"chain step {i} failed re-verification: {pair}")
        chain.append(pair)
    return chain


# ---------------------------------------------------------------------------
# uniqueness


@dataclass
class UniquenessVerdict:
    """Outcome of a uniqueness scan; ``falsified`` means the theorem's conclusion failed."""

    pairs: list = field(default_factory=list)
    unique: bool = False
    a_basis: bool | None = None
    b_basis: bool | None = None

    @property
    def falsified(self) -> bool:
        return self.unique and not (self.a_basis and self.b_basis)

    def to_json(self) -> dict:
        return {
            "pairs": [[sorted(u), sorted(v)] for u, v in self.pairs],
            "unique": self.unique,
            "a_basis": self.a_basis,
            "b_basis": self.b_basis,
            "falsified": self.falsified,
        }


def unique_multiple_check(m: Matroid, A, B, X) -> UniquenessVerdict:
    """Scan the Y <= B - A with A - X + Y and B + X - Y bases; if Y is unique, A and B must be bases."""
    a, b, x = to_mask(A), to_mask(B), to_mask(X)
    if popcount(a) != popcount(b):
        raise PreconditionError("|A| must equal |B|")
    if x & ~(a & ~b):
        raise PreconditionError("X must be a subset of A - B")
    pairs = []
    base_a, base_b = a & ~x, b | x
    b_only = members(b & ~a)
    for size in range(len(b_only) + 1):
        for y in subsets_of_size(b_only, size):
            if m.is_basis(base_a | y) and m.is_basis(base_b & ~y):
                pairs.append((to_set(x), to_set(y)))
    verdict = UniquenessVerdict(pairs, len(pairs) == 1)
    if verdict.unique:
        verdict.a_basis, verdict.b_basis = m.is_basis(a), m.is_basis(b)
    return verdict


def _bounded_pairs(m: Matroid, a: int, b: int, x: int, y: int, cap: int) -> list[tuple[frozenset, frozenset]]:
    found = _scan(m, a, b, range(max(popcount(x), popcount(y)), cap + 1),
                  lambda U: U & x == x, lambda V: V & y == y)
    return [(to_set(U), to_set(V)) for U, V in found]


def unique_char_zero_check(m: LinearMatroid, A, B, X, Y) -> UniquenessVerdict:
    """If exactly one (U, V) with X <= U, Y <= V, |U| = |V| <= r(X+Y) has both swaps bases, A and B are bases.

    Only for matrices over a field of characteristic zero, and only when r(X+Y) < |A - B|.
    """
    if not isinstance(m, LinearMatroid) or m.field.characteristic != 0:
        raise PreconditionError("needs a linear matroid over a field of characteristic zero")
    a, b, x, y = (to_mask(s) for s in (A, B, X, Y))
    r = m.full_rank
    if popcount(a) != r or popcount(b) != r:
        raise PreconditionError("|A| and |B| must equal r(E)")
    if x & ~(a & ~b) or y & ~(b & ~a):
        raise PreconditionError("X must lie in A - B and Y in B - A")
    rxy = m.rank(x | y)
    if rxy >= popcount(a & ~b):
        raise PreconditionError(f"need r(X+Y) < |A - B| (got {rxy} >= {popcount(a & ~b)})")
    pairs = _bounded_pairs(m, a, b, x, y, rxy)
    verdict = UniquenessVerdict(pairs, len(pairs) == 1)
    if verdict.unique:
        verdict.a_basis, verdict.b_basis = m.is_basis(a), m.is_basis(b)
    return verdict


def binary_counterexample(r: int):
    """Binary matroid where a unique bounded exchange pair exists but B is dependent.

    Columns 0..r-1 are 1, e_2, ..., e_r (so A = {0..r-1}); columns r..2r-1 are
    e_1, 1+e_2, ..., 1+e_r (so B = {r..2r-1}); X = {0}, Y = {r}.
    """
    from .algebra import GF, ExactMatrix

    if r < 4 or r % 2:
        raise PreconditionError("r must be even and at least 4")
    ones = [1] * r

    def unit(i):
        return [1 if j == i else 0 for j in range(r)]

    cols = [ones] + [unit(i) for i in range(1, r)]
    cols += [unit(0)] + [[(ones[j] + unit(i)[j]) % 2 for j in range(r)] for i in range(1, r)]
    matrix = ExactMatrix([[c[i] for c in cols] for i in range(r)], GF(2))
    m = LinearMatroid(matrix)
    a, b = (1 << r) - 1, ((1 << r) - 1) << r
    x, y = 1, 1 << r
    cap = m.rank(x | y)
    pairs = _bounded_pairs(m, a, b, x, y, cap)
    report = {
        "r": r,
        "bound": cap,
        "pairs": [[sorted(u), sorted(v)] for u, v in pairs],
        "unique_pair_is_xy": pairs == [(to_set(x), to_set(y))],
        "a_basis": m.is_basis(a),
        "b_basis": m.is_basis(b),
    }
    report["reproduced"] = report["unique_pair_is_xy"] and not report["b_basis"]
    return m, to_set(a), to_set(b), to_set(x), to_set(y), report


# ---------------------------------------------------------------------------
# equitability-style exchanges


@dataclass
class Counterexample:
    """No pair met the requested statement; carries the whole instance for re-checking."""

    instance: ExchangeInstance
    p: int
    mode: str
    candidates: int

    def to_json(self) -> dict:
        out = self.instance.to_json()
        out.update({"p": self.p, "mode": self.mode, "candidates": self.candidates, "verdict": "counterexample"})
        return out


def equitability_exchange_search(inst: ExchangeInstance, p: int, mode: str = "conjecture"):
    """Search for U, V with |U & X| = p, Y <= V and both swaps bases.

    ``mode="conjecture"`` also asks |U| <= r((U & X) + Y); ``mode="weak"``
    drops that bound and needs p = |X| - 1 >= |Y| (a known theorem).
    Returns the first pair in (size, U, V) order or a :class:`Counterexample`.
    """
    m = inst.matroid
    a, b, x, y = inst.masks
    nx, ny = popcount(x), popcount(y)
    if not ny <= p <= nx:
        raise PreconditionError("need |Y| <= p <= |X|")
    if mode == "weak":
        if p != nx - 1:
            raise PreconditionError("weak mode needs p = |X| - 1")
    elif mode != "conjecture":
        raise ValueError("mode must be 'conjecture' or 'weak'")
    k = popcount(a & ~b)
    tried = 0

    def keep_u(U):
        return popcount(U & x) == p

    for size in range(p, k + 1):
        for U in subsets_of_size(members(a & ~b), size):
            if not keep_u(U):
                continue
            if mode == "conjecture" and size > m.rank((U & x) | y):
                continue
            base_a, base_b = a & ~U, b | U
            for V in subsets_of_size(members(b & ~a), size):
                if V & y != y:
                    continue
                tried += 1
                if m.is_basis(base_a | V) and m.is_basis(base_b & ~V):
                    return ExchangePair(to_set(U), to_set(V), True, True)
    return Counterexample(inst, p, mode, tried)


# ---------------------------------------------------------------------------
# random instances


def _greedy_basis(m: Matroid, weights: list[float]) -> int:
    basis = 0
    r = 0
    for e in sorted(range(m.n), key=lambda e: (weights[e], e)):
        if m.rank(basis | 1 << e) > r:
            basis |= 1 << e
            r += 1
    return basis


def random_instance(spec: str, seed: int, x_range=(0, 3), y_range=(0, 3), attempts: int = 64) -> ExchangeInstance:
    """Reproducible instance: random matroid from ``spec``, A and B greedy over random weights.

    B's weights add a random penalty on the elements of A.

    X and Y sizes are drawn from the inclusive ranges, clipped to |A - B|.
    """
    rng = random.Random(f"{spec}|{seed}")
    m = build_family(spec, rng)
    a = _greedy_basis(m, [rng.random() for _ in range(m.n)])
    b = a
    for _ in range(attempts):
        # a random penalty on A's elements spreads |A - B| over its whole range
        bias = 2 * rng.random()
        b = _greedy_basis(m, [rng.random() + bias * (a >> e & 1) for e in range(m.n)])
        if b != a:
            break
    if b == a:
        raise PreconditionError(f"{spec} produced a single basis in {attempts} draws")
    a_only, b_only = members(a & ~b), members(b & ~a)
    nx = min(rng.randint(*x_range), len(a_only))
    ny = min(rng.randint(*y_range), len(b_only))
    x = rng.sample(a_only, nx)
    y = rng.sample(b_only, ny)
    return ExchangeInstance(m, to_set(a), to_set(b), frozenset(x), frozenset(y))


__all__ = [
    "InvalidInstance",
    "PreconditionError",
    "ExchangeInstance",
    "ExchangePair",
    "CardinalityConstraint",
    "Counterexample",
    "UniquenessVerdict",
    "brute_force_exchange",
    "exchange_bound",
    "find_exchange",
    "interval_exchange",
    "greene_exchange",
    "relaxed_base_orderable",
    "relaxed_gabow_chain",
    "unique_multiple_check",
    "unique_char_zero_check",
    "binary_counterexample",
    "equitability_exchange_search",
    "random_instance",
]
