"""Exchanged-basis determinant products and exact checks of the identities they satisfy.

For r-subsets A, B of the columns of an r x n matrix M, and U <= A - B,
V <= B - A of equal size, the term

    mu(U, V) = det M[A; -U, +V] * det M[B; +U, -V]

uses positional substitution: the i-th smallest element of V takes the
column position of the i-th smallest element of U inside A (and vice versa
inside B).  ``mu(empty, empty) = det M[A] det M[B]``.

Every verifier expands both sides term by term and compares exactly.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable

from .algebra import NEG_INF, ExactMatrix, Field, binom, poly_det_degree, sgn_within
from .subsets import members, popcount, subsets_of_size, to_mask, to_set


class CharacteristicViolation(ValueError):
    """A coefficient denominator vanishes in the field, so the identity is not claimed.

    ``report`` holds the identity evaluated after clearing denominators.
    """

    def __init__(self, message: str, report: "IdentityReport"):
        super().__init__(message)
        self.report = report


def _sorted(s) -> list[int]:
    return list(members(s)) if isinstance(s, int) else sorted(s)


def _sign(f: Field, s: int, x):
    return x if s > 0 else f.neg(x)


def _total(f: Field, values: Iterable):
    return reduce(f.add, values, f.zero())


def _check_terms(M: ExactMatrix, A, B, U, V):
    A, B, U, V = (set(_sorted(s)) for s in (A, B, U, V))
    r = M.nrows
    if len(A) != r or len(B) != r:
        raise ValueError(f"A and B must have {r} elements")
    if len(U) != len(V):
        raise ValueError("U and V must have the same size")
    if not U <= A - B or not V <= B - A:
        raise ValueError("need U <= A - B and V <= B - A")


def substituted_columns(base: Iterable[int], out: Iterable[int], into: Iterable[int]) -> list[int]:
    """Columns of ``base`` with the i-th smallest of ``out`` replaced by the i-th smallest of ``into``."""
    cols = sorted(base)
    where = {c: i for i, c in enumerate(cols)}
    for x, y in zip(sorted(out), sorted(into)):
        cols[where[x]] = y
    return cols


def mu(M: ExactMatrix, A, B, U=(), V=()):
    """Positional-substitution product det M[A; -U, +V] * det M[B; +U, -V]."""
    _check_terms(M, A, B, U, V)
    f = M.field
    left = f.det(M.columns(substituted_columns(_sorted(A), _sorted(U), _sorted(V))))
    right = f.det(M.columns(substituted_columns(_sorted(B), _sorted(V), _sorted(U))))
    return f.mul(left, right)


def mu_signed(M: ExactMatrix, A, B, U=(), V=()):
    """The same product from block determinants and permutation signs.

    sgn_A(A - U) det[M[A - U] | M[V]] * sgn_B(V) det[M[U] | M[B - V]].
    """
    _check_terms(M, A, B, U, V)
    f = M.field
    A, B, U, V = (_sorted(s) for s in (A, B, U, V))
    keep_a = [a for a in A if a not in set(U)]
    keep_b = [b for b in B if b not in set(V)]
    left = _sign(f, sgn_within(A, keep_a), f.det(M.columns(keep_a + V)))
    right = _sign(f, sgn_within(B, V), f.det(M.columns(U + keep_b)))
    return f.mul(left, right)


class MuTable:
    """Cache of mu(U, V) for one (M, A, B); keys are bit masks of U and V."""

    def __init__(self, M: ExactMatrix, A, B):
        self.M = M
        self.field = M.field
        self.A = _sorted(A)
        self.B = _sorted(B)
        _check_terms(M, self.A, self.B, (), ())
        self.a_only = [a for a in self.A if a not in set(self.B)]
        self.b_only = [b for b in self.B if b not in set(self.A)]
        self._cache: dict[tuple[int, int], object] = {}

    def __call__(self, U=0, V=0):
        key = (to_mask(U), to_mask(V))
        val = self._cache.get(key)
        if val is None:
            u, v = members(key[0]), members(key[1])
            f = self.field
            left = f.det(self.M.columns(substituted_columns(self.A, u, v)))
            right = f.det(self.M.columns(substituted_columns(self.B, v, u)))
            val = f.mul(left, right)
            self._cache[key] = val
        return val

    @property
    def base(self):
        return self(0, 0)

    def block(self, u_sets: Iterable[int], v_sets: Iterable[int]):
        """Sum of mu over the product of two families of masks."""
        v_sets = list(v_sets)
        return _total(self.field, (self(U, V) for U in u_sets for V in v_sets))

    def supersets(self, contain: int, pool: list[int], size: int) -> list[int]:
        """Masks of the ``size``-subsets of ``pool`` that contain ``contain``."""
        free = [e for e in pool if not contain >> e & 1]
        k = size - popcount(contain)
        if k < 0:
            return []
        return [contain | m for m in subsets_of_size(free, k)]


# ---------------------------------------------------------------------------
# reports


@dataclass
class IdentityReport:
    identity: str
    field: Field
    lhs: object
    rhs: object
    coefficients: dict = field(default_factory=dict)
    context: dict = field(default_factory=dict)

    @property
    def residual(self):
        return self.field.sub(self.lhs, self.rhs)

    @property
    def verdict(self) -> str:
        return "pass" if self.field.is_zero(self.residual) else "fail"

    @property
    def ok(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        f = self.field
        out = {"identity": self.identity, **self.context, "field": f.name}
        out["coefficients"] = {str(k): str(v) for k, v in self.coefficients.items()}
        out.update(lhs=f.to_json(self.lhs), rhs=f.to_json(self.rhs), residual=f.to_json(self.residual))
        out["verdict"] = self.verdict
        return out


def _context(M, A, B, X, Y, p=None) -> dict:
    ctx = {"dims": list(M.shape), "A": _sorted(A), "B": _sorted(B), "X": _sorted(X), "Y": _sorted(Y)}
    if p is not None:
        ctx["p"] = p
    return ctx


def _prepare(M, A, B, X, Y):
    table = MuTable(M, A, B)
    x, y = to_mask(X), to_mask(Y)
    if x & ~to_mask(table.a_only) or y & ~to_mask(table.b_only):
        raise ValueError("need X <= A - B and Y <= B - A")
    return table, x, y


# ---------------------------------------------------------------------------
# identities


def verify_multiple_gp(M: ExactMatrix, A, B, X, table: MuTable | None = None) -> IdentityReport:
    """mu(0, 0) = sum over |X|-subsets Y of B - A of mu(X, Y)."""
    t, x, _ = _prepare(M, A, B, X, ()) if table is None else (table, to_mask(X), 0)
    rhs = t.block([x], subsets_of_size(t.b_only, popcount(x)))
    return IdentityReport("multiple_gp", M.field, t.base, rhs, {}, _context(M, A, B, X, ()))


def verify_laplace_exchange(M: ExactMatrix, A, B, X, Y, table: MuTable | None = None) -> IdentityReport:
    """sum_{h=|Y|}^{|X|} (-1)^h sum_{U <= X, |U| = h, V >= Y, |V| = h} mu(U, V) = 0 when |X| > |Y|."""
    t, x, y = _prepare(M, A, B, X, Y) if table is None else (table, to_mask(X), to_mask(Y))
    nx, ny = popcount(x), popcount(y)
    if nx <= ny:
        raise ValueError("needs |X| > |Y|")
    f = M.field
    parts = []
    for h in range(ny, nx + 1):
        s = t.block(subsets_of_size(members(x), h), t.supersets(y, t.b_only, h))
        parts.append(_sign(f, -1 if h % 2 else 1, s))
    lhs = _total(f, parts)
    coeffs = {h: (-1) ** h for h in range(ny, nx + 1)}
    return IdentityReport("laplace_exchange", f, lhs, f.zero(), coeffs, _context(M, A, B, X, Y))


def main_gp_coefficients(rho: int, k: int, nx: int, ny: int) -> dict[int, int]:
    """u -> binom(rho - k, rho - u) for max(|X|, |Y|) <= u <= rho, where k = |A - B|."""
    return {u: binom(rho - k, rho - u) for u in range(max(nx, ny), rho + 1)}


def verify_main_gp(M: ExactMatrix, A, B, X, Y, table: MuTable | None = None) -> IdentityReport:
    """mu(0,0) = sum_u binom(rho - |A-B|, rho - u) sum_{U >= X, V >= Y, |U| = |V| = u} mu(U, V).

    rho is the rank of M[X + Y]; integer coefficients, so any field.
    """
    t, x, y = _prepare(M, A, B, X, Y) if table is None else (table, to_mask(X), to_mask(Y))
    f = M.field
    cols = members(x | y)
    rho = f.rank(M.columns(cols)) if cols else 0
    coeffs = main_gp_coefficients(rho, len(t.a_only), popcount(x), popcount(y))
    parts = []
    for u, c in coeffs.items():
        if c == 0:
            continue
        s = t.block(t.supersets(x, t.a_only, u), t.supersets(y, t.b_only, u))
        parts.append(f.mul(f.convert(c), s))
    ctx = _context(M, A, B, X, Y)
    ctx["rank_xy"] = rho
    return IdentityReport("main_gp", f, t.base, _total(f, parts), coeffs, ctx)


SIGN_CONVENTIONS = ("statement", "alternating", "alternate_form")


def ultra_gp_coefficients(nx: int, ny: int, k_ab: int, p: int, convention: str = "statement") -> dict[int, Fraction]:
    """u = p + k -> coefficient of the block with |U & X| = p, |U| = u, Y <= V.

    ``statement``: sum_i binom(|X|+|Y|-|A-B|-i-1, |Y|-k-i) / binom(|X|-i, |X|-p).
    ``alternating``: the same with an extra (-1)^i.
    ``alternate_form``: sum_i (-1)^i binom(i-|A-B|-|X|-k, i) / binom(|X|-|Y|+k+i, |X|-p).
    Only ``statement`` is the identity; the other two are kept to show that.
    """
    out = {}
    for k in range(ny + 1):
        c = Fraction(0)
        for i in range(ny - k + 1):
            if convention == "statement":
                c += Fraction(binom(nx + ny - k_ab - i - 1, ny - k - i), binom(nx - i, nx - p))
            elif convention == "alternating":
                c += (-1) ** i * Fraction(binom(nx + ny - k_ab - i - 1, ny - k - i), binom(nx - i, nx - p))
            elif convention == "alternate_form":
                c += (-1) ** i * Fraction(binom(i - k_ab - nx - k, i), binom(nx - ny + k + i, nx - p))
            else:
                raise ValueError(f"unknown convention {convention!r}")
        out[p + k] = c
    return out


def ultra_denominators_ok(nx: int, ny: int, p: int, characteristic: int) -> bool:
    """binom(|X| - i, |X| - p) is nonzero in the field for 0 <= i <= |Y|."""
    if characteristic == 0:
        return True
    return all(binom(nx - i, nx - p) % characteristic for i in range(ny + 1))


def verify_ultra_gp(M: ExactMatrix, A, B, X, Y, p: int, table: MuTable | None = None,
                    convention: str = "statement") -> IdentityReport:
    """mu(0,0) = sum_k c_{p+k} sum_{|U| = p+k, |U & X| = p, |V| = p+k, V >= Y} mu(U, V).

    Raises :class:`CharacteristicViolation` when a denominator binom(|X|-i, |X|-p)
    vanishes in the field; the attached report evaluates the identity with
    denominators cleared.
    """
    t, x, y = _prepare(M, A, B, X, Y) if table is None else (table, to_mask(X), to_mask(Y))
    nx, ny = popcount(x), popcount(y)
    if not ny <= p <= nx:
        raise ValueError("needs |Y| <= p <= |X|")
    f = M.field
    coeffs = ultra_gp_coefficients(nx, ny, len(t.a_only), p, convention)
    outside = [e for e in t.a_only if not x >> e & 1]
    inside = members(x)
    blocks = {}
    for u in coeffs:
        u_sets = [a | b for a in subsets_of_size(inside, p) for b in subsets_of_size(outside, u - p)]
        blocks[u] = t.block(u_sets, t.supersets(y, t.b_only, u))
    ctx = _context(M, A, B, X, Y, p)
    ctx["convention"] = convention
    if ultra_denominators_ok(nx, ny, p, f.characteristic):
        rhs = _total(f, (f.mul(f.from_fraction(c), blocks[u]) for u, c in coeffs.items()))
        return IdentityReport("ultra_gp", f, t.base, rhs, coeffs, ctx)
    scale = 1
    for c in coeffs.values():
        scale = scale * c.denominator // _gcd(scale, c.denominator)
    rhs = _total(f, (f.mul(f.convert(int(c * scale)), blocks[u]) for u, c in coeffs.items()))
    ctx["cleared_by"] = scale
    report = IdentityReport("ultra_gp_cleared", f, f.mul(f.convert(scale), t.base), rhs, coeffs, ctx)
    raise CharacteristicViolation(
        f"binom(|X|-i, |X|-p) vanishes mod {f.characteristic} for some 0 <= i <= |Y|", report
    )


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def ultra_gp_witnesses(M: ExactMatrix, A, B, X, Y, p: int | None = None) -> list[tuple[frozenset, frozenset]]:
    """Pairs (U, V) whose term is nonzero with a nonzero coefficient.

    With ``p`` the blocks of the |U & X| = p identity are used, otherwise the
    blocks of the X <= U identity.  If det M[A] det M[B] != 0 the list is nonempty.
    """
    t, x, y = _prepare(M, A, B, X, Y)
    f = M.field
    out = []
    if p is None:
        cols = members(x | y)
        rho = f.rank(M.columns(cols)) if cols else 0
        coeffs = main_gp_coefficients(rho, len(t.a_only), popcount(x), popcount(y))
        families = {u: t.supersets(x, t.a_only, u) for u in coeffs}
    else:
        coeffs = ultra_gp_coefficients(popcount(x), popcount(y), len(t.a_only), p)
        outside = [e for e in t.a_only if not x >> e & 1]
        families = {u: [a | b for a in subsets_of_size(members(x), p) for b in subsets_of_size(outside, u - p)]
                    for u in coeffs}
    for u, c in coeffs.items():
        if c == 0:
            continue
        for U in families[u]:
            for V in t.supersets(y, t.b_only, u):
                if not f.is_zero(t(U, V)):
                    out.append((to_set(U), to_set(V)))
    return out


# ---------------------------------------------------------------------------
# internals of the |U & X| = p identity


def reduce_to_p_equals_y(M: ExactMatrix, A, B, X, Y, p: int):
    """Pad M to [[M, 0, 0], [0, I_q, I_q]] with q = p - |Y| so that the new |Y| equals p.

    New columns n..n+q-1 join A, columns n+q..n+2q-1 join B and Y.
    Returns (M', A', B', X, Y').
    """
    A, B, X, Y = (_sorted(s) for s in (A, B, X, Y))
    q = p - len(Y)
    if q < 0 or p > len(X):
        raise ValueError("needs |Y| <= p <= |X|")
    f = M.field
    n = M.ncols
    zero, one = f.zero(), f.one()
    rows = [list(r) + [zero] * (2 * q) for r in M.rows]
    for i in range(q):
        rows.append([zero] * n + [one if j == i else zero for j in range(q)] * 2)
    padded = ExactMatrix(rows, f)
    extra_a = list(range(n, n + q))
    extra_b = list(range(n + q, n + 2 * q))
    return padded, A + extra_a, B + extra_b, X, Y + extra_b


def compute_g(M: ExactMatrix, A, B, X, Y, k: int, l: int, table: MuTable | None = None):
    """Sum of mu(U, V) over |U| = |V| = |Y| + l, |U - X| = k, V >= Y."""
    t, x, y = _prepare(M, A, B, X, Y) if table is None else (table, to_mask(X), to_mask(Y))
    size = popcount(y) + l
    outside = [e for e in t.a_only if not x >> e & 1]
    if k < 0 or size - k < 0:
        return M.field.zero()
    u_sets = [a | b for a in subsets_of_size(members(x), size - k) for b in subsets_of_size(outside, k)]
    return t.block(u_sets, t.supersets(y, t.b_only, size))


@dataclass
class ClaimReport:
    checks: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    context: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and not self.failures

    def to_json(self) -> dict:
        return {**self.context, "checked": len(self.checks), "failures": [list(f) for f in self.failures],
                "verdict": "pass" if self.ok else "fail"}


def verify_proof_claims(M: ExactMatrix, A, B, X, Y, p: int | None = None) -> ClaimReport:
    """Check the g-table relations behind the |U & X| = p identity over Q.

    With d = |X| - |Y| and a = |A - B| - |X|:
      g(k, l) = 0 for l > d + k,
      binom(d+k, l) g(k, d+k) = sum_{i<=k} binom(a-i, k-i) g(i, l),
      g(k, l) = binom(d+k, l)/binom(d+k, d) sum_{i<=k} binom(a-i, k-i) binom(l-i-1, k-i)/binom(k, i) g(i, i),
      sum_k g(k, 0) = mu(0, 0).
    If ``p`` differs from |Y| the padding reduction is applied first.
    """
    if M.field.characteristic != 0:
        raise ValueError("the proof relations are checked over a field of characteristic zero")
    if p is not None and p != len(_sorted(Y)):
        M, A, B, X, Y = reduce_to_p_equals_y(M, A, B, X, Y, p)
    t, x, y = _prepare(M, A, B, X, Y)
    nx, ny = popcount(x), popcount(y)
    if ny > nx:
        raise ValueError("needs |Y| <= |X|")
    f = M.field
    d = nx - ny
    a = len(t.a_only) - nx
    kmax = a + 1
    lmax = d + kmax + 1
    g = {(k, l): compute_g(M, A, B, X, Y, k, l, t) for k in range(kmax + 1) for l in range(lmax + 1)}
    rep = ClaimReport(context={"dims": list(M.shape), "A": _sorted(A), "B": _sorted(B), "X": _sorted(X),
                               "Y": _sorted(Y), "d": d})

    def record(name, args, lhs, rhs):
        rep.checks.append((name, args))
        if not f.is_zero(f.sub(lhs, rhs)):
            rep.failures.append((name, args, str(lhs), str(rhs)))

    for k in range(kmax + 1):
        for l in range(lmax + 1):
            if l > d + k:
                record("vanishing", (k, l), g[k, l], f.zero())
            if d + k <= lmax:
                lhs = f.mul(f.convert(binom(d + k, l)), g[k, d + k])
                rhs = _total(f, (f.mul(f.convert(binom(a - i, k - i)), g[i, l]) for i in range(k + 1)))
                record("top_row_relation", (k, l), lhs, rhs)
            total = _total(f, (
                f.mul(f.from_fraction(Fraction(binom(a - i, k - i) * binom(l - i - 1, k - i), binom(k, i))), g[i, i])
                for i in range(k + 1)
            ))
            rhs = f.mul(f.from_fraction(Fraction(binom(d + k, l), binom(d + k, d))), total)
            record("closed_form", (k, l), g[k, l], rhs)
    record("row_sum", (), _total(f, (compute_g(M, A, B, X, Y, k, 0, t) for k in range(ny + 1))), t.base)
    return rep


# ---------------------------------------------------------------------------
# valuated matroids from polynomial matrices


class ValuatedBasisFn:
    """omega(S) = degree in t of det M[S] (NEG_INF when it vanishes)."""

    def __init__(self, matrix: ExactMatrix):
        from .algebra import QQt

        if matrix.field is not QQt:
            matrix = ExactMatrix([[QQt.convert(e) for e in r] for r in matrix.rows], QQt)
        self.matrix = matrix
        self.r = matrix.nrows
        self.n = matrix.ncols
        self._cache: dict[int, object] = {}

    def __call__(self, S):
        key = to_mask(S)
        val = self._cache.get(key)
        if val is None:
            cols = members(key)
            if len(cols) != self.r:
                raise ValueError(f"omega takes {self.r}-subsets, got {len(cols)} elements")
            val = poly_det_degree(self.matrix.submatrix(cols)) if cols else 0
            self._cache[key] = val
        return val

    def subsets(self) -> list[int]:
        return list(subsets_of_size(range(self.n), self.r))


def valuated_omega(vm: ValuatedBasisFn, A):
    return vm(A)


def check_valuated_exchange(omega: Callable, n: int, r: int) -> list[tuple]:
    """Violations of omega(A) + omega(B) <= max_y omega(A-x+y) + omega(B+x-y) over all r-subsets."""
    bad = []
    family = list(subsets_of_size(range(n), r))
    for a in family:
        wa = omega(a)
        for b in family:
            base = wa + omega(b)
            if base is NEG_INF:
                continue
            for x in members(a & ~b):
                best = NEG_INF
                for y in members(b & ~a):
                    val = omega((a & ~(1 << x)) | 1 << y) + omega((b | 1 << x) & ~(1 << y))
                    if best is NEG_INF or (val is not NEG_INF and val > best):
                        best = val
                if best is NEG_INF or best < base:
                    bad.append((members(a), members(b), x))
    return bad


@dataclass
class ValuatedReport:
    name: str
    ok: bool
    witness: object = None
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        w = self.witness
        if isinstance(w, tuple):
            w = [sorted(s) if isinstance(s, (set, frozenset)) else s for s in w]
        return {"name": self.name, "verdict": "pass" if self.ok else "fail", "witness": w, **self.detail}


def verify_ultra_valuated(vm: ValuatedBasisFn, A, B, X, Y, p: int) -> ValuatedReport:
    """Search (U, V) with |U & X| = p, Y <= V, |U| = |V| <= p + |Y| and omega(A)+omega(B) <= omega(A-U+V)+omega(B+U-V)."""
    a, b, x, y = (to_mask(s) for s in (A, B, X, Y))
    if x & ~(a & ~b) or y & ~(b & ~a):
        raise ValueError("need X <= A - B and Y <= B - A")
    nx, ny = popcount(x), popcount(y)
    if not ny <= p <= nx:
        raise ValueError("needs |Y| <= p <= |X|")
    base = vm(a) + vm(b)
    if base is NEG_INF:
        raise ValueError("A and B must both have nonzero determinant")
    outside = members((a & ~b) & ~x)
    for size in range(p, p + ny + 1):
        for ux in subsets_of_size(members(x), p):
            for uo in subsets_of_size(outside, size - p):
                U = ux | uo
                for V in subsets_of_size(members(b & ~a), size):
                    if V & y != y:
                        continue
                    val = vm((a & ~U) | V) + vm((b | U) & ~V)
                    if val is not NEG_INF and val >= base:
                        return ValuatedReport("ultra_valuated", True, (to_set(U), to_set(V)),
                                              {"base": base, "value": val, "tight": val == base})
    return ValuatedReport("ultra_valuated", False, None, {"base": base})


def _partitions(elements: list[int], k: int, size: int):
    """Unordered partitions of ``elements`` into k blocks of ``size`` (as mask tuples)."""
    if k == 0:
        if not elements:
            yield ()
        return
    first, rest = elements[0], elements[1:]
    for others in itertools.combinations(rest, size - 1):
        block = to_mask((first, *others))
        remaining = [e for e in rest if e not in others]
        for tail in _partitions(remaining, k - 1, size):
            yield (block, *tail)


def verify_valuated_partition(vm: ValuatedBasisFn, T, k: int | None = None) -> ValuatedReport:
    """Among the k-partitions into r-sets maximizing the omega sum, find one balanced on T."""
    n, r = vm.n, vm.r
    if r == 0 or n % r:
        raise ValueError("needs n = k * r")
    k = n // r if k is None else k
    if k * r != n:
        raise ValueError("needs n = k * r")
    t = to_mask(T)
    best, optimal = NEG_INF, []
    for part in _partitions(list(range(n)), k, r):
        val = reduce(lambda s, blk: s + vm(blk), part, 0)
        if val is NEG_INF:
            continue
        if best is NEG_INF or val > best:
            best, optimal = val, [part]
        elif val == best:
            optimal.append(part)
    if best is NEG_INF:
        raise ValueError("no partition into k bases exists")
    lo, hi = popcount(t) // k, -(-popcount(t) // k)
    for part in optimal:
        if all(lo <= popcount(blk & t) <= hi for blk in part):
            return ValuatedReport("valuated_partition", True, tuple(to_set(b) for b in part),
                                  {"value": best, "optimal_count": len(optimal)})
    return ValuatedReport("valuated_partition", False, None, {"value": best, "optimal_count": len(optimal)})


def verify_argmax_exchange(omega: Callable, S, T, X, Y) -> ValuatedReport:
    """For an optimal split (S, T) of S + T and |X| > |Y|, find U, V with |X - U| = 1, Y <= V keeping the sum.

    ``omega`` maps r-subsets (masks or iterables) to ints or NEG_INF.
    """
    s, t, x, y = (to_mask(z) for z in (S, T, X, Y))
    if s & t:
        raise ValueError("S and T must be disjoint")
    if x & ~s or y & ~t:
        raise ValueError("need X <= S and Y <= T")
    if popcount(x) <= popcount(y):
        raise ValueError("needs |X| > |Y|")
    r = popcount(s)
    ground = members(s | t)
    best = NEG_INF
    for part in subsets_of_size(ground, r):
        val = omega(part) + omega((s | t) & ~part)
        if val is not NEG_INF and (best is NEG_INF or val > best):
            best = val
    target = omega(s) + omega(t)
    if target is NEG_INF or target != best:
        raise ValueError("(S, T) is not an optimal split")
    for size in range(0, r + 1):
        for U in subsets_of_size(members(s), size):
            if popcount(x & ~U) != 1:
                continue
            for V in subsets_of_size(members(t), size):
                if V & y != y:
                    continue
                if omega((s & ~U) | V) + omega((t | U) & ~V) == target:
                    return ValuatedReport("argmax_exchange", True, (to_set(U), to_set(V)), {"value": target})
    return ValuatedReport("argmax_exchange", False, None, {"value": target})


__all__ = [
    "CharacteristicViolation",
    "IdentityReport",
    "ClaimReport",
    "MuTable",
    "ValuatedBasisFn",
    "ValuatedReport",
    "SIGN_CONVENTIONS",
    "mu",
    "mu_signed",
    "substituted_columns",
    "verify_multiple_gp",
    "verify_laplace_exchange",
    "verify_main_gp",
    "main_gp_coefficients",
    "verify_ultra_gp",
    "ultra_gp_coefficients",
    "ultra_denominators_ok",
    "ultra_gp_witnesses",
    "reduce_to_p_equals_y",
    "compute_g",
    "verify_proof_claims",
    "valuated_omega",
    "check_valuated_exchange",
    "verify_ultra_valuated",
    "verify_valuated_partition",
    "verify_argmax_exchange",
]
