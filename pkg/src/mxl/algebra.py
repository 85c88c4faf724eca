"""Exact arithmetic: rationals, prime fields, polynomials over Q, determinants and ranks.

Field elements are plain Python values owned by a field object:

* ``QQ``   -- :class:`fractions.Fraction` (always in lowest terms, positive denominator)
* ``GF(p)`` -- ``int`` in ``range(p)``
* ``QQt``  -- :class:`Poly`, polynomials in ``t`` with rational coefficients

Matrices are :class:`ExactMatrix` instances tagged with their field.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, total_ordering
from typing import Iterable, Sequence


# ---------------------------------------------------------------------------
# -infinity marker


@total_ordering
class _NegInf:
    """Valuation of a zero determinant: below every integer, absorbing under ``+``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NEG_INF"

    def __str__(self):
        return "-inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("mxl.NEG_INF")

    def __lt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __neg__(self):
        raise ValueError("cannot negate NEG_INF")


NEG_INF = _NegInf()


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Univariate polynomial over Q, coefficients stored lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def t(cls) -> "Poly":
        return cls((0, 1))

    @property
    def degree(self):
        """Degree, or ``NEG_INF`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if i == 0 else f"{c}*t^{i}")
        return " + ".join(parts)

    @staticmethod
    def _coerce(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly((x,))

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return Poly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def divmod(self, other: "Poly"):
        other = self._coerce(other)
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(), Poly(rem)
        quot = [Fraction(0)] * (dq + 1)
        lead = other.coeffs[-1]
        for i in range(dq, -1, -1):
            q = rem[i + len(other.coeffs) - 1] / lead
            quot[i] = q
            if q:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= q * b
        return Poly(quot), Poly(rem)

    def __floordiv__(self, other):
        """Exact division; raises if there is a remainder."""
        q, r = self.divmod(other)
        if r:
            raise ArithmeticError(f"{self} is not divisible by {other}")
        return q

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


# ---------------------------------------------------------------------------
# fraction-free elimination over integral domains (ints, Poly)


def _bareiss_det(rows: list[list]):
    """Determinant by Bareiss elimination; entries must support exact ``//``."""
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not m[k][k]:
            for i in range(k + 1, n):
                if m[i][k]:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0 * m[0][0]
        pivot = m[k][k]
        rk = m[k]
        for i in range(k + 1, n):
            ri = m[i]
            a = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pivot - a * rk[j]) // prev
        prev = pivot
    d = m[n - 1][n - 1]
    return d if sign > 0 else -d


def _bareiss_rank(rows: list[list]) -> int:
    """Rank by fraction-free echelon reduction (entries are minors, so ``//`` stays exact)."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    nr, nc = len(m), len(m[0])
    prev = 1
    r = 0
    for c in range(nc):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        rr = m[r]
        for i in range(r + 1, nr):
            ri = m[i]
            a = ri[c]
            for j in range(c + 1, nc):
                ri[j] = (ri[j] * p - a * rr[j]) // prev
            ri[c] = 0 * a
        prev = p
        r += 1
    return r


def _scale_rows_to_int(rows: Sequence[Sequence[Fraction]]):
    """Multiply each row by the lcm of its denominators; returns (int rows, total scale)."""
    out = []
    scale = 1
    for row in rows:
        lcm = 1
        for x in row:
            d = x.denominator
            if d != 1:
                lcm = lcm * d // math.gcd(lcm, d)
        out.append([x.numerator * (lcm // x.denominator) for x in row])
        scale *= lcm
    return out, scale


# ---------------------------------------------------------------------------
# fields


class Field:
    """Operations on the raw values of one exact field."""

    name = "?"
    characteristic = 0

    def __call__(self, x):
        return self.convert(x)

    def convert(self, x):
        raise NotImplementedError

    def zero(self):
        return self.convert(0)

    def one(self):
        return self.convert(1)

    def is_zero(self, x) -> bool:
        return not x

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def from_fraction(self, q: Fraction):
        return self.convert(q)

    def det(self, rows):
        raise NotImplementedError

    def rank(self, rows) -> int:
        raise NotImplementedError

    def parse(self, token: str):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def to_json(self, x):
        return self.format(x)

    def random_element(self, rng, bound: int = 3):
        raise NotImplementedError

    def __repr__(self):
        return self.name


class RationalField(Field):
    name = "Q"
    characteristic = 0

    def convert(self, x):
        if isinstance(x, Poly):
            if x.degree is NEG_INF or x.degree == 0:
                return x.coeffs[0] if x.coeffs else Fraction(0)
            raise TypeError(f"{x} is not a constant")
        return x if type(x) is Fraction else Fraction(x)

    def det(self, rows):
        ints, scale = _scale_rows_to_int(rows)
        d = _bareiss_det(ints)
        return Fraction(d, scale)

    def rank(self, rows) -> int:
        ints, _ = _scale_rows_to_int(rows)
        return _bareiss_rank(ints)

    def parse(self, token: str):
        return Fraction(token)

    def random_element(self, rng, bound: int = 3):
        return Fraction(rng.randint(-bound, bound))


class PrimeField(Field):
    """GF(p); elements are ints in ``range(p)``."""

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, math.isqrt(p) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.characteristic = p
        self.name = f"GF({p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def convert(self, x):
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        return int(x) % self.p

    def from_fraction(self, q: Fraction):
        den = q.denominator % self.p
        if den == 0:
            raise ZeroDivisionError(f"denominator of {q} vanishes in {self.name}")
        return q.numerator * pow(den, -1, self.p) % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return a * b % self.p

    def neg(self, a):
        return -a % self.p

    def inv(self, a):
        return pow(a, -1, self.p)

    def _eliminate(self, rows, want_det: bool):
        p = self.p
        m = [[x % p for x in r] for r in rows]
        nr = len(m)
        nc = len(m[0]) if m else 0
        det = 1
        r = 0
        for c in range(nc):
            if r == nr:
                break
            piv = next((i for i in range(r, nr) if m[i][c]), None)
            if piv is None:
                if want_det:
                    return 0
                continue
            if piv != r:
                m[r], m[piv] = m[piv], m[r]
                det = -det
            inv = pow(m[r][c], -1, p)
            det = det * m[r][c] % p
            rr = m[r]
            for i in range(r + 1, nr):
                f = m[i][c] * inv % p
                if f:
                    ri = m[i]
                    for j in range(c, nc):
                        ri[j] = (ri[j] - f * rr[j]) % p
            r += 1
        return det % p if want_det else r

    def det(self, rows):
        if not rows:
            return 1
        return self._eliminate(rows, True)

    def rank(self, rows) -> int:
        return self._eliminate(rows, False)

    def parse(self, token: str):
        q = Fraction(token)
        return self.from_fraction(q)

    def random_element(self, rng, bound: int = 3):
        return rng.randrange(self.p)


class PolynomialField(Field):
    """Q[t], embedded in Q(t) for ranks and determinants."""

    name = "QT"
    characteristic = 0

    def convert(self, x):
        return x if isinstance(x, Poly) else Poly((x,))

    def is_zero(self, x):
        return x.is_zero()

    def from_fraction(self, q):
        return Poly((q,))

    def det(self, rows):
        if not rows:
            return Poly((1,))
        return self.convert(_bareiss_det(rows))

    def rank(self, rows) -> int:
        return _bareiss_rank(rows)

    def parse(self, token: str):
        token = token.strip()
        if not (token.startswith("[") and token.endswith("]")):
            raise ValueError(f"polynomial entries are written as [c0 c1 ...], got {token!r}")
        body = token[1:-1].split()
        return Poly(Fraction(c) for c in body)

    def format(self, x):
        return "[" + " ".join(str(c) for c in x.coeffs) + "]" if x.coeffs else "[0]"

    def random_element(self, rng, bound: int = 3, degree: int = 2):
        return Poly(rng.randint(-bound, bound) for _ in range(degree + 1))


QQ = RationalField()
QQt = PolynomialField()


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def field_from_name(name: str) -> Field:
    """Parse ``Q``, ``QT``, ``GF(p)``, ``GF p`` or ``GFp``."""
    s = name.strip().upper().replace(" ", "")
    if s in ("Q", "QQ"):
        return QQ
    if s in ("QT", "Q[T]", "Q(T)"):
        return QQt
    if s.startswith("GF"):
        return GF(int(s[2:].strip("()")))
    raise ValueError(f"unknown field {name!r}")


# ---------------------------------------------------------------------------
# matrices


class ExactMatrix:
    """Immutable r x n matrix over an exact field."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, rows: Sequence[Sequence], field: Field = QQ):
        conv = field.convert
        data = tuple(tuple(conv(x) for x in row) for row in rows)
        widths = {len(r) for r in data}
        if len(widths) > 1:
            raise ValueError("matrix rows have different lengths")
        self.field = field
        self.rows = data
        self.nrows = len(data)
        self.ncols = widths.pop() if widths else 0

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __eq__(self, other):
        return isinstance(other, ExactMatrix) and self.field == other.field and self.rows == other.rows

    def __hash__(self):
        return hash((self.field.name, self.rows))

    def __repr__(self):
        return f"ExactMatrix({[list(map(self.field.format, r)) for r in self.rows]}, {self.field.name})"

    def column(self, j: int):
        return [r[j] for r in self.rows]

    def columns(self, cols: Sequence[int]) -> list[list]:
        """Raw rows of the column submatrix (no conversion), in the order given."""
        return [[r[j] for j in cols] for r in self.rows]

    def submatrix(self, cols: Sequence[int]) -> "ExactMatrix":
        out = object.__new__(ExactMatrix)
        out.field = self.field
        out.rows = tuple(tuple(r[j] for j in cols) for r in self.rows)
        out.nrows = self.nrows
        out.ncols = len(cols)
        return out

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.rows)) if self.rows else [], self.field)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        f = self.field
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        out = []
        for row in self.rows:
            new = []
            for j in range(other.ncols):
                acc = f.zero()
                for k, a in enumerate(row):
                    acc = f.add(acc, f.mul(a, other.rows[k][j]))
                new.append(acc)
            out.append(new)
        return ExactMatrix(out, f)


def det(m: ExactMatrix):
    """Exact determinant of a square matrix."""
    if m.nrows != m.ncols:
        raise ValueError(f"det needs a square matrix, got {m.nrows}x{m.ncols}")
    return m.field.det([list(r) for r in m.rows])


def rank(m: ExactMatrix) -> int:
    """Exact rank over the matrix's field."""
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return m.field.rank([list(r) for r in m.rows])


def poly_det_degree(m: ExactMatrix):
    """Degree in ``t`` of ``det m``; ``NEG_INF`` when the determinant vanishes."""
    if m.nrows != m.ncols:
        raise ValueError(f"det needs a square matrix, got {m.nrows}x{m.ncols}")
    d = QQt.det([[QQt.convert(x) for x in r] for r in m.rows])
    return d.degree


# ---------------------------------------------------------------------------
# combinatorics


def binom(n: int, k: int) -> int:
    """Generalized binomial coefficient n(n-1)...(n-k+1)/k!, zero for k < 0."""
    if k < 0:
        return 0
    num = 1
    for i in range(k):
        num *= n - i
    return num // math.factorial(k)


def sgn_within(base: Sequence[int], subset: Iterable[int]) -> int:
    """Sign of the permutation moving ``subset`` (sorted) to the front of ``base``.

    ``base`` must be strictly increasing; the rest of ``base`` follows in order.
    """
    sub = set(subset)
    if not sub <= set(base):
        raise ValueError(f"{sorted(sub)} is not contained in {list(base)}")
    # each non-member that precedes a member contributes one inversion
    inversions = 0
    skipped = 0
    for b in base:
        if b in sub:
            inversions += skipped
        else:
            skipped += 1
    return -1 if inversions % 2 else 1


def verify_binomial_identities(range_bound: int) -> dict:
    """Check the six classical binomial identities on the box |n|,|m|,|k| <= range_bound.

    Returns ``{"checked": {name: count}, "violations": [(name, args), ...]}``.
    """
    if range_bound < 1:
        raise ValueError("range_bound must be >= 1")
    R = range(-range_bound, range_bound + 1)
    checked = dict.fromkeys(
        ["symmetry", "negation", "trinomial", "trinomial_other", "parallel", "alternating", "vandermonde"], 0
    )
    bad = []

    def check(name, ok, args):
        checked[name] += 1
        if not ok:
            bad.append((name, args))

    for n in R:
        for k in R:
            if n >= 0:
                check("symmetry", binom(n, k) == binom(n, n - k), (n, k))
            check("negation", binom(n, k) == (-1) ** (k % 2) * binom(k - n - 1, k), (n, k))
            for m in R:
                check("trinomial", binom(n, m) * binom(m, k) == binom(n, k) * binom(n - k, m - k), (n, m, k))
                check(
                    "trinomial_other", binom(n, m) * binom(n - m, k) == binom(n, m + k) * binom(m + k, m), (n, m, k)
                )
        for m in range(0, range_bound + 1):
            check("parallel", sum(binom(n + i, i) for i in range(m + 1)) == binom(n + m + 1, m), (n, m))
            check(
                "alternating",
                sum((-1) ** i * binom(n, i) for i in range(m + 1)) == (-1) ** m * binom(n - 1, m),
                (n, m),
            )
            for k in R:
                check(
                    "vandermonde",
                    sum(binom(n, i) * binom(k, m - i) for i in range(m + 1)) == binom(n + k, m),
                    (n, k, m),
                )
    return {"checked": checked, "violations": bad}


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of ``range(len(perm))`` by cycle decomposition."""
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def random_matrix(field: Field, r: int, n: int, rng, bound: int = 3, degree: int = 2) -> ExactMatrix:
    if isinstance(field, PolynomialField):
        rows = [[field.random_element(rng, bound, degree) for _ in range(n)] for _ in range(r)]
    else:
        rows = [[field.random_element(rng, bound) for _ in range(n)] for _ in range(r)]
    return ExactMatrix(rows, field)


__all__ = [
    "NEG_INF",
    "Poly",
    "Field",
    "RationalField",
    "PrimeField",
    "PolynomialField",
    "QQ",
    "QQt",
    "GF",
    "field_from_name",
    "ExactMatrix",
    "det",
    "rank",
    "poly_det_degree",
    "binom",
    "sgn_within",
    "verify_binomial_identities",
    "permutation_sign",
    "random_matrix",
]

