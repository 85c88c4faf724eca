"""Noisy single-swap local search over matroid bases and its robustness guarantee.

A trace B_0, ..., B_k moves by at most one element per step.  The error of a
step is how far it falls short of the best basis in the 1-neighborhood of the
previous one.  The checked guarantee is

    w(B_k) >= max{w(B) : |B - B_0| <= k} - sum of step errors.

All weights are exact (ints or Fractions).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .matroid import DEFAULT_BUDGET, BudgetExceeded, Matroid, enumerate_basis_masks
from .subsets import members, popcount, to_mask, to_set


def _exact(w) -> list:
    out = []
    for x in w:
        if isinstance(x, float):
            x = Fraction(x)
        elif not isinstance(x, (int, Fraction)):
            x = Fraction(x)
        out.append(x)
    return out


def weight(w, B) -> Fraction | int:
    return sum(w[e] for e in members(to_mask(B)))


def _neighbor_masks(m: Matroid, b: int) -> list[int]:
    if not m.is_basis(b):
        raise ValueError(f"{members(b)} is not a basis")
    out = [b]
    for x in members(b):
        bx = b & ~(1 << x)
        for y in range(m.n):
            if b >> y & 1:
                continue
            c = bx | 1 << y
            if m.is_basis(c):
                out.append(c)
    return sorted(out)


def neighborhood(m: Matroid, B) -> list[frozenset[int]]:
    """All bases B' with |B' - B| <= 1, B included, sorted by bit mask."""
    return [to_set(c) for c in _neighbor_masks(m, to_mask(B))]


def ball(m: Matroid, B, k: int, budget: int = DEFAULT_BUDGET) -> list[int]:
    """Masks of all bases B' with |B' - B| <= k (by enumerating every basis)."""
    b = to_mask(B)
    return [c for c in enumerate_basis_masks(m, budget) if popcount(c & ~b) <= k]


def noisy_step(m: Matroid, w, B, eps=0, policy: str = "adversarial", rng: random.Random | int | None = None):
    """One step that lands within ``eps`` of the best neighbor.

    ``adversarial`` takes the lowest-weight basis in the band (smallest mask on
    ties); ``random`` picks uniformly from the band with ``rng`` (a Random or a
    seed).  Returns (B', err) with err = best neighbor weight - w(B').
    """
    w = _exact(w)
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    nbrs = _neighbor_masks(m, to_mask(B))
    vals = {c: weight(w, c) for c in nbrs}
    best = max(vals.values())
    band = [c for c in nbrs if vals[c] >= best - eps]
    if policy == "adversarial":
        pick = min(band, key=lambda c: (vals[c], c))
    elif policy == "random":
        if not isinstance(rng, random.Random):
            rng = random.Random(rng)
        pick = rng.choice(band)
    else:
        raise ValueError(f"unknown policy {policy!r}")
    return to_set(pick), best - vals[pick]


@dataclass
class LocalSearchTrace:
    matroid: Matroid
    weights: list
    bases: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    family: str | None = None

    @property
    def k(self) -> int:
        return len(self.errors)

    @property
    def total_error(self):
        return sum(self.errors, Fraction(0))

    def check_invariants(self) -> bool:
        m, w = self.matroid, self.weights
        if len(self.bases) != len(self.errors) + 1:
            return False
        for i, b in enumerate(self.bases):
            if not m.is_basis(b):
                return False
            if i:
                prev = to_mask(self.bases[i - 1])
                if popcount(to_mask(b) & ~prev) > 1:
                    return False
                best = max(weight(w, c) for c in _neighbor_masks(m, prev))
                if self.errors[i - 1] < 0 or best - weight(w, b) != self.errors[i - 1]:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "weights": [str(x) for x in self.weights],
            "bases": [sorted(b) for b in self.bases],
            "errors": [str(e) for e in self.errors],
        }


def run_trace(m: Matroid, w, B0, k: int, schedule=0, policy: str = "adversarial", seed: int = 0,
              family: str | None = None) -> LocalSearchTrace:
    """k noisy steps from B0; ``schedule`` is one eps per step or a single eps for all."""
    w = _exact(w)
    if isinstance(schedule, (list, tuple)):
        if len(schedule) != k:
            raise ValueError("schedule length must equal k")
        eps = list(schedule)
    else:
        eps = [schedule] * k
    if not m.is_basis(B0):
        raise ValueError(f"{sorted(B0)} is not a basis")
    rng = random.Random(seed)
    trace = LocalSearchTrace(m, w, [_as_set(B0)], [], family)
    for e in eps:
        nxt, err = noisy_step(m, w, trace.bases[-1], e, policy, rng)
        trace.bases.append(nxt)
        trace.errors.append(err)
    return trace


def _as_set(B) -> frozenset[int]:
    return to_set(B) if isinstance(B, int) else frozenset(B)


@dataclass
class RobustnessReport:
    final_value: object
    ball_max: object
    total_error: object
    trace: LocalSearchTrace | None = None

    @property
    def slack(self):
        return self.final_value - (self.ball_max - self.total_error)

    @property
    def ok(self) -> bool:
        return self.slack >= 0

    def to_json(self) -> dict:
        out = self.trace.to_json() if self.trace is not None else {}
        out.update(
            final_value=str(self.final_value),
            k_neighborhood_max=str(self.ball_max),
            total_error=str(self.total_error),
            slack=str(self.slack),
            verdict="pass" if self.ok else "fail",
        )
        return out


def check_robustness(trace: LocalSearchTrace, budget: int = DEFAULT_BUDGET) -> RobustnessReport:
    """Compare w(B_k) with the exact best basis within k swaps of B_0, minus the total error."""
    m, w = trace.matroid, trace.weights
    if comb(m.n, m.full_rank) > budget:
        raise BudgetExceeded(f"C({m.n},{m.full_rank}) exceeds budget {budget}")
    best = max(weight(w, c) for c in ball(m, trace.bases[0], trace.k, budget))
    return RobustnessReport(weight(w, trace.bases[-1]), best, trace.total_error, trace)


@dataclass
class LemmaReport:
    lhs: object
    rhs: object
    case: str
    witness: frozenset | None = None

    @property
    def ok(self) -> bool:
        return self.lhs >= self.rhs

    def to_json(self) -> dict:
        return {"lhs": str(self.lhs), "rhs": str(self.rhs), "case": self.case,
                "witness": sorted(self.witness) if self.witness is not None else None,
                "verdict": "pass" if self.ok else "fail"}


def lemma_case(m: Matroid, b0: int, b1: int, a: int) -> str:
    """Which branch of the one-step argument applies to (B0, B1) and the maximizer A."""
    if b0 == b1:
        return "same_optimal" if b0 == a else "same_symmetric"
    (x,) = members(b0 & ~b1)
    (y,) = members(b1 & ~b0)
    x_in, y_in = bool(a >> x & 1), bool(a >> y & 1)
    if y_in:
        return "y_in_x_in" if x_in else "y_in_x_out"
    if not x_in:
        return "y_out_x_out"
    single = m.is_basis((a & ~(1 << x)) | 1 << y)
    return "y_out_x_in_single" if single else "y_out_x_in_double"


def check_lemma_robust(m: Matroid, w, B0, B1, k: int, budget: int = DEFAULT_BUDGET) -> LemmaReport:
    """max over B_{k-1}(B1) >= max over B_k(B0) - err(B1 | B0), by enumeration.

    The case label records which branch of the proof the instance falls in,
    using the smallest-mask maximizer A over B_k(B0).
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    w = _exact(w)
    b0, b1 = to_mask(B0), to_mask(B1)
    if b1 not in _neighbor_masks(m, b0):
        raise ValueError("B1 must be in the 1-neighborhood of B0")
    bases = enumerate_basis_masks(m, budget)
    near0 = [c for c in bases if popcount(c & ~b0) <= k]
    near1 = [c for c in bases if popcount(c & ~b1) <= k - 1]
    a = min(near0, key=lambda c: (-weight(w, c), c))
    err = max(weight(w, c) for c in _neighbor_masks(m, b0)) - weight(w, b1)
    lhs = max(weight(w, c) for c in near1)
    return LemmaReport(lhs, weight(w, a) - err, lemma_case(m, b0, b1, a), to_set(a))


__all__ = [
    "LocalSearchTrace",
    "RobustnessReport",
    "LemmaReport",
    "weight",
    "neighborhood",
    "ball",
    "noisy_step",
    "run_trace",
    "check_robustness",
    "lemma_case",
    "check_lemma_robust",
]
