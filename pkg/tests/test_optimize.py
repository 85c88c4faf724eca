import dataclasses
import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mxl.catalog import build_family
from mxl.exchange import _reduce
from mxl.matroid import GraphicMatroid, PartitionMatroid, UniformMatroid
from mxl.optimize import (
    NoCommonBasis,
    greedy_chain,
    min_weight_basis,
    min_weight_common_basis,
    verify_weight_split,
)
from oracles import bases_from_rank, is_forest

FAMILIES = ["uniform(2,5)", "uniform(3,6)", "graphic(K4)", "linear(GF2,3,7)", "linear(Q,3,6)", "linear(GF3,4,8)"]


def brute_common_min(m1, m2, w):
    common = set(bases_from_rank(m1)) & set(bases_from_rank(m2))
    if not common:
        return None
    return min(sum(w[e] for e in b) for b in common)


def test_greedy_uniform_example():
    basis, value = min_weight_basis(UniformMatroid(2, 4), [1, 2, 3, 4])
    assert basis == {0, 1} and value == 3


def test_greedy_zero_weights():
    assert min_weight_basis(GraphicMatroid.complete(4), [0] * 6)[1] == 0


def test_greedy_matches_spanning_tree_scan():
    k4 = GraphicMatroid.complete(4)
    w = [5, 1, 4, 2, 6, 3]
    trees = [t for t in itertools.combinations(range(6), 3) if is_forest([k4.edges[e] for e in t], 4)]
    assert len(trees) == 16
    assert min_weight_basis(k4, w)[1] == min(sum(w[e] for e in t) for t in trees) == 6


def test_greedy_chain_value_formula():
    m = build_family("linear(GF2,4,8)", random.Random(3))
    c = [3, -1, 4, 1, -5, 9, 2, 6]
    mask, value = greedy_chain(m, c)
    order = sorted(range(8), key=lambda e: (c[e], e))
    chain = 0
    total = 0
    prev = 0
    for e in order:
        chain |= 1 << e
        r = m.rank(chain)
        total += (r - prev) * c[e]
        prev = r
    assert value == total


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(FAMILIES), st.integers(0, 1000), st.lists(st.integers(-3, 3), min_size=10, max_size=10))
def test_greedy_value_invariant_under_tie_shuffles(spec, seed, ws):
    m = build_family(spec, random.Random(seed))
    w = ws[: m.n]
    _, value = min_weight_basis(m, w)
    assert value == min(sum(w[e] for e in b) for b in bases_from_rank(m))
    perm = list(range(m.n))
    random.Random(seed).shuffle(perm)
    # relabel through a permutation: optimum value must not change
    from mxl.matroid import RankFunctionMatroid
    from mxl.subsets import members

    relabeled = RankFunctionMatroid(m.n, lambda s: m.rank(sum(1 << perm[i] for i in members(s))))
    w2 = [w[perm[i]] for i in range(m.n)]
    assert min_weight_basis(relabeled, w2)[1] == value


def test_same_matroid_reduces_to_greedy():
    m = build_family("linear(Q,3,6)", random.Random(1))
    w = [4, -2, 7, 0, 3, 1]
    basis, value, cert = min_weight_common_basis(m, m, w)
    assert value == min_weight_basis(m, w)[1]
    assert verify_weight_split(m, m, w, cert)


def test_assignment_problem():
    # edge (i, j) of K_{3,3} is element 3*i + j
    rows = PartitionMatroid([[3 * i + j for j in range(3)] for i in range(3)], [1, 1, 1])
    cols = PartitionMatroid([[3 * i + j for i in range(3)] for j in range(3)], [1, 1, 1])
    cost = [4, 1, 3, 2, 0, 5, 3, 2, 2]
    basis, value, cert = min_weight_common_basis(rows, cols, cost)
    perms = itertools.permutations(range(3))
    assert value == min(sum(cost[3 * i + p[i]] for i in range(3)) for p in perms) == 5
    assert verify_weight_split(rows, cols, cost, cert)


def test_no_common_basis():
    m1 = PartitionMatroid([[0, 1], [2, 3]], [1, 1])
    m2 = PartitionMatroid([[0, 1], [2, 3]], [2, 0])
    with pytest.raises(NoCommonBasis):
        min_weight_common_basis(m1, m2, [0, 0, 0, 0])
    with pytest.raises(NoCommonBasis):
        min_weight_common_basis(UniformMatroid(2, 4), UniformMatroid(3, 4), [0] * 4)


def test_rejects_fractional_weights():
    from fractions import Fraction

    m = UniformMatroid(2, 4)
    with pytest.raises(TypeError):
        min_weight_common_basis(m, m, [Fraction(1, 2), 0, 0, 0])


def test_certificate_tampering_detected():
    m1 = build_family("graphic(K4)")
    m2 = m1.dual()
    w = [3, 1, 4, 1, 5, 9]
    _, _, cert = min_weight_common_basis(m1, m2, w)
    assert verify_weight_split(m1, m2, w, cert)
    c = list(cert.c)
    c[0] += 1
    assert not verify_weight_split(m1, m2, w, dataclasses.replace(cert, c=tuple(c)))
    assert not verify_weight_split(m1, m2, w, dataclasses.replace(cert, basis=frozenset({0, 1, 2, 3})))


def test_certificate_is_normalized():
    m1 = build_family("linear(GF3,4,8)", random.Random(9))
    m2 = m1.dual().dual()
    _, _, cert = min_weight_common_basis(m1, m2, [5, -3, 2, 2, 0, 7, -1, 4])
    assert min(cert.c) == 0


def test_lexicographic_smallest_optimum():
    m = UniformMatroid(2, 4)
    basis, _, _ = min_weight_common_basis(m, m, [0, 0, 0, 0])
    assert basis == {0, 1}


def test_reduction_instances_respect_bound():
    rng = random.Random(5)
    for _ in range(20):
        m = build_family("uniform(3,6)")
        a, b = 0b000111, 0b111000
        x = 1 << rng.randrange(3)
        y = 1 << rng.randrange(3, 6)
        m0 = _reduce(m, a, b)
        m1, m2 = m0.minor(x, y), m0.dual().minor(x, y)
        wt = [1 if ((a & ~x) >> e) & 1 else 0 for e in m1.elements]
        _, opt, _ = min_weight_common_basis(m1, m2, wt)
        assert opt <= m.rank(x | y) - 1


def random_pair(rng):
    spec1 = rng.choice(FAMILIES)
    m1 = build_family(spec1, rng)
    n = m1.n
    r = m1.full_rank
    kind = rng.randrange(3)
    if kind == 0:
        m2 = m1.dual() if n - r == r else UniformMatroid(r, n)
    elif kind == 1:
        perm = list(range(n))
        rng.shuffle(perm)
        from mxl.matroid import RankFunctionMatroid
        from mxl.subsets import members

        m2 = RankFunctionMatroid(n, lambda s, p=perm: m1.rank(sum(1 << p[i] for i in members(s))))
    else:
        m2 = UniformMatroid(r, n)
    return m1, m2


def test_strong_duality_against_brute_force():
    rng = random.Random(42)
    for _ in range(120):
        m1, m2 = random_pair(rng)
        w = [rng.randint(-10, 10) for _ in range(m1.n)]
        best = brute_common_min(m1, m2, w)
        if best is None:
            with pytest.raises(NoCommonBasis):
                min_weight_common_basis(m1, m2, w)
            continue
        basis, value, cert = min_weight_common_basis(m1, m2, w)
        assert value == best
        assert verify_weight_split(m1, m2, w, cert)
        # weak duality for the returned split against every common basis
        common = set(bases_from_rank(m1)) & set(bases_from_rank(m2))
        assert all(cert.c_min + cert.d_min <= sum(w[e] for e in b) for b in common)
