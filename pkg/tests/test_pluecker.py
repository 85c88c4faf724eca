import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mxl.algebra import GF, NEG_INF, QQ, QQt, ExactMatrix, Poly, binom, det, field_from_name, random_matrix
from mxl.exchange import ExchangeInstance, brute_force_exchange
from mxl.matroid import LinearMatroid
from mxl.pluecker import (
    SIGN_CONVENTIONS,
    CharacteristicViolation,
    MuTable,
    ValuatedBasisFn,
    check_valuated_exchange,
    compute_g,
    main_gp_coefficients,
    mu,
    mu_signed,
    reduce_to_p_equals_y,
    ultra_gp_coefficients,
    ultra_gp_witnesses,
    verify_argmax_exchange,
    verify_laplace_exchange,
    verify_main_gp,
    verify_multiple_gp,
    verify_proof_claims,
    verify_ultra_gp,
    verify_ultra_valuated,
    verify_valuated_partition,
)
from oracles import cofactor_det, exchange_pairs


def subsets(items, max_size=None):
    items = sorted(items)
    top = len(items) if max_size is None else min(max_size, len(items))
    for k in range(top + 1):
        yield from map(frozenset, itertools.combinations(items, k))


def random_setup(field, r, n, rng, disjoint=False):
    """Full-rank matrix with two r-subsets A, B whose minors are nonzero."""
    while True:
        M = random_matrix(field, r, n, rng)
        cols = list(range(n))
        rng.shuffle(cols)
        A = sorted(cols[:r])
        B = sorted(cols[r:2 * r]) if disjoint else sorted(rng.sample(range(n), r))
        if not field.is_zero(det(M.submatrix(A))) and not field.is_zero(det(M.submatrix(B))):
            return M, A, B


def oracle_mu(M, A, B, U, V):
    """Positional substitution, determinant by cofactor expansion."""
    f = M.field
    a, b = list(A), list(B)
    for x, y in zip(sorted(U), sorted(V)):
        a[a.index(x)] = y
        b[b.index(y)] = x
    kw = dict(add=f.add, mul=f.mul, neg=f.neg, zero=f.zero(), one=f.one())
    left = cofactor_det([[M.rows[i][c] for c in a] for i in range(M.nrows)], **kw)
    right = cofactor_det([[M.rows[i][c] for c in b] for i in range(M.nrows)], **kw)
    return f.mul(left, right)


def test_mu_empty_is_product_of_determinants():
    M = ExactMatrix([[1, 0, 2, 1], [0, 1, 1, 3]])
    assert mu(M, [0, 1], [2, 3]) == det(M.submatrix([0, 1])) * det(M.submatrix([2, 3])) == 5


def test_mu_positional_example():
    # A = {0, 1}, B = {2, 3}; U = {0}, V = {3}: columns (3, 1) and (2, 0)
    M = ExactMatrix([[1, 0, 2, 1], [0, 1, 1, 3]])
    expected = det(M.submatrix([3, 1])) * det(M.submatrix([2, 0]))
    assert mu(M, [0, 1], [2, 3], [0], [3]) == expected == mu_signed(M, [0, 1], [2, 3], [0], [3])


def test_mu_dependent_swap_is_zero():
    M = ExactMatrix([[1, 0, 1, 0], [0, 1, 0, 1]])
    assert mu(M, [0, 1], [2, 3], [0], [3]) == 0


def test_mu_rejects_bad_terms():
    M = ExactMatrix([[1, 0, 2, 1], [0, 1, 1, 3]])
    with pytest.raises(ValueError):
        mu(M, [0, 1], [2, 3], [0], [])
    with pytest.raises(ValueError):
        mu(M, [0, 1], [2, 3], [2], [3])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 5), st.sampled_from(["Q", "GF2", "GF3", "GF5"]),
       st.randoms(use_true_random=False))
def test_mu_routes_agree(r, extra, fname, rnd):
    n = min(2 * r + extra, 10)
    f = field_from_name(fname)
    M = random_matrix(f, r, n, rnd)
    A, B = sorted(rnd.sample(range(n), r)), sorted(rnd.sample(range(n), r))
    a_only, b_only = sorted(set(A) - set(B)), sorted(set(B) - set(A))
    k = rnd.randint(0, len(a_only))
    U, V = rnd.sample(a_only, k), rnd.sample(b_only, k)
    assert mu(M, A, B, U, V) == mu_signed(M, A, B, U, V)
    if r <= 4:
        assert mu(M, A, B, U, V) == oracle_mu(M, A, B, U, V)


def test_mu_table_caches_and_matches():
    rng = random.Random(2)
    M, A, B = random_setup(QQ, 3, 6, rng, disjoint=True)
    t = MuTable(M, A, B)
    assert t.base == mu(M, A, B)
    for U in subsets(t.a_only, 2):
        for V in itertools.combinations(t.b_only, len(U)):
            assert t(U, V) == mu(M, A, B, U, V)


def test_multiple_gp_single_element_on_2x4():
    rng = random.Random(4)
    for _ in range(20):
        M, A, B = random_setup(QQ, 2, 4, rng, disjoint=True)
        for x in A:
            rep = verify_multiple_gp(M, A, B, [x])
            # explicit 3-term form
            expected = sum(oracle_mu(M, A, B, [x], [y]) for y in B)
            assert rep.lhs == det(M.submatrix(A)) * det(M.submatrix(B))
            assert rep.rhs == expected and rep.ok


def test_multiple_gp_empty_x_is_trivial():
    M, A, B = random_setup(QQ, 3, 6, random.Random(0))
    rep = verify_multiple_gp(M, A, B, [])
    assert rep.lhs == rep.rhs and rep.ok


def test_multiple_gp_over_gf5_all_x():
    rng = random.Random(5)
    M, A, B = random_setup(GF(5), 3, 6, rng, disjoint=True)
    for X in subsets(A):
        assert verify_multiple_gp(M, A, B, X).ok


def test_laplace_single_element_classical():
    rng = random.Random(6)
    M, A, B = random_setup(QQ, 3, 6, rng, disjoint=True)
    for x in A:
        rep = verify_laplace_exchange(M, A, B, [x], [])
        # mu(0,0) - sum_y mu(x, y) = 0
        assert rep.ok
        assert mu(M, A, B) == sum(mu(M, A, B, [x], [y]) for y in B)


def test_laplace_two_one_random():
    rng = random.Random(7)
    for _ in range(5):
        M, A, B = random_setup(QQ, 3, 6, rng, disjoint=True)
        for X in itertools.combinations(A, 2):
            for y in B:
                assert verify_laplace_exchange(M, A, B, X, [y]).ok


def test_laplace_rejects_small_x():
    M, A, B = random_setup(QQ, 2, 4, random.Random(1), disjoint=True)
    with pytest.raises(ValueError):
        verify_laplace_exchange(M, A, B, [A[0]], [B[0]])


def test_main_gp_empty_y_recovers_multiple():
    rng = random.Random(8)
    M, A, B = random_setup(QQ, 3, 6, rng, disjoint=True)
    X = A[:2]
    rep = verify_main_gp(M, A, B, X, [])
    assert rep.coefficients[2] == binom(0, 0) == 1
    assert rep.ok
    assert rep.rhs == verify_multiple_gp(M, A, B, X).rhs


def test_main_gp_empty_sets():
    M, A, B = random_setup(QQ, 3, 6, random.Random(9))
    rep = verify_main_gp(M, A, B, [], [])
    assert rep.lhs == rep.rhs == mu(M, A, B)


def test_main_gp_coefficients_examples():
    assert main_gp_coefficients(3, 3, 1, 1) == {1: 0, 2: 0, 3: 1}
    assert main_gp_coefficients(2, 3, 1, 1) == {1: binom(-1, 1), 2: 1}


@pytest.mark.parametrize("fname", ["Q", "GF2", "GF3", "GF5"])
def test_main_gp_all_small_xy(fname):
    f = field_from_name(fname)
    rng = random.Random(fname)
    for _ in range(3):
        M, A, B = random_setup(f, 3, 6, rng)
        a_only, b_only = set(A) - set(B), set(B) - set(A)
        t = MuTable(M, A, B)
        for X in subsets(a_only, 2):
            for Y in subsets(b_only, 2):
                assert verify_main_gp(M, A, B, X, Y, t).ok


def test_ultra_p_equals_x_matches_main():
    rng = random.Random(10)
    for _ in range(5):
        M, A, B = random_setup(QQ, 4, 8, rng, disjoint=True)
        X, Y = A[:2], B[:1]
        ultra = verify_ultra_gp(M, A, B, X, Y, 2)
        main = verify_main_gp(M, A, B, X, Y)
        assert ultra.ok and main.ok
        # with p = |X| the blocks coincide with the X <= U blocks; the sums agree
        assert ultra.rhs == main.rhs


def test_ultra_all_admissible_rational():
    rng = random.Random(11)
    for r, n in ((3, 6), (4, 8)):
        M, A, B = random_setup(QQ, r, n, rng)
        a_only, b_only = set(A) - set(B), set(B) - set(A)
        t = MuTable(M, A, B)
        for X in subsets(a_only, 3):
            for Y in subsets(b_only, 3):
                for p in range(len(Y), len(X) + 1):
                    assert verify_ultra_gp(M, A, B, X, Y, p, t).ok


def test_ultra_gf2_characteristic_violation():
    rng = random.Random(12)
    M, A, B = random_setup(GF(2), 3, 6, rng, disjoint=True)
    with pytest.raises(CharacteristicViolation) as info:
        verify_ultra_gp(M, A, B, A[:2], B[:1], 1)
    rep = info.value.report
    assert rep.identity == "ultra_gp_cleared"
    assert rep.context["cleared_by"] >= 1
    assert rep.to_json()["residual"] in ("0", "1", 0, 1)


def test_ultra_gf3_passes_when_divisibility_holds():
    rng = random.Random(13)
    M, A, B = random_setup(GF(3), 3, 6, rng, disjoint=True)
    assert verify_ultra_gp(M, A, B, A[:2], B[:1], 1).ok


def test_sign_convention_statement_is_the_identity():
    rng = random.Random(14)
    failures = {c: 0 for c in SIGN_CONVENTIONS}
    for _ in range(10):
        M, A, B = random_setup(QQ, 4, 8, rng, disjoint=True)
        t = MuTable(M, A, B)
        for X in subsets(A, 3):
            for Y in subsets(B, 2):
                for p in range(len(Y), len(X) + 1):
                    for c in SIGN_CONVENTIONS:
                        failures[c] += not verify_ultra_gp(M, A, B, X, Y, p, t, convention=c).ok
    assert failures["statement"] == 0
    assert failures["alternating"] > 0 and failures["alternate_form"] > 0


def test_ultra_coefficients_small_case():
    # |X| = 1, |Y| = 0, |A - B| = 2, p = 1: binom(-2, 0) / binom(1, 0)
    assert ultra_gp_coefficients(1, 0, 2, 1) == {1: Fraction(1)}


def test_ultra_rejects_bad_p():
    M, A, B = random_setup(QQ, 3, 6, random.Random(1), disjoint=True)
    with pytest.raises(ValueError):
        verify_ultra_gp(M, A, B, A[:1], B[:1], 2)


def test_report_json_fields():
    M, A, B = random_setup(QQ, 3, 6, random.Random(15), disjoint=True)
    out = verify_ultra_gp(M, A, B, A[:2], B[:1], 1).to_json()
    for key in ("identity", "dims", "A", "B", "X", "Y", "p", "field", "coefficients", "lhs", "rhs",
                "residual", "verdict"):
        assert key in out
    assert out["verdict"] == "pass"


def test_proof_claims_random_3x6():
    rng = random.Random(16)
    for _ in range(3):
        M, A, B = random_setup(QQ, 3, 6, rng, disjoint=True)
        rep = verify_proof_claims(M, A, B, A[:2], B[:1])
        assert rep.ok, rep.failures
        names = {c[0] for c in rep.checks}
        assert names == {"vanishing", "top_row_relation", "closed_form", "row_sum"}


def test_g_vanishes_and_k0_row():
    rng = random.Random(17)
    M, A, B = random_setup(QQ, 4, 8, rng, disjoint=True)
    X, Y = A[:3], B[:1]
    d = len(X) - len(Y)
    t = MuTable(M, A, B)
    g00 = compute_g(M, A, B, X, Y, 0, 0, t)
    for l in range(d + 3):
        g0l = compute_g(M, A, B, X, Y, 0, l, t)
        assert g0l == binom(d, l) * g00
    for k in range(2):
        for l in range(d + k + 1, d + k + 3):
            assert compute_g(M, A, B, X, Y, k, l, t) == 0


def test_proof_claims_with_reduction():
    rng = random.Random(18)
    M, A, B = random_setup(QQ, 3, 6, rng, disjoint=True)
    M2, A2, B2, X2, Y2 = reduce_to_p_equals_y(M, A, B, A[:2], [], 1)
    assert M2.shape == (4, 8) and len(Y2) == 1
    assert det(M2.submatrix(A2)) == det(M.submatrix(A))
    assert verify_proof_claims(M, A, B, A[:2], [], p=1).ok


def test_proof_claims_reject_finite_field():
    M, A, B = random_setup(GF(3), 3, 6, random.Random(0), disjoint=True)
    with pytest.raises(ValueError):
        verify_proof_claims(M, A, B, A[:2], B[:1])


def test_witnesses_cross_checked_with_brute_force():
    rng = random.Random(19)
    for _ in range(15):
        M, A, B = random_setup(QQ, 3, 6, rng)
        m = LinearMatroid(M)
        a_only, b_only = sorted(set(A) - set(B)), sorted(set(B) - set(A))
        X = frozenset(rng.sample(a_only, rng.randint(0, len(a_only))))
        Y = frozenset(rng.sample(b_only, rng.randint(0, min(len(X), len(b_only)))))
        found = ultra_gp_witnesses(M, A, B, X, Y)
        assert found
        feasible = set(exchange_pairs(m, A, B, X, Y))
        rho = m.rank(X | Y)
        for U, V in found:
            assert (U, V) in feasible and len(U) <= rho
        brute = brute_force_exchange(ExchangeInstance(m, A, B, X, Y))
        assert min(p.size for p in brute) <= min(len(U) for U, _ in found)
        for p in range(len(Y), len(X) + 1):
            for U, V in ultra_gp_witnesses(M, A, B, X, Y, p):
                assert len(U & X) == p and Y <= V and len(U) <= p + len(Y)
                assert (U, V) in set(exchange_pairs(m, A, B))


def t_matrix(rows):
    return ExactMatrix([[QQt.convert(e) for e in r] for r in rows], QQt)


def test_valuated_examples():
    t = Poly.t()
    vm = ValuatedBasisFn(t_matrix([[t, 0, 1], [0, 1, 0]]))
    assert vm({0, 1}) == 1
    assert vm({0, 2}) is NEG_INF
    with pytest.raises(ValueError):
        vm({0})


def test_valuated_omega_matches_cofactor_degree():
    rng = random.Random(20)
    for _ in range(10):
        M = random_matrix(QQt, 2, 4, rng, bound=2, degree=2)
        vm = ValuatedBasisFn(M)
        for S in itertools.combinations(range(4), 2):
            ref = cofactor_det([[M.rows[i][c] for c in S] for i in range(2)], zero=Poly(), one=Poly((1,)))
            assert vm(S) == (NEG_INF if ref.is_zero() else ref.degree)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 3), st.randoms(use_true_random=False))
def test_valuated_exchange_axiom(r, rnd):
    M = random_matrix(QQt, r, 2 * r, rnd, bound=2, degree=2)
    vm = ValuatedBasisFn(M)
    assert check_valuated_exchange(vm, vm.n, vm.r) == []


def test_valuated_exchange_detects_bad_function():
    # omega supported on {0,1} and {2,3} only breaks the exchange axiom
    def omega(S):
        S = frozenset(S) if not isinstance(S, int) else frozenset(i for i in range(4) if S >> i & 1)
        return 0 if S in ({0, 1}, {2, 3}) else NEG_INF

    assert check_valuated_exchange(omega, 4, 2)


def test_ultra_valuated_constant_and_trivial():
    M = ExactMatrix([[1, 0, 1, 2], [0, 1, 3, 1]])
    vm = ValuatedBasisFn(M)
    rep = verify_ultra_valuated(vm, {0, 1}, {2, 3}, {0}, set(), 1)
    assert rep.ok and rep.detail["base"] == 0
    rep = verify_ultra_valuated(vm, {0, 1}, {2, 3}, set(), set(), 0)
    assert rep.ok and rep.witness == (frozenset(), frozenset()) and rep.detail["tight"]


def test_ultra_valuated_random_polynomial():
    rng = random.Random(21)
    tried = 0
    while tried < 8:
        vm = ValuatedBasisFn(random_matrix(QQt, 3, 6, rng, bound=2, degree=2))
        A, B = [0, 1, 2], [3, 4, 5]
        if vm(A) is NEG_INF or vm(B) is NEG_INF:
            continue
        tried += 1
        for X in subsets(A, 2):
            for Y in subsets(B, len(X)):
                for p in range(len(Y), len(X) + 1):
                    rep = verify_ultra_valuated(vm, A, B, X, Y, p)
                    assert rep.ok and "tight" in rep.detail


def test_valuated_partition_identity_blocks():
    vm = ValuatedBasisFn(ExactMatrix([[1, 0, 1, 0], [0, 1, 0, 1]]))
    rep = verify_valuated_partition(vm, {0, 1})
    assert rep.ok
    assert all(len(b & {0, 1}) == 1 for b in rep.witness)


def test_valuated_partition_random_2x4_all_t():
    rng = random.Random(22)
    done = 0
    while done < 5:
        vm = ValuatedBasisFn(random_matrix(QQt, 2, 4, rng, bound=2, degree=2))
        try:
            for T in subsets(range(4)):
                assert verify_valuated_partition(vm, T).ok
        except ValueError:
            continue
        done += 1


def test_valuated_partition_no_bases():
    vm = ValuatedBasisFn(ExactMatrix([[1, 1, 0, 0], [0, 0, 0, 0]]))
    with pytest.raises(ValueError):
        verify_valuated_partition(vm, {0})


def test_argmax_exchange_polynomial():
    rng = random.Random(23)
    found = 0
    while found < 5:
        vm = ValuatedBasisFn(random_matrix(QQt, 2, 4, rng, bound=2, degree=2))
        best, split = NEG_INF, None
        for S in itertools.combinations(range(4), 2):
            T = [e for e in range(4) if e not in S]
            val = vm(S) + vm(T)
            if val is not NEG_INF and (best is NEG_INF or val > best):
                best, split = val, (set(S), set(T))
        if split is None:
            continue
        S, T = split
        for X in subsets(S):
            for Y in subsets(T, len(X) - 1) if X else ():
                rep = verify_argmax_exchange(vm, S, T, X, Y)
                assert rep.ok
                U, V = rep.witness
                assert len(X - U) == 1 and Y <= V
        found += 1


def test_argmax_exchange_rejects_non_optimal():
    t = Poly.t()
    vm = ValuatedBasisFn(t_matrix([[t, 0, 1, 0], [0, t, 0, 1]]))
    # omega({0,1}) + omega({2,3}) = 2 beats the split ({0,2}, {1,3}), which is -inf
    with pytest.raises(ValueError):
        verify_argmax_exchange(vm, {0, 2}, {1, 3}, {0}, set())
