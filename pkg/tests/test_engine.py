from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp

from signject.engine import (
    FullSpace,
    OrthantUnion,
    Subspace,
    check_injectivity,
    check_minors,
    construct_counterexample,
    det_condition,
    evaluate_map,
    gamma_det_poly,
)
from signject.errors import NonPositiveInput, ShapeMismatch
from signject.matroid import matroid_vectors
from signject.oracle import naive_symbolic_gamma_det
from signject.ratmat import RationalMatrix, rank
from signject.signs import SignVector

M = RationalMatrix
S = SignVector.parse


def test_gamma_det_worked():
    # det of [[Z],[A'_k B_l]] with Z=(1 1), A'=(1), B=(1 2): +2 k1 l2 - 1 k1 l1
    poly = gamma_det_poly(M([[1]]), M([[1, 2]]), M([[1, 1]]))
    assert poly.terms == {((1,), (0,)): Fraction(2), ((0,), (0,)): Fraction(-1)}
    assert not det_condition(poly)


def test_gamma_det_square_convention():
    # s = n: no Z block, plain symbolic determinant
    poly = gamma_det_poly(M.identity(2), M.identity(2), None)
    assert poly.terms == {((0, 1), (0, 1)): Fraction(1)}
    assert det_condition(poly)
    with pytest.raises(ShapeMismatch):
        gamma_det_poly(M([[1]]), M([[1, 2]]), None)


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False))
def test_gamma_matches_leibniz_oracle(rnd):
    n = rnd.randint(1, 3)
    s = rnd.randint(1, n)
    r = rnd.randint(s, 3)
    Ap = M([[Fraction(rnd.randint(-2, 2)) for _ in range(r)] for _ in range(s)])
    B = M([[Fraction(rnd.randint(-2, 2)) for _ in range(n)] for _ in range(r)])
    Z = None
    if s < n:
        Z = M([[Fraction(rnd.randint(-2, 2)) for _ in range(n)] for _ in range(n - s)])
        if rank(Z) < n - s:
            return
    assert gamma_det_poly(Ap, B, Z).terms == naive_symbolic_gamma_det(Ap, B, Z).terms


def test_check_minors_ledger():
    # Atilde for A = (1,-1), S = span{(1,1)}: C A' = [[1,-1],[1,-1]]
    Atilde = M([[1, -1], [1, -1]])
    B = M.identity(2)
    holds, ledger = check_minors(Atilde, B, 1)
    assert not holds
    assert ledger["conflict"] == {
        "first": {"I": [0], "J": [0]},
        "second": {"I": [1], "J": [1]},
    }
    holds, ledger = check_minors(M.identity(2), M.identity(2), 2)
    assert holds and ledger["common_sign"] == 1


def test_birch_always_injective():
    A = M([[1, 2, 0], [3, 4, 1]])
    v = check_injectivity(A, A.transpose(), FullSpace())
    assert v.injective


def test_full_space_counterexample():
    A = M([[1, -1]])
    v = check_injectivity(A, M.identity(2), FullSpace())
    assert not v.injective
    cx = v.counterexample
    assert all(k > 0 for k in cx.kappa)
    assert mp.mpf(cx.residual_bound) < mp.mpf("1e-30")


def test_kernel_of_B_breaks_injectivity():
    # x^B collapses along ker(B) regardless of A
    B = M([[1, 1], [1, 1]])
    v = check_injectivity(M.identity(2), B, FullSpace())
    assert not v.injective
    assert str(v.counterexample.mu) == "00"


def test_subspace_routes_agree_on_worked_example():
    A = M([[1, -1]])
    B = M.identity(2)
    bad = check_injectivity(A, B, Subspace(C=M([[1], [1]])))
    good = check_injectivity(A, B, Subspace(C=M([[1], [-1]])))
    assert not bad.injective and good.injective
    assert bad.certificate["det_poly_sign_count"] == 2


def test_zero_dimensional_subspace_vacuous():
    v = check_injectivity(M.identity(2), M.identity(2), Subspace(Z=M.identity(2)))
    assert v.injective
    assert v.certificate == {"empty_condition": True}


def test_orthant_union():
    B = M([[1, 1], [1, 1]])
    A = M.identity(2)
    assert check_injectivity(A, B, OrthantUnion((S("++"),))).injective
    assert not check_injectivity(A, B, OrthantUnion((S("+-"),))).injective


def test_dimension_mismatch_falls_back_to_search():
    # dim S = 1 but rank A = 2: the bordered-determinant route does not apply
    v = check_injectivity(M.identity(2), M.identity(2), Subspace(C=M([[1], [1]])))
    assert v.injective and v.method == "sign_search"


def test_evaluate_map():
    I2 = M.identity(2)
    vals, err = evaluate_map(I2, I2, [Fraction(1), Fraction(1)], [Fraction(2), Fraction(3)])
    assert abs(vals[0] - 2) < mp.mpf("1e-70") and abs(vals[1] - 3) < mp.mpf("1e-70")
    assert err < mp.mpf("1e-70")
    with pytest.raises(NonPositiveInput):
        evaluate_map(I2, I2, [Fraction(1), Fraction(-1)], [Fraction(1), Fraction(1)])
    # non-integer exponents are fine: x^(1/2)
    B = M([["1/2", "0"], ["0", "1"]])
    vals, _ = evaluate_map(I2, B, [1, 1], [Fraction(4), Fraction(9)])
    assert abs(vals[0] - 2) < mp.mpf("1e-70")


def test_counterexample_construction_direct():
    A = M([[1, -1]])
    B = M.identity(2)
    from signject.feasibility import feasible_sign_pair, split_pair_witness

    res = feasible_sign_pair(A, B, S("++"), S("++"))
    witness = split_pair_witness(res, 2)
    cx = construct_counterexample(A, B, FullSpace(), S("++"), S("++"), witness)
    assert all(k > 0 for k in cx.kappa)
    assert mp.mpf(cx.residual_bound) < mp.mpf("1e-30")


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_necessary_condition_on_search_verdicts(rnd):
    # if some nonzero sign of S is shared by ker(B), injectivity must fail
    n = rnd.randint(1, 2)
    r = rnd.randint(1, 3)
    A = M([[Fraction(rnd.randint(-2, 2)) for _ in range(r)] for _ in range(n)])
    B = M([[Fraction(rnd.randint(-2, 2)) for _ in range(n)] for _ in range(r)])
    T = tuple(v for v in matroid_vectors(B) if not v.is_zero())
    if not T:
        return
    v = check_injectivity(A, B, OrthantUnion(T[:1]))
    assert not v.injective


@settings(max_examples=25, deadline=None)
@given(st.randoms(use_true_random=False))
def test_monotone_in_subset(rnd):
    # injective w.r.t. the full space implies injective w.r.t. any subspace
    n = rnd.randint(1, 2)
    r = rnd.randint(1, 3)
    A = M([[Fraction(rnd.randint(-2, 2)) for _ in range(r)] for _ in range(n)])
    B = M([[Fraction(rnd.randint(-2, 2)) for _ in range(n)] for _ in range(r)])
    full = check_injectivity(A, B, FullSpace())
    if not full.injective:
        return
    C = M([[Fraction(rnd.randint(-2, 2))] for _ in range(n)])
    sub = Subspace(C=C)
    assert check_injectivity(A, B, sub).injective
