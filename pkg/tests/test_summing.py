import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqsumming.ascent import AscentConfig
from pqsumming.core import Exponent, conjugate, p_norm, p_norm_rows
from pqsumming.operators import CapExceeded, MatrixOperator, compose, inclusion, operator_norm
from pqsumming.summing import (
    SummingParams,
    VectorFamily,
    jameson_bound,
    jameson_delta,
    jameson_truncate,
    kwapien_check,
    pi_estimate,
    pi_exact_linf_q1,
    pi_ratio_and_grad,
    round_to_disjoint,
    strong_norm,
    weak_norm,
    weak_norm_upper,
)

QUICK = AscentConfig(starts=8, iters=300, seed=0)
A_HAD = MatrixOperator([[1.0, 1.0], [1.0, -1.0]], "inf", 2)


# ---------------------------------------------------------------------------
# weak norm


@pytest.mark.parametrize("q,u", [(1, "inf"), (2, 2), (3, 2), (2, "inf"), (1, 2)])
def test_weak_norm_single_vector_is_ambient_norm(q, u):
    x = np.array([1.0, -2.0, 0.5])
    F = VectorFamily(x, u)
    assert weak_norm(F, q).value == pytest.approx(p_norm(x, u), rel=1e-9)


@pytest.mark.parametrize("q", [1, 2, 4])
def test_weak_norm_basis_in_dual_space(q):
    # the standard basis of l_q'^m has weak-q norm exactly 1
    m = 4
    F = VectorFamily(np.eye(m), conjugate(Exponent(q)))
    assert weak_norm(F, q).value == pytest.approx(1.0, rel=1e-9)


def test_weak_norm_repeated_vector_linf():
    F = VectorFamily([[1.0, 0.0], [1.0, 0.0]], "inf")
    est = weak_norm(F, 1)
    assert est.kind == "exact"
    assert est.value == pytest.approx(2.0, abs=1e-12)


def test_weak_norm_equals_column_map_norm():
    # w_q(F) = ||V: l_q'^k -> l_u^m|| with V the column map
    rng = np.random.default_rng(3)
    for q, u in ((1, 2), (2, 2), (1, "inf"), (4, "inf")):
        V = rng.standard_normal((3, 4))
        F = VectorFamily(V, u)
        as_op = MatrixOperator(V.T, conjugate(Exponent(q)), u)
        direct = operator_norm(as_op, cfg=QUICK)
        assert weak_norm(F, q).value == pytest.approx(direct.value, rel=1e-6)


def test_weak_norm_upper_dominates():
    rng = np.random.default_rng(4)
    for _ in range(20):
        F = VectorFamily(rng.standard_normal((3, 4)), ["inf", 2][rng.integers(0, 2)])
        for q in (1, 2, 3):
            assert weak_norm(F, q).value <= weak_norm_upper(F, q) * (1 + 1e-9)


def test_weak_norm_empty_family():
    F = VectorFamily(np.zeros((0, 3)), 2)
    assert weak_norm(F, 2).value == 0.0


# ---------------------------------------------------------------------------
# strong norm


def test_strong_norm_orthonormal_basis():
    F = VectorFamily(np.eye(3), 2)
    assert strong_norm(F, inclusion(3, 2, 2), 2) == pytest.approx(math.sqrt(3), rel=1e-12)


def test_strong_norm_single_vector():
    T = A_HAD
    x = np.array([0.3, -0.7])
    F = VectorFamily(x, "inf")
    assert strong_norm(F, T, 4) == pytest.approx(p_norm(T.apply(x), 2), rel=1e-12)


def test_strong_norm_basis_inclusion():
    F = VectorFamily(np.eye(4), "inf")
    assert strong_norm(F, inclusion(4, "inf", 2), 2) == pytest.approx(2.0, rel=1e-12)


def test_strong_norm_max_aggregation():
    F = VectorFamily([[2.0, 0.0], [0.0, 1.0]], "inf")
    T = inclusion(2, "inf", 2)
    assert strong_norm(F, T, "inf") == pytest.approx(2.0, rel=1e-12)


def test_strong_norm_mismatches():
    F = VectorFamily(np.eye(3), 2)
    with pytest.raises(ValueError):
        strong_norm(F, inclusion(3, "inf", 2), 2)  # ambient exponent mismatch
    with pytest.raises(ValueError):
        strong_norm(VectorFamily(np.eye(2), 2), inclusion(3, 2, 2), 2)


# ---------------------------------------------------------------------------
# pi estimator and oracle


def _grid_oracle_pi22_id3():
    """Brute force for pi_2^2(Id_l2^3): exhaustive search over pairs on a
    coarse sphere grid, maximizing strong/weak."""
    best = 0.0
    pts = []
    n = 6
    for i in range(n):
        for j in range(2 * n):
            th, ph = math.pi * i / (n - 1), math.pi * j / n
            pts.append((math.sin(th) * math.cos(ph), math.sin(th) * math.sin(ph), math.cos(th)))
    pts = np.unique(np.round(pts, 12), axis=0)
    for a, b in itertools.combinations_with_replacement(range(len(pts)), 2):
        V = np.stack([pts[a], pts[b]])
        w = np.linalg.svd(V, compute_uv=False)[0]
        if w == 0:
            continue
        best = max(best, math.sqrt(float((V**2).sum())) / w)
    return best


def test_pi22_identity_l2_3():
    # independent coarse-grid oracle agrees with the analytic value sqrt(2)
    grid_val = _grid_oracle_pi22_id3()
    assert grid_val == pytest.approx(math.sqrt(2), rel=0.05)
    est = pi_estimate(inclusion(3, 2, 2), SummingParams(2, 2, 2),
                      AscentConfig(starts=6, iters=2000, patience=300, seed=3), method="ascent")
    assert est.value == pytest.approx(math.sqrt(2), rel=1e-9)
    exact = pi_estimate(inclusion(3, 2, 2), SummingParams(2, 2, 2))
    assert exact.method == "hilbert_svd" and exact.kind == "exact"
    assert exact.value == pytest.approx(math.sqrt(2), rel=1e-12)


def test_pi2_inclusion_linf_l2():
    # basis family certifies >= sqrt(n); the disjoint-family oracle value
    # also equals sqrt(n) here, matching the known pi_2 value
    T = inclusion(4, "inf", 2)
    basis = VectorFamily(np.eye(4), "inf")
    assert strong_norm(basis, T, 2) / weak_norm(basis, 2).value == pytest.approx(2.0, rel=1e-12)
    oracle = pi_exact_linf_q1(T, 2, 4)
    assert oracle.value == pytest.approx(2.0, rel=1e-12)
    est = pi_estimate(T, SummingParams(2, 2, 4), QUICK)
    assert est.value == pytest.approx(2.0, rel=1e-6)


def test_pi21_hadamard():
    est = pi_exact_linf_q1(A_HAD, 2, 2)
    assert est.value == pytest.approx(2.0, abs=1e-12)
    # disjoint witness, consistent with the lower bound m^(1/p) n^(1/2) = 2
    W = est.witness.vectors
    assert np.allclose(np.abs(W), np.eye(2)) or np.allclose(np.abs(W), np.eye(2)[::-1])
    assert est.value >= 2 ** 0.5 * 2 ** 0.5 - 1e-12
    approx = pi_estimate(A_HAD, SummingParams(2, 1, 2), QUICK)
    assert approx.value == pytest.approx(2.0, rel=1e-9)


def test_oracle_examples():
    assert pi_exact_linf_q1(inclusion(2, "inf", 1), 1, 1).value == pytest.approx(2.0)
    zero = MatrixOperator(np.zeros((2, 2)), "inf", 2)
    assert pi_exact_linf_q1(zero, 2, 2).value == 0.0


def test_oracle_cap_refusal():
    T = MatrixOperator(np.ones((2, 10)), "inf", 2)
    with pytest.raises(CapExceeded):
        pi_exact_linf_q1(T, 2, 3, cap=100)


def test_oracle_witness_is_feasible_and_tight():
    rng = np.random.default_rng(11)
    for i in range(10):
        T = MatrixOperator(rng.standard_normal((3, 5)), "inf", 2)
        k = int(rng.integers(1, 4))
        p = [1, 2, 4][i % 3]
        est = pi_exact_linf_q1(T, p, k)
        F = est.witness
        assert weak_norm(F, 1).value <= 1 + 1e-12
        assert strong_norm(F, T, p) == pytest.approx(est.value, rel=1e-12)


def test_oracle_monotone_in_k():
    T = MatrixOperator(np.random.default_rng(0).standard_normal((2, 5)), "inf", 2)
    vals = [pi_exact_linf_q1(T, 1, k).value for k in range(1, 6)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))


def test_estimate_matches_oracle_random():
    rng = np.random.default_rng(42)
    for trial in range(15):
        m, n, k = int(rng.integers(1, 7)), int(rng.integers(1, 4)), int(rng.integers(1, 4))
        p = [1, 2, 4][trial % 3]
        T = MatrixOperator(rng.standard_normal((n, m)), "inf", 2)
        oracle = pi_exact_linf_q1(T, p, k)
        est = pi_estimate(T, SummingParams(p, 1, k), AscentConfig(starts=8, iters=300, seed=trial))
        assert est.value == pytest.approx(oracle.value, rel=1e-3)
        assert est.value <= oracle.value * (1 + 1e-9)


def test_pi_estimate_zero_operator():
    zero = MatrixOperator(np.zeros((2, 3)), "inf", 2)
    est = pi_estimate(zero, SummingParams(2, 1, 2), QUICK)
    assert est.value == 0.0 and est.kind == "exact"


def test_round_to_disjoint():
    F = VectorFamily([[0.9, 0.1, -0.5], [0.2, -0.8, 0.6]], "inf")
    D = round_to_disjoint(F)
    col_owner = np.abs(D.vectors).sum(axis=0)
    assert np.allclose(col_owner, 1.0)
    assert set(np.unique(D.vectors)) <= {-1.0, 0.0, 1.0}


def test_ideal_property_exact_instances():
    rng = np.random.default_rng(13)
    for _ in range(10):
        T = MatrixOperator(rng.standard_normal((3, 4)), "inf", 2)
        B = MatrixOperator(rng.standard_normal((4, 3)), "inf", "inf")
        A = MatrixOperator(rng.standard_normal((2, 3)), 2, 2)
        k, p = int(rng.integers(1, 4)), [1, 2][rng.integers(0, 2)]
        lhs = pi_exact_linf_q1(compose(A, compose(T, B)), p, k).value
        rhs = operator_norm(A).value * pi_exact_linf_q1(T, p, k).value * operator_norm(B).value
        assert lhs <= rhs * (1 + 1e-9)


# ---------------------------------------------------------------------------
# Kwapien


def test_kwapien_examples():
    rep = kwapien_check(inclusion(2, 2, 2), 2, 1, "inf", 2, k=2, budget=QUICK)
    assert rep.holds
    zero = MatrixOperator(np.zeros((2, 2)), 2, 2)
    assert kwapien_check(zero, 2, 1, "inf", 2, k=2).holds
    same = kwapien_check(inclusion(2, 2, 2), 2, 1, 2, 1, k=2, budget=QUICK)
    assert same.holds and same.lhs.value == pytest.approx(same.rhs.value, rel=1e-9)


def test_kwapien_rejects_bad_parameters():
    T = inclusion(2, 2, 2)
    with pytest.raises(ValueError):
        kwapien_check(T, 2, 1, 4, 2, k=2)  # 1/q - 1/p != 1/qbar - 1/pbar
    with pytest.raises(ValueError):
        kwapien_check(T, "inf", 2, 2, 1, k=2)  # p > pbar


# ---------------------------------------------------------------------------
# Jameson truncation


def _family_with_image_norms():
    # T = Id: images are the vectors themselves; norms (2, 1, 1)
    T = inclusion(3, "inf", 2)
    F = VectorFamily([[2.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]], "inf")
    return F, T


def test_truncate_procedure():
    F, T = _family_with_image_norms()
    prefix, n = jameson_truncate(F, T, 2, 1, delta=1.0)
    assert n == 1 and prefix.size == 1
    assert np.allclose(prefix.vectors[0], [2.0, 0, 0])
    _, n = jameson_truncate(F, T, 2, 1, delta=0.5)
    assert n == 3
    prefix, n = jameson_truncate(F, T, 2, 1, delta=5.0)
    assert n == 0 and prefix.size == 0


def test_truncate_stable_ties():
    T = inclusion(3, "inf", 2)
    F = VectorFamily([[0, 1.0, 0], [1.0, 0, 0], [0, 0, 1.0]], "inf")
    prefix, n = jameson_truncate(F, T, 2, 1, delta=0.5)
    assert n == 3
    assert np.allclose(prefix.vectors, F.vectors)  # equal norms keep original order


def test_truncate_rejects_q_equal_p():
    F, T = _family_with_image_norms()
    with pytest.raises(ValueError):
        jameson_truncate(F, T, 2, 2, delta=1.0)


def test_truncation_guarantee_randomized():
    rng = np.random.default_rng(17)
    eps = 0.1
    for _ in range(25):
        m, n, k = int(rng.integers(2, 6)), int(rng.integers(1, 4)), int(rng.integers(3, 9))
        T = MatrixOperator(rng.standard_normal((n, m)), "inf", 2)
        p, q = [(2, 1), (4, 2)][rng.integers(0, 2)]
        F0 = VectorFamily(rng.standard_normal((k, m)), "inf")
        F = F0.scaled(1.0 / weak_norm(F0, q).value)
        delta = jameson_delta(F, T, p, q, eps)
        prefix, length = jameson_truncate(F, T, p, q, delta)
        full = strong_norm(F, T, p)
        kept = strong_norm(prefix, T, p) if length else 0.0
        assert kept >= 2.0 ** (-1.0 / p) * (1 - eps) ** (1.0 / p) * full * (1 - 1e-12)
        norms = p_norm_rows(F.vectors @ T.entries.T, 2)
        assert length <= delta ** (-q) * float(np.sum(norms**q)) * (1 + 1e-12)


def test_jameson_bound_examples():
    assert jameson_bound(1.0, 1.0, 2, 1) == 2
    assert jameson_bound(3.0, 1.0, 2, 1) == 18
    assert jameson_bound(1.0, 1.0, 4, 2) == 2
    with pytest.raises(ValueError):
        jameson_bound(1.0, 1.0, 2, 2)
    with pytest.raises(ValueError):
        jameson_bound(1.0, 2.0, 2, 1)  # pi_pq > pi_q impossible


# ---------------------------------------------------------------------------
# estimator invariants


def test_pi_homogeneity_same_seed():
    rng = np.random.default_rng(23)
    T = MatrixOperator(rng.standard_normal((2, 3)), "inf", 2)
    a = pi_estimate(T, SummingParams(2, 1, 2), QUICK)
    b = pi_estimate(T.scale(-2.5), SummingParams(2, 1, 2), QUICK)
    assert b.value == pytest.approx(2.5 * a.value, rel=1e-9)


def test_pi_monotone_in_k_via_padding():
    rng = np.random.default_rng(29)
    T = MatrixOperator(rng.standard_normal((2, 3)), "inf", 2)
    a = pi_estimate(T, SummingParams(2, 2, 2), QUICK)
    b = pi_estimate(T, SummingParams(2, 2, 3), QUICK, warm_starts=[a.witness.padded(1)])
    assert b.value >= a.value * (1 - 1e-9)


def test_weak_q_monotone():
    rng = np.random.default_rng(31)
    for _ in range(20):
        F = VectorFamily(rng.standard_normal((3, 4)), "inf")
        vals = [weak_norm(F, q).value for q in (1, "3/2", 2, 4, "inf")]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(vals, vals[1:]))


@given(st.integers(min_value=0, max_value=10**6))
@settings(max_examples=25, deadline=None)
def test_zero_padding_invariance(seed):
    rng = np.random.default_rng(seed)
    T = MatrixOperator(rng.standard_normal((2, 3)), "inf", 2)
    F = VectorFamily(rng.standard_normal((2, 3)), "inf")
    G = F.padded(2)
    for q in (1, 2):
        assert weak_norm(G, q).value == pytest.approx(weak_norm(F, q).value, rel=1e-12)
    for p in (1, 2, "inf"):
        assert strong_norm(G, T, p) == pytest.approx(strong_norm(F, T, p), rel=1e-12)


def test_subgradient_matches_finite_differences():
    rng = np.random.default_rng(37)
    h = 1e-6
    for trial in range(6):
        T = MatrixOperator(rng.standard_normal((2, 3)), ["inf", 2][trial % 2], 2)
        F = VectorFamily(rng.standard_normal((2, 3)), T.domain_exp)
        p, q = [(2, 1), (2, 2), (4, 1)][trial % 3]
        val, grad = pi_ratio_and_grad(F, T, p, q)
        fd = np.zeros_like(grad)
        for idx in np.ndindex(F.vectors.shape):
            e = np.zeros_like(F.vectors)
            e[idx] = h
            vp, _ = pi_ratio_and_grad(VectorFamily(F.vectors + e, F.ambient_exp), T, p, q)
            vm, _ = pi_ratio_and_grad(VectorFamily(F.vectors - e, F.ambient_exp), T, p, q)
            fd[idx] = (vp - vm) / (2 * h)
        assert np.linalg.norm(grad - fd) <= 1e-4 * max(np.linalg.norm(fd), 1e-8)


def test_family_json_roundtrip():
    F = VectorFamily([[1.0, 2.0], [3.0, -4.0]], "4/3")
    back = VectorFamily.from_json(F.to_json())
    assert np.array_equal(back.vectors, F.vectors)
    assert back.ambient_exp == F.ambient_exp


def test_summing_params_validation():
    with pytest.raises(ValueError):
        SummingParams(1, 2, 3)
    with pytest.raises(ValueError):
        SummingParams(2, 1, 0)
