import math

import numpy as np
import pytest

from pqsumming.ascent import AscentConfig
from pqsumming.cotype import (
    CotypeParams,
    EmbeddedNorm,
    comparison_chain_report,
    cotype_delta,
    cotype_estimate,
    cotype_truncate,
    gaussian_average,
    lp_space,
    rademacher_average,
    rademacher_average_mc,
    theorem3_budget,
)
from pqsumming.operators import MatrixOperator
from pqsumming.summing import VectorFamily

QUICK = AscentConfig(starts=6, iters=300, seed=0)


def test_embedded_norm_requires_full_rank():
    with pytest.raises(ValueError):
        EmbeddedNorm(MatrixOperator(np.zeros((3, 2)), 2, 2))
    E = lp_space(3, "inf")
    assert E.dim == 3
    assert E.norm([1.0, -2.0, 0.5]) == 2.0


def test_rademacher_closed_forms():
    basis = VectorFamily(np.eye(2), 2)
    assert rademacher_average(basis, lp_space(2, 2)) == pytest.approx(math.sqrt(2), abs=1e-12)
    assert rademacher_average(basis, lp_space(2, 1)) == pytest.approx(2.0, abs=1e-12)
    assert rademacher_average(basis, lp_space(2, "inf")) == pytest.approx(1.0, abs=1e-12)
    single = VectorFamily([[0.3, -0.4]], 2)
    assert rademacher_average(single, lp_space(2, 2)) == pytest.approx(0.5, rel=1e-12)


def test_rademacher_cap():
    F = VectorFamily(np.ones((23, 1)), 2)
    with pytest.raises(ValueError):
        rademacher_average(F, lp_space(1, 2))
    assert rademacher_average(F, lp_space(1, 2), cap=30) > 0  # configurable


def test_rademacher_l2_is_quadrature():
    # in l_2 the average equals the quadrature sum for every family
    rng = np.random.default_rng(1)
    F = VectorFamily(rng.standard_normal((5, 3)), 2)
    want = math.sqrt(float((F.vectors**2).sum()))
    assert rademacher_average(F, lp_space(3, 2)) == pytest.approx(want, rel=1e-12)


def test_gaussian_average_sanity():
    E = lp_space(2, 2)
    x = VectorFamily([[1.0, 2.0]], 2)
    m, se = gaussian_average(x, E, 4000, seed=3)
    assert abs(m - math.sqrt(5)) <= 3 * se
    basis = VectorFamily(np.eye(3), 2)
    m, se = gaussian_average(basis, lp_space(3, 2), 4000, seed=4)
    assert abs(m - math.sqrt(3)) <= 3 * se
    zero = VectorFamily(np.zeros((2, 3)), 2)
    assert gaussian_average(zero, lp_space(3, 2), 500, seed=0) == (0.0, 0.0)
    with pytest.raises(ValueError):
        gaussian_average(x, E, 50, seed=0)


def test_mc_rademacher_consistent_with_exact():
    rng = np.random.default_rng(5)
    bad = 0
    for i in range(20):
        k, n = int(rng.integers(1, 10)), int(rng.integers(1, 4))
        E = lp_space(n, ["1", "2", "inf"][i % 3])
        F = VectorFamily(rng.standard_normal((k, n)), 2)
        exact = rademacher_average(F, E)
        mc, se = rademacher_average_mc(F, E, 3000, seed=50 + i)
        if abs(mc - exact) > 4 * se + 1e-12:
            bad += 1
    assert bad == 0


def test_cotype_single_vector_is_one():
    for space in (lp_space(2, 1), lp_space(3, "inf"), lp_space(2, 2)):
        est = cotype_estimate(space, CotypeParams(3, 1), QUICK)
        assert est.value == pytest.approx(1.0, rel=1e-9)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_cotype_hilbert_is_one(q):
    for n in (2, 4):
        for k in (2, 4):
            est = cotype_estimate(lp_space(n, 2), CotypeParams(q, k), QUICK)
            assert est.value == pytest.approx(1.0, abs=1e-6)


def test_cotype_linf_square_lower_bound():
    # the pair (e_1, e_2) in l_inf^2 has Rademacher average 1, so the
    # ascent must reach at least 2^(1/q)
    for q in (3, 4):
        est = cotype_estimate(lp_space(2, "inf"), CotypeParams(q, 2),
                              AscentConfig(starts=8, iters=400, seed=1))
        assert est.value >= 2 ** (1 / q) - 1e-9
    F = VectorFamily(np.eye(2), 2)
    assert rademacher_average(F, lp_space(2, "inf")) == pytest.approx(1.0, abs=1e-12)


def test_cotype_gaussian_mode():
    est = cotype_estimate(lp_space(2, "inf"), CotypeParams(4, 2, "gaussian", 4000), QUICK)
    assert est.method == "mc_ascent"
    assert est.value <= 1.05 * 2 ** 0.25


def test_cotype_truncate_procedure():
    E = lp_space(3, 2)
    F = VectorFamily(np.diag([2.0, 1.0, 1.0]), 2)
    prefix, n = cotype_truncate(F, E, 3, delta=1.0)
    assert n == 1 and np.allclose(prefix.vectors[0], [2.0, 0, 0])
    prefix, n = cotype_truncate(F, E, 3, delta=5.0)
    assert n == 0 and prefix.size == 0
    with pytest.raises(ValueError):
        cotype_truncate(F, E, 2, delta=1.0)  # needs q > 2


def test_cotype_truncation_guarantee_random():
    rng = np.random.default_rng(7)
    eps = 0.1
    for i in range(20):
        k, n = int(rng.integers(3, 9)), int(rng.integers(2, 5))
        E = lp_space(n, ["1", "2", "inf"][i % 3])
        q = [3, 4][i % 2]
        F0 = VectorFamily(rng.standard_normal((k, n)), 2)
        F = F0.scaled(1.0 / rademacher_average(F0, E))
        delta = cotype_delta(F, E, q, eps)
        prefix, length = cotype_truncate(F, E, q, delta)
        norms = E.norms_rows(F.vectors)
        full = float(np.sum(norms**q)) ** (1 / q)
        kept = float(np.sum(E.norms_rows(prefix.vectors) ** q)) ** (1 / q) if length else 0.0
        assert kept >= 2 ** (-1 / q) * (1 - eps) ** (1 / q) * full * (1 - 1e-12)
        assert length <= delta ** (-2.0) * float(np.sum(norms**2)) * (1 + 1e-12)


def test_theorem3_budget_values():
    assert theorem3_budget(1, 4, 1.0) == 1
    assert theorem3_budget(8, 4, math.e) == 561
    # q -> inf limit: exponent 1, so ceil(n c0 (1 + ln n))
    n, c0 = 8, 2.0
    assert theorem3_budget(n, "inf", c0) == math.ceil(n * c0 * (1 + math.log(n)))
    with pytest.raises(ValueError):
        theorem3_budget(8, 2, 1.0)


def test_cotype_params_validation():
    with pytest.raises(ValueError):
        CotypeParams(1, 2)
    with pytest.raises(ValueError):
        CotypeParams(3, 2, "bernoulli")
    with pytest.raises(ValueError):
        CotypeParams(3, 0)


def test_comparison_chain_reports():
    reps = comparison_chain_report(lp_space(3, 2), 4, QUICK, mc_samples=4000)
    names = [r.name for r in reps]
    assert names == ["cotype_log_comparison", "cotype_gaussian_step", "cotype_q_dimension"]
    assert reps[2].holds  # gaussian C_q <= n^(1/q) (the constant-free link)
    reps = comparison_chain_report(lp_space(2, "inf"), 4, QUICK, mc_samples=4000)
    assert reps[2].lhs.value <= 1.02 * 2 ** 0.25
    reps = comparison_chain_report(lp_space(3, 1), 3, QUICK, mc_samples=4000)
    assert reps[2].holds


def test_embedded_norm_json_roundtrip():
    E = lp_space(3, "4/3")
    back = EmbeddedNorm.from_json(E.to_json())
    assert np.array_equal(back.embed.entries, E.embed.entries)
    assert back.embed.codomain_exp == E.embed.codomain_exp
