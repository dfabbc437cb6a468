"""Named invariant suites driving the module-level property checks.

Each suite returns a list of check results.  Hard checks are invariants
that must never fail; soft checks report empirical constants (the paper's
universal constants are never asserted) and cannot fail a run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ascent import AscentConfig
from .core import Exponent, as_exponent, conjugate, p_norm, p_norm_rows
from .cotype import (
    CotypeParams,
    EmbeddedNorm,
    cotype_delta,
    cotype_estimate,
    cotype_truncate,
    gaussian_average,
    lp_space,
    rademacher_average,
    rademacher_average_mc,
)
from .operators import MatrixOperator, bennett_sample, compose, inclusion, operator_norm
from .reductions import (
    QuotientInstance,
    ck_corollary_report,
    improved_order_report,
    interpolation_bound_check,
    limit_chain_check,
    quotient_verify,
    vector_scaling_check,
)
from .summing import (
    SummingParams,
    VectorFamily,
    jameson_delta,
    jameson_truncate,
    kwapien_check,
    pi_estimate,
    pi_exact_linf_q1,
    pi_ratio_and_grad,
    strong_norm,
    weak_norm,
)

QUICK = AscentConfig(starts=6, iters=200, patience=60)


@dataclass
class CheckResult:
    name: str
    hard: bool
    passed: bool
    detail: str = ""

    @property
    def status(self) -> str:
        if self.passed:
            return "PASS" if self.hard else "INFO"
        return "FAIL" if self.hard else "WARN"


def _rand_operator(rng, m_max=5, n_max=3, domains=("inf", "2")):
    m = int(rng.integers(1, m_max + 1))
    n = int(rng.integers(1, n_max + 1))
    u = domains[int(rng.integers(0, len(domains)))]
    v = ["2", "1"][int(rng.integers(0, 2))]
    return MatrixOperator(rng.standard_normal((n, m)), u, v)


def _rand_family(rng, T, k_max=3):
    k = int(rng.integers(1, k_max + 1))
    return VectorFamily(rng.standard_normal((k, T.cols)), T.domain_exp)


# ---------------------------------------------------------------------------
# randomized invariant checks (the acceptance bundle)


def check_homogeneity(seed: int, cases: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(cases):
        T = _rand_operator(rng)
        lam = float(rng.uniform(0.2, 5.0)) * (-1.0 if rng.integers(0, 2) else 1.0)
        k = int(rng.integers(1, 4))
        p, q = [(2, 1), (2, 2), (4, 1)][int(rng.integers(0, 3))]
        budget = QUICK.scaled(seed=1000 + i)
        a = pi_estimate(T, SummingParams(p, q, k), budget)
        b = pi_estimate(T.scale(lam), SummingParams(p, q, k), budget)
        if a.value > 0:
            worst = max(worst, abs(b.value - abs(lam) * a.value) / (abs(lam) * a.value))
    return CheckResult("homogeneity", True, worst <= 1e-9, f"{cases} cases, worst rel {worst:.2e}")


def check_k_monotonicity(seed: int, cases: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(cases):
        T = _rand_operator(rng)
        k = int(rng.integers(1, 4))
        p, q = [(2, 1), (2, 2), (4, 2)][int(rng.integers(0, 3))]
        budget = QUICK.scaled(seed=2000 + i)
        a = pi_estimate(T, SummingParams(p, q, k), budget)
        warm = [a.witness.padded(1)] if a.witness is not None else ()
        b = pi_estimate(T, SummingParams(p, q, k + 1), budget, warm_starts=warm)
        if a.value > 0:
            worst = max(worst, (a.value - b.value) / a.value)
    return CheckResult("k_monotonicity", True, worst <= 1e-9,
                       f"{cases} cases, worst deficit {worst:.2e}")


def check_weak_q_monotonicity(seed: int, cases: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(cases):
        # the smaller-q side is always an exact method, so the comparison
        # of the lower estimate against it is sound
        u = ["inf", "2"][int(rng.integers(0, 2))]
        k = int(rng.integers(1, 5))
        m = int(rng.integers(1, 5))
        F = VectorFamily(rng.standard_normal((k, m)), u)
        pairs = [(1, 2), (2, 4), (1, "inf")] if u == "inf" else [(1, 2), (2, 4)]
        q1, q2 = pairs[int(rng.integers(0, len(pairs)))]
        w1 = weak_norm(F, q1).value
        w2 = weak_norm(F, q2, cfg=QUICK.scaled(seed=3000 + i)).value
        if w1 > 0:
            worst = max(worst, (w2 - w1) / w1)
    return CheckResult("weak_q_monotonicity", True, worst <= 1e-9,
                       f"{cases} cases, worst excess {worst:.2e}")


def check_zero_padding(seed: int, cases: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(cases):
        T = _rand_operator(rng)
        F = _rand_family(rng, T)
        G = F.padded(int(rng.integers(1, 3)))
        q = [1, 2][int(rng.integers(0, 2))]
        p = [1, 2, 4][int(rng.integers(0, 3))]
        dw = abs(weak_norm(F, q).value - weak_norm(G, q).value)
        ds = abs(strong_norm(F, T, p) - strong_norm(G, T, p))
        scale = max(weak_norm(F, q).value, strong_norm(F, T, p), 1e-30)
        worst = max(worst, dw / scale, ds / scale)
    return CheckResult("zero_padding", True, worst <= 1e-12,
                       f"{cases} cases, worst rel change {worst:.2e}")


def check_kwapien(seed: int, cases: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    quads = [((2, 1), ("inf", 2)), ((2, 1), (4, "4/3")), ((4, 2), ("inf", 4)),
             ((2, 2), (2, 2))]
    bad = 0
    for i in range(cases):
        T = _rand_operator(rng)
        (p, q), (pbar, qbar) = quads[int(rng.integers(0, len(quads)))]
        k = int(rng.integers(1, 4))
        rep = kwapien_check(T, p, q, pbar, qbar, k, budget=QUICK.scaled(seed=4000 + i))
        if not rep.holds:
            bad += 1
    return CheckResult("kwapien", True, bad == 0, f"{cases} cases, {bad} violations")


def check_subgradient(seed: int, cases: int) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    h = 1e-6
    for i in range(cases):
        T = _rand_operator(rng)
        F = _rand_family(rng, T)
        p, q = [(2, 1), (2, 2), (4, 1)][int(rng.integers(0, 3))]
        val, grad = pi_ratio_and_grad(F, T, p, q)
        if not np.isfinite(val):
            continue
        fd = np.zeros_like(grad)
        base = F.vectors.copy()
        for idx in np.ndindex(base.shape):
            e = np.zeros_like(base)
            e[idx] = h
            vp, _ = pi_ratio_and_grad(VectorFamily(base + e, F.ambient_exp), T, p, q)
            vm, _ = pi_ratio_and_grad(VectorFamily(base - e, F.ambient_exp), T, p, q)
            fd[idx] = (vp - vm) / (2 * h)
        denom = np.linalg.norm(fd)
        if denom > 1e-8:
            worst = max(worst, float(np.linalg.norm(grad - fd)) / denom)
    return CheckResult("subgradient_fd", True, worst <= 1e-4,
                       f"{cases} cases, worst rel {worst:.2e}")


def suite_invariants(seed: int, cases: int = 500):
    """The randomized acceptance bundle, `cases` total across six checks."""
    share = max(cases // 10, 1)
    return [
        check_homogeneity(seed, 2 * share),
        check_k_monotonicity(seed + 1, 2 * share),
        check_weak_q_monotonicity(seed + 2, 2 * share),
        check_zero_padding(seed + 3, 2 * share),
        check_kwapien(seed + 4, share),
        check_subgradient(seed + 5, share),
    ]


# ---------------------------------------------------------------------------
# module suites


def suite_core(seed: int, cases: int = 60):
    rng = np.random.default_rng(seed)
    exps = [Exponent(1), Exponent("4/3"), Exponent(2), Exponent(3), Exponent(8), Exponent("inf")]
    ok_h = ok_m = ok_hol = True
    for _ in range(cases):
        x = rng.standard_normal(int(rng.integers(1, 8)))
        lam = float(rng.uniform(-4, 4))
        e = exps[int(rng.integers(0, len(exps)))]
        a, b = p_norm(lam * x, e), abs(lam) * p_norm(x, e)
        ok_h &= abs(a - b) <= 1e-12 * max(1.0, b)
        vals = [p_norm(x, ee) for ee in exps]
        ok_m &= all(vals[i] >= vals[i + 1] - 1e-12 * max(1.0, vals[i]) for i in range(len(vals) - 1))
        y = rng.standard_normal(x.size)
        ok_hol &= abs(float(x @ y)) <= p_norm(x, e) * p_norm(y, conjugate(e)) * (1 + 1e-12)
    conj_ok = all(conjugate(conjugate(e)) == e for e in exps)
    return [
        CheckResult("pnorm_homogeneity", True, ok_h, f"{cases} cases"),
        CheckResult("pnorm_exponent_monotone", True, ok_m, f"{cases} cases"),
        CheckResult("holder_pairing", True, ok_hol, f"{cases} cases"),
        CheckResult("conjugate_involution", True, conj_ok, "exact on rational grid"),
    ]


def suite_operators(seed: int, cases: int = 40):
    rng = np.random.default_rng(seed)
    sub_ok = wit_ok = sound_ok = True
    worst_sub = worst_wit = worst_sound = 0.0
    for i in range(cases):
        n = int(rng.integers(1, 4))
        m = int(rng.integers(1, 5))
        B = MatrixOperator(rng.standard_normal((m, int(rng.integers(1, 5)))), "inf", "inf")
        A = MatrixOperator(rng.standard_normal((n, m)), "inf", 2)
        na, nb = operator_norm(A), operator_norm(B)
        nab = operator_norm(compose(A, B))
        if na.kind == nb.kind == nab.kind == "exact":
            excess = nab.value / (na.value * nb.value) - 1.0 if na.value * nb.value else 0.0
            worst_sub = max(worst_sub, excess)
            sub_ok &= excess <= 1e-9
        for est, T in ((na, A), (nb, B)):
            if est.witness is not None and est.value > 0:
                ratio = p_norm(T.apply(est.witness), T.codomain_exp) / p_norm(est.witness, T.domain_exp)
                dev = abs(ratio - est.value) / est.value
                worst_wit = max(worst_wit, dev)
                wit_ok &= dev <= 1e-9
        low = operator_norm(A, cfg=QUICK.scaled(seed=i), method="ascent")
        excess = low.value / na.value - 1.0 if na.value else 0.0
        worst_sound = max(worst_sound, excess)
        sound_ok &= excess <= 1e-9
    return [
        CheckResult("submultiplicativity", True, sub_ok, f"worst excess {worst_sub:.2e}"),
        CheckResult("witness_validity", True, wit_ok, f"worst deviation {worst_wit:.2e}"),
        CheckResult("lower_bound_soundness", True, sound_ok, f"worst excess {worst_sound:.2e}"),
    ]


def suite_oracle(seed: int, cases: int = 30):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for i in range(cases):
        m = int(rng.integers(1, 7))
        n = int(rng.integers(1, 4))
        k = int(rng.integers(1, 4))
        p = [1, 2, 4][int(rng.integers(0, 3))]
        T = MatrixOperator(rng.standard_normal((n, m)), "inf", 2)
        oracle = pi_exact_linf_q1(T, p, k)
        est = pi_estimate(T, SummingParams(p, 1, k), QUICK.scaled(starts=8, iters=300, seed=i))
        if oracle.value > 0:
            worst = max(worst, abs(est.value - oracle.value) / oracle.value)
    return [CheckResult("oracle_equivalence", True, worst <= 1e-3,
                        f"{cases} cases, worst rel {worst:.2e}")]


def suite_ideal(seed: int, cases: int = 20):
    """pi_p1(A T B) <= ||A|| pi_p1(T) ||B|| on oracle-exact instances."""
    rng = np.random.default_rng(seed)
    ok = True
    worst = 0.0
    for _ in range(cases):
        m = int(rng.integers(1, 5))
        n = int(rng.integers(1, 4))
        T = MatrixOperator(rng.standard_normal((n, m)), "inf", 2)
        B = MatrixOperator(rng.standard_normal((m, int(rng.integers(1, 5)))), "inf", "inf")
        A = MatrixOperator(rng.standard_normal((int(rng.integers(1, 4)), n)), 2, 2)
        p = [1, 2][int(rng.integers(0, 2))]
        k = int(rng.integers(1, 4))
        lhs = pi_exact_linf_q1(compose(A, compose(T, B)), p, k).value
        rhs = operator_norm(A).value * pi_exact_linf_q1(T, p, k).value * operator_norm(B).value
        if rhs > 0:
            excess = lhs / rhs - 1.0
            worst = max(worst, excess)
            ok &= excess <= 1e-9
    return [CheckResult("ideal_property", True, ok, f"{cases} cases, worst excess {worst:.2e}")]


def suite_tomczak(seed: int, cases: int = 10):
    rng = np.random.default_rng(seed)
    bad = 0
    worst = 0.0
    for i in range(cases):
        n = int(rng.integers(1, 4))
        d = n + int(rng.integers(1, 4))
        domain = ["2", "inf"][i % 2]
        G = rng.standard_normal((d, n)) @ rng.standard_normal((n, d))
        T = MatrixOperator(G, domain, 2)
        budget = QUICK.scaled(starts=8, iters=300, seed=5000 + i)
        small = pi_estimate(T, SummingParams(2, 2, n), budget)
        warm = [small.witness.padded(3 * n)] if small.witness is not None else ()
        big = pi_estimate(T, SummingParams(2, 2, 4 * n), budget, warm_starts=warm)
        ratio = big.value / small.value if small.value else 1.0
        worst = max(worst, ratio)
        if ratio > math.sqrt(2) * 1.01:
            bad += 1
    return [CheckResult("tomczak", True, bad == 0,
                        f"{cases} rank-n operators, worst ratio {worst:.4f} vs sqrt(2)*1.01")]


def suite_jameson(seed: int, cases: int = 50):
    rng = np.random.default_rng(seed)
    eps = 0.1
    bad_value = bad_count = 0
    for i in range(cases):
        m = int(rng.integers(2, 6))
        n = int(rng.integers(1, 4))
        k = int(rng.integers(3, 9))
        T = MatrixOperator(rng.standard_normal((n, m)), "inf", 2)
        p, q = [(2, 1), (4, 2), (3, 1)][int(rng.integers(0, 3))]
        F0 = VectorFamily(rng.standard_normal((k, m)), "inf")
        w = weak_norm(F0, q).value
        F = F0.scaled(1.0 / w)
        delta = jameson_delta(F, T, p, q, eps)
        prefix, length = jameson_truncate(F, T, p, q, delta)
        full = strong_norm(F, T, p)
        kept = strong_norm(prefix, T, p) if length else 0.0
        guarantee = 2.0 ** (-1.0 / p) * (1.0 - eps) ** (1.0 / p) * full
        if kept < guarantee * (1 - 1e-12):
            bad_value += 1
        norms = p_norm_rows(F.vectors @ T.entries.T, T.codomain_exp)
        qmass = float(np.sum(norms ** float(q)))
        if length > delta ** (-float(q)) * qmass * (1 + 1e-12):
            bad_count += 1
    return [
        CheckResult("jameson_value_guarantee", True, bad_value == 0,
                    f"{cases} cases, {bad_value} below the 2^(-1/p) guarantee"),
        CheckResult("jameson_prefix_bound", True, bad_count == 0,
                    f"{cases} cases, {bad_count} beyond delta^-q * q-mass"),
    ]


def suite_quotient(seed: int, cases: int = 3):
    from .experiments import _quotient_instance

    results = []
    for name in ("scalar", "id_l2_2", "random_linf3"):
        rep = quotient_verify(_quotient_instance(name, seed), seed=seed,
                              n_candidates=20, budget=QUICK.scaled(starts=8, iters=300))
        results.append(CheckResult(
            f"quotient_sound[{name}]", True, rep.context["sound"],
            f"{rep.context['sound_violations']} violations over 20 candidates"))
        results.append(CheckResult(
            f"quotient_equality[{name}]", True, rep.holds,
            f"lhs {rep.lhs.value:.6g} rhs {rep.rhs.value:.6g}"))
    return results


def suite_scaling(seed: int, cases: int = 12):
    rng = np.random.default_rng(seed)
    bad = 0
    total = 0
    for (alpha, c) in ((1, 1.0), (2, 2.0), (2, 1.5), (1, 4.0)):
        for p in (1, 2, 4):
            T = MatrixOperator(rng.standard_normal((3, 4)), "inf", 2)
            rep = vector_scaling_check(T, p, alpha, c, budget=QUICK)
            total += 1
            bad += 0 if rep.holds else 1
    rep_iota = vector_scaling_check(inclusion(4, "inf", 2), 2, 2, 2.0, budget=QUICK)
    total += 1
    bad += 0 if rep_iota.holds else 1
    return [CheckResult("vector_scaling", True, bad == 0, f"{total} grid points, {bad} violations")]


def suite_interpolation(seed: int, cases: int = 9):
    bad = 0
    total = 0
    for n in (1, 2, 4):
        for q in ("1", "3/2", "2"):
            for theta in ("1/4", "1/2", "3/4"):
                rep = interpolation_bound_check(n, q, theta, budget=QUICK.scaled(seed=seed))
                total += 1
                bad += 0 if rep.holds else 1
    return [CheckResult("interpolation_bound", True, bad == 0,
                        f"{total} grid points, {bad} estimates above n^(1/p)")]


def suite_cotype(seed: int, cases: int = 20):
    rng = np.random.default_rng(seed)
    results = []
    bad_mc = 0
    for i in range(cases):
        k = int(rng.integers(1, 11))
        n = int(rng.integers(1, 5))
        E = lp_space(n, ["1", "2", "inf"][int(rng.integers(0, 3))])
        F = VectorFamily(rng.standard_normal((k, n)), 2)
        exact = rademacher_average(F, E)
        mc, se = rademacher_average_mc(F, E, 3000, seed=100 + i)
        if abs(mc - exact) > 4 * se + 1e-12:
            bad_mc += 1
    results.append(CheckResult("rademacher_exact_vs_mc", True, bad_mc == 0,
                               f"{cases} cases, {bad_mc} beyond 4 standard errors"))

    bad_q = 0
    for i in range(10):
        E = lp_space(3, "inf")
        est = cotype_estimate(E, CotypeParams(2, 3), QUICK.scaled(seed=i))
        fam = est.witness
        vals = []
        for q in (2, 3, 4):
            norms = E.norms_rows(fam.vectors)
            avg = rademacher_average(fam, E)
            vals.append(p_norm(norms, q) / avg)
        if not all(vals[j] >= vals[j + 1] - 1e-12 for j in range(len(vals) - 1)):
            bad_q += 1
    results.append(CheckResult("cotype_q_monotone_on_witness", True, bad_q == 0,
                               f"10 witnesses, {bad_q} violations"))

    bad_k = 0
    for i in range(10):
        E = lp_space(2, "1")
        a = cotype_estimate(E, CotypeParams(3, 2), QUICK.scaled(seed=i))
        warm = [a.witness.padded(1)] if a.witness is not None else ()
        b = cotype_estimate(E, CotypeParams(3, 3), QUICK.scaled(seed=i), warm_starts=warm)
        if b.value < a.value * (1 - 1e-9):
            bad_k += 1
    results.append(CheckResult("cotype_k_monotone", True, bad_k == 0, "10 cases"))

    flags = 0
    for i in range(10):
        k = int(rng.integers(1, 8))
        n = int(rng.integers(1, 4))
        E = lp_space(n, ["1", "2", "inf"][int(rng.integers(0, 3))])
        F = VectorFamily(rng.standard_normal((k, n)), 2)
        g, se = gaussian_average(F, E, 4000, seed=200 + i)
        r = rademacher_average(F, E)
        if g < math.sqrt(2.0 / math.pi) * r - 4 * se:
            flags += 1
    results.append(CheckResult("gaussian_dominates_rademacher", False, flags == 0,
                               f"10 cases, {flags} flagged (soft comparison)"))

    eps = 0.1
    bad_tr = 0
    for i in range(15):
        k = int(rng.integers(3, 9))
        n = int(rng.integers(2, 5))
        E = lp_space(n, ["1", "2", "inf"][int(rng.integers(0, 3))])
        q = [3, 4][int(rng.integers(0, 2))]
        F = VectorFamily(rng.standard_normal((k, n)), 2)
        avg = rademacher_average(F, E)
        F = F.scaled(1.0 / avg)
        delta = cotype_delta(F, E, q, eps)
        prefix, length = cotype_truncate(F, E, q, delta)
        norms = E.norms_rows(F.vectors)
        full = p_norm(norms, q)
        kept = p_norm(E.norms_rows(prefix.vectors), q) if length else 0.0
        if kept < 2.0 ** (-1.0 / q) * (1 - eps) ** (1.0 / q) * full * (1 - 1e-12):
            bad_tr += 1
        if length > delta ** (-2.0) * float(np.sum(norms**2)) * (1 + 1e-12):
            bad_tr += 1
    results.append(CheckResult("cotype_truncation", True, bad_tr == 0,
                               f"15 cases, {bad_tr} violations"))
    return results


def suite_bennett_stat(seed: int, cases: int = 50):
    ratios = []
    for s_val in (2, 4):
        s = Exponent(s_val)
        sprime = conjugate(s)
        for n in (2, 4):
            m = math.ceil(n ** (s_val / 2.0))
            for j in range(cases // 4 + 1):
                A = bennett_sample(m, n, sprime, seed + j)
                retyped = MatrixOperator(A.entries, sprime, 2)
                nrm = operator_norm(retyped, cfg=QUICK.scaled(seed=j)).value
                ratios.append(nrm / (math.sqrt(s_val) * max(math.sqrt(n), m ** (1.0 / s_val))))
    detail = (f"{len(ratios)} samples, ratio ||A||/(sqrt(s) max(n^1/2, m^1/s)) "
              f"in [{min(ratios):.3f}, {max(ratios):.3f}], mean {np.mean(ratios):.3f}")
    return [CheckResult("bennett_norm_statistic", False, True, detail)]


def suite_limit(seed: int, cases: int = 6):
    rng = np.random.default_rng(seed)
    results = []
    y = rng.standard_normal(3)
    x = rng.standard_normal(4)
    rank1 = MatrixOperator(np.outer(y, x), "inf", 2)
    rep = limit_chain_check(rank1, 2, budget=QUICK)
    chat = rep.context["c_hat"]
    results.append(CheckResult("limit_chain_rank1", True, chat <= 1.0 + 1e-6,
                               f"c_hat = {chat:.6f} (rank one: summing norms coincide)"))
    for r in ("3/2", "2", "4"):
        rep = limit_chain_check(inclusion(4, "inf", 2), r, budget=QUICK)
        results.append(CheckResult(f"limit_chain_iota[r={r}]", False, True,
                                   f"c_hat = {rep.context['c_hat']:.4f}"))
    return results


def suite_orders(seed: int, cases: int = 4):
    rng = np.random.default_rng(seed)
    results = []
    T = MatrixOperator(rng.standard_normal((3, 4)), "inf", 2)
    for (p, q) in (("2", "1"), ("4", "2")):
        rep = improved_order_report(T, p, q, budget=QUICK)
        results.append(CheckResult(f"improved_order[p={p},q={q}]", False, True,
                                   f"case {rep.context['case']}, m = {rep.context['m']}, "
                                   f"c_hat = {rep.context['c_hat']:.4f}"))
    for p in ("3", "3/2"):
        rep = ck_corollary_report(T, p, budget=QUICK)
        results.append(CheckResult(f"ck_corollary[p={p}]", False, True,
                                   f"k_n = {rep.context['k_n']}, c_hat = {rep.context['c_hat']:.4f}"))
    return results


SUITES = {
    "core": suite_core,
    "operators": suite_operators,
    "oracle": suite_oracle,
    "ideal": suite_ideal,
    "invariants": suite_invariants,
    "kwapien": lambda seed, cases=50: [check_kwapien(seed, cases)],
    "tomczak": suite_tomczak,
    "jameson": suite_jameson,
    "quotient": suite_quotient,
    "scaling": suite_scaling,
    "interpolation": suite_interpolation,
    "cotype": suite_cotype,
    "bennett_stat": suite_bennett_stat,
    "limit": suite_limit,
    "orders": suite_orders,
}


def run_suite(tag: str, seed: int = 0, cases: int | None = None):
    """Run one named suite; raises KeyError for unknown tags."""
    if tag == "all":
        out = []
        for name in SUITES:
            out.extend(run_suite(name, seed))
        return out
    fn = SUITES[tag]
    return fn(seed) if cases is None else fn(seed, cases)
