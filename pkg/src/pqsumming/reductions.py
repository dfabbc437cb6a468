"""Quotient-formula reductions and inequality verification harnesses.

The quotient formula expresses pi_pq^k(T) as a supremum of pi_r1^k over
compositions T V D_sigma with contractive V: l_q' -> X and sigma in the
unit ball of l_s, where 1/r = 1/p + 1/s.  Both proof directions are
executable: the Holder-equality certificate turns any good pi_pq^k
witness into a candidate (V, sigma) whose pi_r1 value reproduces it, and
the extreme-point reduction turns any candidate's disjoint witness back
into a feasible pi_pq^k family, so sampled candidates can never exceed
the left-hand side beyond numerical tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .ascent import AscentConfig, DEFAULT
from .core import Exponent, REL_TOL, as_exponent, conjugate, p_norm, p_norm_rows
from .operators import (
    CapExceeded,
    MatrixOperator,
    NormEstimate,
    SigmaDiagonal,
    column_holder_upper,
    compose,
    operator_norm,
)
from .summing import (
    SummingParams,
    VectorFamily,
    pi_estimate,
    pi_exact_linf_q1,
    round_to_disjoint,
    strong_norm,
    weak_norm,
)

# Two optimization lower bounds are called equal when they agree to this.
EQUALITY_RTOL = 0.05
SOUND_RTOL = 1e-6


@dataclass(frozen=True)
class QuotientInstance:
    """Operator plus exponents (p, q, r, s) with 1/r = 1/p + 1/s exactly."""

    T: MatrixOperator
    p: Exponent
    q: Exponent
    r: Exponent
    s: Exponent
    k: int

    def __init__(self, T, p, q, r, s, k):
        p, q, r, s = map(as_exponent, (p, q, r, s))
        if q > p:
            raise ValueError("need q <= p")
        if r.reciprocal != p.reciprocal + s.reciprocal:
            raise ValueError(f"need 1/r = 1/p + 1/s exactly, got r={r}, p={p}, s={s}")
        qprime = conjugate(q)
        if not (Exponent(1) <= r <= s <= qprime):
            raise ValueError(f"need 1 <= r <= s <= q' = {qprime}")
        if k < 1:
            raise ValueError("k must be positive")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "k", int(k))


@dataclass
class InequalityReport:
    """One verified inequality: lhs vs rhs with context."""

    name: str
    lhs: NormEstimate
    rhs: NormEstimate
    ratio: float
    holds: bool
    context: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "ratio": self.ratio,
            "holds": self.holds,
            "context": {k: v for k, v in self.context.items()},
        }

    def csv_row(self) -> list:
        params = ";".join(f"{k}={v}" for k, v in sorted(self.context.items()))
        return [self.name, params, self.lhs.value, self.rhs.value, self.ratio, self.holds]


CSV_REPORT_HEADER = ["name", "params", "lhs", "rhs", "ratio", "holds"]


def safe_ratio(lhs: float, rhs: float) -> float:
    if rhs == 0.0:
        return 1.0 if lhs == 0.0 else math.inf
    return lhs / rhs


def make_report(name, lhs: NormEstimate, rhs: NormEstimate, holds: bool, context=None):
    return InequalityReport(name, lhs, rhs, safe_ratio(lhs.value, rhs.value), holds, context or {})


# ---------------------------------------------------------------------------
# certificate direction ("<=")


def quotient_certificate(F: VectorFamily, T: MatrixOperator, p, q, s):
    """The (V, sigma) realizing the Holder-equality step for a family.

    V stacks the family as columns, typed l_q'^k -> l_u^m; sigma has unit
    l_s norm with sigma_j proportional to ||T x_j||^(p/s), which turns the
    p-aggregated strong norm into the r-aggregated one exactly.  Families
    with zero images get sigma = e_1; s = inf degenerates to uniform
    weights (p = inf concentrates on the largest image instead).
    """
    p, q, s = map(as_exponent, (p, q, s))
    qprime = conjugate(q)
    V = MatrixOperator(F.vectors.T, qprime, F.ambient_exp)
    norms = p_norm_rows(F.vectors @ T.entries.T, T.codomain_exp)
    k = F.size
    if norms.max() == 0.0:
        sigma = np.zeros(k)
        sigma[0] = 1.0
    elif s.is_inf:
        sigma = np.ones(k)
    elif p.is_inf:
        sigma = np.zeros(k)
        sigma[int(np.argmax(norms))] = 1.0
    else:
        weights = np.power(norms, float(p) / float(s))
        sigma = weights / p_norm(weights, s)
    return V, sigma


# ---------------------------------------------------------------------------
# extreme-point direction (">=")


def blocks_from_family(F: VectorFamily):
    """Decompose a disjoint sign family into (indices, signs) blocks."""
    blocks = []
    used = None
    for row in F.vectors:
        idx = np.nonzero(row)[0]
        if used is not None and np.intersect1d(idx, used).size:
            raise ValueError("family rows are not disjointly supported")
        used = idx if used is None else np.union1d(used, idx)
        blocks.append((idx, np.sign(row[idx])))
    return blocks


def maurey_reduce(sigma, blocks, qprime):
    """tau and the column-normalized J from an extreme point U = sum e_k (x) g_k.

    tau_k = ||D_sigma(g_k)||_q'; J's k-th column is D_sigma(g_k)/tau_k, so
    J: l_q'^k -> l_q'^m is a contraction (disjoint unit columns) and
    ||tau||_s <= ||sigma||_s for every s <= q'.  Blocks with
    D_sigma(g_k) = 0 are dropped together with their column.
    """
    qprime = as_exponent(qprime)
    sigma = np.asarray(sigma, dtype=float)
    m = sigma.size
    taus, cols = [], []
    for idx, signs in blocks:
        g = np.zeros(m)
        if len(idx):
            g[idx] = signs
        d = sigma * g
        t = p_norm(d, qprime)
        if t == 0.0:
            continue
        taus.append(t)
        cols.append(d / t)
    if not cols:
        return np.zeros(0), MatrixOperator(np.zeros((m, 0)), qprime, qprime)
    J = MatrixOperator(np.stack(cols, axis=1), qprime, qprime)
    tau = np.array(taus)
    # disjoint unit columns make J an isometric embedding
    col_norms = p_norm_rows(J.entries.T, qprime)
    if col_norms.size and col_norms.max() > 1.0 + REL_TOL:
        raise AssertionError("maurey reduction produced an expanding column")
    return tau, J


def _sample_sigma(m: int, s: Exponent, rng) -> np.ndarray:
    """A point on the unit sphere of l_s^m."""
    if s.is_inf:
        x = rng.uniform(-1.0, 1.0, m)
        mx = np.abs(x).max()
        if mx == 0.0:
            x[0] = 1.0
            return x
        return x / mx
    sf = float(s)
    mags = rng.gamma(1.0 / sf, 1.0, m) ** (1.0 / sf)
    x = mags * rng.choice([-1.0, 1.0], m)
    return x / p_norm(x, s)


def _sample_contraction(m: int, cols: int, qprime: Exponent, u: Exponent, rng) -> MatrixOperator:
    """A random operator l_q'^cols -> l_u^m rescaled to be a contraction.

    The rescaling divides by a guaranteed upper bound of the norm
    (columnwise Holder), tightened by the exact norm when one is cheap,
    so the result is a true contraction and candidates stay sound.
    """
    G = MatrixOperator(rng.standard_normal((m, cols)), qprime, u)
    bound = column_holder_upper(G)
    exact = operator_norm(G, method="auto")
    if exact.kind == "exact":
        bound = exact.value
    if bound == 0.0:
        return G
    return G.scale(1.0 / (bound * (1.0 + 1e-12)))


def _pi_r1(M: MatrixOperator, r: Exponent, k: int, budget: AscentConfig):
    """pi_r1^k of a composition, exact when the partition oracle is feasible."""
    try:
        return pi_exact_linf_q1(M, r, k)
    except CapExceeded:
        return pi_estimate(M, SummingParams(r, Exponent(1), k), budget)


def _eval_candidate(inst: QuotientInstance, V: MatrixOperator, sigma: np.ndarray,
                    budget: AscentConfig):
    """Value of one (V, sigma) candidate plus its certified pull-back family."""
    qprime = conjugate(inst.q)
    D = SigmaDiagonal(sigma, qprime).as_operator()
    M = compose(compose(inst.T, V), D)
    est = _pi_r1(M, inst.r, inst.k, budget)
    certified_family = None
    certified_value = 0.0
    if isinstance(est.witness, VectorFamily) and est.witness.size:
        disjoint = est.witness if est.method == "partition_oracle" else round_to_disjoint(est.witness)
        tau, J = maurey_reduce(sigma, blocks_from_family(disjoint), qprime)
        if J.cols:
            VJ = compose(V, J)
            fam = np.zeros((inst.k, inst.T.cols))
            fam[: VJ.cols] = VJ.entries.T
            certified_family = VectorFamily(fam, inst.T.domain_exp)
            certified_value = strong_norm(certified_family, inst.T, inst.p)
    return {
        "V": V,
        "sigma": sigma,
        "value": est.value,
        "estimate": est,
        "certified_family": certified_family,
        "certified_value": certified_value,
    }


def quotient_candidates(inst: QuotientInstance, n_candidates: int, seed: int,
                        budget: AscentConfig = DEFAULT):
    """Random contraction pairs (V, sigma), each evaluated via pi_r1^k."""
    rng = np.random.default_rng(seed)
    qprime = conjugate(inst.q)
    out = []
    for _ in range(n_candidates):
        V = _sample_contraction(inst.T.cols, inst.T.cols, qprime, inst.T.domain_exp, rng)
        sigma = _sample_sigma(inst.T.cols, inst.s, rng)
        out.append(_eval_candidate(inst, V, sigma, budget))
    return out


def quotient_rhs(inst: QuotientInstance, n_candidates: int, seed: int,
                 budget: AscentConfig = DEFAULT) -> NormEstimate:
    """Lower bound on the right-hand supremum of the quotient formula.

    Combines the certificate built from the best pi_pq^k witness with
    n_candidates random contraction pairs.
    """
    if np.all(inst.T.entries == 0.0):
        return NormEstimate(0.0, "exact", "zero")
    lhs = pi_estimate(inst.T, SummingParams(inst.p, inst.q, inst.k), budget)
    best_val, best_witness = 0.0, None
    if isinstance(lhs.witness, VectorFamily):
        V, sigma = quotient_certificate(lhs.witness, inst.T, inst.p, inst.q, inst.s)
        rec = _eval_candidate(inst, V, sigma, budget)
        best_val, best_witness = rec["value"], rec["estimate"].witness
    for rec in quotient_candidates(inst, n_candidates, seed, budget):
        if rec["value"] > best_val:
            best_val, best_witness = rec["value"], rec["estimate"].witness
    return NormEstimate(best_val, "lower", "quotient_rhs", witness=best_witness)


def quotient_verify(inst: QuotientInstance, seed: int, n_candidates: int = 40,
                    budget: AscentConfig = DEFAULT,
                    equality_rtol: float = EQUALITY_RTOL) -> InequalityReport:
    """Check both directions of the quotient formula on one instance.

    lhs is the pi_pq^k estimate (boosted by families pulled back from the
    sampled candidates, which are always feasible); rhs is the sampled
    supremum including the certificate candidate.  Reports 5%-equality and
    counts soundness violations rhs_candidate > (1 + tol) * lhs, which the
    extreme-point construction rules out up to numerics.
    """
    p, q, k = inst.p, inst.q, inst.k
    context = {"p": str(p), "q": str(q), "r": str(inst.r), "s": str(inst.s),
               "k": k, "seed": seed, "candidates": n_candidates}
    if np.all(inst.T.entries == 0.0):
        zero = NormEstimate(0.0, "exact", "zero")
        return make_report("quotient", zero, zero, True,
                           {**context, "sound": True, "sound_violations": 0})

    lhs_est = pi_estimate(inst.T, SummingParams(p, q, k), budget)
    records = quotient_candidates(inst, n_candidates, seed, budget)

    lhs_val = lhs_est.value
    best_family = lhs_est.witness
    for rec in records:
        if rec["certified_family"] is not None and rec["certified_value"] > lhs_val:
            lhs_val = rec["certified_value"]
            best_family = rec["certified_family"]

    rhs_val = max((rec["value"] for rec in records), default=0.0)
    if isinstance(best_family, VectorFamily):
        V, sigma = quotient_certificate(best_family, inst.T, p, q, inst.s)
        rec = _eval_candidate(inst, V, sigma, budget)
        rhs_val = max(rhs_val, rec["value"])

    violations = sum(1 for rec in records if rec["value"] > (1.0 + SOUND_RTOL) * lhs_val)
    holds = abs(lhs_val - rhs_val) <= equality_rtol * max(lhs_val, rhs_val)
    lhs = NormEstimate(lhs_val, "lower", "pi_estimate+pullback", witness=best_family)
    rhs = NormEstimate(rhs_val, "lower", "quotient_rhs")
    return make_report("quotient", lhs, rhs, holds,
                       {**context, "sound": violations == 0, "sound_violations": violations})


# ---------------------------------------------------------------------------
# inequality-chain harnesses


def limit_rate(n: int, r) -> float:
    """The rank-dependent factor comparing pi_1 with pi_r1 (three branches)."""
    r = as_exponent(r)
    if n < 1:
        raise ValueError("rank must be positive")
    if r < 2:
        return math.sqrt(n)
    if r == 2:
        return math.sqrt(n * (1.0 + math.log(n)))
    return n ** float(conjugate(r).reciprocal)


def limit_chain_check(T: MatrixOperator, r, budget: AscentConfig = DEFAULT,
                      k_budget: int | None = None) -> InequalityReport:
    """Empirical constant in pi_1 <= c * pi_r1 * rate(n, r) for rank-n T.

    Constant-reporting only: the universal constant is never asserted.
    """
    r = as_exponent(r)
    if not T.domain_exp.is_inf:
        raise ValueError("the chain reduces to operators on l_inf")
    n = T.rank()
    context = {"r": str(r), "rank": n}
    if n == 0:
        zero = NormEstimate(0.0, "exact", "zero")
        return make_report("limit_chain", zero, zero, True, {**context, "skipped": True})
    k = k_budget if k_budget is not None else 4 * n
    pi1 = _pi_r1(T, Exponent(1), k, budget)
    pir1 = _pi_r1(T, r, k, budget)
    rate = limit_rate(n, r)
    chat = safe_ratio(pi1.value, pir1.value * rate)
    return make_report("limit_chain", pi1, pir1, True,
                       {**context, "k": k, "rate": rate, "c_hat": chat})


def vector_scaling_check(T: MatrixOperator, p, alpha: int, c: float,
                         budget: AscentConfig = DEFAULT) -> InequalityReport:
    """pi_p1^[c*alpha](T) <= (4c)^(1/p) pi_p1^[alpha](T), c >= 1."""
    p = as_exponent(p)
    if alpha < 1 or c < 1.0:
        raise ValueError("need alpha >= 1 and c >= 1")
    context = {"p": str(p), "alpha": alpha, "c": c}
    if np.all(T.entries == 0.0):
        zero = NormEstimate(0.0, "exact", "zero")
        return make_report("vector_scaling", zero, zero, True, context)
    k_small, k_big = alpha, int(math.floor(c * alpha))
    big = _pi_r1(T, p, k_big, budget) if T.domain_exp.is_inf else pi_estimate(
        T, SummingParams(p, 1, k_big), budget)
    small = _pi_r1(T, p, k_small, budget) if T.domain_exp.is_inf else pi_estimate(
        T, SummingParams(p, 1, k_small), budget)
    factor = (4.0 * c) ** float(p.reciprocal)
    holds = big.value <= (1.0 + SOUND_RTOL) * factor * small.value
    return make_report("vector_scaling", big, small, holds, {**context, "factor": factor})


def interpolation_params(q, theta):
    """The (r, p) pair of the interpolation bound: 1/r = (1-theta)/q + theta/2,
    1/p = 1/q - theta/2."""
    q = as_exponent(q)
    th = Fraction(theta)
    if not 0 < th < 1:
        raise ValueError("theta must lie in (0, 1)")
    if not Exponent(1) <= q <= Exponent(2):
        raise ValueError("need 1 <= q <= 2")
    rec_r = (1 - th) * q.reciprocal + th * Fraction(1, 2)
    rec_p = q.reciprocal - th * Fraction(1, 2)
    from .core import from_reciprocal

    return from_reciprocal(rec_r), from_reciprocal(rec_p)


def interpolation_bound_check(n: int, q, theta, k_budget: int | None = None,
                              budget: AscentConfig = DEFAULT) -> InequalityReport:
    """Estimate pi_pq^k(iota: l_q'^n -> l_r^n) and compare with n^(1/p).

    A lower estimate can never exceed the interpolation upper bound, so the
    check asserts estimate <= (1 + tol) * n^(1/p).
    """
    q = as_exponent(q)
    r, p = interpolation_params(q, theta)
    from .operators import inclusion

    iota = inclusion(n, conjugate(q), r)
    k = k_budget if k_budget is not None else max(2 * n, 4)
    est = pi_estimate(iota, SummingParams(p, q, k), budget)
    bound_val = n ** float(p.reciprocal)
    bound = NormEstimate(bound_val, "upper", "interpolation_bound")
    holds = est.value <= (1.0 + 1e-4) * bound_val
    return make_report("interpolation_bound", est, bound, holds,
                       {"n": n, "q": str(q), "theta": str(Fraction(theta)),
                        "r": str(r), "p": str(p), "k": k})


def improved_order_budget(n: int, p, q):
    """Vector counts from the improved polynomial orders (two cases)."""
    p, q = as_exponent(p), as_exponent(q)
    from .summing import SummingParams  # noqa: F401  (parameter validation semantics)
    from .core import holder_split

    r = holder_split(q, p)
    if q <= 2 and Exponent(2) <= r <= conjugate(q):
        expo = 1.0 + float(r) * float(q.reciprocal - Fraction(1, 2))
        case = "q<=2"
    elif q >= 2:
        expo = float(r) * float(Fraction(1, 2) - p.reciprocal)
        case = "q>=2"
    else:
        raise ValueError("parameters fall outside both improved-order cases")
    return case, max(1, math.ceil(n**expo))


def improved_order_report(T: MatrixOperator, p, q, budget: AscentConfig = DEFAULT,
                          full_k: int | None = None) -> InequalityReport:
    """Soft report: pi_pq with a large budget vs the improved-order budget."""
    p, q = as_exponent(p), as_exponent(q)
    n = T.rank()
    case, m_small = improved_order_budget(max(n, 1), p, q)
    K = full_k if full_k is not None else max(4 * m_small, 4 * n, 4)
    big = pi_estimate(T, SummingParams(p, q, K), budget)
    small = pi_estimate(T, SummingParams(p, q, m_small), budget)
    return make_report("improved_order", big, small, True,
                       {"case": case, "rank": n, "m": m_small, "K": K,
                        "c_hat": safe_ratio(big.value, small.value)})


def ck_corollary_report(T: MatrixOperator, p, budget: AscentConfig = DEFAULT,
                        full_k: int | None = None) -> InequalityReport:
    """Soft report for operators on l_inf (the C(K) case): empirical constant
    in pi_p <= c_p (1 + ln n)^(1/p') pi_p^{k_n}."""
    p = as_exponent(p)
    if not T.domain_exp.is_inf:
        raise ValueError("the corollary concerns operators on C(K) = l_inf")
    n = max(T.rank(), 1)
    pprime = conjugate(p)
    k_n = n if p > 2 else math.ceil(n ** (float(pprime) / 2.0))
    K = full_k if full_k is not None else max(4 * k_n, 4)
    big = pi_estimate(T, SummingParams(p, p, K), budget)
    small = pi_estimate(T, SummingParams(p, p, k_n), budget)
    factor = (1.0 + math.log(n)) ** float(pprime.reciprocal)
    chat = safe_ratio(big.value, factor * small.value)
    return make_report("ck_corollary", big, small, True,
                       {"rank": n, "k_n": k_n, "K": K, "log_factor": factor, "c_hat": chat})
