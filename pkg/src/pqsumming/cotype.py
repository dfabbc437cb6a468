"""Rademacher and gaussian cotype-q constants with k vectors.

Norms of abstract n-dimensional spaces are always matrix-embedded:
||x||_E = ||Ax||_v for an injective A, which keeps every evaluation
concrete while covering polytopal and ellipsoidal norms.  Rademacher
averages are exact sign enumerations up to a cap; gaussian quantities are
Monte-Carlo with reported standard errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ascent import AscentConfig, DEFAULT, ascent_maximize
from .core import Exponent, as_exponent, p_norm, p_norm_rows, p_norm_rows_grad
from .operators import MatrixOperator, NormEstimate
from .reductions import InequalityReport, make_report, safe_ratio
from .summing import VectorFamily

# Exact Rademacher enumeration cap (2^(k-1) sign patterns).
RADEMACHER_CAP = 22

DEFAULT_MC_SAMPLES = 20_000


@dataclass(frozen=True)
class EmbeddedNorm:
    """An n-dimensional normed space ||x||_E = ||embed x||_v."""

    embed: MatrixOperator

    def __post_init__(self):
        if self.embed.rank() < self.embed.cols:
            raise ValueError("embedding must have full column rank")

    @property
    def dim(self) -> int:
        return self.embed.cols

    def norm(self, x) -> float:
        return p_norm(self.embed.apply(np.asarray(x, dtype=float)), self.embed.codomain_exp)

    def norms_rows(self, X: np.ndarray) -> np.ndarray:
        return p_norm_rows(X @ self.embed.entries.T, self.embed.codomain_exp)

    def to_json(self) -> dict:
        return {"embed": self.embed.to_json()}

    @classmethod
    def from_json(cls, doc: dict) -> "EmbeddedNorm":
        return cls(MatrixOperator.from_json(doc["embed"]))


def lp_space(n: int, e) -> EmbeddedNorm:
    """l_e^n as an embedded norm (identity embedding)."""
    return EmbeddedNorm(MatrixOperator(np.eye(n), 2, e))


@dataclass(frozen=True)
class CotypeParams:
    """Cotype order q >= 2, vector budget and variable kind."""

    q: Exponent
    k: int
    variable_kind: str = "rademacher"
    mc_samples: int = DEFAULT_MC_SAMPLES

    def __init__(self, q, k, variable_kind="rademacher", mc_samples=DEFAULT_MC_SAMPLES):
        q = as_exponent(q)
        if q < 2:
            raise ValueError("cotype needs q >= 2")
        if variable_kind not in ("rademacher", "gaussian"):
            raise ValueError("variable kind is rademacher or gaussian")
        if k < 1:
            raise ValueError("vector budget must be positive")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "variable_kind", variable_kind)
        object.__setattr__(self, "mc_samples", int(mc_samples))


def _sign_matrix(k: int) -> np.ndarray:
    """All 2^(k-1) sign patterns with the first entry fixed to +1."""
    total = 1 << max(k - 1, 0)
    bits = np.arange(max(k - 1, 0))
    idx = np.arange(total, dtype=np.int64)
    S = np.ones((total, k))
    if k > 1:
        S[:, 1:] = ((idx[:, None] >> bits[None, :]) & 1) * 2.0 - 1.0
    return S


def rademacher_average(F: VectorFamily, E: EmbeddedNorm, cap: int = RADEMACHER_CAP) -> float:
    """Exact (E ||sum eps_j x_j||_E^2)^(1/2) over all sign patterns.

    Global sign symmetry halves the enumeration to 2^(k-1) patterns.
    """
    k = F.size
    if k == 0:
        return 0.0
    if k > cap:
        raise ValueError(
            f"exact enumeration capped at k = {cap}; use the Monte-Carlo gaussian mode"
        )
    S = _sign_matrix(k)
    norms = E.norms_rows(S @ F.vectors)
    return float(np.sqrt(np.mean(norms**2)))


def rademacher_average_mc(F: VectorFamily, E: EmbeddedNorm, samples: int, seed: int):
    """Monte-Carlo Rademacher average (sign sampling) with standard error."""
    if samples < 100:
        raise ValueError("need at least 100 samples")
    k = F.size
    if k == 0:
        return 0.0, 0.0
    rng = np.random.default_rng(seed)
    S = rng.choice([-1.0, 1.0], size=(samples, k))
    sq = E.norms_rows(S @ F.vectors) ** 2
    mean = float(np.mean(sq))
    se_mean = float(np.std(sq, ddof=1) / math.sqrt(samples))
    if mean == 0.0:
        return 0.0, 0.0
    value = math.sqrt(mean)
    return value, se_mean / (2.0 * value)


def gaussian_average(F: VectorFamily, E: EmbeddedNorm, samples: int, seed: int):
    """Monte-Carlo (E ||sum g_j x_j||_E^2)^(1/2) with its standard error.

    The standard error of the squared-norm mean is propagated through the
    square root.
    """
    if samples < 100:
        raise ValueError("need at least 100 samples")
    k = F.size
    if k == 0:
        return 0.0, 0.0
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((samples, k))
    sq = E.norms_rows(G @ F.vectors) ** 2
    mean = float(np.mean(sq))
    se_mean = float(np.std(sq, ddof=1) / math.sqrt(samples))
    if mean == 0.0:
        return 0.0, 0.0
    value = math.sqrt(mean)
    return value, se_mean / (2.0 * value)


def _average_value_grad(X: np.ndarray, E: EmbeddedNorm, S: np.ndarray, tau: float):
    """(quadratic-mean norm of S @ X under E, gradient wrt X).

    S is either the full sign matrix (exact Rademacher average) or a block
    of gaussian samples (common random numbers across ascent iterations).
    """
    Y = (S @ X) @ E.embed.entries.T
    norms, gY = p_norm_rows_grad(Y, E.embed.codomain_exp, tau)
    msq = float(np.mean(norms**2))
    if msq == 0.0:
        return 0.0, np.zeros_like(X)
    val = math.sqrt(msq)
    gX = S.T @ ((norms[:, None] * gY) @ E.embed.entries) / (S.shape[0] * val)
    return val, gX


def cotype_estimate(E: EmbeddedNorm, prm: CotypeParams,
                    budget: AscentConfig = DEFAULT, warm_starts=()) -> NormEstimate:
    """Lower-bound estimate of C_q^k(Id_E) (or the gaussian variant).

    Multi-start ascent on the ratio (sum ||x_j||_E^q)^(1/q) / average,
    witness attached with the average normalized to 1.
    """
    q, k = prm.q, prm.k
    n = E.dim
    qf = float(q)
    gaussian = prm.variable_kind == "gaussian"
    if gaussian:
        G = np.random.default_rng(budget.seed).standard_normal((prm.mc_samples, k))
    elif k > RADEMACHER_CAP:
        raise ValueError("exact rademacher enumeration capped; use gaussian mode")

    S = G if gaussian else _sign_matrix(k)

    def objective(z, tau):
        X = z.reshape(k, n)
        Y = X @ E.embed.entries.T
        norms, gY = p_norm_rows_grad(Y, E.embed.codomain_exp, tau)
        N = p_norm(norms, q)
        if N == 0.0:
            return -np.inf, np.zeros(k * n)
        coeff = np.power(norms / N, qf - 1.0, where=norms > 0, out=np.zeros_like(norms))
        gN = (coeff[:, None] * gY) @ E.embed.entries
        D, gD = _average_value_grad(X, E, S, tau)
        if D == 0.0:
            return -np.inf, np.zeros(k * n)
        return math.log(N) - math.log(D), (gN / N - gD / D).ravel()

    # structured starts: repeated single vector and an orthogonal-ish frame
    e1 = np.zeros((k, n))
    e1[:, 0] = 1.0
    single = np.zeros((k, n))
    single[0, 0] = 1.0
    frame = np.zeros((k, n))
    for j in range(k):
        frame[j, j % n] = 1.0
    warm = [single.ravel(), frame.ravel(), e1.ravel()]
    for ws in warm_starts:
        arr = ws.vectors if isinstance(ws, VectorFamily) else np.asarray(ws, dtype=float)
        if arr.size == k * n:
            warm.append(arr.ravel())
    logval, z = ascent_maximize(objective, k * n, budget, warm_starts=warm)
    if not np.isfinite(logval):
        return NormEstimate(0.0, "lower", "ascent")
    X = z.reshape(k, n)
    if gaussian:
        avg, _ = gaussian_average(VectorFamily(X, Exponent(2)), E, prm.mc_samples, budget.seed)
    else:
        avg = rademacher_average(VectorFamily(X, Exponent(2)), E)
    family = VectorFamily(X / avg, Exponent(2))
    norms = E.norms_rows(family.vectors)
    value = p_norm(norms, q)
    method = "mc_ascent" if gaussian else "ascent"
    return NormEstimate(float(value), "lower", method, witness=family)


def cotype_truncate(F: VectorFamily, E: EmbeddedNorm, q, delta: float):
    """Sort by nonincreasing ||x_j||_E and keep the minimal prefix after
    which all norms are <= delta (the summing-norm truncation, with image
    norms replaced by the embedded norms)."""
    q = as_exponent(q)
    if not q > 2:
        raise ValueError("cotype truncation needs q > 2")
    if delta <= 0:
        raise ValueError("delta must be positive")
    norms = E.norms_rows(F.vectors)
    order = np.argsort(-norms, kind="stable")
    n = int(np.count_nonzero(norms[order] > delta))
    prefix = VectorFamily(F.vectors[order[:n]].reshape(n, F.dim), F.ambient_exp)
    return prefix, n


def cotype_delta(F: VectorFamily, E: EmbeddedNorm, q, eps: float = 0.0) -> float:
    """Threshold with delta^(q-2) = (1-eps)/2 * S^q / Q, S the q-aggregated
    norms and Q their 2-mass: the truncation guarantee then loses at most
    the factor 2^(1/q) (the proof constant; the statement's 2 is looser)."""
    q = as_exponent(q)
    if not q > 2 or q.is_inf:
        raise ValueError("delta rule needs 2 < q < inf")
    norms = E.norms_rows(F.vectors)
    S = p_norm(norms, q)
    Q = float(np.sum(norms**2))
    if S == 0.0 or Q == 0.0:
        raise ValueError("the family has no nonzero vectors")
    return (0.5 * (1.0 - eps) * S ** float(q) / Q) ** (1.0 / (float(q) - 2.0))


def theorem3_budget(n: int, q, c0: float) -> int:
    """ceil(n * (c0 (1 + ln n))^(1 / (1 - 2/q))) vectors suffice for the
    cotype-q constant of an n-dimensional space, for an unquantified
    universal c0 taken as an argument."""
    q = as_exponent(q)
    if not q > 2:
        raise ValueError("the budget needs q > 2")
    if n < 1:
        raise ValueError("dimension must be positive")
    if c0 <= 0:
        raise ValueError("c0 must be positive")
    expo = 1.0 / float(1 - 2 * q.reciprocal)
    val = n * (c0 * (1.0 + math.log(n))) ** expo
    return int(math.ceil(val - 1e-9 * max(1.0, val)))


def comparison_chain_report(E: EmbeddedNorm, q, budget: AscentConfig = DEFAULT,
                            mc_samples: int = DEFAULT_MC_SAMPLES,
                            k: int | None = None) -> list[InequalityReport]:
    """The three links comparing C_2, gaussian C_2 and gaussian C_q.

    Only the constant-free link (gaussian C_q estimate <= n^(1/q)) is
    asserted; the two constant-bearing links report empirical ratios.
    The resulting vector budgets are themselves estimates, since the
    cotype-2 constant entering them is estimated, not exact.
    """
    q = as_exponent(q)
    if not q > 2:
        raise ValueError("the chain needs q > 2")
    n = E.dim
    kk = k if k is not None else min(2 * n, RADEMACHER_CAP)
    c2 = cotype_estimate(E, CotypeParams(2, kk), budget)
    g2 = cotype_estimate(E, CotypeParams(2, kk, "gaussian", mc_samples), budget)
    gq = cotype_estimate(E, CotypeParams(q, kk, "gaussian", mc_samples), budget)

    reports = []
    log_term = math.sqrt(1.0 + math.log(max(g2.value, 1.0)))
    reports.append(make_report(
        "cotype_log_comparison", c2, g2, True,
        {"n": n, "k": kk, "c_hat": safe_ratio(c2.value, g2.value * log_term)}))
    factor = math.sqrt(2.0) * n ** (0.5 - float(q.reciprocal))
    reports.append(make_report(
        "cotype_gaussian_step", g2, gq, True,
        {"n": n, "k": kk, "factor": factor,
         "c_hat": safe_ratio(g2.value, factor * gq.value)}))
    bound_val = n ** float(q.reciprocal)
    bound = NormEstimate(bound_val, "upper", "dimension_bound")
    reports.append(make_report(
        "cotype_q_dimension", gq, bound, gq.value <= 1.02 * bound_val,
        {"n": n, "k": kk, "q": str(q)}))
    return reports
