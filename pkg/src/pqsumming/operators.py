"""Finite-rank operators between finite-dimensional lp spaces.

A MatrixOperator is a dense real matrix together with typed domain and
codomain exponents.  This module provides operator-norm computation
(exact in three regimes, multi-start ascent otherwise) and the named
constructions used throughout: canonical inclusions, sign diagonals
and random sign (Bennett) matrices.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .ascent import AscentConfig, DEFAULT, ascent_maximize, softmax_weights
from .core import (
    Exponent,
    REL_TOL,
    as_exponent,
    p_norm,
    p_norm_gradient,
    p_norm_rows,
)

# Exact sign enumeration is used for domains l_inf^m up to this m
# (2^(m-1) evaluations); beyond it norms fall back to ascent lower bounds.
SIGN_ENUM_CAP = 22

# Relative singular-value threshold for numerical rank.
RANK_RTOL = 1e-10


class CapExceeded(Exception):
    """An exact enumeration was refused because it would exceed its cap."""


@dataclass
class NormEstimate:
    """Result of a norm computation: value, how it was obtained, witness.

    kind is "exact", "lower" or "upper".  Exact values carry a witness
    whenever the defining supremum is attained by a finite object.
    """

    value: float
    kind: str
    method: str
    witness: object = None
    tol: float = REL_TOL

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("norm estimates are nonnegative")
        if self.kind not in ("exact", "lower", "upper"):
            raise ValueError(f"unknown estimate kind {self.kind!r}")

    def to_json(self) -> dict:
        out = {"value": self.value, "kind": self.kind, "method": self.method, "tol": self.tol}
        if self.witness is not None:
            if hasattr(self.witness, "to_json"):
                out["witness"] = self.witness.to_json()
            else:
                out["witness"] = np.asarray(self.witness, dtype=float).tolist()
        return out


@dataclass(frozen=True)
class MatrixOperator:
    """T: l_u^m -> l_v^n as a dense n x m matrix."""

    entries: np.ndarray
    domain_exp: Exponent
    codomain_exp: Exponent

    def __init__(self, entries, domain_exp, codomain_exp):
        A = np.array(entries, dtype=float)
        if A.ndim != 2:
            raise ValueError("operator entries must be a 2-d array")
        if not np.all(np.isfinite(A)):
            raise ValueError("operator entries must be finite")
        A.flags.writeable = False
        object.__setattr__(self, "entries", A)
        object.__setattr__(self, "domain_exp", as_exponent(domain_exp))
        object.__setattr__(self, "codomain_exp", as_exponent(codomain_exp))

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def apply(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.cols,):
            raise ValueError(f"operator expects dimension {self.cols}, got {x.shape}")
        return self.entries @ x

    def rank(self) -> int:
        s = np.linalg.svd(self.entries, compute_uv=False)
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.count_nonzero(s > RANK_RTOL * s[0]))

    def scale(self, factor: float) -> "MatrixOperator":
        return MatrixOperator(self.entries * factor, self.domain_exp, self.codomain_exp)

    def to_json(self) -> dict:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "domain_exp": str(self.domain_exp),
            "codomain_exp": str(self.codomain_exp),
            "entries": [float(v) for v in self.entries.ravel()],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "MatrixOperator":
        n, m = int(doc["rows"]), int(doc["cols"])
        entries = np.asarray(doc["entries"], dtype=float).reshape(n, m)
        return cls(entries, Exponent(doc["domain_exp"]), Exponent(doc["codomain_exp"]))

    @classmethod
    def load(cls, path) -> "MatrixOperator":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


@dataclass(frozen=True)
class SigmaDiagonal:
    """The diagonal map tau -> sum_k sigma_k tau_k e_k, typed l_inf -> l_q'."""

    sigma: np.ndarray
    target_exp: Exponent
    source_exp: Exponent = field(default=None)

    def __init__(self, sigma, target_exp):
        s = np.array(sigma, dtype=float)
        if s.ndim != 1:
            raise ValueError("sigma must be a vector")
        s.flags.writeable = False
        object.__setattr__(self, "sigma", s)
        object.__setattr__(self, "target_exp", as_exponent(target_exp))
        object.__setattr__(self, "source_exp", Exponent("inf"))

    def as_operator(self) -> MatrixOperator:
        return MatrixOperator(np.diag(self.sigma), self.source_exp, self.target_exp)


def apply(T: MatrixOperator, x) -> np.ndarray:
    return T.apply(x)


def compose(A: MatrixOperator, B: MatrixOperator) -> MatrixOperator:
    """A after B, checking dimensions and exponent typing."""
    if B.rows != A.cols:
        raise ValueError(f"cannot compose: B has codomain dim {B.rows}, A expects {A.cols}")
    if B.codomain_exp != A.domain_exp:
        raise ValueError(
            f"cannot compose: B codomain exponent {B.codomain_exp} != A domain exponent {A.domain_exp}"
        )
    return MatrixOperator(A.entries @ B.entries, B.domain_exp, A.codomain_exp)


def inclusion(m: int, u, v) -> MatrixOperator:
    """Canonical identity l_u^m -> l_v^m."""
    if m < 1:
        raise ValueError("dimension must be positive")
    return MatrixOperator(np.eye(m), u, v)


def bennett_sample(m: int, n: int, qprime, seed: int) -> MatrixOperator:
    """Random matrix with i.i.d. uniform +-1 entries, typed l_q'^m -> l_2^n."""
    if m < 1 or n < 1:
        raise ValueError("dimensions must be positive")
    rng = np.random.default_rng(seed)
    entries = rng.integers(0, 2, size=(n, m)) * 2 - 1
    return MatrixOperator(entries.astype(float), qprime, Exponent(2))


def bennett_best_of(m: int, n: int, qprime, seed: int, tries: int, s) -> MatrixOperator:
    """Best-of-N resampling: the sample maximizing ||A: l_s'^m -> l_2^n||.

    Optional mode for the experiment harness; the plain sampler stays the
    default because the source is a probabilistic statement.
    """
    from .core import conjugate

    sprime = conjugate(s)
    best, best_val = None, -1.0
    for j in range(tries):
        A = bennett_sample(m, n, qprime, seed + j)
        retyped = MatrixOperator(A.entries, sprime, Exponent(2))
        val = operator_norm(retyped).value
        if val > best_val:
            best, best_val = A, val
    return best


def _sign_patterns(m: int, chunk: int = 1 << 14):
    """Yield blocks of sign vectors in {-1, +1}^m with first entry fixed +1."""
    total = 1 << max(m - 1, 0)
    bits = np.arange(max(m - 1, 0))
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        S = np.ones((idx.size, m))
        if m > 1:
            S[:, 1:] = ((idx[:, None] >> bits[None, :]) & 1) * 2.0 - 1.0
        yield S


def _opnorm_sign_enum(T: MatrixOperator) -> NormEstimate:
    v = T.codomain_exp
    best_val, best_sign = -1.0, None
    for S in _sign_patterns(T.cols):
        vals = p_norm_rows(S @ T.entries.T, v)
        j = int(np.argmax(vals))
        if vals[j] > best_val:
            best_val, best_sign = float(vals[j]), S[j].copy()
    return NormEstimate(best_val, "exact", "sign_enum", witness=best_sign)


def _opnorm_column_max(T: MatrixOperator) -> NormEstimate:
    vals = p_norm_rows(T.entries.T, T.codomain_exp)
    j = int(np.argmax(vals))
    witness = np.zeros(T.cols)
    witness[j] = 1.0
    return NormEstimate(float(vals[j]), "exact", "column_max", witness=witness)


def _opnorm_svd(T: MatrixOperator) -> NormEstimate:
    U, s, Vt = np.linalg.svd(T.entries, full_matrices=False)
    if s.size == 0:
        return NormEstimate(0.0, "exact", "svd")
    return NormEstimate(float(s[0]), "exact", "svd", witness=Vt[0].copy())


def norm_value_grad(y: np.ndarray, e: Exponent, tau: float):
    """(||y||_e, subgradient), tie-averaged across near-maximal branches."""
    e = as_exponent(e)
    val = p_norm(y, e)
    if val == 0.0:
        return 0.0, np.zeros_like(y)
    if e.is_inf:
        w = softmax_weights(np.abs(y), tau)
        return val, w * np.sign(y)
    return val, p_norm_gradient(y, e)


def _opnorm_ascent(T: MatrixOperator, cfg: AscentConfig) -> NormEstimate:
    u, v = T.domain_exp, T.codomain_exp
    A = T.entries

    def objective(x, tau):
        N, gN = norm_value_grad(A @ x, v, tau)
        D, gD = norm_value_grad(x, u, tau)
        if N == 0.0 or D == 0.0:
            return -np.inf, np.zeros_like(x)
        return math.log(N) - math.log(D), A.T @ gN / N - gD / D

    # structured starts: best column and a flat sign vector
    col_norms = p_norm_rows(A.T, v)
    e_best = np.zeros(T.cols)
    e_best[int(np.argmax(col_norms))] = 1.0
    logval, x = ascent_maximize(objective, T.cols, cfg, warm_starts=[e_best, np.ones(T.cols)])
    value = float(np.exp(logval)) if np.isfinite(logval) else 0.0
    witness = x / p_norm(x, u) if value > 0 else x
    return NormEstimate(value, "lower", "ascent", witness=witness)


def operator_norm(
    T: MatrixOperator,
    cfg: AscentConfig = DEFAULT,
    method: str = "auto",
    sign_cap: int = SIGN_ENUM_CAP,
) -> NormEstimate:
    """||T: l_u^m -> l_v^n||.

    Exact when u = inf with m small enough to enumerate sign vectors,
    when u = 1 (max over columns), or when u = v = 2 (largest singular
    value); otherwise a multi-start ascent lower bound with witness.
    """
    u, v = T.domain_exp, T.codomain_exp
    if np.all(T.entries == 0.0):
        return NormEstimate(0.0, "exact", "zero")
    if method == "auto":
        if u.is_inf and T.cols <= sign_cap:
            method = "sign_enum"
        elif u == 1:
            method = "column_max"
        elif u == 2 and v == 2:
            method = "svd"
        else:
            method = "ascent"
    if method == "sign_enum":
        if not u.is_inf:
            raise ValueError("sign enumeration requires domain exponent inf")
        if T.cols > sign_cap:
            raise CapExceeded(f"sign enumeration cap {sign_cap} exceeded (m={T.cols})")
        return _opnorm_sign_enum(T)
    if method == "column_max":
        if u != 1:
            raise ValueError("column max requires domain exponent 1")
        return _opnorm_column_max(T)
    if method == "svd":
        if not (u == 2 and v == 2):
            raise ValueError("svd method requires u = v = 2")
        return _opnorm_svd(T)
    if method == "ascent":
        return _opnorm_ascent(T, cfg)
    raise ValueError(f"unknown method {method!r}")


def column_holder_upper(T: MatrixOperator) -> float:
    """Cheap upper bound on ||T: l_u -> l_v||: l_u' norm of column v-norms."""
    col_norms = p_norm_rows(T.entries.T, T.codomain_exp)
    return p_norm(col_norms, T.domain_exp.conjugate())
