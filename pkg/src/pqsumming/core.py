"""Exponent arithmetic and vector-level lp norms.

Exponents live in [1, inf] and are stored as exact rationals (or the
infinity tag) so that conjugacy and index relations such as
1/q = 1/p + 1/r never accumulate rounding drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# Single relative tolerance for comparisons of exact-method norm values.
REL_TOL = 1e-9

# Finite exponents above this are evaluated in max-factored form anyway;
# the constant only matters for documentation (the stable form is default).
OVERFLOW_EXP = 64


def _coerce(value) -> Fraction | float:
    """Turn user input into Fraction or math.inf."""
    if isinstance(value, Exponent):
        return value.value
    if value == math.inf or (isinstance(value, str) and value.strip().lower() in ("inf", "infinity", "oo")):
        return math.inf
    if isinstance(value, bool):
        raise TypeError("exponent must be a number, not bool")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        if value.is_integer():
            return Fraction(int(value))
        raise TypeError(
            f"non-integral float {value!r} is ambiguous; pass a Fraction or a string like '4/3'"
        )
    raise TypeError(f"cannot interpret {value!r} as an exponent")


@dataclass(frozen=True)
class Exponent:
    """An extended real in [1, inf], exact under conjugation."""

    value: Fraction | float

    def __init__(self, value):
        v = _coerce(value)
        if v != math.inf and v < 1:
            raise ValueError(f"exponent must be >= 1, got {v}")
        object.__setattr__(self, "value", v)

    @property
    def is_inf(self) -> bool:
        return self.value == math.inf

    @property
    def reciprocal(self) -> Fraction:
        """1/e as an exact rational (0 for e = inf)."""
        return Fraction(0) if self.is_inf else 1 / self.value

    def conjugate(self) -> "Exponent":
        return conjugate(self)

    def __float__(self) -> float:
        return math.inf if self.is_inf else float(self.value)

    def __eq__(self, other):
        if isinstance(other, Exponent):
            return self.value == other.value
        return self.value == _coerce(other)

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        other = other.value if isinstance(other, Exponent) else _coerce(other)
        return self.value < other

    def __le__(self, other):
        return self < other or self == other

    def __gt__(self, other):
        return not self <= other

    def __ge__(self, other):
        return not self < other

    def __str__(self) -> str:
        if self.is_inf:
            return "inf"
        if self.value.denominator == 1:
            return str(self.value.numerator)
        return f"{self.value.numerator}/{self.value.denominator}"

    def __repr__(self) -> str:
        return f"Exponent({str(self)!r})"


ONE = Exponent(1)
TWO = Exponent(2)
INF = Exponent("inf")


def as_exponent(e) -> Exponent:
    return e if isinstance(e, Exponent) else Exponent(e)


def conjugate(e) -> Exponent:
    """Conjugate exponent: 1/e + 1/e' = 1, with 1 <-> inf."""
    e = as_exponent(e)
    if e.is_inf:
        return ONE
    if e.value == 1:
        return INF
    return Exponent(e.value / (e.value - 1))


def holder_split(q, p) -> Exponent:
    """The r with 1/q = 1/p + 1/r; r = inf when q = p."""
    q, p = as_exponent(q), as_exponent(p)
    if q > p:
        raise ValueError(f"holder_split needs q <= p, got q={q}, p={p}")
    rec = q.reciprocal - p.reciprocal
    if rec == 0:
        return INF
    return Exponent(1 / rec)


def from_reciprocal(rec: Fraction) -> Exponent:
    """Exponent with 1/e = rec (rec = 0 gives inf)."""
    if rec == 0:
        return INF
    return Exponent(1 / Fraction(rec))


def p_norm(x, e) -> float:
    """lp norm of a vector; exact for e in {1, 2, inf}, stable otherwise.

    Finite e != 1, 2 uses the max-factored form max * (sum (|x|/max)^e)^(1/e)
    so that large exponents such as s = 2(1 + ln k) do not overflow.
    """
    e = as_exponent(e)
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return 0.0
    a = np.abs(x)
    if e.is_inf:
        return float(a.max())
    ev = float(e)
    if ev == 1.0:
        return float(a.sum())
    m = float(a.max())
    if m == 0.0:
        return 0.0
    if ev == 2.0:
        if 1e-150 < m < 1e150:
            return float(np.sqrt(np.dot(a, a)))
        z = a / m  # avoid under/overflow of the squares
        return m * float(np.sqrt(np.dot(z, z)))
    return m * float(np.power(np.power(a / m, ev).sum(), 1.0 / ev))


def p_norm_rows(Y, e) -> np.ndarray:
    """lp norm of each row of a 2-d array (vectorized p_norm)."""
    e = as_exponent(e)
    Y = np.asarray(Y, dtype=float)
    if Y.shape[1] == 0:
        return np.zeros(Y.shape[0])
    A = np.abs(Y)
    if e.is_inf:
        return A.max(axis=1)
    ev = float(e)
    if ev == 1.0:
        return A.sum(axis=1)
    if ev == 2.0:
        return np.sqrt((A * A).sum(axis=1))
    m = A.max(axis=1)
    out = np.zeros(Y.shape[0])
    pos = m > 0
    if pos.any():
        Z = A[pos] / m[pos, None]
        out[pos] = m[pos] * np.power(np.power(Z, ev).sum(axis=1), 1.0 / ev)
    return out


def p_norm_rows_grad(Y, e, tau: float = 1e-16):
    """Rowwise norms of Y and one subgradient per row, vectorized.

    For the sup norm the gradient mass is spread over entries within a
    relative width tau of the row maximum (softmax), matching the
    tie-averaged subgradients used by the ascent engine.
    """
    e = as_exponent(e)
    Y = np.asarray(Y, dtype=float)
    norms = p_norm_rows(Y, e)
    G = np.zeros_like(Y)
    pos = norms > 0
    if not pos.any():
        return norms, G
    A = np.abs(Y)
    if e.is_inf:
        m = norms[pos, None]
        W = np.exp((A[pos] - m) / np.maximum(tau * m, 1e-300))
        W /= W.sum(axis=1, keepdims=True)
        G[pos] = np.sign(Y[pos]) * W
        return norms, G
    ev = float(e)
    if ev == 1.0:
        G[pos] = np.sign(Y[pos])
        return norms, G
    if ev == 2.0:
        G[pos] = Y[pos] / norms[pos, None]
        return norms, G
    m = A[pos].max(axis=1, keepdims=True)
    Z = A[pos] / m
    denom = np.power(np.power(Z, ev).sum(axis=1, keepdims=True), (ev - 1.0) / ev)
    G[pos] = np.sign(Y[pos]) * np.power(Z, ev - 1.0) / denom
    return norms, G


def p_norm_gradient(y, e) -> np.ndarray:
    """A subgradient of x -> p_norm(x, e) at y.

    At the kinks of the max norm the first maximizing index wins; sign(0)
    contributes 0 for the l1 norm.
    """
    e = as_exponent(e)
    y = np.asarray(y, dtype=float)
    g = np.zeros_like(y)
    if y.size == 0:
        return g
    a = np.abs(y)
    if e.is_inf:
        i = int(np.argmax(a))
        if a[i] > 0:
            g[i] = np.sign(y[i])
        return g
    ev = float(e)
    if ev == 1.0:
        return np.sign(y)
    m = float(a.max())
    if m == 0.0:
        return g
    z = a / m
    denom = np.power(np.power(z, ev).sum(), (ev - 1.0) / ev)
    return np.sign(y) * np.power(z, ev - 1.0) / denom
