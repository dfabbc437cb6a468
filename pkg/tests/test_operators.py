import json
import math

import numpy as np
import pytest

from pqsumming.ascent import AscentConfig
from pqsumming.core import Exponent, p_norm
from pqsumming.operators import (
    CapExceeded,
    MatrixOperator,
    NormEstimate,
    SigmaDiagonal,
    bennett_best_of,
    bennett_sample,
    column_holder_upper,
    compose,
    inclusion,
    operator_norm,
)

A_HAD = MatrixOperator([[1.0, 1.0], [1.0, -1.0]], "inf", 2)


def test_apply_examples():
    ident = inclusion(2, 2, 2)
    assert np.allclose(ident.apply([1.0, 2.0]), [1.0, 2.0])
    assert np.allclose(A_HAD.apply([1.0, 1.0]), [2.0, 0.0])
    zero = MatrixOperator(np.zeros((2, 2)), 2, 2)
    assert np.allclose(zero.apply([5.0, 7.0]), [0.0, 0.0])


def test_apply_dimension_mismatch():
    with pytest.raises(ValueError):
        A_HAD.apply([1.0, 2.0, 3.0])


def test_compose_identity_and_diagonal():
    T = MatrixOperator([[1.0, 2.0], [3.0, 4.0]], "inf", 2)
    left = compose(inclusion(2, 2, 2), T)
    right = compose(T, inclusion(2, "inf", "inf"))
    assert np.allclose(left.entries, T.entries)
    assert np.allclose(right.entries, T.entries)
    d = SigmaDiagonal([1.0, 0.0], "inf").as_operator()
    out = compose(d, inclusion(2, "inf", "inf"))
    assert np.allclose(out.entries, np.diag([1.0, 0.0]))


def test_compose_mismatches():
    T = MatrixOperator(np.ones((2, 3)), "inf", 2)
    with pytest.raises(ValueError):
        compose(T, MatrixOperator(np.ones((4, 2)), 1, "inf"))
    with pytest.raises(ValueError):
        compose(T, MatrixOperator(np.ones((3, 2)), 1, 2))  # codomain exp != domain exp


def test_operator_norm_sign_enumeration():
    est = operator_norm(A_HAD)
    assert est.kind == "exact" and est.method == "sign_enum"
    assert est.value == pytest.approx(2.0, abs=1e-12)
    # witness achieves the value
    ratio = p_norm(A_HAD.apply(est.witness), 2) / p_norm(est.witness, "inf")
    assert ratio == pytest.approx(est.value, rel=1e-12)


def test_operator_norm_diagonal_and_identity():
    d = MatrixOperator(np.diag([1.0, 1.0]), "inf", 2)
    assert operator_norm(d).value == pytest.approx(math.sqrt(2), rel=1e-12)
    ident = inclusion(3, 2, 2)
    est = operator_norm(ident)
    assert est.method == "svd"
    assert est.value == pytest.approx(1.0, rel=1e-12)


def test_operator_norm_inclusion_inf_to_one():
    est = operator_norm(inclusion(4, "inf", 1))
    assert est.value == pytest.approx(4.0, rel=1e-12)
    assert np.allclose(np.abs(est.witness), np.ones(4))


def test_operator_norm_column_max():
    T = MatrixOperator([[1.0, -3.0], [2.0, 0.0]], 1, 2)
    est = operator_norm(T)
    assert est.method == "column_max"
    assert est.value == pytest.approx(3.0, rel=1e-12)


def test_operator_norm_ascent_lower_sound():
    rng = np.random.default_rng(5)
    for i in range(25):
        T = MatrixOperator(rng.standard_normal((3, 4)), "inf", 2)
        exact = operator_norm(T)
        low = operator_norm(T, cfg=AscentConfig(starts=6, iters=200, seed=i), method="ascent")
        assert low.kind == "lower"
        assert low.value <= exact.value * (1 + 1e-9)
        assert low.value >= exact.value * 0.95  # and it is not far off at this size


def test_operator_norm_submultiplicative_exact():
    rng = np.random.default_rng(6)
    for _ in range(20):
        B = MatrixOperator(rng.standard_normal((3, 4)), "inf", "inf")
        A = MatrixOperator(rng.standard_normal((2, 3)), "inf", 2)
        na, nb, nab = operator_norm(A), operator_norm(B), operator_norm(compose(A, B))
        assert all(e.kind == "exact" for e in (na, nb, nab))
        assert nab.value <= na.value * nb.value * (1 + 1e-9)


def test_sign_enum_cap():
    T = MatrixOperator(np.ones((2, 5)), "inf", 2)
    with pytest.raises(CapExceeded):
        operator_norm(T, method="sign_enum", sign_cap=4)


def test_bennett_contract():
    A = bennett_sample(4, 2, "inf", seed=7)
    assert A.entries.shape == (2, 4)
    assert set(np.unique(A.entries)) <= {-1.0, 1.0}
    assert A.domain_exp == Exponent("inf") and A.codomain_exp == Exponent(2)
    for j in range(4):
        assert p_norm(A.entries[:, j], 2) == pytest.approx(math.sqrt(2), rel=1e-12)
    B = bennett_sample(4, 2, "inf", seed=7)
    assert np.array_equal(A.entries, B.entries)
    C = bennett_sample(4, 2, "inf", seed=8)
    assert not np.array_equal(A.entries, C.entries)


def test_bennett_best_of_picks_max():
    picked = bennett_best_of(6, 2, "inf", seed=0, tries=5, s=4)
    vals = []
    from pqsumming.core import conjugate

    for j in range(5):
        A = bennett_sample(6, 2, "inf", seed=j)
        vals.append(operator_norm(MatrixOperator(A.entries, conjugate(Exponent(4)), 2)).value)
    best = operator_norm(MatrixOperator(picked.entries, conjugate(Exponent(4)), 2)).value
    assert best == pytest.approx(max(vals), rel=1e-12)


def test_matrix_json_roundtrip(tmp_path):
    T = MatrixOperator([[0.5, -1.25], [2.0, 3.5]], "4/3", "inf")
    doc = T.to_json()
    assert doc["domain_exp"] == "4/3" and doc["codomain_exp"] == "inf"
    back = MatrixOperator.from_json(doc)
    assert np.array_equal(back.entries, T.entries)
    assert back.domain_exp == T.domain_exp
    path = tmp_path / "op.json"
    path.write_text(json.dumps(doc))
    assert np.array_equal(MatrixOperator.load(path).entries, T.entries)


def test_norm_estimate_validation_and_json():
    with pytest.raises(ValueError):
        NormEstimate(-1.0, "exact", "x")
    with pytest.raises(ValueError):
        NormEstimate(1.0, "approx", "x")
    est = NormEstimate(2.0, "lower", "ascent", witness=np.array([1.0, 0.0]))
    doc = est.to_json()
    assert doc["value"] == 2.0 and doc["witness"] == [1.0, 0.0]


def test_rank_threshold():
    y = np.array([1.0, 2.0, 3.0])
    x = np.array([1.0, -1.0])
    T = MatrixOperator(np.outer(y, x), "inf", 2)
    assert T.rank() == 1
    T2 = MatrixOperator(np.outer(y, x) + 1e-14 * np.eye(3, 2), "inf", 2)
    assert T2.rank() == 1  # below the relative singular-value threshold


def test_entries_validation():
    with pytest.raises(ValueError):
        MatrixOperator([[np.inf, 0.0]], 2, 2)
    with pytest.raises(ValueError):
        MatrixOperator([1.0, 2.0], 2, 2)


def test_column_holder_upper_bounds_norm():
    rng = np.random.default_rng(8)
    for _ in range(20):
        u = ["4/3", 2, 3][rng.integers(0, 3)]
        T = MatrixOperator(rng.standard_normal((3, 4)), u, 2)
        low = operator_norm(T, cfg=AscentConfig(starts=6, iters=150, seed=1)).value
        assert low <= column_holder_upper(T) * (1 + 1e-9)
