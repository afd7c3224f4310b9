import numpy as np
import pytest
from scipy.linalg import eigvalsh_tridiagonal

from spinbo import fields
from spinbo.hardy_ops import (
    apply_B,
    apply_L,
    apply_T,
    compress_B,
    compress_L,
    critical_residual,
    critical_scale,
    lax_static_residual,
    lax_static_scale,
    lemma_residual,
    lemma_scale,
    spectrum_L,
    toeplitz_compress,
)
from spinbo.matrix_trig import (
    D,
    DimensionError,
    HardyField,
    MatrixField,
    allclose,
    multiplier,
    project_nonneg,
)


def one(d):
    return HardyField(np.eye(d)[None], 0)


def basis(k, p, q, d):
    E = np.zeros((d, d))
    E[p, q] = 1
    return HardyField.of(MatrixField.monomial(k, E))


def test_apply_T_constant_symbol(rng):
    C = rng.standard_normal((2, 2))
    F = fields.random_hardy(2, 4, rng)
    out = apply_T(MatrixField.constant(C), F)
    np.testing.assert_allclose(out.coeffs, C @ F.coeffs)


def test_apply_T_negative_symbol_annihilates_one(rng):
    U = MatrixField.monomial(-1, rng.standard_normal((2, 2)))
    assert apply_T(U, one(2)).norm() == 0


def test_apply_T_matches_compression(rng):
    U = fields.random_field(2, 3, rng)
    F = fields.random_hardy(2, 4, rng)
    N = F.hi + U.hi
    via_matrix = toeplitz_compress(U, N).apply(F)
    assert allclose(apply_T(U, F), via_matrix)


def test_toeplitz_blocks(rng):
    U = fields.random_field(2, 2, rng)
    T = toeplitz_compress(U, 4)
    for j in range(5):
        for k in range(5):
            np.testing.assert_array_equal(T.block(j, k), U.coeff(j - k))


def test_dimension_checks(rng):
    with pytest.raises(DimensionError):
        apply_T(MatrixField.zeros(2), one(3))


def test_apply_L_zero_symbol(rng):
    F = fields.random_hardy(2, 5, rng)
    assert allclose(apply_L(MatrixField.zeros(2), F), multiplier(F, D), rtol=0)


def test_apply_L_constant_symbol(rng):
    c = 0.7
    F = fields.random_hardy(1, 5, rng)
    out = apply_L(MatrixField.constant([[c]]), F)
    np.testing.assert_allclose(out.coeffs[:, 0, 0], (np.arange(6) - c) * F.coeffs[:, 0, 0])


def test_apply_L_on_one(rng):
    U = fields.random_field(2, 3, rng)
    assert allclose(apply_L(U, one(2)), -project_nonneg(U), rtol=0)


def test_apply_B_trivial_cases(rng):
    F = fields.random_hardy(2, 4, rng)
    assert apply_B(MatrixField.zeros(2), F).norm() == 0
    C = rng.standard_normal((2, 2))
    C = C + C.T
    out = apply_B(MatrixField.constant(C), F)
    np.testing.assert_allclose(out.coeffs, -1j * (C @ C) @ F.coeffs, atol=1e-13)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_B_on_constants_is_minus_i_L_squared(rng, d):
    U = fields.random_hermitian(d, 4, rng)
    V = HardyField(rng.standard_normal((1, d, d)) + 1j * rng.standard_normal((1, d, d)), 0)
    lhs = apply_B(U, V)
    rhs = -1j * apply_L(U, apply_L(U, V))
    assert allclose(lhs, rhs)


def test_compress_L_zero():
    np.testing.assert_array_equal(compress_L(MatrixField.zeros(1), 2).entries, np.diag([0, 1, 2]))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_compress_L_hermitian(rng, d):
    U = fields.random_hermitian(d, 4, rng)
    L = compress_L(U, 12)
    assert L.hermitian_defect() <= 1e-14 * np.abs(L.entries).max()


def test_compress_L_column_exactness(rng):
    d, N = 2, 10
    U = fields.random_field(d, 3, rng)
    L = compress_L(U, N)
    for k in range(N - U.bandwidth + 1):
        for p in range(d):
            for q in range(d):
                exact = apply_L(U, basis(k, p, q, d)).padded(0, N)
                col = L.apply(basis(k, p, q, d)).coeffs
                np.testing.assert_allclose(col, exact, atol=1e-14)


def test_compress_B_matches_exact_action(rng):
    d, N = 2, 9
    U = fields.random_field(d, 3, rng)
    B = compress_B(U, N)
    for k in range(N + 1):
        for p in range(d):
            F = basis(k, p, 0, d)
            exact = apply_B(U, F).padded(0, N)
            np.testing.assert_allclose(B.apply(F).coeffs, exact, atol=1e-13)


def test_compress_B_antihermitian(rng):
    U = fields.random_hermitian(2, 3, rng)
    B = compress_B(U, 14).entries
    assert np.abs(B + B.conj().T).max() <= 1e-13 * np.abs(B).max()


def test_spectrum_zero_field():
    ev = spectrum_L(MatrixField.zeros(2), 3)
    np.testing.assert_allclose(ev, [0, 0, 1, 1, 2, 2, 3, 3], atol=1e-14)


def test_spectrum_constant_ladder():
    c = 0.3
    ev = spectrum_L(MatrixField.constant(c * np.eye(2)), 5)
    np.testing.assert_allclose(ev, np.repeat(np.arange(6) - c, 2), atol=1e-12)


def test_spectrum_rejects_non_hermitian(rng):
    with pytest.raises(ValueError):
        spectrum_L(fields.random_field(2, 2, rng), 4)


def test_spectrum_cosine_converges_in_N():
    U = MatrixField.monomial(1, [[1.0]]) + MatrixField.monomial(-1, [[1.0]])
    N = 48
    a, b = spectrum_L(U, N), spectrum_L(U, N + 8)
    k = int(0.8 * (N + 1))
    np.testing.assert_allclose(a[:k], b[:k], atol=1e-10)
    # independent tridiagonal eigensolve: diagonal n, off-diagonal -1
    ref = eigvalsh_tridiagonal(np.arange(200.0), -np.ones(199))
    np.testing.assert_allclose(a[:k], ref[:k], atol=1e-10)


@pytest.mark.parametrize("d", [1, 2, 3])
def test_lemma_residual_hardy_symbols(rng, d):
    A = project_nonneg(fields.random_field(d, 3, rng))
    B = project_nonneg(fields.random_field(d, 3, rng))
    F = fields.random_hardy(d, 4, rng)
    assert lemma_residual(A, B, F) <= 1e-13 * lemma_scale(A, B, F)
    assert allclose(apply_T(A @ B, F), apply_T(A, apply_T(B, F)))


def test_lemma_residual_constant_B(rng):
    A = fields.random_field(2, 3, rng)
    B = MatrixField.constant(rng.standard_normal((2, 2)))
    F = fields.random_hardy(2, 4, rng)
    assert lemma_residual(A, B, F) <= 1e-13 * lemma_scale(A, B, F)
    assert allclose(apply_T(A @ B, F), apply_T(A, apply_T(B, F)))


@pytest.mark.parametrize("d", [1, 2, 3])
def test_lemma_residual_random(rng, d):
    for _ in range(10):
        A, B = fields.random_field(d, 4, rng), fields.random_field(d, 4, rng)
        F = fields.random_hardy(d, 4, rng)
        assert lemma_residual(A, B, F) <= 1e-12 * lemma_scale(A, B, F)


def test_lemma_is_not_vacuous(rng):
    A, B = fields.random_field(2, 3, rng), fields.random_field(2, 3, rng)
    F = fields.random_hardy(2, 3, rng)
    gap = (apply_T(A @ B, F) - apply_T(A, apply_T(B, F))).norm()
    assert gap > 1e-2 * lemma_scale(A, B, F)


def test_critical_residual_zero():
    assert critical_residual(MatrixField.zeros(2), one(2)) == 0


@pytest.mark.parametrize("d", [1, 2, 3])
def test_critical_residual_random_non_hermitian(rng, d):
    for _ in range(10):
        U = fields.random_field(d, 5, rng)
        F = fields.random_hardy(d, 5, rng)
        assert critical_residual(U, F) <= 1e-12 * critical_scale(U, F)


def test_lax_static_residual_trivial(rng):
    assert lax_static_residual(MatrixField.zeros(2), one(2)) == 0
    C = rng.standard_normal((2, 2))
    U = MatrixField.constant(C + C.T)
    F = fields.random_hardy(2, 3, rng)
    assert lax_static_residual(U, F) <= 1e-13 * lax_static_scale(U, F)


@pytest.mark.parametrize("hermitian", [True, False])
def test_lax_static_residual_random(rng, hermitian):
    for d in (1, 2, 3):
        U = fields.random_hermitian(d, 4, rng) if hermitian else fields.random_field(d, 4, rng)
        F = fields.random_hardy(d, 4, rng)
        assert lax_static_residual(U, F) <= 1e-12 * lax_static_scale(U, F)
