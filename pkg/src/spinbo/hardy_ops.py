"""Lax operators on the Hardy space and their finite sections.

``T_U F = P(U F)`` with ``P`` the projector onto nonnegative modes,
``L_U = D - T_U`` and ``B_U = i (T_{|D|U} - T_U^2)``.  The ``apply_*``
functions act exactly in the coefficient algebra; the ``compress_*`` functions
build finite sections on modes ``0..N`` and are only meant for eigenvalues.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrix_trig import (
    ABS_D,
    D,
    DX,
    HardyField,
    MatrixField,
    anticommutator,
    commutator,
    herm_defect,
    multiplier,
    project_neg,
    project_nonneg,
    truncate,
)


def _hardy(F: MatrixField) -> HardyField:
    return HardyField.of(F)


def apply_T(U: MatrixField, F: MatrixField) -> HardyField:
    return project_nonneg(U @ _hardy(F))


def apply_L(U: MatrixField, F: MatrixField) -> HardyField:
    F = _hardy(F)
    return multiplier(F, D) - apply_T(U, F)


def apply_B(U: MatrixField, F: MatrixField) -> HardyField:
    F = _hardy(F)
    absU = multiplier(U, ABS_D)
    return 1j * (apply_T(absU, F) - apply_T(U, apply_T(U, F)))


def apply_L_power(U: MatrixField, F: MatrixField, k: int) -> HardyField:
    out = _hardy(F)
    for _ in range(k):
        out = apply_L(U, out)
    return out


@dataclass(frozen=True)
class CompressedOperator:
    """Finite section of an operator on the Hardy space, modes ``0..N``.

    ``entries`` is ``((N+1) d, (N+1) d)`` in mode-major block layout: block
    ``(j, k)`` couples input mode ``k`` to output mode ``j``.  The operator
    acts on each column of a matrix-valued field independently.
    """

    d: int
    N: int
    entries: np.ndarray

    def block(self, j: int, k: int) -> np.ndarray:
        d = self.d
        return self.entries[j * d : (j + 1) * d, k * d : (k + 1) * d]

    def apply(self, F: MatrixField) -> HardyField:
        """Apply to ``F`` restricted to modes ``0..N``."""
        d, N = self.d, self.N
        vec = _hardy(truncate(F, N)).padded(0, N).reshape((N + 1) * d, d)
        return HardyField((self.entries @ vec).reshape(N + 1, d, d), 0)

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))


def _block_toeplitz(U: MatrixField, N: int) -> np.ndarray:
    d = U.d
    diffs = np.subtract.outer(np.arange(N + 1), np.arange(N + 1))
    blocks = U.padded(-N, N)[diffs + N]  # (N+1, N+1, d, d), block (j,k) = U_{j-k}
    return blocks.transpose(0, 2, 1, 3).reshape((N + 1) * d, (N + 1) * d)


def toeplitz_compress(U: MatrixField, N: int) -> CompressedOperator:
    if N < 0:
        raise ValueError("N must be nonnegative")
    return CompressedOperator(U.d, N, _block_toeplitz(U, N))


def _diag_D(d: int, N: int) -> np.ndarray:
    return np.diag(np.repeat(np.arange(N + 1, dtype=float), d)).astype(np.complex128)


def compress_L(U: MatrixField, N: int) -> CompressedOperator:
    T = toeplitz_compress(U, N)
    return CompressedOperator(U.d, N, _diag_D(U.d, N) - T.entries)


def compress_B(U: MatrixField, N: int) -> CompressedOperator:
    """Finite section of ``B_U``, exact on all of ``0..N``.

    The ``T_U^2`` block is the square of the ``(N + bandwidth)``-section cut
    back to ``N``; intermediate modes above ``N + bandwidth`` cannot couple.
    """
    d = U.d
    bw = U.bandwidth
    size = (N + 1) * d
    T_abs = _block_toeplitz(multiplier(U, ABS_D), N)
    big = _block_toeplitz(U, N + bw)
    T_sq = (big @ big)[:size, :size]
    return CompressedOperator(d, N, 1j * (T_abs - T_sq))


def spectrum_L(U: MatrixField, N: int, tol: float = 1e-10) -> np.ndarray:
    """Ascending eigenvalues of the ``N``-section of ``L_U`` for Hermitian ``U``."""
    defect = herm_defect(U)
    if defect > tol * max(1.0, U.norm()):
        raise ValueError(f"spectrum_L needs a Hermitian-valued field (defect {defect:.3e})")
    A = compress_L(U, N).entries
    return np.linalg.eigvalsh(0.5 * (A + A.conj().T))


# identity residuals ---------------------------------------------------------


def lemma_residual(A: MatrixField, B: MatrixField, F: MatrixField) -> float:
    """Norm of ``(T_{AB} - T_A T_B) F - P(P(A) Q(Q(B) F))`` with ``Q = 1 - P``."""
    F = _hardy(F)
    lhs = apply_T(A @ B, F) - apply_T(A, apply_T(B, F))
    rhs = project_nonneg(project_nonneg(A) @ project_neg(project_neg(B) @ F))
    return (lhs - rhs).norm()


def lemma_scale(A: MatrixField, B: MatrixField, F: MatrixField) -> float:
    return A.norm() * B.norm() * F.norm()


def critical_operator(U: MatrixField, F: MatrixField) -> HardyField:
    """Apply ``T_{{U,U'}} - {T_U, T_U'} + i T_{[U,|D|U]} - i [T_U, T_{|D|U}]`` to F."""
    F = _hardy(F)
    Ux = multiplier(U, DX)
    Ua = multiplier(U, ABS_D)
    T = apply_T
    anti = T(anticommutator(U, Ux), F) - T(U, T(Ux, F)) - T(Ux, T(U, F))
    comm = T(commutator(U, Ua), F) - T(U, T(Ua, F)) + T(Ua, T(U, F))
    return anti + 1j * comm


def critical_residual(U: MatrixField, F: MatrixField) -> float:
    return critical_operator(U, F).norm()


def critical_scale(U: MatrixField, F: MatrixField) -> float:
    return U.norm() * (U.norm() + multiplier(U, D).norm()) * F.norm()


def sbo_rhs(U: MatrixField) -> MatrixField:
    """``d/dx(|D|U - U^2) - i[U, |D|U]``, untruncated."""
    Ua = multiplier(U, ABS_D)
    return multiplier(Ua - U @ U, DX) - 1j * commutator(U, Ua)


def lax_commutator(U: MatrixField, F: MatrixField) -> HardyField:
    """``[B_U, L_U] F``."""
    F = _hardy(F)
    return apply_B(U, apply_L(U, F)) - apply_L(U, apply_B(U, F))


def lax_static_residual(U: MatrixField, F: MatrixField) -> float:
    """Norm of ``[B_U, L_U] F + T_G F`` where ``G`` is the sBO right-hand side."""
    return (lax_commutator(U, F) + apply_T(sbo_rhs(U), F)).norm()


def lax_static_scale(U: MatrixField, F: MatrixField) -> float:
    F = _hardy(F)
    nU = U.norm()
    nB = multiplier(U, ABS_D).norm() + nU**2
    nLF = multiplier(F, D).norm() + nU * F.norm()
    return nB * nLF
