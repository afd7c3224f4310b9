"""Initial-data presets and random field families."""

from __future__ import annotations

import numpy as np

from .matrix_trig import HardyField, MatrixField


def _gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def hermitize_modes(pos: np.ndarray) -> MatrixField:
    """Hermitian field from coefficients for modes ``0..B``.

    Mode 0 is replaced by its Hermitian part and ``U_{-n} = U_n^*``.
    """
    pos = np.array(pos, dtype=np.complex128)
    B = pos.shape[0] - 1
    pos[0] = 0.5 * (pos[0] + pos[0].conj().T)
    neg = np.conj(np.swapaxes(pos[:0:-1], 1, 2))
    return MatrixField(np.concatenate([neg, pos]), -B)


def cosine(matrix, amplitude: float = 1.0) -> MatrixField:
    """``2 amplitude cos(x) H`` for a Hermitian matrix ``H``."""
    H = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
    if not np.allclose(H, H.conj().T, rtol=0, atol=1e-14):
        raise ValueError("cosine preset needs a Hermitian matrix")
    c = amplitude * np.stack([H, np.zeros_like(H), H])
    return MatrixField(c, -1)


def random_hermitian(
    d: int, bandwidth: int, rng: np.random.Generator, scale: float = 1.0, rate: float = 0.0
) -> MatrixField:
    """Gaussian coefficients times ``scale * exp(-rate n)``, Hermitian-symmetrized."""
    n = np.arange(bandwidth + 1)
    pos = _gaussian(rng, (bandwidth + 1, d, d)) * (scale * np.exp(-rate * n))[:, None, None]
    return hermitize_modes(pos)


def decay(
    d: int, bandwidth: int, rng: np.random.Generator, amplitude: float = 1.0, rate: float = 0.5
) -> MatrixField:
    """Hermitian field with ``||U_n||_F = amplitude * exp(-rate |n|)``."""
    G = _gaussian(rng, (bandwidth + 1, d, d))
    G[0] = 0.5 * (G[0] + G[0].conj().T)
    G /= np.linalg.norm(G, axis=(1, 2))[:, None, None]
    G *= (amplitude * np.exp(-rate * np.arange(bandwidth + 1)))[:, None, None]
    return hermitize_modes(G)


def random_field(d: int, bandwidth: int, rng: np.random.Generator, scale: float = 1.0) -> MatrixField:
    """Non-Hermitian field on modes ``-bandwidth..bandwidth``."""
    return MatrixField(scale * _gaussian(rng, (2 * bandwidth + 1, d, d)), -bandwidth)


def random_hardy(d: int, top: int, rng: np.random.Generator, scale: float = 1.0) -> HardyField:
    return HardyField(scale * _gaussian(rng, (top + 1, d, d)), 0)
