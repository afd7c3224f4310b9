"""Conservation-law hierarchy for the spin Benjamin-Ono flow on the torus.

Scalar laws ``E_k = <L_U^k U_+ | U_+>`` and matrix laws
``M_k = mean(L_U^{k+2} 1)`` for ``k >= -1``, plus closed forms for the lowest
orders and drift bookkeeping along trajectories.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hardy_ops import apply_L, apply_L_power
from .matrix_trig import (
    ABS_D,
    HILBERT,
    HardyField,
    MatrixField,
    herm_defect,
    inner,
    mean,
    multiplier,
    project_nonneg,
)


def energy(U: MatrixField, k: int) -> complex:
    if k < 0:
        raise ValueError("energy order must be >= 0")
    Up = project_nonneg(U)
    return inner(apply_L_power(U, Up, k), Up)


def energies(U: MatrixField, K: int) -> list[complex]:
    """``E_0..E_K`` sharing the iterated ``L_U`` applications."""
    Up = project_nonneg(U)
    out, F = [], Up
    for k in range(K + 1):
        if k:
            F = apply_L(U, F)
        out.append(inner(F, Up))
    return out


def _identity(U: MatrixField) -> HardyField:
    return HardyField(np.eye(U.d, dtype=np.complex128)[None], 0)


def matrix_invariant(U: MatrixField, k: int) -> np.ndarray:
    if k < -1:
        raise ValueError("matrix invariant order must be >= -1")
    return mean(apply_L_power(U, _identity(U), k + 2))


def matrix_invariants(U: MatrixField, K: int) -> list[np.ndarray]:
    """``M_{-1}..M_K``."""
    F = apply_L(U, _identity(U))
    out = [mean(F)]
    for _ in range(K + 1):
        F = apply_L(U, F)
        out.append(mean(F))
    return out


def e0_explicit(U: MatrixField) -> complex:
    m = mean(U)
    return 0.5 * np.trace(mean(U @ U)) + 0.5 * np.trace(m @ m)


def m0_explicit(U: MatrixField) -> np.ndarray:
    m = mean(U)
    HU = multiplier(U, HILBERT)
    return 0.5 * (mean(U @ U) - 1j * mean(U @ HU)) + 0.5 * m @ m


def e1_explicit(U: MatrixField) -> complex:
    """Closed form of ``E_1``.

    The cubic mean correction is ``+tr(<U>^3)/3``; with ``-5/3`` in its place
    the formula already fails for constant fields.
    """
    m = mean(U)
    Ua = multiplier(U, ABS_D)
    density = 0.5 * mean(U @ Ua) - mean(U @ U @ U) / 3.0
    return np.trace(density) + np.trace(m @ m @ m) / 3.0 - np.trace(m0_explicit(U) @ m)


def e1_explicit_printed(U: MatrixField) -> complex:
    """The ``E_1`` closed form with the ``-5/3 tr(<U>^3)`` coefficient.

    Kept for comparison only; it disagrees with ``energy(U, 1)`` whenever
    ``tr(<U>^3) != 0``.
    """
    m = mean(U)
    return e1_explicit(U) - 2.0 * np.trace(m @ m @ m)


def sobolev_norm(U: MatrixField, s: float) -> float:
    if s < 0:
        raise ValueError("s must be nonnegative")
    w = (1.0 + U.modes.astype(float) ** 2) ** s
    sq = np.sum(np.abs(U.coeffs) ** 2, axis=(1, 2))
    return float(np.sqrt(np.sum(w * sq)))


@dataclass
class InvariantRecord:
    t: float
    E: list[complex]
    M: list[np.ndarray]
    herm_defect: float

    @classmethod
    def of(cls, t: float, U: MatrixField, K: int = 4, K_matrix: int = 2):
        return cls(float(t), energies(U, K), matrix_invariants(U, K_matrix), herm_defect(U))


@dataclass
class DriftSummary:
    """Max relative drift ``|Q(t) - Q(0)| / max(1, |Q(0)|)`` per invariant.

    ``E[k]`` belongs to ``E_k``; ``M[j]`` is the entrywise maximum for
    ``M_{j-1}``.
    """

    E: list[float] = field(default_factory=list)
    M: list[float] = field(default_factory=list)
    herm_defect: float = 0.0

    @property
    def max_drift(self) -> float:
        return max(self.E + self.M, default=0.0)


def _rel(q, q0) -> float:
    return float(np.max(np.abs(np.asarray(q) - q0) / np.maximum(1.0, np.abs(q0))))


def summarize(records: Sequence[InvariantRecord]) -> DriftSummary:
    if not records:
        raise ValueError("empty trajectory")
    r0 = records[0]
    s = DriftSummary(
        E=[0.0] * len(r0.E), M=[0.0] * len(r0.M), herm_defect=max(r.herm_defect for r in records)
    )
    for r in records[1:]:
        for k, (q, q0) in enumerate(zip(r.E, r0.E)):
            s.E[k] = max(s.E[k], _rel(q, q0))
        for k, (q, q0) in enumerate(zip(r.M, r0.M)):
            s.M[k] = max(s.M[k], _rel(q, q0))
    return s


def drift_series(snapshots, K: int = 4, K_matrix: int = 2):
    """Records and drift summary for ``(t, U)`` snapshots."""
    snapshots = list(snapshots)
    if not snapshots:
        raise ValueError("empty trajectory")
    d = snapshots[0][1].d
    if any(U.d != d for _, U in snapshots):
        raise ValueError("snapshots must share the matrix dimension")
    records = [InvariantRecord.of(t, U, K, K_matrix) for t, U in snapshots]
    return records, summarize(records)
