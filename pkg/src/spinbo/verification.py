"""Seeded residual campaigns for the operator identities and conservation laws."""

from __future__ import annotations

import math
from itertools import product

import numpy as np

from . import fields
from .dynamics import SimState, integrate, rhs_full
from .hardy_ops import (
    apply_T,
    critical_residual,
    critical_scale,
    lax_commutator,
    lax_static_residual,
    lax_static_scale,
    lemma_residual,
    lemma_scale,
)
from .invariants import (
    e0_explicit,
    e1_explicit,
    energies,
    m0_explicit,
    matrix_invariant,
    matrix_invariants,
)
from .matrix_trig import MatrixField

KINDS = ("lemma", "critical", "lax-static", "explicit", "trace")
THRESHOLD = 1e-11


def _trial(kind: str, d: int, bw: int, rng: np.random.Generator) -> float:
    """Relative residual of one random trial."""
    F = fields.random_hardy(d, bw, rng)
    if kind == "lemma":
        A = fields.random_field(d, bw, rng)
        B = fields.random_field(d, bw, rng)
        return lemma_residual(A, B, F) / lemma_scale(A, B, F)
    if kind == "critical":
        U = fields.random_field(d, bw, rng)
        return critical_residual(U, F) / critical_scale(U, F)
    if kind == "lax-static":
        U = fields.random_field(d, bw, rng)
        if rng.random() < 0.5:
            U = fields.random_hermitian(d, bw, rng)
        return lax_static_residual(U, F) / lax_static_scale(U, F)

    U = fields.random_hermitian(d, bw, rng, scale=0.5)
    if kind == "explicit":
        E = energies(U, 1)
        M0 = matrix_invariant(U, 0)
        errs = [
            abs(e0_explicit(U) - E[0]) / max(1.0, abs(E[0])),
            abs(e1_explicit(U) - E[1]) / max(1.0, abs(E[1])),
            np.abs(m0_explicit(U) - M0).max() / max(1.0, np.abs(M0).max()),
        ]
        return float(max(errs))
    if kind == "trace":
        E = energies(U, 6)
        Ms = matrix_invariants(U, 6)[1:]
        return float(max(abs(np.trace(m) - e) / max(1.0, abs(e)) for m, e in zip(Ms, E)))
    raise ValueError(f"unknown verification kind {kind!r}")


def run_verify(
    kind: str,
    trials: int,
    seed: int = 0,
    d_range: tuple[int, int] = (1, 3),
    bandwidth_range: tuple[int, int] = (1, 6),
) -> dict:
    """Run ``trials`` random trials cycling over every (d, bandwidth) cell.

    Returns a JSON-ready report; ``ok`` is true iff every relative residual is
    at most ``THRESHOLD``.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown verification kind {kind!r}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    cells = list(product(range(d_range[0], d_range[1] + 1),
                         range(bandwidth_range[0], bandwidth_range[1] + 1)))
    if not cells:
        raise ValueError("empty d or bandwidth range")
    rng = np.random.default_rng(seed)
    worst: dict[tuple[int, int], float] = {}
    for i in range(trials):
        d, bw = cells[i % len(cells)]
        r = _trial(kind, d, bw, rng)
        worst[(d, bw)] = max(worst.get((d, bw), 0.0), r)
    overall = max(worst.values())
    return {
        "kind": kind,
        "trials": trials,
        "seed": seed,
        "threshold": THRESHOLD,
        "max_relative_residual": overall,
        "cells": [
            {"d": d, "bandwidth": bw, "max_relative_residual": r}
            for (d, bw), r in sorted(worst.items())
        ],
        "ok": bool(overall <= THRESHOLD),
    }


def lax_flow_residual(
    U0: MatrixField, M: int, t0: float, h: float, tests, dt: float = 1e-3
) -> float:
    """Central-difference check of ``dL/dt = [B, L]`` at ``t0``.

    ``dL/dt F = -T_{dU/dt} F`` is approximated with ``U(t0 +- h)`` from the
    Galerkin flow and compared with ``[B_U, L_U] F`` summed over ``tests``.
    """
    if h > t0:
        raise ValueError("need h <= t0")
    state = SimState(0.0, MatrixField(U0.padded(-M, M), -M), M)
    before = integrate(state, t0 - h, dt)
    mid = integrate(before, t0, dt)
    after = integrate(mid, t0 + h, dt)
    dU = (after.U - before.U) * (1.0 / (2 * h))
    total = 0.0
    for F in tests:
        total += (-apply_T(dU, F) - lax_commutator(mid.U, F)).norm() ** 2
    return math.sqrt(total)


def self_convergence_order(U0: MatrixField, M: int, t_end: float, dt: float) -> float:
    """Observed order from solutions at ``dt``, ``dt/2`` and ``dt/4``."""
    state = SimState(0.0, MatrixField(U0.padded(-M, M), -M), M)
    sols = [integrate(state, t_end, dt / 2**j).U for j in range(3)]
    e1 = (sols[0] - sols[1]).norm()
    e2 = (sols[1] - sols[2]).norm()
    return math.log2(e1 / e2)


def mean_rhs(U: MatrixField) -> np.ndarray:
    """Zero-mode of the right-hand side; vanishes identically."""
    return rhs_full(U).coeff(0)
