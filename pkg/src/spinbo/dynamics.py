"""Galerkin time integration of the spin Benjamin-Ono equation on the torus.

    dU/dt = d/dx(|D|U - U^2) - i[U, |D|U]

The dispersive part acts on mode ``n`` as multiplication by ``i n |n|`` and is
integrated exactly with an integrating factor; the remaining terms are
evaluated in exact coefficient arithmetic and truncated to ``|n| <= M`` after
every Runge-Kutta stage.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .hardy_ops import apply_B, apply_L, apply_T, sbo_rhs, spectrum_L
from .invariants import InvariantRecord, summarize
from .matrix_trig import (
    ABS_D,
    DX,
    HardyField,
    MatrixField,
    adjoint,
    commutator,
    herm_defect,
    mean,
    multiplier,
    project_neg,
    project_nonneg,
    truncate,
    wiener_norm,
)

log = logging.getLogger(__name__)


def rhs_full(U: MatrixField) -> MatrixField:
    """Exact right-hand side; bandwidth doubles, the caller truncates."""
    return sbo_rhs(U)


def rhs_hardy(U: MatrixField, U_plus: MatrixField, tol: float = 1e-12) -> HardyField:
    """Evolution of ``U_+`` written as ``i L_U^2 U_+ + B_U U_+``."""
    expected = project_nonneg(U)
    if (expected - U_plus).norm() > tol * max(1.0, expected.norm()):
        raise ValueError("U_plus is not the nonnegative-mode part of U")
    Up = HardyField.of(U_plus)
    return 1j * apply_L(U, apply_L(U, Up)) + apply_B(U, Up)


def rhs_hardy_expanded(U: MatrixField) -> HardyField:
    """Same evolution as ``-i U_+'' - 2 T_U U_+' - 2 T_{(U_-)'} U_+``."""
    Up = project_nonneg(U)
    Upx = multiplier(Up, DX)
    Umx = multiplier(project_neg(U), DX)
    return -1j * multiplier(Upx, DX) - 2 * apply_T(U, Upx) - 2 * apply_T(Umx, Up)


def reconstruct(U_plus: MatrixField, tol: float = 1e-12) -> MatrixField:
    """Hermitian field with nonnegative part ``U_plus``: ``U_+ + U_+^* - <U_+>``."""
    Up = HardyField.of(U_plus)
    m = mean(Up)
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol * max(1.0, np.abs(m).max()):
        raise ValueError("mean of U_plus must be Hermitian")
    return Up + adjoint(Up) - MatrixField.constant(m)


@dataclass(frozen=True)
class SimState:
    t: float
    U: MatrixField
    M: int

    @property
    def d(self) -> int:
        return self.U.d


def _phase(M: int, tau: float) -> np.ndarray:
    n = np.arange(-M, M + 1)
    return np.exp(1j * n * np.abs(n) * tau)[:, None, None]


def nonlinear(U: MatrixField, M: int) -> np.ndarray:
    """``-d/dx(U^2) - i[U, |D|U]`` on modes ``-M..M``."""
    Ua = multiplier(U, ABS_D)
    N = -multiplier(U @ U, DX) - 1j * commutator(U, Ua)
    return N.padded(-M, M)


def step_ifrk4(state: SimState, dt: float) -> SimState:
    """One classical four-stage integrating-factor Runge-Kutta step."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    M = state.M
    u = state.U.padded(-M, M)
    Eh, E = _phase(M, dt / 2), _phase(M, dt)

    def N(c):
        return nonlinear(MatrixField(c, -M), M)

    k1 = N(u)
    k2 = N(Eh * (u + 0.5 * dt * k1))
    k3 = N(Eh * u + 0.5 * dt * k2)
    k4 = N(E * u + dt * Eh * k3)
    u_new = E * u + dt / 6.0 * (E * k1 + 2.0 * Eh * (k2 + k3) + k4)
    return SimState(state.t + dt, MatrixField(u_new, -M), M)


def integrate(state: SimState, t_end: float, dt: float) -> SimState:
    """Advance to ``t_end`` with equal steps no larger than ``dt``."""
    span = t_end - state.t
    if span < 0:
        raise ValueError("t_end precedes the current time")
    n = math.ceil(span / dt - 1e-9) if span > 0 else 0
    if n == 0:
        return state
    h = span / n
    t0 = state.t
    for _ in range(n):
        state = step_ifrk4(state, h)
    return SimState(t0 + span, state.U, state.M)


def cfl_dt(U: MatrixField, M: int) -> float:
    return 0.5 / (M * (1.0 + wiener_norm(U)))


@dataclass
class Trajectory:
    times: list[float] = field(default_factory=list)
    snapshots: list[MatrixField] = field(default_factory=list)
    records: list[InvariantRecord] = field(default_factory=list)
    spectra: list[np.ndarray] = field(default_factory=list)
    dt: float = 0.0
    steps: int = 0
    aborted: str | None = None

    @property
    def summary(self):
        return summarize(self.records)


def simulate(
    U0: MatrixField,
    *,
    M: int,
    dt: float,
    t_end: float,
    stride: int = 100,
    K: int = 4,
    K_matrix: int = 2,
    N: int | None = None,
    drift_hard_limit: float = float("inf"),
    herm_hard_limit: float = float("inf"),
    norm_cap: float = float("inf"),
    consistency_every: int = 0,
    on_step: Callable[[float, MatrixField], None] | None = None,
) -> Trajectory:
    """Integrate from ``U0`` and collect snapshots every ``stride`` steps.

    ``dt`` is capped by the nonlinear CFL estimate and then shrunk so that an
    integer number of steps reaches ``t_end``.  Hard limits stop the run and set
    ``Trajectory.aborted``; they never modify the solution.  ``on_step`` sees
    every intermediate state, including the initial one.
    """
    if M < 1 or stride < 1 or dt <= 0 or t_end < 0:
        raise ValueError("need M >= 1, stride >= 1, dt > 0, t_end >= 0")
    defect0 = herm_defect(U0)
    if defect0 > 1e-12 * max(1.0, U0.norm()):
        raise ValueError(f"initial field is not Hermitian-valued (defect {defect0:.3e})")
    if U0.bandwidth > M:
        raise ValueError(f"initial bandwidth {U0.bandwidth} exceeds M={M}")

    dt = min(dt, cfl_dt(U0, M))
    steps = math.ceil(t_end / dt - 1e-9) if t_end > 0 else 0
    h = t_end / steps if steps else 0.0
    traj = Trajectory(dt=h, steps=steps)
    state = SimState(0.0, MatrixField(U0.padded(-M, M), -M), M)

    def emit(i):
        t = i * h
        U = state.U
        traj.times.append(t)
        traj.snapshots.append(U)
        rec = InvariantRecord.of(t, U, K, K_matrix)
        traj.records.append(rec)
        if N is not None:
            traj.spectra.append(spectrum_L(U, N, tol=max(1e-10, herm_hard_limit)))
        scale = max(1.0, U.norm())
        if rec.herm_defect > herm_hard_limit * scale:
            traj.aborted = f"herm_defect {rec.herm_defect:.3e} exceeds limit at t={t:.6g}"
        elif len(traj.records) > 1 and summarize(traj.records).max_drift > drift_hard_limit:
            traj.aborted = f"invariant drift exceeds {drift_hard_limit:.3e} at t={t:.6g}"
        elif U.norm() > norm_cap:
            traj.aborted = f"field norm {U.norm():.3e} exceeds cap at t={t:.6g}"

    if on_step:
        on_step(0.0, state.U)
    emit(0)
    for i in range(1, steps + 1):
        state = step_ifrk4(state, h)
        state = SimState(i * h, state.U, M)
        if on_step:
            on_step(state.t, state.U)
        if consistency_every and i % consistency_every == 0:
            _check_projection(state.U)
        if i % stride == 0 or i == steps:
            emit(i)
            if traj.aborted:
                log.error(traj.aborted)
                break
    return traj


def _check_projection(U: MatrixField, rtol: float = 1e-12):
    a = project_nonneg(rhs_full(U))
    b = rhs_hardy(U, project_nonneg(U))
    err = (a - b).norm()
    if err > rtol * max(1.0, a.norm()):
        log.warning("projected right-hand side mismatch %.3e", err)


def truncated_rhs(U: MatrixField, M: int) -> MatrixField:
    """Galerkin right-hand side on ``|n| <= M``."""
    return truncate(rhs_full(U), M)
