"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is
printed in the pytest terminal summary (or directly when run as a script)."""

import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from scalar_bo import solve_scalar_bo
from spinbo import fields
from spinbo.dynamics import simulate
from spinbo.matrix_trig import herm_defect
from spinbo.verification import lax_flow_residual, run_verify, self_convergence_order

SEED = 20220216


def report(number: int, ok: bool, text: str):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d}: {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def flow_data():
    return fields.decay(2, 3, np.random.default_rng(SEED), amplitude=0.5, rate=0.5)


@pytest.fixture(scope="module")
def reference_run():
    """d=2, bandwidth-3 Hermitian data, M=64, dt=1e-3, t in [0, 1], N=128."""
    worst = [0.0]

    def monitor(t, U):
        worst[0] = max(worst[0], herm_defect(U) / U.norm())

    start = time.perf_counter()
    traj = simulate(flow_data(), M=64, dt=1e-3, t_end=1.0, stride=100, N=128, on_step=monitor)
    elapsed = time.perf_counter() - start
    return traj, elapsed, worst[0]


def _campaign(number, kind, limit, budget):
    start = time.perf_counter()
    rep = run_verify(kind, 100, seed=SEED, d_range=(1, 3), bandwidth_range=(1, 6))
    elapsed = time.perf_counter() - start
    r = rep["max_relative_residual"]
    report(number, r <= limit and elapsed < budget,
           f"{kind} max relative residual {r:.2e} <= {limit:.0e}, {elapsed:.1f}s < {budget}s")


def test_1_lemma_residual():
    _campaign(1, "lemma", 1e-12, 10)


def test_2_critical_identity():
    _campaign(2, "critical", 1e-12, 10)


def test_3_static_lax_identity():
    _campaign(3, "lax-static", 1e-12, 20)


def test_4_conservation_along_flow(reference_run):
    traj, elapsed, _ = reference_run
    s = traj.summary
    assert traj.dt == 1e-3 and traj.times[-1] == pytest.approx(1.0)
    e_drift = max(s.E[:5])
    m_drift = max(s.M[:2])
    report(4, e_drift <= 1e-8 and m_drift <= 1e-8 and elapsed < 120,
           f"E0..E4 drift {e_drift:.2e}, M_-1/M_0 drift {m_drift:.2e} <= 1e-8, run {elapsed:.1f}s")


def test_5_isospectrality(reference_run):
    traj, elapsed, _ = reference_run
    first, last = traj.spectra[0], traj.spectra[-1]
    k = int(0.6 * len(first))
    drift = np.abs(last[:k] - first[:k]).max()
    report(5, drift <= 1e-6 and elapsed < 120,
           f"lowest {k} of {len(first)} eigenvalues drift {drift:.2e} <= 1e-6, run {elapsed:.1f}s")


def test_6_lax_equation_along_flow():
    rng = np.random.default_rng(SEED + 1)
    tests = [fields.random_hardy(2, 4, rng) for _ in range(5)]
    U0 = flow_data()
    r1 = lax_flow_residual(U0, 64, 0.5, 0.02, tests)
    r2 = lax_flow_residual(U0, 64, 0.5, 0.01, tests)
    ratio = r1 / r2
    report(6, 3.5 <= ratio <= 4.5,
           f"residual h=0.02 {r1:.3e}, h=0.01 {r2:.3e}, ratio {ratio:.3f} in [3.5, 4.5]")


def test_7_explicit_formulas_and_trace():
    ex = run_verify("explicit", 100, seed=SEED, d_range=(1, 3), bandwidth_range=(1, 6))
    tr = run_verify("trace", 100, seed=SEED, d_range=(1, 3), bandwidth_range=(1, 6))
    a, b = ex["max_relative_residual"], tr["max_relative_residual"]
    report(7, a <= 1e-11 and b <= 1e-11,
           f"e0/e1/m0 vs definitions {a:.2e}, trace identity k=0..6 {b:.2e} <= 1e-11")


def test_8_scalar_reduction():
    M = 32
    u0 = fields.cosine([[1.0]], amplitude=0.5)
    traj = simulate(u0, M=M, dt=5e-4, t_end=1.0, stride=200)
    ours = np.array([U.padded(0, M)[:, 0, 0] for U in traj.snapshots])
    ref = solve_scalar_bo(u0.padded(0, M)[:, 0, 0], traj.times)
    err = np.abs(ours - ref).max()
    report(8, err <= 1e-10, f"d=1 vs independent scalar BO stepper, max error {err:.2e} <= 1e-10")


def test_9_integrator_order():
    order = self_convergence_order(flow_data(), 16, 1.0, 0.02)
    report(9, order >= 3.8, f"self-convergence order {order:.3f} >= 3.8")


def test_10_hermitian_preservation(reference_run):
    _, _, worst = reference_run
    report(10, worst <= 1e-10, f"max herm_defect/||U|| over every step {worst:.2e} <= 1e-10")


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
