"""Independent scalar Benjamin-Ono reference: u_t = d/dx(|D|u - u^2), u real.

Grid pseudospectral with rfft, 3/2-rule padding so the truncated quadratic term
is alias-free, integrating-factor variables, and scipy's DOP853 in time.
Shares no code with the package.
"""

import numpy as np
from scipy.integrate import solve_ivp


def solve_scalar_bo(u_hat0: np.ndarray, times, rtol=1e-12, atol=1e-14) -> np.ndarray:
    """Evolve nonnegative-mode coefficients ``u_hat0[n]``, n = 0..M.

    Returns an array ``(len(times), M + 1)`` of coefficients of the Galerkin
    system on |n| <= M.
    """
    times = np.asarray(times, dtype=float)
    M = len(u_hat0) - 1
    ngrid = 2 * (3 * M + 2)
    n = np.arange(M + 1)
    lin = 1j * n * n

    def nonlinear(uh):
        full = np.zeros(ngrid // 2 + 1, dtype=complex)
        full[: M + 1] = uh * ngrid
        u = np.fft.irfft(full, n=ngrid)
        sq = np.fft.rfft(u * u)[: M + 1] / ngrid
        return -1j * n * sq

    def f(t, y):
        v = y[: M + 1] + 1j * y[M + 1 :]
        uh = np.exp(lin * t) * v
        dv = np.exp(-lin * t) * nonlinear(uh)
        dv[0] = 0.0
        return np.concatenate([dv.real, dv.imag])

    y0 = np.concatenate([u_hat0.real, u_hat0.imag])
    sol = solve_ivp(
        f, (0.0, times[-1]), y0, method="DOP853", t_eval=times, rtol=rtol, atol=atol
    )
    assert sol.success
    v = (sol.y[: M + 1] + 1j * sol.y[M + 1 :]).T
    return np.exp(np.outer(times, lin)) * v
