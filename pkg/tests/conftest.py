import numpy as np
import pytest

from spinbo.matrix_trig import MatrixField

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return np.random.default_rng(20220216)


def sample(U: MatrixField, npts: int) -> np.ndarray:
    """Values of ``U`` on ``npts`` uniform grid points, by direct summation."""
    x = 2 * np.pi * np.arange(npts) / npts
    vals = np.zeros((npts, U.d, U.d), dtype=complex)
    for n, c in zip(range(U.lo, U.hi + 1), U.coeffs):
        vals += np.exp(1j * n * x)[:, None, None] * c
    return vals


def analyze(vals: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """Fourier coefficients for modes ``lo..hi`` from uniform grid samples."""
    npts = vals.shape[0]
    assert npts >= hi - lo + 1
    fhat = np.fft.fft(vals, axis=0) / npts
    return fhat[np.arange(lo, hi + 1) % npts]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
