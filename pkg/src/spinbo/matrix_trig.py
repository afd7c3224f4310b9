"""Matrix-valued trigonometric polynomials on the normalized torus.

A field is ``U(x) = sum_n U_n exp(i n x)`` with ``d x d`` complex coefficients
``U_n`` stored densely for every mode in ``[lo, hi]``.  The torus measure is
normalized to one, so the mean of a field is its zero-mode coefficient and the
inner product is ``<A|B> = sum_n tr(A_n B_n^*)``.

All arithmetic is exact in the coefficient algebra: products are full
convolutions and never truncate.  Grids and FFTs appear only in the test
oracles.
"""

from __future__ import annotations

from typing import Callable, Mapping

import numpy as np

Symbol = Callable[[np.ndarray], np.ndarray]


class DimensionError(ValueError):
    """Raised when two fields of different matrix size are combined."""


class MatrixField:
    """Immutable matrix-valued trigonometric polynomial.

    Parameters
    ----------
    coeffs : array_like, shape (hi - lo + 1, d, d)
        Coefficients for consecutive modes starting at ``lo``.
    lo : int
        Lowest stored mode.
    """

    __slots__ = ("_coeffs", "_lo")

    def __init__(self, coeffs, lo: int = 0):
        c = np.array(coeffs, dtype=np.complex128)
        if c.ndim != 3 or c.shape[1] != c.shape[2] or c.shape[0] == 0 or c.shape[1] == 0:
            raise ValueError(f"coefficients must have shape (modes, d, d), got {c.shape}")
        c.setflags(write=False)
        self._coeffs = c
        self._lo = int(lo)

    # construction -----------------------------------------------------------

    @classmethod
    def zeros(cls, d: int, lo: int = 0, hi: int = 0):
        if hi < lo:
            raise ValueError("hi must be >= lo")
        return cls(np.zeros((hi - lo + 1, d, d), dtype=np.complex128), lo)

    @classmethod
    def constant(cls, matrix):
        m = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
        return cls(m[None], 0)

    @classmethod
    def monomial(cls, n: int, matrix):
        """The field ``matrix * exp(i n x)``."""
        m = np.atleast_2d(np.asarray(matrix, dtype=np.complex128))
        return cls(m[None], n)

    @classmethod
    def from_modes(cls, modes: Mapping[int, np.ndarray], d: int | None = None):
        if not modes:
            if d is None:
                raise ValueError("cannot infer d from an empty mode map")
            return cls.zeros(d)
        keys = sorted(modes)
        first = np.atleast_2d(np.asarray(modes[keys[0]]))
        d = first.shape[0] if d is None else d
        lo, hi = keys[0], keys[-1]
        c = np.zeros((hi - lo + 1, d, d), dtype=np.complex128)
        for n in keys:
            c[n - lo] = modes[n]
        return cls(c, lo)

    # basic attributes -------------------------------------------------------

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def lo(self) -> int:
        return self._lo

    @property
    def hi(self) -> int:
        return self._lo + self._coeffs.shape[0] - 1

    @property
    def d(self) -> int:
        return self._coeffs.shape[1]

    @property
    def modes(self) -> np.ndarray:
        return np.arange(self.lo, self.hi + 1)

    @property
    def bandwidth(self) -> int:
        """Largest ``|n|`` carrying a nonzero coefficient."""
        nz = np.flatnonzero(np.any(self._coeffs != 0, axis=(1, 2)))
        if nz.size == 0:
            return 0
        return int(max(abs(self.lo + nz[0]), abs(self.lo + nz[-1])))

    def coeff(self, n: int) -> np.ndarray:
        if self.lo <= n <= self.hi:
            return self._coeffs[n - self.lo]
        return np.zeros((self.d, self.d), dtype=np.complex128)

    def padded(self, lo: int, hi: int) -> np.ndarray:
        """Coefficient array over ``[lo, hi]``; modes outside are dropped."""
        out = np.zeros((hi - lo + 1, self.d, self.d), dtype=np.complex128)
        a, b = max(lo, self.lo), min(hi, self.hi)
        if a <= b:
            out[a - lo : b - lo + 1] = self._coeffs[a - self.lo : b - self.lo + 1]
        return out

    def trimmed(self):
        """Same field with leading and trailing zero modes removed."""
        nz = np.flatnonzero(np.any(self._coeffs != 0, axis=(1, 2)))
        if nz.size == 0:
            return type(self).zeros(self.d)
        return type(self)(self._coeffs[nz[0] : nz[-1] + 1], self.lo + nz[0])

    def to_dict(self) -> dict[int, np.ndarray]:
        return {int(n): c for n, c in zip(self.modes, self._coeffs) if np.any(c != 0)}

    def __call__(self, x) -> np.ndarray:
        """Evaluate pointwise; returns shape ``(*x.shape, d, d)``."""
        x = np.asarray(x, dtype=float)
        phases = np.exp(1j * np.multiply.outer(x, self.modes))
        return np.tensordot(phases, self._coeffs, axes=(-1, 0))

    def __repr__(self):
        return f"{type(self).__name__}(d={self.d}, lo={self.lo}, hi={self.hi})"

    # arithmetic -------------------------------------------------------------

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, -other)

    def __neg__(self):
        return MatrixField(-self._coeffs, self.lo)

    def __mul__(self, scalar):
        if isinstance(scalar, MatrixField):
            return NotImplemented
        return MatrixField(self._coeffs * scalar, self.lo)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return mul(self, other)

    def norm(self) -> float:
        """L2 norm for the normalized measure."""
        return float(np.linalg.norm(self._coeffs.ravel()))


class HardyField(MatrixField):
    """A field with no negative Fourier modes (an element of the Hardy space)."""

    __slots__ = ()

    def __init__(self, coeffs, lo: int = 0):
        super().__init__(coeffs, lo)
        if self._lo < 0:
            neg = self._coeffs[: -self._lo]
            if np.any(neg != 0):
                raise ValueError("HardyField cannot carry negative modes")
            self._coeffs = self._coeffs[-self._lo :] if self.hi >= 0 else np.zeros_like(self._coeffs[:1])
            self._lo = 0

    @classmethod
    def of(cls, field: MatrixField) -> "HardyField":
        """View ``field`` as a Hardy field; it must have no negative modes."""
        if isinstance(field, HardyField):
            return field
        return cls(field.coeffs, field.lo)

    def __neg__(self):
        return HardyField(-self._coeffs, self.lo)

    def __mul__(self, scalar):
        if isinstance(scalar, MatrixField):
            return NotImplemented
        return HardyField(self._coeffs * scalar, self.lo)

    __rmul__ = __mul__

    def __add__(self, other):
        out = add(self, other)
        return HardyField.of(out) if isinstance(other, HardyField) else out

    def __sub__(self, other):
        out = add(self, -other)
        return HardyField.of(out) if isinstance(other, HardyField) else out


def _check_d(a: MatrixField, b: MatrixField):
    if a.d != b.d:
        raise DimensionError(f"matrix dimensions differ: {a.d} vs {b.d}")


def add(a: MatrixField, b: MatrixField) -> MatrixField:
    _check_d(a, b)
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    return MatrixField(a.padded(lo, hi) + b.padded(lo, hi), lo)


def mul(a: MatrixField, b: MatrixField) -> MatrixField:
    """Pointwise matrix product ``a(x) b(x)`` as an exact convolution.

    The order of the factors is kept; the result covers modes
    ``[a.lo + b.lo, a.hi + b.hi]``.
    """
    _check_d(a, b)
    d = a.d
    ca, cb = a.coeffs, b.coeffs
    out = np.zeros((ca.shape[0] + cb.shape[0] - 1, d, d), dtype=np.complex128)
    for i in range(d):
        for k in range(d):
            acc = out[:, i, k]
            for j in range(d):
                acc += np.convolve(ca[:, i, j], cb[:, j, k])
    return MatrixField(out, a.lo + b.lo)


def commutator(a: MatrixField, b: MatrixField) -> MatrixField:
    return mul(a, b) - mul(b, a)


def anticommutator(a: MatrixField, b: MatrixField) -> MatrixField:
    return mul(a, b) + mul(b, a)


def adjoint(a: MatrixField) -> MatrixField:
    """Pointwise Hermitian conjugate: coefficient ``n`` becomes ``conj(a_{-n})^T``."""
    c = np.conj(np.swapaxes(a.coeffs[::-1], 1, 2))
    return MatrixField(c, -a.hi)


def project_nonneg(a: MatrixField) -> HardyField:
    if a.hi < 0:
        return HardyField.zeros(a.d)
    return HardyField(a.padded(0, a.hi), 0)


def project_neg(a: MatrixField) -> MatrixField:
    if a.lo >= 0:
        return MatrixField.zeros(a.d, -1, -1)
    return MatrixField(a.padded(a.lo, -1), a.lo)


def project_pos(a: MatrixField) -> HardyField:
    """Keep strictly positive modes."""
    if a.hi <= 0:
        return HardyField.zeros(a.d)
    c = a.padded(0, a.hi)
    c[0] = 0
    return HardyField(c, 0)


# Fourier symbols; each maps an integer mode array to multiplier values.
def D(n):
    return n.astype(float)


def ABS_D(n):
    return np.abs(n).astype(float)


def DX(n):
    return 1j * n


def HILBERT(n):
    # sign(0) := 0, so constants are annihilated
    return 1j * np.sign(n)


def multiplier(a: MatrixField, symbol: Symbol) -> MatrixField:
    s = np.asarray(symbol(a.modes), dtype=np.complex128)
    cls = HardyField if isinstance(a, HardyField) else MatrixField
    return cls(a.coeffs * s[:, None, None], a.lo)


def inner(a: MatrixField, b: MatrixField) -> complex:
    """``<a|b> = integral of tr(a b^*)`` over the normalized torus."""
    _check_d(a, b)
    lo, hi = max(a.lo, b.lo), min(a.hi, b.hi)
    if lo > hi:
        return 0j
    return complex(np.vdot(b.padded(lo, hi), a.padded(lo, hi)))


def mean(a: MatrixField) -> np.ndarray:
    return a.coeff(0).copy()


def truncate(a: MatrixField, M: int) -> MatrixField:
    """Drop all modes with ``|n| > M``."""
    if M < 0:
        raise ValueError("bandwidth must be nonnegative")
    lo, hi = max(a.lo, -M), min(a.hi, M)
    cls = HardyField if isinstance(a, HardyField) else MatrixField
    if lo > hi:
        return cls.zeros(a.d)
    return cls(a.padded(lo, hi), lo)


def herm_defect(a: MatrixField) -> float:
    """Largest Frobenius deviation of ``a_{-n}`` from ``a_n^*`` over all modes."""
    b = adjoint(a)
    lo, hi = min(a.lo, b.lo), max(a.hi, b.hi)
    diff = a.padded(lo, hi) - b.padded(lo, hi)
    return float(np.max(np.linalg.norm(diff, axis=(1, 2))))


def is_hermitian(a: MatrixField, tol: float = 1e-12) -> bool:
    return herm_defect(a) <= tol * max(1.0, a.norm())


def wiener_norm(a: MatrixField) -> float:
    """Sum of coefficient Frobenius norms; bounds the sup norm of ``a``."""
    return float(np.sum(np.linalg.norm(a.coeffs, axis=(1, 2))))


def allclose(a: MatrixField, b: MatrixField, rtol: float = 1e-12) -> bool:
    """Relative Frobenius comparison over all modes."""
    diff = (a - b).norm()
    return diff <= rtol * max(a.norm(), b.norm(), np.finfo(float).tiny)
