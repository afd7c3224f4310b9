"""Pseudospectral laboratory for the spin Benjamin-Ono equation on the torus."""

__version__ = "0.1.0"

from .matrix_trig import HardyField, MatrixField  # noqa: E402

__all__ = ["HardyField", "MatrixField", "__version__"]
