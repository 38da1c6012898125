"""
Matrix Primitives
=================
Dense complex matrices are plain 2-D ``numpy`` arrays of dtype complex128.

Conventions fixed here for the whole package:
- vec / unvec are column-major (Fortran order).
- DFT sign convention: F[j, k] = exp(-2*pi*i*j*k/n), unnormalized (F^H F = n I).
- Hadamard matrices are Sylvester matrices (orders 1, 2, 4, 8, ...).
"""

from typing import Any

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

CMatrix = NDArray[np.complex128]

# Absolute tolerance on the max entry of a residual matrix
DEFAULT_TOL = 1e-10


class DimensionMismatchError(ValueError):
    """Raised when operand shapes are incompatible."""


class UnsupportedOrderError(ValueError):
    """Raised when a structured matrix of the requested order cannot be built."""


def as_cmatrix(x: Any) -> CMatrix:
    """
    Coerce input to a 2-D complex128 matrix.

    Scalars become 1x1 and 1-D input becomes a column vector.

    Raises:
        ValueError: if any entry is NaN or infinite
    """
    a = np.asarray(x, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    elif a.ndim == 1:
        a = a.reshape(-1, 1)
    elif a.ndim != 2:
        raise DimensionMismatchError(f"Expected a matrix, got array with ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise ValueError("Matrix contains non-finite entries")
    return a


def kron(a: CMatrix, b: CMatrix) -> CMatrix:
    """Kronecker product; block (i, j) of the result equals a[i, j] * b."""
    return np.kron(as_cmatrix(a), as_cmatrix(b))


def hadamard_product(a: CMatrix, b: CMatrix) -> CMatrix:
    """
    Elementwise product of two equally sized matrices.

    Raises:
        DimensionMismatchError: if shapes differ
    """
    a = as_cmatrix(a)
    b = as_cmatrix(b)
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"Hadamard product needs equal shapes, got {a.shape} and {b.shape}"
        )
    return a * b


def vec(a: CMatrix) -> CMatrix:
    """Stack the columns of ``a`` into a single column vector."""
    a = as_cmatrix(a)
    return a.reshape(-1, 1, order='F')


def unvec(v: CMatrix, rows: int, cols: int) -> CMatrix:
    """
    Reshape a column vector back into a rows x cols matrix (inverse of vec).

    Raises:
        DimensionMismatchError: if v does not hold exactly rows * cols entries
    """
    v = np.asarray(v, dtype=np.complex128)
    if v.size != rows * cols or (v.ndim == 2 and v.shape[1] != 1):
        raise DimensionMismatchError(
            f"Cannot unvec array of shape {v.shape} into {rows}x{cols}"
        )
    return v.reshape(rows, cols, order='F')


def circshift(v: CMatrix, n: int) -> CMatrix:
    """
    Rotate a vector right by ``n`` positions (the final n entries move to the front).

    ``n`` larger than the vector length wraps around.
    """
    if n < 0:
        raise ValueError(f"Shift must be non-negative, got {n}")
    v = np.asarray(v)
    flat = v.reshape(-1)
    return np.roll(flat, n % flat.size).reshape(v.shape)


def dft_matrix(n: int) -> CMatrix:
    """
    Unnormalized n x n DFT matrix, F[j, k] = exp(-2*pi*i*j*k/n).

    The exponent is reduced modulo n before evaluation so that entries are
    bit-identical for equal phases.
    """
    if n < 1:
        raise UnsupportedOrderError(f"DFT order must be >= 1, got {n}")
    idx = np.arange(n)
    jk = np.outer(idx, idx) % n
    return np.exp(-2j * np.pi * jk / n)


def is_sylvester_order(n: int) -> bool:
    """True for n = 1, 2, 4, 8, ..."""
    return n >= 1 and (n & (n - 1)) == 0


def hadamard_matrix(n: int) -> CMatrix:
    """
    Sylvester Hadamard matrix of order n with +/-1 entries (D^T D = n I).

    Raises:
        UnsupportedOrderError: if n is not a power of two
    """
    if not is_sylvester_order(n):
        raise UnsupportedOrderError(
            f"Hadamard matrix of order {n} is not supported (Sylvester orders only)"
        )
    return scipy.linalg.hadamard(n, dtype=np.int64).astype(np.complex128)


def max_unitarity_violation(a: CMatrix, alpha: float = 1.0) -> float:
    """Max-abs entry of a^H a - alpha I."""
    a = as_cmatrix(a)
    rows, cols = a.shape
    if rows != cols:
        raise DimensionMismatchError(f"Expected a square matrix, got {a.shape}")
    gram = a.conj().T @ a
    return float(np.max(np.abs(gram - alpha * np.eye(cols))))


def is_scaled_unitary(a: CMatrix, alpha: float = 1.0, tol: float = DEFAULT_TOL) -> bool:
    """True iff a^H a equals alpha I to within ``tol`` on every entry."""
    return max_unitarity_violation(a, alpha) <= tol
