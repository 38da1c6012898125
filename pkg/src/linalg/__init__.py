"""
Linear Algebra Module
=====================
Complex dense matrix primitives and structured-matrix generators:
- Kronecker and Hadamard (elementwise) products
- Column-major vec / unvec
- Circular shift
- DFT and Sylvester-Hadamard matrices
- Scaled-unitarity checks
"""

from .matrices import (
    CMatrix,
    DEFAULT_TOL,
    DimensionMismatchError,
    UnsupportedOrderError,
    as_cmatrix,
    circshift,
    dft_matrix,
    hadamard_matrix,
    hadamard_product,
    is_scaled_unitary,
    is_sylvester_order,
    kron,
    max_unitarity_violation,
    unvec,
    vec,
)

__all__ = [
    'CMatrix',
    'DEFAULT_TOL',
    'DimensionMismatchError',
    'UnsupportedOrderError',
    'as_cmatrix',
    'circshift',
    'dft_matrix',
    'hadamard_matrix',
    'hadamard_product',
    'is_scaled_unitary',
    'is_sylvester_order',
    'kron',
    'max_unitarity_violation',
    'unvec',
    'vec',
]
