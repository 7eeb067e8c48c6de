"""
Closed-form Green's function catalog for the Laplace operator on [0, 1].
"""

from greenspline.kernels.base import (
    Kernel,
    check_constraints,
    cross_gram,
    gram,
    offdiag_laplacian_check,
)
from greenspline.kernels.first_order import heaviside_delta_check
from greenspline.kernels.registry import (
    REGISTRY,
    get_kernel,
    list_kernels,
    symmetric_kernels,
)

__all__ = [
    "Kernel",
    "REGISTRY",
    "check_constraints",
    "cross_gram",
    "get_kernel",
    "gram",
    "heaviside_delta_check",
    "list_kernels",
    "offdiag_laplacian_check",
    "symmetric_kernels",
]
