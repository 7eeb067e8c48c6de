"""
Kernel Catalog Registry.
Central location for every closed-form Green's function and its lookup.
"""

from typing import Dict, List, Optional

from greenspline.kernels.base import Kernel
from greenspline.kernels.boundary import BOUNDARY_KERNEL_DEFINITIONS
from greenspline.kernels.first_order import FIRST_ORDER_KERNEL_DEFINITIONS
from greenspline.kernels.periodic import PERIODIC_KERNEL_DEFINITIONS
from greenspline.kernels.polynomial import POLYNOMIAL_KERNEL_DEFINITIONS
from greenspline.kernels.zero_mean import ZERO_MEAN_KERNEL_DEFINITIONS
from greenspline.utils import InvalidInputError


class KernelRegistry:
    """
    Registry of catalog kernels grouped by family.
    Provides lookup by id and the rows shown by `list-kernels`.
    """

    def __init__(self):
        """Initialize the catalog."""
        self.families = {
            "boundary": {
                "name": "Boundary conditions",
                "description": "Dirichlet and mixed pins (Brownian bridge / motion)",
                "kernels": BOUNDARY_KERNEL_DEFINITIONS,
            },
            "periodic": {
                "name": "Periodic",
                "description": "Zero-mean periodic and odd functions",
                "kernels": PERIODIC_KERNEL_DEFINITIONS,
            },
            "zero_mean": {
                "name": "Zero mean",
                "description": "Boundary pins plus a zero-integral constraint",
                "kernels": ZERO_MEAN_KERNEL_DEFINITIONS,
            },
            "polynomial": {
                "name": "Second order polynomials",
                "description": "Rank-one kernels on quadratic subspaces",
                "kernels": POLYNOMIAL_KERNEL_DEFINITIONS,
            },
            "first_order": {
                "name": "First-order operator",
                "description": "Green's function of d/dt (not a covariance)",
                "kernels": FIRST_ORDER_KERNEL_DEFINITIONS,
            },
        }
        self._by_id: Dict[str, Kernel] = {}
        for family in self.families.values():
            for kernel in family["kernels"]:
                self._by_id[kernel.id] = kernel

    def get(self, kernel_id: str) -> Kernel:
        """Look up a kernel by its exact lowercase id."""
        try:
            return self._by_id[kernel_id]
        except KeyError:
            raise InvalidInputError(
                f"Unknown kernel: {kernel_id!r}. Available: {', '.join(self.ids())}"
            ) from None

    def ids(self) -> List[str]:
        return list(self._by_id)

    def symmetric_ids(self) -> List[str]:
        """Kernels usable as covariances (everything but the first-order one)."""
        return [k.id for k in self._by_id.values() if k.symmetric]

    def get_family_kernels(self, family: str) -> List[Kernel]:
        if family in self.families:
            return list(self.families[family]["kernels"])
        return []

    def describe(self, kernel_id: Optional[str] = None) -> List[Dict]:
        """Rows of id, closed form, constraints and family."""
        kernels = [self.get(kernel_id)] if kernel_id else list(self._by_id.values())
        return [
            {
                "id": k.id,
                "family": k.family,
                "formula": k.formula,
                "constraints": [c.label for c in k.constraints],
                "compensation": k.compensation_formula,
                "symmetric": k.symmetric,
            }
            for k in kernels
        ]

    def list_families(self) -> List[Dict]:
        return [
            {
                "id": fam_id,
                "name": fam["name"],
                "description": fam["description"],
                "kernel_count": len(fam["kernels"]),
            }
            for fam_id, fam in self.families.items()
        ]


# Global registry instance
REGISTRY = KernelRegistry()


def get_kernel(kernel_id: str) -> Kernel:
    """Get a catalog kernel by id."""
    return REGISTRY.get(kernel_id)


def list_kernels() -> List[Dict]:
    """Describe every catalog kernel."""
    return REGISTRY.describe()


def symmetric_kernels() -> List[Kernel]:
    """Every kernel that can act as a covariance."""
    return [REGISTRY.get(k) for k in REGISTRY.symmetric_ids()]
