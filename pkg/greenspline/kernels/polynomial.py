"""
Green's functions on spaces of second order polynomials.
Both are rank one: G(s, t) = k p(s) p(t) for the single admissible shape p.
"""

from greenspline.kernels.base import Kernel
from greenspline.schemas import Constraint


def poly2_mixed(s, t):
    return 0.75 * (s - 2.0) * s * (t - 2.0) * t


def poly2_bridge(s, t):
    return 3.0 * s * (1.0 - s) * t * (1.0 - t)


POLY2_MIXED = Kernel(
    id="poly2_mixed",
    family="polynomial",
    formula="3/4(s-2)s(t-2)t",
    func=poly2_mixed,
    constraints=[Constraint(kind="value", at=0.0), Constraint(kind="derivative", at=1.0)],
    compensation=lambda s: 1.5 * s * (2.0 - s),
    compensation_formula="3/2 s(2-s)",
    boundary_terms_vanish=True,
    boundary_note="h(0) = 0 and p'(1) = 0 for p(t) = (t-2)t",
)

POLY2_BRIDGE = Kernel(
    id="poly2_bridge",
    family="polynomial",
    formula="3s(1-s)t(1-t)",
    func=poly2_bridge,
    constraints=[Constraint(kind="value", at=0.0), Constraint(kind="value", at=1.0)],
    compensation=lambda s: 6.0 * s * (1.0 - s),
    compensation_formula="6s(1-s)",
    boundary_terms_vanish=True,
    boundary_note="h(0) = h(1) = 0 for p(t) = (t-1)t",
)

POLYNOMIAL_KERNEL_DEFINITIONS = [POLY2_MIXED, POLY2_BRIDGE]
