"""
Zero-mean periodic Green's functions: the balanced (periodic Brownian
motion) kernel and its odd part.
"""

import numpy as np

from greenspline.kernels.base import Kernel
from greenspline.schemas import Constraint


def balanced_periodic(s, t):
    d = np.abs(s - t)
    return 0.5 * d * d - 0.5 * d + 1.0 / 12.0


def odd(s, t):
    """
    1/4 (|s-t|(|s-t|-1) - u(u-1)) with u = s + t - 1_[1,2](s + t).

    Continuous across s + t = 1, where the wrapped term vanishes either way.
    """
    d = np.abs(s - t)
    u = s + t
    u = np.where(u >= 1.0, u - 1.0, u)
    return 0.25 * (d * (d - 1.0) - u * (u - 1.0))


BALANCED_PERIODIC = Kernel(
    id="balanced_periodic",
    family="periodic",
    formula="1/2|s-t|^2 - 1/2|s-t| + 1/12",
    func=balanced_periodic,
    constraints=[Constraint(kind="integral"), Constraint(kind="periodic")],
    compensation=lambda s: -1.0,
    compensation_formula="-1",
    series_mode="unconstrained",
    boundary_terms_vanish=True,
    boundary_note="theta' and h are both periodic, so the two boundary terms cancel",
)

ODD = Kernel(
    id="odd",
    family="periodic",
    formula="1/4(|s-t|(|s-t|-1) - u(u-1)), u = s+t-1[1,2](s+t)",
    func=odd,
    constraints=[
        Constraint(kind="antisymmetry"),
        Constraint(kind="value", at=0.0),
        Constraint(kind="value", at=1.0),
        Constraint(kind="integral"),
    ],
    compensation=lambda s: 0.0,
    compensation_formula="0 (seams at t = s and t = 1-s)",
    anti_seam=True,
    series_mode="sine_only",
    boundary_terms_vanish=True,
    boundary_note="h(0) = h(1) = 0 for odd variations",
)

PERIODIC_KERNEL_DEFINITIONS = [BALANCED_PERIODIC, ODD]
