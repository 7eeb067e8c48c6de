"""
Boundary-pinned Green's functions with an added zero-integral constraint.
Each is the unconstrained kernel minus a quadratic polynomial correction.
"""

import numpy as np

from greenspline.kernels.base import Kernel
from greenspline.schemas import Constraint


def mixed_zero_mean(s, t):
    return np.minimum(s, t) - 0.75 * (s * s - 2.0 * s) * (t * t - 2.0 * t)


def dirichlet_zero_mean(s, t):
    return np.minimum(s, t) - s * t - 3.0 * (1.0 - s) * s * (1.0 - t) * t


MIXED_ZERO_MEAN = Kernel(
    id="mixed_zero_mean",
    family="zero_mean",
    formula="s^t - 3/4(s^2-2s)(t^2-2t)",
    func=mixed_zero_mean,
    constraints=[
        Constraint(kind="value", at=0.0),
        Constraint(kind="derivative", at=1.0),
        Constraint(kind="integral"),
    ],
    compensation=lambda s: 1.5 * s * (s - 2.0),
    compensation_formula="3/2 s(s-2)",
    boundary_terms_vanish=True,
    boundary_note="h(0) = 0 and every representer is flat at t = 1",
)

DIRICHLET_ZERO_MEAN = Kernel(
    id="dirichlet_zero_mean",
    family="zero_mean",
    formula="s^t - st - 3(1-s)s(1-t)t",
    func=dirichlet_zero_mean,
    constraints=[
        Constraint(kind="value", at=0.0),
        Constraint(kind="value", at=1.0),
        Constraint(kind="integral"),
    ],
    compensation=lambda s: -6.0 * s * (1.0 - s),
    compensation_formula="-6s(1-s)",
    boundary_terms_vanish=True,
    boundary_note="h(0) = h(1) = 0 for every admissible variation",
)

ZERO_MEAN_KERNEL_DEFINITIONS = [MIXED_ZERO_MEAN, DIRICHLET_ZERO_MEAN]
