"""
Green's functions fixed by boundary conditions alone.
Dirichlet pins give the Brownian-bridge covariance, mixed pins the
Brownian-motion covariance.
"""

import numpy as np

from greenspline.kernels.base import Kernel
from greenspline.schemas import Constraint


def dirichlet(s, t):
    """s ^ t - s t, zero at t = 0 and t = 1."""
    return np.minimum(s, t) - s * t


def mixed(s, t):
    """s ^ t, zero at t = 0 with flat slope at t = 1."""
    return np.minimum(s, t)


DIRICHLET = Kernel(
    id="dirichlet",
    family="boundary",
    formula="s^t - st",
    func=dirichlet,
    constraints=[Constraint(kind="value", at=0.0), Constraint(kind="value", at=1.0)],
    compensation=lambda s: 0.0,
    compensation_formula="0",
    series_mode="dirichlet_basis",
    boundary_terms_vanish=True,
    boundary_note="h(0) = h(1) = 0 for every admissible variation",
)

MIXED = Kernel(
    id="mixed",
    family="boundary",
    formula="s^t",
    func=mixed,
    constraints=[Constraint(kind="value", at=0.0), Constraint(kind="derivative", at=1.0)],
    compensation=lambda s: 0.0,
    compensation_formula="0",
    boundary_terms_vanish=True,
    boundary_note="h(0) = 0 and theta'(1) = 0 since every representer is flat at t = 1",
)

BOUNDARY_KERNEL_DEFINITIONS = [DIRICHLET, MIXED]
