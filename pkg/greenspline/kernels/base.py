"""
Kernel type and the operations shared by every catalog entry:
closed-form evaluation, Gram matrices, constraint residuals and the
off-diagonal Laplacian check.
"""

from typing import Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from greenspline.numerics import (
    one_sided_derivative,
    probe_points,
    second_difference,
    simpson,
)
from greenspline.schemas import Constraint, ConstraintReport
from greenspline.utils import InvalidInputError, check_unit_interval, logger


# Step of the one-sided stencils used for derivative pins
DERIVATIVE_STEP = 1e-5
# Simpson panels per smooth piece when integrating a kernel row
ROW_PANELS = 64


class Kernel(BaseModel):
    """
    Closed-form Green's function of -d^2/dt^2 on a constrained subspace of C^2([0,1]).

    `func` must accept broadcastable numpy arrays. `compensation(s)` is the
    smooth part of -d^2/dt^2 G(s, t) away from the seams; for every catalog
    kernel it is constant in t.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: str
    family: str
    formula: str
    func: Callable
    constraints: List[Constraint] = Field(default_factory=list)
    compensation: Callable
    compensation_formula: str = "0"
    symmetric: bool = True
    anti_seam: bool = False
    series_mode: Optional[str] = None
    boundary_terms_vanish: Optional[bool] = None
    boundary_note: str = ""

    def eval(self, s, t):
        """G(s, t); scalars in, float out; arrays broadcast."""
        check_unit_interval(s, "s")
        check_unit_interval(t, "t")
        value = self.func(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
        if np.ndim(value) == 0:
            return float(value)
        return np.asarray(value, dtype=float)

    def seams(self, s: float) -> List[float]:
        """Interior t-locations where G(s, .) has kinks."""
        points = [s]
        if self.anti_seam:
            points.append(1.0 - s)
        return sorted({p for p in points if 0.0 < p < 1.0})

    def row(self, s: float) -> Callable:
        """t -> G(s, t) as a vectorized callable (no domain checks)."""
        return lambda t: self.func(s, np.asarray(t, dtype=float))

    def gram(self, times) -> np.ndarray:
        return gram(self, times)

    def cross_gram(self, rows, cols) -> np.ndarray:
        return cross_gram(self, rows, cols)


# ============================================================================
# Gram Matrices
# ============================================================================

def _validate_times(times) -> np.ndarray:
    T = np.asarray(times, dtype=float).reshape(-1)
    check_unit_interval(T, "times")
    if T.size > 1 and np.any(np.diff(T) <= 0):
        bad = int(np.argmax(np.diff(T) <= 0)) + 1
        kind = "duplicate" if T[bad] == T[bad - 1] else "unsorted"
        raise InvalidInputError(f"times must be strictly increasing ({kind} value {T[bad]} at index {bad})")
    return T


def gram(kernel: Kernel, times) -> np.ndarray:
    """
    Matrix of G(t_i, t_j) over strictly increasing times.

    The upper triangle is computed and mirrored, so the result is exactly
    symmetric.
    """
    T = _validate_times(times)
    n = T.size
    if n == 0:
        return np.zeros((0, 0))
    full = np.asarray(kernel.func(T[:, None], T[None, :]), dtype=float)
    upper = np.triu(full)
    return upper + np.triu(full, 1).T


def cross_gram(kernel: Kernel, rows, cols) -> np.ndarray:
    """Rectangular matrix of G(r_i, c_j); no ordering requirement."""
    R = np.asarray(rows, dtype=float).reshape(-1)
    C = np.asarray(cols, dtype=float).reshape(-1)
    check_unit_interval(R, "rows")
    check_unit_interval(C, "cols")
    if R.size == 0 or C.size == 0:
        return np.zeros((R.size, C.size))
    return np.asarray(kernel.func(R[:, None], C[None, :]), dtype=float)


# ============================================================================
# Constraint Residuals
# ============================================================================

def _constraint_residual(kernel: Kernel, constraint: Constraint, s: float) -> Optional[float]:
    row = kernel.row(s)
    if constraint.kind == "value":
        return abs(float(row(constraint.at)))
    if constraint.kind == "derivative":
        # stencil must not straddle the kink at t = s
        if abs(s - constraint.at) <= 2 * DERIVATIVE_STEP:
            return None
        return abs(one_sided_derivative(lambda t: float(row(t)), constraint.at, DERIVATIVE_STEP))
    if constraint.kind == "integral":
        return abs(simpson(row, 0.0, 1.0, ROW_PANELS, kinks=kernel.seams(s)))
    if constraint.kind == "antisymmetry":
        t = np.linspace(0.0, 1.0, 101)
        return float(np.max(np.abs(row(t) + row(1.0 - t))))
    if constraint.kind == "periodic":
        return abs(float(row(0.0)) - float(row(1.0)))
    raise InvalidInputError(f"unknown constraint kind {constraint.kind!r}")


def check_constraints(kernel: Kernel, probe_count: int) -> ConstraintReport:
    """
    Evaluate every declared constraint of the kernel at quasi-random s.

    Value pins and the pairing checks are evaluated exactly, derivative pins by
    a one-sided second-order difference with step 1e-5, integrals by
    split-panel Simpson.
    """
    probes = probe_points(probe_count)
    residuals = {}
    for constraint in kernel.constraints:
        worst = 0.0
        for s in probes:
            r = _constraint_residual(kernel, constraint, float(s))
            if r is not None:
                worst = max(worst, r)
        residuals[constraint.label] = worst

    max_residual = max(residuals.values(), default=0.0)
    logger.debug(f"constraints of {kernel.id}: max residual {max_residual:.3e}")
    return ConstraintReport(
        kernel=kernel.id,
        probe_count=probe_count,
        residuals=residuals,
        max_residual=max_residual,
    )


# ============================================================================
# Off-Diagonal Laplacian
# ============================================================================

def offdiag_laplacian_check(kernel: Kernel, s: float, t: float, step: float) -> float:
    """
    Central second difference of -G(s, .) at t minus the documented
    compensation density; near zero when the closed form is right.
    """
    check_unit_interval([s, t], "probe")
    if step <= 0:
        raise InvalidInputError(f"step must be positive, got {step}")
    for seam in [s] + ([1.0 - s] if kernel.anti_seam else []):
        if abs(t - seam) <= 2 * step:
            raise InvalidInputError(f"probe t={t} within 2*step of the seam at {seam}")
    if not (0.0 < s < 1.0 and step < t < 1.0 - step):
        raise InvalidInputError("probe must be interior with the stencil inside (0, 1)")

    row = kernel.row(s)
    laplacian = second_difference(lambda x: float(row(x)), t, step)
    return laplacian - float(kernel.compensation(s))
