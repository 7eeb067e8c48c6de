"""
Green's function of the first-derivative operator.
Not symmetric and not a covariance; kept only for the delta-representation
property of the indicator function.
"""

import numpy as np
from scipy.integrate import quad

from greenspline.kernels.base import Kernel
from greenspline.utils import InvalidInputError, check_unit_interval


def heaviside_first_order(s, t):
    """1_[s,1](t)."""
    return np.where(np.asarray(t) >= np.asarray(s), 1.0, 0.0)


HEAVISIDE_FIRST_ORDER = Kernel(
    id="heaviside_first_order",
    family="first_order",
    formula="1[s,1](t)",
    func=heaviside_first_order,
    constraints=[],
    compensation=lambda s: 0.0,
    compensation_formula="0 (Green's function of d/dt)",
    symmetric=False,
)

FIRST_ORDER_KERNEL_DEFINITIONS = [HEAVISIDE_FIRST_ORDER]


def heaviside_delta_check(s: float, t: float, step: float) -> float:
    """
    Central first difference of t -> int_0^t 1_[s,1](u) du at t, minus 1_[s,1](t).

    Zero away from t = s: the indicator is the antiderivative of delta_s.
    """
    check_unit_interval([s, t], "probe")
    if step <= 0 or abs(t - s) <= step:
        raise InvalidInputError(f"probe t={t} must be farther than step={step} from s={s}")
    if t - step < 0.0 or t + step > 1.0:
        raise InvalidInputError(f"stencil around t={t} leaves [0, 1]")

    def antiderivative(x: float) -> float:
        if x <= 0.0:
            return 0.0
        points = [s] if 0.0 < s < x else None
        value, _ = quad(lambda u: float(heaviside_first_order(s, u)), 0.0, x, points=points)
        return value

    slope = (antiderivative(t + step) - antiderivative(t - step)) / (2.0 * step)
    return slope - float(heaviside_first_order(s, t))
