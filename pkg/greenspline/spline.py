"""
First-derivative-penalty smoothing splines by the representer construction.

The minimizer of sum_i (y_i - theta(t_i))^2 + lambda int theta'(t)^2 dt over a
catalog subspace is theta(t) = sum_i c_i G(t_i, t) with (G + lambda I) c = y.
"""

import math
from typing import Union

import numpy as np

from greenspline.kernels import Kernel, cross_gram, get_kernel, gram
from greenspline.numerics import SpdMatrix
from greenspline.schemas import DataSet, SplineFit
from greenspline.utils import InvalidInputError, NumericalFailure, check_unit_interval, logger


# Diagonal entries at or below this are treated as pinned
PIN_TOL = 1e-15


def _resolve(kernel: Union[Kernel, str]) -> Kernel:
    k = get_kernel(kernel) if isinstance(kernel, str) else kernel
    if not k.symmetric:
        raise InvalidInputError(f"kernel {k.id!r} is not symmetric and cannot be used as a spline kernel")
    return k


# ============================================================================
# Fitting
# ============================================================================

def fit(kernel: Union[Kernel, str], data: DataSet, lam: float) -> SplineFit:
    """
    Solve (G + lambda I) c = y for the representer coefficients.

    Args:
        kernel: symmetric catalog kernel (or its id)
        data: observations with strictly increasing times
        lam: smoothing weight; 0 means interpolation and forbids jitter

    Returns:
        SplineFit holding c and the jitter that was needed

    Raises:
        InvalidInputError: lam < 0
        NumericalFailure: lam = 0 and the Gram is singular
    """
    k = _resolve(kernel)
    if not math.isfinite(lam) or lam < 0:
        raise InvalidInputError(f"lambda must be a finite value >= 0, got {lam}")

    times = np.asarray(data.times, dtype=float)
    y = np.asarray(data.values, dtype=float)
    G = gram(k, times)

    pinned = [float(t) for t, g in zip(times, np.diag(G)) if g <= PIN_TOL]
    if pinned:
        logger.warning(
            f"observations at {pinned} fall on points pinned by {k.id}; "
            f"the fit is 0 there whatever the data"
        )

    system = SpdMatrix(G + lam * np.eye(times.size))
    interpolating = lam == 0.0
    try:
        c = system.solve(y, allow_jitter=not interpolating)
    except NumericalFailure as e:
        if interpolating:
            where = f"at pinned times {pinned}" if pinned else "(rank-deficient kernel, no pinned times)"
            raise NumericalFailure(
                f"interpolation with {k.id} is impossible: the Gram is singular "
                f"{where}; use lambda > 0"
            ) from e
        raise

    logger.debug(f"fitted {k.id} spline: m={times.size}, lambda={lam}, jitter={system.jitter_applied}")
    return SplineFit(
        kernel=k.id,
        lam=lam,
        times=times.tolist(),
        coefficients=c.tolist(),
        jitter_applied=system.jitter_applied,
        pinned_times=pinned,
    )


# ============================================================================
# Evaluation
# ============================================================================

def evaluate(fit: SplineFit, t: float) -> float:
    """theta_hat(t) = sum_i c_i G(t_i, t)."""
    check_unit_interval(t, "t")
    return float(evaluate_grid(fit, [t])[0])


def evaluate_grid(fit: SplineFit, grid) -> np.ndarray:
    """Vectorized evaluate over the grid (any order, duplicates allowed)."""
    points = np.asarray(grid, dtype=float).reshape(-1)
    if points.size == 0:
        return np.zeros(0)
    check_unit_interval(points, "grid")
    k = get_kernel(fit.kernel)
    return cross_gram(k, points, fit.times) @ np.asarray(fit.coefficients, dtype=float)


# ============================================================================
# Penalized Objective
# ============================================================================

def penalty(fit: SplineFit) -> float:
    """
    c^T G c, which equals int theta_hat'^2 for every symmetric catalog kernel
    (the boundary terms of the integration by parts cancel on each subspace).
    """
    c = np.asarray(fit.coefficients, dtype=float)
    G = gram(get_kernel(fit.kernel), fit.times)
    return float(c @ G @ c)


def _check_matching(fit: SplineFit, data: DataSet) -> None:
    if data.size != len(fit.times) or not np.allclose(data.times, fit.times, rtol=0.0, atol=1e-15):
        raise InvalidInputError("data times do not match the times the spline was fitted on")


def residual_sum_of_squares(fit: SplineFit, data: DataSet) -> float:
    _check_matching(fit, data)
    r = np.asarray(data.values) - evaluate_grid(fit, data.times)
    return float(r @ r)


def objective(fit: SplineFit, data: DataSet) -> float:
    """Residual sum of squares plus lambda * penalty."""
    return residual_sum_of_squares(fit, data) + fit.lam * penalty(fit)


def roughness(fit: SplineFit, points: int = 20001) -> float:
    """
    int_0^1 theta_hat'(t)^2 dt from first differences on a uniform grid.

    Independent of penalty(); the two agree when the boundary terms vanish.
    """
    if points < 2:
        raise InvalidInputError(f"points must be >= 2, got {points}")
    t = np.linspace(0.0, 1.0, points)
    theta = evaluate_grid(fit, t)
    dt = t[1] - t[0]
    return float(np.sum(np.diff(theta) ** 2) / dt)


def negative_log_likelihood(fit: SplineFit, data: DataSet, sigma_sq: float) -> float:
    """m/2 log sigma^2 + RSS / (2 sigma^2), dropping the constant m/2 log 2 pi."""
    if not sigma_sq > 0:
        raise InvalidInputError(f"sigma_sq must be positive, got {sigma_sq}")
    rss = residual_sum_of_squares(fit, data)
    return 0.5 * data.size * math.log(sigma_sq) + rss / (2.0 * sigma_sq)
