"""
Gaussian-process view of the catalog.

Every symmetric kernel is the covariance of a zero-mean process on [0, 1]:
finite-dimensional distributions, conditioning on values and increments,
path sampling and the MAP estimate (which coincides with the smoothing
spline for lambda = 1 / tau^2).
"""

from typing import Callable, Dict, Optional, Sequence, Union

import numpy as np
from scipy import linalg

from greenspline.kernels import Kernel, cross_gram, get_kernel
from greenspline.numerics import RandomSource, SpdMatrix
from greenspline.schemas import DataSet, GaussianVector, GpPrior
from greenspline.utils import InvalidInputError, NumericalFailure, check_unit_interval, logger


# Variances at or below this count as zero (pinned or degenerate)
ZERO_VARIANCE = 1e-15
# Tolerance for grid symmetry under t -> 1 - t
GRID_TOL = 1e-12
# Singular values of a singular S_22 below this fraction of the largest are dropped
RANGE_RCOND = 1e-10
# Observations off the range of a singular S_22 by more than this (relative) contradict the prior
RANGE_TOL = 1e-8


def _covariance_kernel(kernel: Union[Kernel, str]) -> Kernel:
    k = get_kernel(kernel) if isinstance(kernel, str) else kernel
    if not k.symmetric:
        raise InvalidInputError(f"kernel {k.id!r} is not symmetric and is not a covariance")
    return k


def _distinct_grid(grid) -> np.ndarray:
    T = np.asarray(grid, dtype=float).reshape(-1)
    check_unit_interval(T, "grid")
    if np.unique(T).size != T.size:
        raise InvalidInputError("grid points must be distinct")
    return T


# ============================================================================
# Finite-Dimensional Distributions
# ============================================================================

def finite_dim(kernel: Union[Kernel, str], grid) -> GaussianVector:
    """N(0, G(grid, grid)); the grid need not be sorted but must be distinct."""
    k = _covariance_kernel(kernel)
    T = _distinct_grid(grid)
    full = cross_gram(k, T, T)
    cov = np.triu(full) + np.triu(full, 1).T
    return GaussianVector(grid=T, mean=np.zeros(T.size), covariance=cov)


def condition(
    joint: GaussianVector,
    observed_indices: Sequence[int],
    observed_values: Sequence[float],
    keep_observed: bool = False,
) -> GaussianVector:
    """
    Condition on x[observed_indices] = observed_values.

    mean_1 + S_12 S_22^-1 (a - mean_2) and S_11 - S_12 S_22^-1 S_21 on the
    remaining indices. With keep_observed=True the observed entries stay in the
    result with their value as mean, zero variance, and are recorded as pinned.
    Observing an already pinned entry again is a no-op when the value agrees.

    Raises:
        InvalidInputError: repeated or out-of-range indices, length mismatch
        NumericalFailure: an observed entry has zero variance (and is not
            pinned), a pinned entry is observed with another value, S_22 is
            singular and the values leave its range, or S_22 cannot be
            factorized
    """
    idx = [int(i) for i in observed_indices]
    values = np.asarray(observed_values, dtype=float).reshape(-1)
    n = joint.dimension
    if len(idx) != values.size:
        raise InvalidInputError(f"{len(idx)} indices but {values.size} values")
    if len(set(idx)) != len(idx):
        raise InvalidInputError("observed indices must be distinct")
    if any(i < 0 or i >= n for i in idx):
        raise InvalidInputError(f"observed indices must lie in 0..{n - 1}")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("observed values must be finite")

    # Entries pinned by an earlier conditioning
    active, active_values = [], []
    for i, a in zip(idx, values):
        t = float(joint.grid[i])
        if t in joint.pinned:
            if abs(joint.pinned[t] - a) > 1e-12 * max(1.0, abs(a)):
                raise NumericalFailure(
                    f"contradictory observation at t={t}: pinned to {joint.pinned[t]}, observed {a}"
                )
            continue
        active.append(i)
        active_values.append(a)

    if not active:
        if keep_observed or not idx:
            return joint
        keep = np.setdiff1d(np.arange(n), idx)
        return _restrict(joint, keep)

    obs = np.array(active)
    free = np.setdiff1d(np.arange(n), obs)
    cov = joint.covariance
    s22 = cov[np.ix_(obs, obs)]
    degenerate = [float(joint.grid[i]) for i, v in zip(obs, np.diag(s22)) if v <= ZERO_VARIANCE]
    if degenerate:
        raise NumericalFailure(f"cannot condition on zero-variance values at t={degenerate}")

    residual = np.asarray(active_values) - joint.mean[obs]
    solver = SpdMatrix(s22)
    solver.factorize()
    if solver.singular:
        _check_in_range(joint.grid[obs], s22, residual)
    if free.size:
        s12 = cov[np.ix_(free, obs)]
        mean_free = joint.mean[free] + s12 @ solver.solve(residual)
        cov_free = cov[np.ix_(free, free)] - s12 @ solver.solve(s12.T)
        cov_free = 0.5 * (cov_free + cov_free.T)
    else:
        mean_free, cov_free = np.zeros(0), np.zeros((0, 0))
    logger.debug(f"conditioned {n}-dim Gaussian on {obs.size} values (jitter {solver.jitter_applied})")

    if not keep_observed:
        keep = np.setdiff1d(free, idx)
        position = {int(i): j for j, i in enumerate(free)}
        rows = [position[int(i)] for i in keep]
        return GaussianVector(
            grid=joint.grid[keep],
            mean=mean_free[rows],
            covariance=cov_free[np.ix_(rows, rows)],
            pinned={t: v for t, v in joint.pinned.items() if t in set(joint.grid[keep].tolist())},
        )

    mean = joint.mean.copy()
    mean[free] = mean_free
    mean[obs] = active_values
    full = np.zeros((n, n))
    full[np.ix_(free, free)] = cov_free
    pinned = dict(joint.pinned)
    pinned.update({float(joint.grid[i]): float(a) for i, a in zip(obs, active_values)})
    return GaussianVector(grid=joint.grid, mean=mean, covariance=full, pinned=pinned)


def _check_in_range(times: np.ndarray, s22: np.ndarray, residual: np.ndarray) -> None:
    """Observed values of linearly tied entries must satisfy the same ties."""
    z = linalg.lstsq(s22, residual, cond=RANGE_RCOND)[0]
    miss = float(np.max(np.abs(s22 @ z - residual)))
    if miss > RANGE_TOL * max(1.0, float(np.max(np.abs(residual)))):
        raise NumericalFailure(
            f"contradictory observations at t={times.tolist()}: the prior ties these values "
            f"linearly and the data break the tie (mismatch {miss:.3e})"
        )
    logger.debug(f"singular S_22 at t={times.tolist()}; observations lie in its range")


def _restrict(joint: GaussianVector, keep: np.ndarray) -> GaussianVector:
    grid = joint.grid[keep]
    kept = set(grid.tolist())
    return GaussianVector(
        grid=grid,
        mean=joint.mean[keep],
        covariance=joint.covariance[np.ix_(keep, keep)],
        pinned={t: v for t, v in joint.pinned.items() if t in kept},
    )


def condition_on_increment(
    kernel: Union[Kernel, str],
    grid,
    epsilon: float,
    end: float = 1.0,
) -> GaussianVector:
    """
    Condition on (x(end) - x(end - eps)) / eps = 0.

    With g(s) = (G(s, end) - G(s, end - eps)) / eps and the increment variance
    v = (G(end, end) + G(end-eps, end-eps) - 2 G(end, end-eps)) / eps^2 the
    covariance becomes G - g g^T / v.
    """
    k = _covariance_kernel(kernel)
    if not 0.0 < epsilon < 1.0:
        raise InvalidInputError(f"epsilon must lie in (0, 1), got {epsilon}")
    if not epsilon <= end <= 1.0:
        raise InvalidInputError(f"end must lie in [epsilon, 1], got {end}")
    joint = finite_dim(k, grid)
    start = end - epsilon
    if joint.dimension and joint.grid.max() > start + GRID_TOL:
        raise InvalidInputError(f"grid must lie in [0, {start}] (before the increment)")

    g = (cross_gram(k, joint.grid, [end]) - cross_gram(k, joint.grid, [start]))[:, 0] / epsilon
    v = float(k.func(end, end) + k.func(start, start) - 2.0 * k.func(end, start)) / epsilon ** 2
    if v <= ZERO_VARIANCE:
        raise NumericalFailure(
            f"increment over [{start}, {end}] has zero variance under {k.id}; cannot condition on it"
        )
    cov = joint.covariance - np.outer(g, g) / v
    return GaussianVector(grid=joint.grid, mean=joint.mean, covariance=0.5 * (cov + cov.T))


# ============================================================================
# Path Sampling
# ============================================================================

def sample_paths(
    kernel: Union[Kernel, str],
    grid,
    count: int,
    source: RandomSource,
    scale: float = 1.0,
) -> np.ndarray:
    """
    Draw `count` paths of N(0, scale * G) on the grid; shape (count, len(grid)).

    Grid points with zero variance are set to exactly 0; the rest are drawn as
    Z L^T with L the (jittered) lower Cholesky factor.
    """
    if count < 1:
        raise InvalidInputError(f"count must be a positive integer, got {count}")
    if not scale > 0:
        raise InvalidInputError(f"scale must be positive, got {scale}")
    joint = finite_dim(kernel, grid)
    n = joint.dimension
    paths = np.zeros((count, n))
    if n == 0:
        return paths

    active = np.flatnonzero(np.diag(joint.covariance) > ZERO_VARIANCE)
    if active.size:
        L = SpdMatrix(scale * joint.covariance[np.ix_(active, active)]).factorize()
        paths[:, active] = source.normal((count, active.size)) @ L.T
    logger.debug(f"sampled {count} paths on {n} points ({n - active.size} pinned)")
    return paths


def sample_bm_increments(grid, count: int, source: RandomSource, scale: float = 1.0) -> np.ndarray:
    """
    Brownian motion by cumulative sums of independent N(0, dt) increments,
    starting from x(0) = 0. Independent of the covariance factorization.
    """
    if count < 1:
        raise InvalidInputError(f"count must be a positive integer, got {count}")
    T = np.asarray(grid, dtype=float).reshape(-1)
    check_unit_interval(T, "grid")
    if T.size > 1 and np.any(np.diff(T) <= 0):
        raise InvalidInputError("grid must be sorted ascending without repeats")
    dt = np.diff(np.concatenate([[0.0], T]))
    steps = source.normal((count, T.size)) * np.sqrt(scale * dt)
    # x(0) = 0 exactly (no -0.0 from negative draws)
    steps[:, dt == 0.0] = 0.0
    return np.cumsum(steps, axis=1)


# ============================================================================
# Path Transforms
# ============================================================================

def _check_symmetric_grid(grid: np.ndarray) -> None:
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise InvalidInputError("grid must be sorted ascending")
    if not np.allclose(grid[::-1], 1.0 - grid, rtol=0.0, atol=GRID_TOL):
        raise InvalidInputError("transform needs a grid symmetric under t -> 1 - t")


def transform_paths(
    paths: np.ndarray,
    grid,
    transform: str,
    other: Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    Pointwise path transforms.

    bridge           x(t) - t x(1)          (grid must contain 1)
    reverse          x(1 - t)
    tied_sum         x(t) + x(1 - t)
    independent_sum  x(t) + y(1 - t)        (y: an independent path set `other`)
    """
    X = np.atleast_2d(np.asarray(paths, dtype=float))
    T = np.asarray(grid, dtype=float).reshape(-1)
    if X.shape[1] != T.size:
        raise InvalidInputError(f"paths have {X.shape[1]} columns but the grid has {T.size} points")

    if transform == "bridge":
        ends = np.flatnonzero(np.abs(T - 1.0) <= GRID_TOL)
        if ends.size == 0:
            raise InvalidInputError("bridge transform needs t = 1 in the grid")
        return X - T[None, :] * X[:, [ends[0]]]

    if transform not in ("reverse", "tied_sum", "independent_sum"):
        raise InvalidInputError(
            f"unknown transform {transform!r}; expected one of {', '.join(TRANSFORM_TARGETS)}"
        )
    _check_symmetric_grid(T)
    if transform == "reverse":
        return X[:, ::-1].copy()
    if transform == "tied_sum":
        return X + X[:, ::-1]

    if other is None:
        raise InvalidInputError("independent_sum needs a second path set")
    Y = np.atleast_2d(np.asarray(other, dtype=float))
    if Y.shape != X.shape:
        raise InvalidInputError(f"path sets differ in shape: {X.shape} vs {Y.shape}")
    return X + Y[:, ::-1]


TRANSFORM_TARGETS: Dict[str, Callable] = {
    "bridge": lambda s, t: np.minimum(s, t) - s * t,
    "reverse": lambda s, t: 1.0 - np.maximum(s, t),
    "tied_sum": lambda s, t: (
        np.minimum(s, t) + np.minimum(s, 1.0 - t)
        + np.minimum(1.0 - s, t) + np.minimum(1.0 - s, 1.0 - t)
    ),
    "independent_sum": lambda s, t: np.minimum(s, t) + np.minimum(1.0 - s, 1.0 - t),
}


def transform_target(transform: str, grid) -> np.ndarray:
    """Analytic covariance of Brownian motion under `transform` on the grid."""
    if transform not in TRANSFORM_TARGETS:
        raise InvalidInputError(f"unknown transform {transform!r}")
    T = np.asarray(grid, dtype=float).reshape(-1)
    return TRANSFORM_TARGETS[transform](T[:, None], T[None, :])


# ============================================================================
# Monte Carlo Statistics
# ============================================================================

def empirical_covariance(paths: np.ndarray) -> np.ndarray:
    """Unbiased sample covariance of the grid values (one path per row)."""
    X = np.atleast_2d(np.asarray(paths, dtype=float))
    if X.shape[0] < 2:
        raise InvalidInputError("need at least two paths for a covariance estimate")
    return np.atleast_2d(np.cov(X, rowvar=False))


def covariance_standard_errors(cov: np.ndarray, count: int) -> np.ndarray:
    """Gaussian standard error sqrt((C_ii C_jj + C_ij^2) / count) of each entry."""
    C = np.asarray(cov, dtype=float)
    d = np.clip(np.diag(C), 0.0, None)
    return np.sqrt((np.outer(d, d) + C * C) / count)


# ============================================================================
# MAP Estimate
# ============================================================================

def map_estimate(prior: GpPrior, data: DataSet, tau_sq: float, grid) -> np.ndarray:
    """
    Posterior mean G(grid, t) (G(t, t) + tau^-2 I)^-1 y under the prior
    scale * G and noise variance scale / tau^2; the scale cancels.
    """
    if not tau_sq > 0:
        raise InvalidInputError(f"tau_sq must be positive, got {tau_sq}")
    k = _covariance_kernel(prior.kernel)
    points = np.asarray(grid, dtype=float).reshape(-1)
    check_unit_interval(points, "grid")
    times = np.asarray(data.times, dtype=float)

    G = cross_gram(k, times, times)
    system = SpdMatrix(np.triu(G) + np.triu(G, 1).T + np.eye(times.size) / tau_sq)
    alpha = system.solve(np.asarray(data.values, dtype=float))
    return cross_gram(k, points, times) @ alpha
