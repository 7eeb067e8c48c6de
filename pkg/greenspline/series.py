"""
Fourier-series oracle for the kernel catalog.

Builds truncated Green's functions from the general series
    sum_i (cos(2i pi s) cos(2i pi t) + sin(2i pi s) sin(2i pi t)) / (2 i^2 pi^2)
under coefficient constraints, and applies kernels as integral operators.
Nothing here uses the closed forms of the catalog, so agreement between the
two is an independent check of both.
"""

import math
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import simpson as _scipy_simpson

from greenspline.kernels import Kernel, get_kernel
from greenspline.numerics import simpson
from greenspline.schemas import FourierCoeffs, SeriesSpec
from greenspline.utils import InvalidInputError, check_unit_interval, logger


SERIES_MODES = (
    "unconstrained", "dirichlet_basis", "sine_only", "cosine_only",
    "zero_indices", "linear_constraint",
)

# Points per block when summing; bounds the (points x N) work arrays
_CHUNK = 512


# ============================================================================
# Cosine Series
# ============================================================================

def cosine_series_closed(u):
    """sum_i cos(2i pi u) / (4 i^2 pi^2) = 1/4 (u(u-1) + 1/6) on [0, 1]."""
    check_unit_interval(u, "u")
    u = np.asarray(u, dtype=float)
    value = 0.25 * (u * (u - 1.0) + 1.0 / 6.0)
    return float(value) if value.ndim == 0 else value


def cosine_series_partial(u, N: int):
    """Partial sum of the cosine series up to order N."""
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    check_unit_interval(u, "u")
    u = np.asarray(u, dtype=float)
    i = np.arange(1, N + 1, dtype=float)
    weights = 1.0 / (4.0 * i * i * math.pi ** 2)
    flat = u.reshape(-1)
    out = np.empty_like(flat)
    for start in range(0, flat.size, _CHUNK):
        block = flat[start:start + _CHUNK]
        out[start:start + _CHUNK] = np.cos(2.0 * math.pi * np.outer(block, i)) @ weights
    out = out.reshape(u.shape)
    return float(out) if out.ndim == 0 else out


def cosine_kernel_closed(s, t):
    """
    Closed form of the cosine half of the general series,
    1/12 + 1/2 (s^2 + t^2 - max(s, t)) - 1/2 1_[1,2](s + t)(s + t - 1).
    """
    check_unit_interval(s, "s")
    check_unit_interval(t, "t")
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    wrap = np.where(s + t >= 1.0, s + t - 1.0, 0.0)
    value = 1.0 / 12.0 + 0.5 * (s * s + t * t - np.maximum(s, t)) - 0.5 * wrap
    return float(value) if value.ndim == 0 else value


# ============================================================================
# Truncated Green's Functions
# ============================================================================

def _cosine_factors(spec: SeriesSpec) -> np.ndarray:
    """Multiplier on each cos(2i pi s) cos(2i pi t) term, i = 1..N."""
    factors = np.ones(spec.N)
    if spec.mode == "sine_only":
        factors[:] = 0.0
    elif spec.mode == "zero_indices":
        factors[np.asarray(spec.zero_indices, dtype=int) - 1] = 0.0
    elif spec.mode == "linear_constraint":
        factors[:len(spec.weights)] -= np.asarray(spec.weights, dtype=float)
    return factors


def truncated_green(spec: SeriesSpec, s, t):
    """
    Partial sum to order N of the series for `spec.mode`.

    dirichlet_basis replaces cos(2i pi .) by cos(2i pi .) - 1; sine_only and
    cosine_only keep one half of the series; zero_indices drops the listed
    cosine terms; linear_constraint subtracts the compensating term
    sum_i c_i cos(2i pi s) cos(2i pi t) / (2 i^2 pi^2).
    """
    check_unit_interval(s, "s")
    check_unit_interval(t, "t")
    s_arr, t_arr = np.broadcast_arrays(np.asarray(s, dtype=float), np.asarray(t, dtype=float))
    s_flat = s_arr.reshape(-1)
    t_flat = t_arr.reshape(-1)

    i = np.arange(1, spec.N + 1, dtype=float)
    weights = 1.0 / (2.0 * i * i * math.pi ** 2)
    cos_weights = weights * _cosine_factors(spec)
    use_sine = spec.mode != "cosine_only"
    shift = 1.0 if spec.mode == "dirichlet_basis" else 0.0

    out = np.empty(s_flat.size)
    for start in range(0, s_flat.size, _CHUNK):
        ws = 2.0 * math.pi * np.outer(s_flat[start:start + _CHUNK], i)
        wt = 2.0 * math.pi * np.outer(t_flat[start:start + _CHUNK], i)
        total = ((np.cos(ws) - shift) * (np.cos(wt) - shift)) @ cos_weights
        if use_sine:
            total = total + (np.sin(ws) * np.sin(wt)) @ weights
        out[start:start + _CHUNK] = total

    out = out.reshape(s_arr.shape)
    return float(out) if out.ndim == 0 else out


def tail_bound(spec: SeriesSpec) -> float:
    """
    Sup-norm bound K / N on the truncation error, from sum_{i>N} i^-2 < 1/N.

    K is the largest absolute value a single term can take times 1/(2 pi^2).
    """
    if spec.mode == "dirichlet_basis":
        k = 5.0
    elif spec.mode == "linear_constraint":
        k = 1.0 + max((abs(w) for w in spec.weights), default=0.0)
    else:
        k = 1.0
    return k / (2.0 * math.pi ** 2 * spec.N)


def series_for_kernel(kernel_id: str, N: int = 10_000) -> Optional[SeriesSpec]:
    """The series mode that reproduces a catalog kernel, if there is one."""
    kernel = get_kernel(kernel_id)
    if kernel.series_mode is None:
        return None
    return SeriesSpec(N=N, mode=kernel.series_mode)


# ============================================================================
# Fourier Coefficients
# ============================================================================

def fourier_coeffs(f: Callable, N: int, panels: int = 4096) -> FourierCoeffs:
    """
    a_0, a_i = 2 int f(t) cos(2i pi t) dt and b_i = 2 int f(t) sin(2i pi t) dt
    by composite Simpson with `panels` panels.
    """
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    if panels < 2 or panels % 2:
        raise InvalidInputError(f"panels must be an even positive integer, got {panels}")

    nodes = np.linspace(0.0, 1.0, panels + 1)
    values = np.broadcast_to(np.asarray(f(nodes), dtype=float), nodes.shape)
    i = np.arange(1, N + 1, dtype=float)[:, None]
    phase = 2.0 * math.pi * i * nodes[None, :]

    a0 = 2.0 * float(_scipy_simpson(values, x=nodes))
    a = 2.0 * _scipy_simpson(values[None, :] * np.cos(phase), x=nodes, axis=-1)
    b = 2.0 * _scipy_simpson(values[None, :] * np.sin(phase), x=nodes, axis=-1)
    return FourierCoeffs(a0=a0, a=a.tolist(), b=b.tolist())


def compensator_orthogonality(spec: SeriesSpec, f: Callable, panels: int = 4096) -> float:
    """
    1/2 sum_i c_i a_i(f): the pairing of the compensating term's Laplacian
    with f. Zero exactly when f satisfies the spec's linear constraint.
    """
    if spec.mode != "linear_constraint":
        raise InvalidInputError(f"spec mode must be linear_constraint, got {spec.mode}")
    if not spec.weights:
        return 0.0
    coeffs = fourier_coeffs(f, len(spec.weights), panels)
    return 0.5 * float(np.dot(spec.weights, coeffs.a))


# ============================================================================
# Integral Operator
# ============================================================================

def apply_kernel(kernel: Union[Kernel, SeriesSpec], h: Callable, t, panels: int = 2048):
    """
    int_0^1 G(s, t) h(s) ds by split-panel Simpson.

    The s-range is split at s = t (and s = 1 - t for kernels with an
    anti-diagonal seam, and for series) so every piece is smooth.
    """
    check_unit_interval(t, "t")
    t_arr = np.asarray(t, dtype=float)

    def one(tv: float) -> float:
        if isinstance(kernel, SeriesSpec):
            kinks = [tv, 1.0 - tv]
            integrand = lambda s: truncated_green(kernel, s, np.full_like(s, tv)) * h(s)
        else:
            kinks = kernel.seams(tv)
            integrand = lambda s: kernel.func(s, tv) * h(s)
        return simpson(integrand, 0.0, 1.0, panels, kinks=[k for k in kinks if 0.0 < k < 1.0])

    if t_arr.ndim == 0:
        return one(float(t_arr))
    logger.debug(f"applying kernel at {t_arr.size} points with {panels} panels per piece")
    return np.array([one(float(tv)) for tv in t_arr.reshape(-1)]).reshape(t_arr.shape)
