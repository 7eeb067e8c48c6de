"""
Numerical substrate for greenspline.
Dense SPD factorization with a jitter policy, split-panel Simpson quadrature,
finite differences and a seeded Gaussian source.
"""

from typing import Callable, Iterable, Optional, Sequence

import numpy as np
from scipy import linalg
from scipy.integrate import simpson as _scipy_simpson
from scipy.stats import qmc

from greenspline.utils import InvalidInputError, NumericalFailure, logger


# Jitter ladder for semidefinite covariance Grams
JITTER_LADDER = (1e-12, 1e-11, 1e-10, 1e-9, 1e-8)
SYMMETRY_TOL = 1e-12
# Smallest squared Cholesky pivot accepted without jitter, per unit of n * max(diag A)
PIVOT_RTOL = 100 * np.finfo(float).eps


# ============================================================================
# Symmetric Positive-Definite Solves
# ============================================================================

class SpdMatrix:
    """
    Dense symmetric matrix with a lazily computed Cholesky factor.

    Factorization first tries the matrix as given, then retries with the
    diagonal jitter ladder 1e-12 ... 1e-8. The jitter that succeeded is kept
    in `jitter_applied`. A failed or near-zero-pivot attempt without jitter
    marks the matrix as `singular`.
    """

    def __init__(self, matrix: Sequence[Sequence[float]]):
        A = np.array(matrix, dtype=float, copy=True)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise InvalidInputError(f"SPD matrix must be square, got shape {A.shape}")
        if A.shape[0] == 0:
            raise InvalidInputError("SPD matrix must have dimension n >= 1")
        if not np.all(np.isfinite(A)):
            raise InvalidInputError("SPD matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(A))))
        asym = float(np.max(np.abs(A - A.T)))
        if asym > SYMMETRY_TOL * scale:
            raise InvalidInputError(f"matrix is not symmetric (max |A - A^T| = {asym:.3e})")

        self.matrix = 0.5 * (A + A.T)
        self.jitter_applied = 0.0
        self.singular = False
        self._factor: Optional[np.ndarray] = None

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def factorize(self, allow_jitter: bool = True) -> np.ndarray:
        """
        Compute (or return the cached) lower Cholesky factor.

        Raises:
            NumericalFailure if the matrix is not positive definite even
            after the largest jitter (or at all, when allow_jitter is False)
        """
        if self._factor is not None:
            return self._factor

        ladder = (0.0,) + (JITTER_LADDER if allow_jitter else ())
        identity = np.eye(self.dimension)
        for jitter in ladder:
            try:
                L = linalg.cholesky(self.matrix + jitter * identity, lower=True, check_finite=False)
            except linalg.LinAlgError:
                L = None
            if L is None or not self._pivots_resolved(L, jitter):
                self.singular = self.singular or jitter == 0.0
                continue
            if jitter > 0.0:
                logger.warning(f"Cholesky needed diagonal jitter {jitter:.0e} (n={self.dimension})")
            self.jitter_applied = jitter
            self._factor = L
            return L

        if allow_jitter:
            raise NumericalFailure(
                f"matrix of dimension {self.dimension} is not positive definite "
                f"even with jitter {JITTER_LADDER[-1]:.0e}"
            )
        raise NumericalFailure(f"matrix of dimension {self.dimension} is singular to working precision")

    def _pivots_resolved(self, L: np.ndarray, jitter: float) -> bool:
        pivots = np.diag(L)
        if not np.all(pivots > 0.0):
            return False
        if jitter > 0.0:
            return True
        floor = self.dimension * PIVOT_RTOL * float(np.max(np.diag(self.matrix)))
        return float(np.min(pivots)) ** 2 > floor

    def solve(self, B: Sequence, allow_jitter: bool = True) -> np.ndarray:
        """Solve A X = B for one (vector) or several (matrix) right-hand sides."""
        L = self.factorize(allow_jitter=allow_jitter)
        rhs = np.asarray(B, dtype=float)
        if rhs.shape[0] != self.dimension:
            raise InvalidInputError(
                f"right-hand side has {rhs.shape[0]} rows, matrix has dimension {self.dimension}"
            )
        return linalg.cho_solve((L, True), rhs, check_finite=False)


def spd_solve(A, B, allow_jitter: bool = True) -> np.ndarray:
    """
    Solve A X = B for symmetric positive-definite A.

    A may be an SpdMatrix (its jitter record is updated) or any square array.
    """
    spd = A if isinstance(A, SpdMatrix) else SpdMatrix(A)
    return spd.solve(B, allow_jitter=allow_jitter)


# ============================================================================
# Quadrature
# ============================================================================

def _evaluate(f: Callable, x: np.ndarray) -> np.ndarray:
    """Evaluate a vectorized callable; scalar results are broadcast."""
    y = np.asarray(f(x), dtype=float)
    if y.shape != x.shape:
        y = np.broadcast_to(y, x.shape)
    return y


def _breakpoints(a: float, b: float, kinks: Iterable[float]) -> np.ndarray:
    inner = sorted({float(k) for k in kinks if a < k < b})
    return np.array([a] + inner + [b], dtype=float)


def simpson(f: Callable, a: float, b: float, panels: int, kinks: Iterable[float] = ()) -> float:
    """
    Composite Simpson rule on [a, b], split at the given kinks.

    Each smooth piece between consecutive breakpoints gets `panels` panels,
    so integrands that are cubic on every piece are integrated exactly (up to
    rounding). Piece ends are sampled at the neighbouring interior float, which
    makes a jump at a kink contribute each side's own limit.

    Args:
        f: vectorized integrand
        a, b: integration limits, a <= b
        panels: even positive panel count per piece
        kinks: locations where f is not smooth; must lie in [a, b]

    Returns:
        The approximate integral
    """
    if panels < 2 or panels % 2 != 0:
        raise InvalidInputError(f"panels must be an even positive integer, got {panels}")
    if a > b:
        raise InvalidInputError(f"integration limits out of order: a={a} > b={b}")
    kinks = list(kinks)
    for k in kinks:
        if k < a or k > b:
            raise InvalidInputError(f"kink {k} lies outside [{a}, {b}]")
    if a == b:
        return 0.0

    total = 0.0
    breaks = _breakpoints(a, b, kinks)
    for left, right in zip(breaks[:-1], breaks[1:]):
        nodes = np.linspace(left, right, panels + 1)
        # one-sided limits at the piece ends, so jumps at kinks are harmless
        probe = nodes.copy()
        probe[0] = np.nextafter(left, right)
        probe[-1] = np.nextafter(right, left)
        total += float(_scipy_simpson(_evaluate(f, probe), x=nodes))
    return total


# ============================================================================
# Finite Differences
# ============================================================================

def second_difference(f: Callable, t: float, h: float) -> float:
    """Return -(f(t-h) - 2 f(t) + f(t+h)) / h^2; the stencil must stay in [0, 1]."""
    if h <= 0:
        raise InvalidInputError(f"step must be positive, got {h}")
    if t - h < 0.0 or t + h > 1.0:
        raise InvalidInputError(f"stencil [{t - h}, {t + h}] leaves [0, 1]")
    return -(f(t - h) - 2.0 * f(t) + f(t + h)) / (h * h)


def one_sided_derivative(f: Callable, t: float, h: float) -> float:
    """
    Second-order one-sided first derivative.

    Forward stencil at t = 0, backward stencil everywhere else, so boundary
    points never need values outside [0, 1].
    """
    if h <= 0:
        raise InvalidInputError(f"step must be positive, got {h}")
    if t - 2 * h >= 0.0:
        return (3.0 * f(t) - 4.0 * f(t - h) + f(t - 2 * h)) / (2.0 * h)
    if t + 2 * h <= 1.0:
        return (-3.0 * f(t) + 4.0 * f(t + h) - f(t + 2 * h)) / (2.0 * h)
    raise InvalidInputError(f"no one-sided stencil of step {h} fits at t={t}")


def probe_points(count: int) -> np.ndarray:
    """Deterministic quasi-random points in [0, 1) (unscrambled Halton)."""
    if count < 1:
        raise InvalidInputError(f"probe count must be >= 1, got {count}")
    sampler = qmc.Halton(d=1, scramble=False)
    return sampler.random(count)[:, 0]


# ============================================================================
# Random Source
# ============================================================================

class RandomSource:
    """
    Seeded stream of standard normal draws.

    Identical seeds give identical sequences. Concurrent users must not share
    one source; `spawn(index)` derives an independent child whose seed is a
    hash of (seed, index) via numpy's SeedSequence.
    """

    def __init__(self, seed: int, spawn_key: tuple = ()):
        if seed < 0 or seed >= 2 ** 64:
            raise InvalidInputError(f"seed must be a 64-bit unsigned integer, got {seed}")
        self.seed = int(seed)
        self.spawn_key = tuple(spawn_key)
        self.draws = 0
        self._generator = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(self.seed, spawn_key=self.spawn_key))
        )

    def spawn(self, index: int) -> "RandomSource":
        """Independent child stream number `index`."""
        return RandomSource(self.seed, spawn_key=self.spawn_key + (int(index),))

    def normal(self, shape) -> np.ndarray:
        out = self._generator.standard_normal(shape)
        self.draws += out.size
        return out

    def uniform(self, shape) -> np.ndarray:
        """Uniform values in [0, 1)."""
        out = self._generator.random(shape)
        self.draws += out.size
        return out

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, spawn_key={self.spawn_key}, draws={self.draws})"


def gaussian_draws(source: RandomSource, n: int) -> np.ndarray:
    """n i.i.d. standard normal values from the source."""
    if n < 0:
        raise InvalidInputError(f"draw count must be >= 0, got {n}")
    return source.normal(n)
