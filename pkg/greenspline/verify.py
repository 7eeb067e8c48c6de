"""
Invariant suites behind `greenspline verify`.

Each check computes a non-negative residual and passes when it is at or
below its tolerance. Suites: kernels, series, spline, gp.
"""

import math
import time
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy.stats import norm

from greenspline import gp, series, spline
from greenspline.kernels import (
    REGISTRY,
    check_constraints,
    cross_gram,
    get_kernel,
    gram,
    heaviside_delta_check,
    offdiag_laplacian_check,
    symmetric_kernels,
)
from greenspline.numerics import RandomSource, one_sided_derivative, simpson
from greenspline.schemas import DataSet, GpPrior, SeriesSpec
from greenspline.utils import GreenSplineError, InvalidInputError, get_config, logger


SUITES = ("kernels", "series", "spline", "gp")

# Kernels whose closed forms are compared against the series oracle
SERIES_CHECKED = ("dirichlet", "balanced_periodic", "odd")

# (f, -f'') with f in each kernel's subspace
POISSON_PAIRS: Dict[str, Tuple[Callable, Callable]] = {
    "dirichlet": (
        lambda t: np.sin(np.pi * t),
        lambda t: np.pi ** 2 * np.sin(np.pi * t),
    ),
    "mixed": (
        lambda t: np.sin(np.pi * t / 2),
        lambda t: (np.pi ** 2 / 4) * np.sin(np.pi * t / 2),
    ),
    "balanced_periodic": (
        lambda t: np.cos(2 * np.pi * t),
        lambda t: 4 * np.pi ** 2 * np.cos(2 * np.pi * t),
    ),
    "odd": (
        lambda t: np.sin(2 * np.pi * t),
        lambda t: 4 * np.pi ** 2 * np.sin(2 * np.pi * t),
    ),
    "mixed_zero_mean": (
        lambda t: np.sin(np.pi * t / 2) + (3 / np.pi) * (t * t - 2 * t),
        lambda t: (np.pi ** 2 / 4) * np.sin(np.pi * t / 2) - 6 / np.pi,
    ),
    "dirichlet_zero_mean": (
        lambda t: np.sin(2 * np.pi * t),
        lambda t: 4 * np.pi ** 2 * np.sin(2 * np.pi * t),
    ),
    "poly2_mixed": (
        lambda t: t * (t - 2),
        lambda t: np.full_like(np.asarray(t, dtype=float), -2.0),
    ),
    "poly2_bridge": (
        lambda t: t * (t - 1),
        lambda t: np.full_like(np.asarray(t, dtype=float), -2.0),
    ),
}

# Probe pairs (s, t) kept away from t = s and t = 1 - s
LAPLACIAN_PROBES = ((0.2, 0.6), (0.35, 0.8), (0.7, 0.45), (0.6, 0.1))
LAPLACIAN_STEP = 1e-4

LAMBDAS = (0.01, 0.1, 1.0)
DATASET_COUNT = 50
MAX_OBSERVATIONS = 20
DEFAULT_SEED = 20240601


# ============================================================================
# Check Definitions
# ============================================================================

class Check:
    """One named invariant with a residual function and a tolerance."""

    def __init__(self, name: str, suite: str, description: str, tolerance: float,
                 func: Callable[[], float]):
        self.name = name
        self.suite = suite
        self.description = description
        self.tolerance = tolerance
        self.func = func
        self.max_residual: Optional[float] = None
        self.passed = False
        self.error: Optional[str] = None
        self.duration = 0.0

    def run(self, tolerance: Optional[float] = None) -> bool:
        if tolerance is not None:
            self.tolerance = tolerance
        start = time.time()
        try:
            residual = float(self.func())
            if math.isfinite(residual):
                self.max_residual = residual
                self.passed = residual <= self.tolerance
            else:
                self.error = "non-finite residual (exact entries disagree)"
        except (GreenSplineError, ValueError, np.linalg.LinAlgError) as e:
            self.error = f"{type(e).__name__}: {e}"
            self.passed = False
        self.duration = time.time() - start
        return self.passed

    def to_dict(self) -> Dict:
        return {
            "suite": self.suite,
            "name": self.name,
            "description": self.description,
            "passed": self.passed,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "error": self.error,
            "duration_seconds": round(self.duration, 4),
        }


class VerificationSuite:
    """
    Collects checks for the requested suites and runs them in order.

    `tol` replaces every check's tolerance with one absolute value.
    """

    def __init__(self, N: Optional[int] = None, tol: Optional[float] = None,
                 panels: Optional[int] = None, mc_count: Optional[int] = None,
                 seed: Optional[int] = None):
        config = get_config()
        self.N = N or config["truncation"]
        self.tol = tol
        self.panels = panels or config["panels"]
        self.mc_count = mc_count or config["mc_count"]
        if seed is None:
            seed = config["seed"] if config["seed"] is not None else DEFAULT_SEED
        self.seed = seed
        self.checks: List[Check] = []
        self.start_time = None
        self.end_time = None

    def add_check(self, check: Check):
        self.checks.append(check)

    def build(self, suites: Iterable[str]) -> "VerificationSuite":
        builders = {
            "kernels": _kernel_checks,
            "series": _series_checks,
            "spline": _spline_checks,
            "gp": _gp_checks,
        }
        for suite in suites:
            if suite not in builders:
                raise InvalidInputError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES)}")
            for check in builders[suite](self):
                self.add_check(check)
        return self

    def run_all(self) -> Dict:
        logger.info(f"Running {len(self.checks)} verification checks (N={self.N}, seed={self.seed})")
        self.start_time = time.time()
        for i, check in enumerate(self.checks, 1):
            check.run(self.tol)
            status = "pass" if check.passed else "FAIL"
            logger.debug(f"[{i}/{len(self.checks)}] {check.suite}/{check.name}: {status} "
                         f"(residual {check.max_residual}, tol {check.tolerance})")
        self.end_time = time.time()
        return self.report()

    def report(self) -> Dict:
        passed = sum(1 for c in self.checks if c.passed)
        return {
            "checks": [c.to_dict() for c in self.checks],
            "passed": passed,
            "total": len(self.checks),
            "all_passed": passed == len(self.checks),
            "duration_seconds": (self.end_time or 0.0) - (self.start_time or 0.0),
            "settings": {"N": self.N, "panels": self.panels, "mc_count": self.mc_count, "seed": self.seed},
        }


def run_verification(suite: str = "all", **settings) -> Dict:
    """Build and run one suite (or all of them) and return the report."""
    suites = SUITES if suite == "all" else (suite,)
    return VerificationSuite(**settings).build(suites).run_all()


# ============================================================================
# Shared Helpers
# ============================================================================

def random_datasets(seed: int, count: int = DATASET_COUNT, max_m: int = MAX_OBSERVATIONS) -> List[DataSet]:
    """Deterministic random data sets with 1..max_m observations in (0, 1)."""
    source = RandomSource(seed)
    out = []
    for k in range(count):
        child = source.spawn(k)
        m = 1 + k % max_m
        times = np.unique(child.uniform(m))
        values = child.normal(times.size)
        out.append(DataSet(times=times.tolist(), values=values.tolist()))
    return out


def _fit_constraint_residual(kernel, fit) -> float:
    """Largest violation by theta_hat of the kernel's own constraints."""
    theta = lambda t: spline.evaluate_grid(fit, np.atleast_1d(t))
    kinks = set(fit.times)
    if kernel.anti_seam:
        kinks |= {1.0 - t for t in fit.times}
    worst = 0.0
    for c in kernel.constraints:
        if c.kind == "value":
            r = abs(theta(c.at)[0])
        elif c.kind == "derivative":
            r = abs(one_sided_derivative(lambda t: theta(t)[0], c.at, 1e-5))
        elif c.kind == "integral":
            r = abs(simpson(lambda t: theta(t), 0.0, 1.0, 64, kinks=kinks))
        elif c.kind == "antisymmetry":
            t = np.linspace(0.0, 1.0, 101)
            r = float(np.max(np.abs(theta(t) + theta(1.0 - t))))
        else:
            r = abs(theta(0.0)[0] - theta(1.0)[0])
        worst = max(worst, r)
    return worst


def _mc_zscore(empirical: np.ndarray, target: np.ndarray, count: int) -> float:
    """Largest |empirical - target| in units of the target's standard errors."""
    se = gp.covariance_standard_errors(target, count)
    diff = np.abs(empirical - target)
    exact = se == 0.0
    if np.any(diff[exact] > 1e-12):
        return math.inf
    return float(np.max(diff[~exact] / se[~exact])) if np.any(~exact) else 0.0


def mc_threshold(n_entries: int) -> float:
    """
    Family-wise three-sigma level: the z that keeps the two-sided 0.27%
    error rate across `n_entries` compared entries (Bonferroni).
    """
    alpha = 2.0 * norm.sf(3.0)
    return float(norm.isf(alpha / (2.0 * max(1, n_entries))))


# ============================================================================
# Kernel Suite
# ============================================================================

def _kernel_checks(ctx: VerificationSuite) -> List[Check]:
    grid = np.linspace(0.0, 1.0, 23)[1:-1]
    checks = []

    def symmetry():
        pairs = RandomSource(ctx.seed).spawn(30_000)
        s, t = pairs.uniform(10_000), pairs.uniform(10_000)
        worst = 0.0
        for k in symmetric_kernels():
            G = cross_gram(k, grid, grid)
            worst = max(worst, float(np.max(np.abs(G - G.T))), float(np.max(np.abs(k.eval(s, t) - k.eval(t, s)))))
        return worst

    def odd_seam():
        s = np.linspace(0.0, 1.0, 1001)
        t = 1.0 - s
        odd = get_kernel("odd")
        return float(np.max(np.abs(odd.eval(s, np.nextafter(t, 0.0)) - odd.eval(s, np.nextafter(t, 1.0)))))

    def psd():
        return max(max(0.0, -float(np.linalg.eigvalsh(gram(k, grid)).min())) for k in symmetric_kernels())

    checks.append(Check("symmetry", "kernels", "G(s,t) = G(t,s) on a 21-point grid and 10^4 random pairs", 1e-12, symmetry))
    checks.append(Check("odd_seam", "kernels", "odd kernel is continuous across s + t = 1", 1e-12, odd_seam))
    checks.append(Check("psd", "kernels", "Gram matrices have no negative eigenvalues", 1e-10, psd))

    for kid in REGISTRY.ids():
        kernel = get_kernel(kid)
        if kernel.constraints:
            checks.append(Check(
                f"constraints[{kid}]", "kernels", "declared subspace constraints at 100 probes", 1e-8,
                lambda kernel=kernel: check_constraints(kernel, 100).max_residual,
            ))
        checks.append(Check(
            f"laplacian[{kid}]", "kernels", "-d2G/dt2 off the seams equals the compensation density", 1e-5,
            lambda kernel=kernel: max(
                abs(offdiag_laplacian_check(kernel, s, t, LAPLACIAN_STEP)) for s, t in LAPLACIAN_PROBES
            ),
        ))

    for kid, (f, h) in POISSON_PAIRS.items():
        def poisson(kid=kid, f=f, h=h):
            values = series.apply_kernel(get_kernel(kid), h, grid, ctx.panels)
            return float(np.max(np.abs(values - f(grid))))
        checks.append(Check(f"poisson[{kid}]", "kernels", "int G(s,t)(-f''(s))ds reproduces f", 1e-7, poisson))

    def first_order():
        kernel = get_kernel("heaviside_first_order")
        f = lambda t: np.sin(np.pi * t)
        values = series.apply_kernel(kernel, lambda s: np.pi * np.cos(np.pi * s), grid, ctx.panels)
        delta = max(abs(heaviside_delta_check(s, t, 1e-4)) for s, t in LAPLACIAN_PROBES)
        return max(float(np.max(np.abs(values - f(grid)))), delta)

    checks.append(Check("first_order", "kernels", "int 1[s,1](t) f'(s) ds = f(t) and d/dt int 1 = 1", 1e-7, first_order))
    return checks


# ============================================================================
# Series Suite
# ============================================================================

def _series_checks(ctx: VerificationSuite) -> List[Check]:
    grid = np.linspace(0.0, 1.0, 23)[1:-1]
    S, T = np.meshgrid(grid, grid, indexing="ij")
    checks = []

    for kid in SERIES_CHECKED:
        spec = series.series_for_kernel(kid, ctx.N)

        def agreement(kid=kid, spec=spec):
            closed = get_kernel(kid).eval(S, T)
            return float(np.max(np.abs(closed - series.truncated_green(spec, S, T))))

        checks.append(Check(
            f"series[{kid}]", "series", f"closed form vs {spec.mode} series within K/N",
            series.tail_bound(spec), agreement,
        ))

    cos_spec = SeriesSpec(N=ctx.N, mode="cosine_only")

    def cosine_kernel():
        return float(np.max(np.abs(series.cosine_kernel_closed(S, T) - series.truncated_green(cos_spec, S, T))))

    def halves():
        small = lambda mode: SeriesSpec(N=200, mode=mode)
        total = series.truncated_green(small("cosine_only"), S, T) + series.truncated_green(small("sine_only"), S, T)
        return float(np.max(np.abs(total - series.truncated_green(small("unconstrained"), S, T))))

    def cosine_identity():
        u = np.linspace(0.0, 1.0, 11)
        return float(np.max(np.abs(series.cosine_series_partial(u, 1000) - series.cosine_series_closed(u))))

    def coefficients():
        c = series.fourier_coeffs(lambda t: np.cos(2 * np.pi * t) + 0.5 * np.sin(4 * np.pi * t), 4)
        expected_a = np.array([1.0, 0.0, 0.0, 0.0])
        expected_b = np.array([0.0, 0.5, 0.0, 0.0])
        return max(abs(c.a0), float(np.max(np.abs(np.array(c.a) - expected_a))),
                   float(np.max(np.abs(np.array(c.b) - expected_b))))

    def compensator():
        spec = SeriesSpec(N=8, mode="linear_constraint", weights=[1.0, -1.0])
        f = lambda t: np.cos(2 * np.pi * t) + np.cos(4 * np.pi * t)
        return abs(series.compensator_orthogonality(spec, f))

    def zero_indices():
        spec = SeriesSpec(N=8, mode="zero_indices", zero_indices=[1])
        f = lambda t: np.sin(2 * np.pi * t) + np.cos(4 * np.pi * t)
        h = lambda t: 4 * np.pi ** 2 * np.sin(2 * np.pi * t) + 16 * np.pi ** 2 * np.cos(4 * np.pi * t)
        points = np.linspace(0.05, 0.95, 7)
        return float(np.max(np.abs(series.apply_kernel(spec, h, points, ctx.panels) - f(points))))

    checks.append(Check("cosine_kernel", "series", "cosine_only series vs its closed form",
                        series.tail_bound(cos_spec), cosine_kernel))
    checks.append(Check("halves", "series", "cosine_only + sine_only = unconstrained", 1e-12, halves))
    checks.append(Check("cosine_identity", "series", "sum cos(2i pi u)/(4i^2 pi^2) = (u(u-1)+1/6)/4 at N=1000",
                        3e-5, cosine_identity))
    checks.append(Check("fourier_coeffs", "series", "coefficients of a trigonometric polynomial", 1e-10, coefficients))
    checks.append(Check("compensator", "series", "compensating term is orthogonal to admissible f", 1e-10, compensator))
    checks.append(Check("zero_indices", "series", "series Green's function reproduces f with a_1 = 0", 1e-8, zero_indices))
    return checks


# ============================================================================
# Spline Suite
# ============================================================================

def _spline_checks(ctx: VerificationSuite) -> List[Check]:
    datasets = random_datasets(ctx.seed)
    kernels = symmetric_kernels()
    checks = []

    def residual_identity():
        worst = 0.0
        for k in kernels:
            for data in datasets:
                for lam in LAMBDAS:
                    f = spline.fit(k, data, lam)
                    r = np.asarray(data.values) - spline.evaluate_grid(f, data.times) - lam * np.asarray(f.coefficients)
                    worst = max(worst, float(np.max(np.abs(r))))
        return worst

    def interpolation():
        data = DataSet(times=np.linspace(0.1, 0.9, 9).tolist(), values=np.sin(np.arange(9)).tolist())
        f = spline.fit("dirichlet", data, 1e-10)
        return float(np.max(np.abs(spline.evaluate_grid(f, data.times) - np.asarray(data.values))))

    def shrinkage():
        grid = np.linspace(0.0, 1.0, 101)
        worst = 0.0
        for data in datasets:
            norm_g = max(
                float(np.max(np.sum(np.abs(cross_gram(get_kernel("dirichlet"), grid, data.times)), axis=1))),
                float(np.max(np.sum(np.abs(gram(get_kernel("dirichlet"), data.times)), axis=1))),
            )
            y_inf = float(np.max(np.abs(data.values)))
            for lam in (1e2, 1e4):
                theta = spline.evaluate_grid(spline.fit("dirichlet", data, lam), grid)
                bound = y_inf * norm_g / lam + 1e-9
                worst = max(worst, float(np.max(np.abs(theta))) - bound)
        return max(0.0, worst)

    def minimizer():
        source = RandomSource(ctx.seed).spawn(10_000)
        worst = 0.0
        for k in kernels:
            for data in datasets[:10]:
                f = spline.fit(k, data, 0.1)
                best = spline.objective(f, data)
                c = np.asarray(f.coefficients)
                for _ in range(100):
                    moved = f.model_copy(update={"coefficients": (c + 1e-2 * source.normal(c.size)).tolist()})
                    worst = max(worst, best - spline.objective(moved, data))
        return max(0.0, worst)

    def monotone_penalty():
        worst = 0.0
        for k in kernels:
            for data in datasets:
                penalties = [spline.penalty(spline.fit(k, data, lam)) for lam in (0.01, 0.1, 1.0, 10.0)]
                worst = max(worst, max(b - a for a, b in zip(penalties[:-1], penalties[1:])))
        return max(0.0, worst)

    def inheritance():
        worst = 0.0
        for k in kernels:
            for data in datasets[:10]:
                worst = max(worst, _fit_constraint_residual(k, spline.fit(k, data, 0.1)))
        return worst

    def roughness():
        data = DataSet(times=[0.1, 0.25, 0.4, 0.55, 0.7, 0.85], values=[0.3, -1.2, 0.8, 0.1, -0.5, 1.0])
        worst = 0.0
        for k in kernels:
            f = spline.fit(k, data, 0.1)
            p = spline.penalty(f)
            worst = max(worst, abs(p - spline.roughness(f)) / max(1.0, p))
        return worst

    checks.append(Check("residual_identity", "spline", "y - theta_hat(t) = lambda c on random data", 1e-9, residual_identity))
    checks.append(Check("interpolation", "spline", "lambda = 1e-10 reproduces the observations", 1e-6, interpolation))
    checks.append(Check("shrinkage", "spline", "sup|theta_hat| <= |y| |G| / lambda", 1e-12, shrinkage))
    checks.append(Check("minimizer", "spline", "fitted c beats 100 perturbations", 1e-12, minimizer))
    checks.append(Check("monotone_penalty", "spline", "penalty decreases as lambda grows", 1e-10, monotone_penalty))
    checks.append(Check("inheritance", "spline", "theta_hat satisfies the kernel's constraints", 1e-8, inheritance))
    checks.append(Check("roughness", "spline", "c^T G c equals int theta_hat'^2 (relative)", 1e-3, roughness))
    return checks


# ============================================================================
# Gaussian Process Suite
# ============================================================================

def _gp_checks(ctx: VerificationSuite) -> List[Check]:
    source = RandomSource(ctx.seed)
    checks = []

    def bridge_identity():
        worst = 0.0
        for k in range(10):
            grid = np.unique(source.spawn(100 + k).uniform(5))
            joint = gp.finite_dim("mixed", np.append(grid, 1.0))
            bridge = gp.condition(joint, [grid.size], [0.0])
            worst = max(worst, float(np.max(np.abs(bridge.covariance - gram(get_kernel("dirichlet"), grid)))))
        return worst

    def increment_independence():
        worst = 0.0
        for eps in (0.5, 0.1, 0.01):
            grid = np.linspace(0.0, 1.0 - eps, 6)
            conditioned = gp.condition_on_increment("mixed", grid, eps)
            worst = max(worst, float(np.max(np.abs(conditioned.covariance - gp.finite_dim("mixed", grid).covariance))))
        return worst

    def bridge_increment():
        s, t = 0.3, 0.6
        worst = 0.0
        for eps in (0.3, 0.1, 0.01):
            conditioned = gp.condition_on_increment("dirichlet", [s, t], eps)
            expected = gp.finite_dim("dirichlet", [s, t]).covariance - eps / (1 - eps) * np.array(
                [[s * s, s * t], [s * t, t * t]])
            worst = max(worst, float(np.max(np.abs(conditioned.covariance - expected))))
        return worst

    def conditioned_pairs():
        grid = np.linspace(0.0, 1.0, 11)
        for k in symmetric_kernels():
            joint = gp.finite_dim(k, grid)
            # rank-one kernels can only be observed once
            candidates = (5,) if k.family == "polynomial" else (2, 5, 7)
            observable = [i for i in candidates if joint.covariance[i, i] > gp.ZERO_VARIANCE]
            values = [0.4 * (j + 1) for j in range(len(observable))]
            once = gp.condition(joint, observable, values, keep_observed=True)
            yield once, gp.condition(once, observable, values, keep_observed=True)

    def idempotence():
        return max(
            max(float(np.max(np.abs(once.covariance - twice.covariance))),
                float(np.max(np.abs(once.mean - twice.mean))))
            for once, twice in conditioned_pairs()
        )

    def conditional_psd():
        return max(max(0.0, -float(np.linalg.eigvalsh(once.covariance).min())) for once, _ in conditioned_pairs())

    def map_equals_spline():
        grid = np.linspace(0.0, 1.0, 101)
        worst = 0.0
        for k in symmetric_kernels():
            for data in random_datasets(ctx.seed):
                for lam in LAMBDAS:
                    tau_sq = 1.0 / lam
                    posterior = gp.map_estimate(GpPrior(kernel=k.id), data, tau_sq, grid)
                    fitted = spline.evaluate_grid(spline.fit(k, data, lam), grid)
                    worst = max(worst, float(np.max(np.abs(posterior - fitted))))
        return worst

    checks.append(Check("bridge_identity", "gp", "BM given x(1)=0 has the dirichlet covariance", 1e-12, bridge_identity))
    checks.append(Check("increment_independence", "gp", "BM is independent of a later increment", 1e-14,
                        increment_independence))
    checks.append(Check("bridge_increment", "gp", "bridge given a vanishing end slope", 1e-12, bridge_increment))
    checks.append(Check("idempotence", "gp", "conditioning twice on the same values changes nothing", 1e-12,
                        idempotence))
    checks.append(Check("conditional_psd", "gp", "conditional covariances stay PSD", 1e-10, conditional_psd))
    checks.append(Check("map_equals_spline", "gp", "MAP estimate with tau^2 = 1/lambda equals the spline", 1e-10,
                        map_equals_spline))
    checks.extend(_monte_carlo_checks(ctx))
    return checks


def _monte_carlo_checks(ctx: VerificationSuite) -> List[Check]:
    grid = np.linspace(0.0, 1.0, 21)
    count = ctx.mc_count
    threshold = mc_threshold(grid.size * (grid.size + 1) // 2)
    root = RandomSource(ctx.seed).spawn(20_000)
    bm_target = gp.finite_dim("mixed", grid).covariance
    cache = {}

    def increments(index: int) -> np.ndarray:
        if index not in cache:
            cache[index] = gp.sample_bm_increments(grid, count, root.spawn(index))
        return cache[index]

    def cholesky_bm():
        paths = gp.sample_paths("mixed", grid, count, root.spawn(0))
        cov = gp.empirical_covariance(paths)
        cross = _mc_zscore(cov, gp.empirical_covariance(increments(1)), count) / math.sqrt(2.0)
        return max(_mc_zscore(cov, bm_target, count), cross)

    def increments_bm():
        return _mc_zscore(gp.empirical_covariance(increments(1)), bm_target, count)

    def transformed(name: str):
        def run():
            other = increments(2) if name == "independent_sum" else None
            paths = gp.transform_paths(increments(1), grid, name, other)
            return _mc_zscore(gp.empirical_covariance(paths), gp.transform_target(name, grid), count)
        return run

    def sample_means():
        worst = 0.0
        for j, k in enumerate(symmetric_kernels()):
            paths = gp.sample_paths(k, grid, count, root.spawn(100 + j))
            sd = np.sqrt(np.clip(np.diag(gram(k, grid)), 0.0, None) / count)
            mean = np.abs(paths.mean(axis=0))
            pinned = sd == 0.0
            if np.any(mean[pinned] != 0.0):
                return math.inf
            worst = max(worst, float(np.max(mean[~pinned] / sd[~pinned])))
        return worst

    checks = [
        Check("mc_cholesky", "gp", "Cholesky BM covariance vs s^t and vs the increment sampler", threshold, cholesky_bm),
        Check("mc_increments", "gp", "increment BM covariance vs s^t", threshold, increments_bm),
    ]
    for name in gp.TRANSFORM_TARGETS:
        checks.append(Check(f"mc_{name}", "gp", f"{name} transform of BM vs its analytic covariance",
                            threshold, transformed(name)))
    checks.append(Check("mc_means", "gp", "sample means within 4 standard errors of 0", 4.0, sample_means))
    return checks
