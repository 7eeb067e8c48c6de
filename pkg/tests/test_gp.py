"""
Tests for the Gaussian-process view: finite-dimensional laws, conditioning,
samplers, path transforms and the MAP estimate.
"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenspline import gp, spline
from greenspline.kernels import get_kernel, gram, symmetric_kernels
from greenspline.numerics import RandomSource
from greenspline.schemas import DataSet, GaussianVector, GpPrior
from greenspline.utils import InvalidInputError, NumericalFailure
from greenspline.verify import _mc_zscore, mc_threshold


SYMMETRIC_IDS = [k.id for k in symmetric_kernels()]
MC_COUNT = 100_000


# ============================================================================
# Finite-dimensional distributions
# ============================================================================

def test_brownian_motion_covariance():
    s, t = 0.3, 0.7
    joint = gp.finite_dim("mixed", [s, t, 1.0])
    np.testing.assert_array_equal(joint.covariance, [[s, s, s], [s, t, t], [s, t, 1.0]])
    np.testing.assert_array_equal(joint.mean, np.zeros(3))


def test_bridge_covariance():
    joint = gp.finite_dim("dirichlet", [0.25, 0.5])
    np.testing.assert_allclose(joint.covariance, [[0.1875, 0.125], [0.125, 0.25]], atol=1e-15)


def test_unsorted_grid_allowed():
    joint = gp.finite_dim("mixed", [0.6, 0.2])
    np.testing.assert_array_equal(joint.covariance, [[0.6, 0.2], [0.2, 0.2]])


@pytest.mark.parametrize("kernel_id", SYMMETRIC_IDS)
def test_single_point_variance_nonnegative(kernel_id):
    assert gp.finite_dim(kernel_id, [0.37]).covariance[0, 0] >= 0.0


def test_duplicate_grid_rejected():
    with pytest.raises(InvalidInputError, match="distinct"):
        gp.finite_dim("mixed", [0.2, 0.2])


def test_first_order_kernel_is_not_a_covariance():
    with pytest.raises(InvalidInputError):
        gp.finite_dim("heaviside_first_order", [0.2])


def test_gaussian_vector_shape_checks():
    with pytest.raises(ValueError):
        GaussianVector(grid=[0.1, 0.2], mean=[0.0], covariance=np.eye(2))
    with pytest.raises(ValueError):
        GaussianVector(grid=[0.1, 0.2], mean=[0.0, 0.0], covariance=[[1.0, 0.5], [0.0, 1.0]])


# ============================================================================
# Conditioning
# ============================================================================

class TestCondition:
    def test_bridge_from_brownian_motion(self):
        joint = gp.finite_dim("mixed", [0.25, 0.5, 1.0])
        bridge = gp.condition(joint, [2], [0.0])
        np.testing.assert_allclose(bridge.covariance, [[0.1875, 0.125], [0.125, 0.25]], atol=1e-12)
        np.testing.assert_allclose(bridge.mean, [0.0, 0.0], atol=1e-15)
        np.testing.assert_array_equal(bridge.grid, [0.25, 0.5])

    def test_bridge_equals_dirichlet_gram(self):
        grid = np.linspace(0.05, 0.95, 19)
        joint = gp.finite_dim("mixed", np.append(grid, 1.0))
        bridge = gp.condition(joint, [grid.size], [0.0])
        np.testing.assert_allclose(bridge.covariance, gram(get_kernel("dirichlet"), grid), atol=1e-12)

    def test_conditional_mean(self):
        joint = gp.finite_dim("mixed", [0.5, 1.0])
        cond = gp.condition(joint, [1], [2.0])
        assert cond.mean[0] == pytest.approx(1.0)
        assert cond.covariance[0, 0] == pytest.approx(0.25)

    def test_empty_observation_is_identity(self):
        joint = gp.finite_dim("dirichlet", [0.25, 0.5])
        assert gp.condition(joint, [], []) is joint

    def test_observe_everything(self):
        joint = gp.finite_dim("mixed", [0.25, 0.5])
        cond = gp.condition(joint, [0, 1], [1.0, 2.0])
        assert cond.dimension == 0
        assert cond.covariance.shape == (0, 0)

    def test_keep_observed(self):
        joint = gp.finite_dim("mixed", [0.25, 0.5, 1.0])
        cond = gp.condition(joint, [2], [3.0], keep_observed=True)
        assert cond.dimension == 3
        assert cond.mean[2] == 3.0
        assert cond.pinned == {1.0: 3.0}
        np.testing.assert_array_equal(cond.covariance[2], np.zeros(3))

    def test_idempotent(self):
        joint = gp.finite_dim("balanced_periodic", np.linspace(0.0, 0.9, 10))
        once = gp.condition(joint, [3, 7], [0.4, -0.2], keep_observed=True)
        twice = gp.condition(once, [3, 7], [0.4, -0.2], keep_observed=True)
        np.testing.assert_allclose(twice.covariance, once.covariance, atol=1e-12)
        np.testing.assert_allclose(twice.mean, once.mean, atol=1e-12)

    def test_contradictory_observation(self):
        joint = gp.finite_dim("mixed", [0.25, 0.5])
        once = gp.condition(joint, [1], [1.0], keep_observed=True)
        with pytest.raises(NumericalFailure, match="contradictory"):
            gp.condition(once, [1], [2.0], keep_observed=True)

    def test_rank_one_prior_rejects_broken_tie(self):
        # x(0.25) = 0.75 x(0.5) almost surely under poly2_bridge
        joint = gp.finite_dim("poly2_bridge", [0.25, 0.5, 0.75])
        with pytest.raises(NumericalFailure, match="contradictory"):
            gp.condition(joint, [0, 1], [1.0, 5.0])

    def test_rank_one_prior_accepts_consistent_values(self):
        joint = gp.finite_dim("poly2_bridge", [0.25, 0.5, 0.75])
        cond = gp.condition(joint, [0, 1], [0.75, 1.0])
        assert cond.mean[0] == pytest.approx(0.75, abs=1e-6)
        assert abs(cond.covariance[0, 0]) <= 1e-9

    def test_zero_variance_observation(self):
        joint = gp.finite_dim("dirichlet", [0.0, 0.5])
        with pytest.raises(NumericalFailure, match="zero-variance"):
            gp.condition(joint, [0], [0.0])

    @pytest.mark.parametrize("indices, values", [([0, 0], [1.0, 1.0]), ([5], [1.0]), ([0], [1.0, 2.0])])
    def test_bad_indices(self, indices, values):
        joint = gp.finite_dim("mixed", [0.25, 0.5])
        with pytest.raises(InvalidInputError):
            gp.condition(joint, indices, values)

    @pytest.mark.parametrize("kernel_id", SYMMETRIC_IDS)
    def test_conditional_covariance_psd(self, kernel_id):
        grid = np.linspace(0.05, 0.95, 10)
        joint = gp.finite_dim(kernel_id, grid)
        observed = [5] if kernel_id.startswith("poly2") else [2, 5, 8]
        cond = gp.condition(joint, observed, [0.3] * len(observed))
        assert np.linalg.eigvalsh(cond.covariance).min() >= -1e-10


# ============================================================================
# Conditioning on an increment
# ============================================================================

class TestIncrement:
    def test_brownian_motion_independent_of_future(self):
        cond = gp.condition_on_increment("mixed", [0.25, 0.5], 0.1)
        np.testing.assert_array_equal(cond.covariance, gp.finite_dim("mixed", [0.25, 0.5]).covariance)

    @settings(deadline=None, max_examples=30)
    @given(st.floats(min_value=1e-3, max_value=0.5))
    def test_brownian_motion_any_epsilon(self, eps):
        grid = np.linspace(0.0, 0.5, 6)
        cond = gp.condition_on_increment("mixed", grid, eps)
        np.testing.assert_array_equal(cond.covariance, gp.finite_dim("mixed", grid).covariance)

    def test_bridge_downdate(self):
        s, t, eps = 0.3, 0.6, 0.2
        cond = gp.condition_on_increment("dirichlet", [s, t], eps)
        expected = gp.finite_dim("dirichlet", [s, t]).covariance - eps / (1 - eps) * np.array(
            [[s * s, s * t], [s * t, t * t]]
        )
        np.testing.assert_allclose(cond.covariance, expected, atol=1e-12)

    def test_bridge_small_epsilon(self):
        cond = gp.condition_on_increment("dirichlet", [0.3, 0.6], 1e-6)
        np.testing.assert_allclose(cond.covariance, gp.finite_dim("dirichlet", [0.3, 0.6]).covariance, atol=1e-5)

    def test_degenerate_increment(self):
        # the odd process is pinned at 0 and 1/2
        with pytest.raises(NumericalFailure, match="zero variance"):
            gp.condition_on_increment("odd", [0.0], 0.5, end=0.5)

    def test_grid_past_increment(self):
        with pytest.raises(InvalidInputError):
            gp.condition_on_increment("mixed", [0.25, 0.95], 0.1)

    @pytest.mark.parametrize("eps", [0.0, 1.0])
    def test_epsilon_range(self, eps):
        with pytest.raises(InvalidInputError):
            gp.condition_on_increment("mixed", [0.25], eps)


# ============================================================================
# Samplers
# ============================================================================

class TestSamplers:
    def test_deterministic(self, bm_grid):
        a = gp.sample_paths("mixed", bm_grid, 5, RandomSource(7))
        b = gp.sample_paths("mixed", bm_grid, 5, RandomSource(7))
        np.testing.assert_array_equal(a, b)
        assert a.shape == (5, bm_grid.size)

    def test_pinned_points_exactly_zero(self, bm_grid):
        paths = gp.sample_paths("dirichlet", bm_grid, 50, RandomSource(1))
        assert np.all(paths[:, 0] == 0.0)
        assert np.all(paths[:, -1] == 0.0)

    def test_rank_one_paths_are_quadratics(self, bm_grid):
        paths = gp.sample_paths("poly2_bridge", bm_grid, 3, RandomSource(2))
        shape = bm_grid * (1.0 - bm_grid)
        for path in paths:
            coef = path @ shape / (shape @ shape)
            assert np.max(np.abs(path - coef * shape)) <= 1e-4

    def test_scale(self, bm_grid):
        base = gp.sample_paths("mixed", bm_grid, 4, RandomSource(3))
        scaled = gp.sample_paths("mixed", bm_grid, 4, RandomSource(3), scale=4.0)
        np.testing.assert_allclose(scaled, 2.0 * base, rtol=1e-12, atol=1e-15)

    def test_count_must_be_positive(self, bm_grid):
        with pytest.raises(InvalidInputError):
            gp.sample_paths("mixed", bm_grid, 0, RandomSource(3))

    def test_increments_start_at_zero(self):
        paths = gp.sample_bm_increments([0.0], 100, RandomSource(4))
        assert np.all(paths == 0.0)

    def test_increments_need_sorted_grid(self):
        with pytest.raises(InvalidInputError):
            gp.sample_bm_increments([0.5, 0.2], 3, RandomSource(4))

    def test_increments_deterministic(self, bm_grid):
        a = gp.sample_bm_increments(bm_grid, 3, RandomSource(8))
        b = gp.sample_bm_increments(bm_grid, 3, RandomSource(8))
        np.testing.assert_array_equal(a, b)


@pytest.mark.slow
class TestMonteCarlo:
    def grid(self):
        return np.linspace(0.05, 1.0, 20)

    def check(self, paths, target):
        cov = gp.empirical_covariance(paths)
        entries = target.shape[0] * (target.shape[0] + 1) // 2
        assert _mc_zscore(cov, target, MC_COUNT) <= mc_threshold(entries)

    def test_cholesky_sampler_is_brownian_motion(self):
        grid = self.grid()
        paths = gp.sample_paths("mixed", grid, MC_COUNT, RandomSource(11))
        self.check(paths, gram(get_kernel("mixed"), grid))

    def test_increment_sampler_is_brownian_motion(self):
        grid = self.grid()
        paths = gp.sample_bm_increments(grid, MC_COUNT, RandomSource(12))
        self.check(paths, gram(get_kernel("mixed"), grid))

    def test_variance_at_half(self):
        paths = gp.sample_bm_increments([0.25, 0.5], MC_COUNT, RandomSource(13))
        assert abs(paths[:, 1].var() - 0.5) <= 0.01

    def test_sample_means(self):
        grid = np.linspace(0.0, 1.0, 21)
        paths = gp.sample_paths("balanced_periodic", grid, MC_COUNT, RandomSource(14))
        sd = np.sqrt(np.diag(gram(get_kernel("balanced_periodic"), grid)) / MC_COUNT)
        assert np.all(np.abs(paths.mean(axis=0)) <= 4.0 * sd)

    @pytest.mark.parametrize("transform", ["bridge", "reverse", "tied_sum", "independent_sum"])
    def test_transforms(self, transform):
        grid = np.linspace(0.0, 1.0, 21)
        paths = gp.sample_bm_increments(grid, MC_COUNT, RandomSource(15))
        other = gp.sample_bm_increments(grid, MC_COUNT, RandomSource(16))
        moved = gp.transform_paths(paths, grid, transform, other=other)
        self.check(moved, gp.transform_target(transform, grid))


# ============================================================================
# Path transforms
# ============================================================================

class TestTransforms:
    grid = np.linspace(0.0, 1.0, 5)
    paths = np.arange(10, dtype=float).reshape(2, 5)

    def test_bridge_pins_end(self):
        out = gp.transform_paths(self.paths, self.grid, "bridge")
        np.testing.assert_array_equal(out[:, -1], [0.0, 0.0])
        np.testing.assert_array_equal(out[:, 0], self.paths[:, 0])

    def test_reverse(self):
        out = gp.transform_paths(self.paths, self.grid, "reverse")
        np.testing.assert_array_equal(out, self.paths[:, ::-1])

    def test_tied_sum(self):
        out = gp.transform_paths(self.paths, self.grid, "tied_sum")
        np.testing.assert_array_equal(out, self.paths + self.paths[:, ::-1])

    def test_independent_sum_needs_other(self):
        with pytest.raises(InvalidInputError):
            gp.transform_paths(self.paths, self.grid, "independent_sum")

    def test_reverse_needs_symmetric_grid(self):
        with pytest.raises(InvalidInputError, match="symmetric"):
            gp.transform_paths(self.paths, [0.0, 0.1, 0.2, 0.3, 0.4], "reverse")

    def test_bridge_needs_endpoint(self):
        with pytest.raises(InvalidInputError):
            gp.transform_paths(self.paths, [0.0, 0.1, 0.2, 0.3, 0.4], "bridge")

    def test_unknown_transform(self):
        with pytest.raises(InvalidInputError):
            gp.transform_paths(self.paths, self.grid, "rotate")

    def test_bridge_target_is_dirichlet(self):
        np.testing.assert_allclose(
            gp.transform_target("bridge", self.grid), gram(get_kernel("dirichlet"), self.grid), atol=1e-15
        )

    def test_reverse_target(self):
        target = gp.transform_target("reverse", [0.25, 0.5])
        np.testing.assert_allclose(target, [[0.75, 0.5], [0.5, 0.5]])


def test_standard_errors():
    se = gp.covariance_standard_errors(np.array([[1.0, 0.5], [0.5, 2.0]]), 100)
    assert se[0, 1] == pytest.approx(np.sqrt((2.0 + 0.25) / 100))


def test_empirical_covariance_needs_two_paths():
    with pytest.raises(InvalidInputError):
        gp.empirical_covariance(np.zeros((1, 3)))


def test_mc_threshold_grows_with_entries():
    assert mc_threshold(1) == pytest.approx(3.0, abs=1e-9)
    assert mc_threshold(231) > mc_threshold(10) > 3.0


# ============================================================================
# MAP estimate
# ============================================================================

class TestMap:
    def test_single_point(self, single_point):
        estimate = gp.map_estimate(GpPrior(kernel="dirichlet"), single_point, 4.0, [0.5])
        assert estimate[0] == pytest.approx(0.5)

    def test_zero_data(self):
        data = DataSet(times=[0.2, 0.6], values=[0.0, 0.0])
        estimate = gp.map_estimate(GpPrior(kernel="mixed"), data, 2.0, np.linspace(0, 1, 11))
        np.testing.assert_array_equal(estimate, np.zeros(11))

    def test_boundary_pin(self, small_data):
        estimate = gp.map_estimate(GpPrior(kernel="dirichlet"), small_data, 2.0, [0.0, 1.0])
        np.testing.assert_allclose(estimate, [0.0, 0.0], atol=1e-15)

    def test_prior_scale_cancels(self, small_data):
        grid = np.linspace(0, 1, 11)
        a = gp.map_estimate(GpPrior(kernel="mixed", scale=1.0), small_data, 2.0, grid)
        b = gp.map_estimate(GpPrior(kernel="mixed", scale=9.0), small_data, 2.0, grid)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("tau_sq", [0.0, -1.0])
    def test_tau_sq_positive(self, small_data, tau_sq):
        with pytest.raises(InvalidInputError):
            gp.map_estimate(GpPrior(kernel="mixed"), small_data, tau_sq, [0.5])

    @pytest.mark.parametrize("kernel_id", SYMMETRIC_IDS)
    def test_equals_spline(self, kernel_id, small_data):
        grid = np.linspace(0.0, 1.0, 101)
        estimate = gp.map_estimate(GpPrior(kernel=kernel_id), small_data, 4.0, grid)
        fitted = spline.evaluate_grid(spline.fit(kernel_id, small_data, 0.25), grid)
        assert np.max(np.abs(estimate - fitted)) <= 1e-10
