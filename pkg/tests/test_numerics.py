"""
Tests for the numerical substrate: SPD solves, quadrature, finite
differences and the seeded random source.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from greenspline.kernels import get_kernel, gram
from greenspline.numerics import (
    JITTER_LADDER,
    RandomSource,
    SpdMatrix,
    gaussian_draws,
    one_sided_derivative,
    probe_points,
    second_difference,
    simpson,
    spd_solve,
)
from greenspline.utils import InvalidInputError, NumericalFailure


# ============================================================================
# SPD solves
# ============================================================================

class TestSpdSolve:
    def test_identity(self):
        np.testing.assert_allclose(spd_solve(np.eye(2), [3.0, 5.0]), [3.0, 5.0])

    def test_two_by_two(self):
        np.testing.assert_allclose(spd_solve([[2.0, 1.0], [1.0, 2.0]], [3.0, 3.0]), [1.0, 1.0], atol=1e-14)

    def test_scalar_gram_plus_lambda(self):
        A = gram(get_kernel("mixed"), [0.5]) + 0.5 * np.eye(1)
        np.testing.assert_allclose(A, [[1.0]])
        np.testing.assert_allclose(spd_solve(A, [1.0]), [1.0])

    def test_several_right_hand_sides(self):
        A = np.array([[4.0, 1.0], [1.0, 3.0]])
        B = np.array([[1.0, 0.0], [0.0, 1.0]])
        np.testing.assert_allclose(spd_solve(A, B), np.linalg.inv(A), atol=1e-14)

    def test_no_jitter_for_definite_matrix(self):
        spd = SpdMatrix([[2.0, 0.0], [0.0, 3.0]])
        spd.factorize()
        assert spd.jitter_applied == 0.0

    def test_semidefinite_gets_jitter(self):
        spd = SpdMatrix([[1.0, 1.0], [1.0, 1.0]])
        spd.factorize()
        assert spd.jitter_applied in JITTER_LADDER

    def test_semidefinite_without_jitter_fails(self):
        with pytest.raises(NumericalFailure):
            SpdMatrix([[1.0, 1.0], [1.0, 1.0]]).factorize(allow_jitter=False)

    def test_rounded_rank_one_is_singular(self):
        # rank one; rounding may leave a tiny positive pivot
        v = np.array([0.1 * 0.9, 0.55 * 0.45])
        spd = SpdMatrix(np.outer(v, v))
        with pytest.raises(NumericalFailure, match="singular"):
            spd.factorize(allow_jitter=False)
        assert spd.singular

    def test_singular_flag_survives_jitter(self):
        spd = SpdMatrix([[1.0, 1.0], [1.0, 1.0]])
        spd.factorize()
        assert spd.singular
        definite = SpdMatrix([[2.0, 1.0], [1.0, 2.0]])
        definite.factorize()
        assert not definite.singular

    def test_random_spd_residuals(self):
        source = RandomSource(99)
        for trial in range(100):
            n = 1 + trial % 50
            M = source.normal((n, n))
            A = M.T @ M + 0.1 * np.eye(n)
            B = source.normal((n, 3))
            X = spd_solve(A, B)
            assert np.max(np.abs(A @ X - B)) <= 1e-9 * np.max(np.abs(B))

    def test_indefinite_fails_after_ladder(self):
        with pytest.raises(NumericalFailure, match="jitter"):
            spd_solve([[1.0, 0.0], [0.0, -1.0]], [1.0, 1.0])

    @pytest.mark.parametrize("matrix", [
        [[1.0, 2.0, 3.0]],
        np.zeros((0, 0)),
        [[1.0, math.nan], [math.nan, 1.0]],
        [[1.0, 0.5], [0.0, 1.0]],
    ])
    def test_invalid_matrices(self, matrix):
        with pytest.raises(InvalidInputError):
            SpdMatrix(matrix)

    def test_rhs_dimension_mismatch(self):
        with pytest.raises(InvalidInputError):
            spd_solve(np.eye(2), [1.0, 2.0, 3.0])


# ============================================================================
# Quadrature
# ============================================================================

class TestSimpson:
    def test_exact_on_quadratic(self):
        assert simpson(lambda t: t ** 2, 0.0, 1.0, 2) == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_kink_split(self):
        assert simpson(lambda t: np.abs(t - 0.5), 0.0, 1.0, 4, kinks=[0.5]) == pytest.approx(0.25, abs=1e-15)

    def test_full_period(self):
        assert abs(simpson(lambda t: np.sin(2 * np.pi * t), 0.0, 1.0, 4096)) <= 1e-12

    def test_jump_at_kink(self):
        value = simpson(lambda t: np.where(t >= 0.3, 1.0, 0.0), 0.0, 1.0, 2, kinks=[0.3])
        assert value == pytest.approx(0.7, abs=1e-12)

    def test_constant_integrand_broadcast(self):
        assert simpson(lambda t: 2.0, 0.0, 1.0, 8) == pytest.approx(2.0)

    def test_empty_interval(self):
        assert simpson(lambda t: t, 0.4, 0.4, 2) == 0.0

    @pytest.mark.parametrize("panels", [0, 3, -2])
    def test_bad_panels(self, panels):
        with pytest.raises(InvalidInputError):
            simpson(lambda t: t, 0.0, 1.0, panels)

    def test_kink_outside(self):
        with pytest.raises(InvalidInputError):
            simpson(lambda t: t, 0.0, 0.5, 2, kinks=[0.7])

    def test_reversed_limits(self):
        with pytest.raises(InvalidInputError):
            simpson(lambda t: t, 1.0, 0.0, 2)

    @settings(deadline=None, max_examples=30)
    @given(st.floats(min_value=0.01, max_value=0.99))
    def test_cubic_pieces_integrated_exactly(self, kink):
        f = lambda t: np.where(t < kink, t ** 3, 2.0 - t)
        exact = kink ** 4 / 4.0 + (2.0 * (1.0 - kink) - 0.5 * (1.0 - kink ** 2))
        assert simpson(f, 0.0, 1.0, 2, kinks=[kink]) == pytest.approx(exact, abs=1e-12)


# ============================================================================
# Finite differences
# ============================================================================

class TestDifferences:
    @pytest.mark.parametrize("t", [0.1, 0.5, 0.9])
    def test_quadratic(self, t):
        assert second_difference(lambda x: x * x, t, 1e-3) == pytest.approx(-2.0, abs=1e-8)

    def test_constant(self):
        assert second_difference(lambda x: 3.0, 0.4, 0.1) == 0.0

    def test_sine(self):
        value = second_difference(lambda x: math.sin(math.pi * x), 0.5, 1e-4)
        assert value == pytest.approx(math.pi ** 2, abs=1e-4)

    def test_stencil_leaves_domain(self):
        with pytest.raises(InvalidInputError):
            second_difference(lambda x: x, 0.0005, 1e-3)

    def test_nonpositive_step(self):
        with pytest.raises(InvalidInputError):
            second_difference(lambda x: x, 0.5, 0.0)

    @pytest.mark.parametrize("t", [0.0, 0.5, 1.0])
    def test_one_sided_on_quadratic(self, t):
        # second-order stencils are exact for quadratics
        assert one_sided_derivative(lambda x: x * x, t, 1e-3) == pytest.approx(2 * t, abs=1e-9)


def test_probe_points_deterministic():
    a, b = probe_points(100), probe_points(100)
    np.testing.assert_array_equal(a, b)
    assert a.shape == (100,)
    assert a.min() >= 0.0 and a.max() < 1.0
    assert np.unique(a).size == 100


def test_probe_points_count():
    with pytest.raises(InvalidInputError):
        probe_points(0)


# ============================================================================
# Random source
# ============================================================================

class TestRandomSource:
    def test_determinism(self):
        a = gaussian_draws(RandomSource(42), 1000)
        b = gaussian_draws(RandomSource(42), 1000)
        np.testing.assert_array_equal(a, b)

    def test_different_seeds_differ(self):
        assert not np.array_equal(gaussian_draws(RandomSource(1), 10), gaussian_draws(RandomSource(2), 10))

    def test_spawned_streams_independent_of_order(self):
        root = RandomSource(9)
        first = root.spawn(3).normal(5)
        root.spawn(0).normal(100)
        np.testing.assert_array_equal(first, RandomSource(9).spawn(3).normal(5))

    def test_draw_counter(self, source):
        source.normal((3, 4))
        source.uniform(5)
        assert source.draws == 17

    def test_negative_seed(self):
        with pytest.raises(InvalidInputError):
            RandomSource(-1)

    def test_negative_count(self, source):
        with pytest.raises(InvalidInputError):
            gaussian_draws(source, -1)

    def test_moments(self):
        x = gaussian_draws(RandomSource(2024), 10 ** 6)
        assert abs(x.mean()) <= 4.0 / math.sqrt(10 ** 6)
        assert abs(x.var() - 1.0) <= 0.01
