import math

import numpy as np
import pytest

from minkowski.errors import DomainError, ToleranceNotReachedError
from minkowski.spectral import (MeasureAtoms, RecurrenceCoeffs, arcsine_atoms, central_moment_bounds,
                                discretize, integrate, kinney_dimension, kinney_integral,
                                lipschitz_oscillation, monotone_oscillation, recurrence_coeffs,
                                regularity_diagnostic, resolved_recurrence)

# published bracket
DIMENSION_BRACKET = (0.874716305108207, 0.874716305108213)
DIMENSION = sum(DIMENSION_BRACKET) / 2


def log2_1p(x):
    return math.log2(1.0 + x)


def square(x):
    return x * x


class TestIntegrate:
    def test_constant(self):
        result = integrate(lambda x: 1.0, monotone_oscillation(lambda x: 1.0), 1e-12)
        assert result.value == 1.0
        assert result.error_bound == 0.0
        assert result.intervals_used == 1

    def test_identity_has_mean_one_half(self):
        result = integrate(lambda x: x, lipschitz_oscillation(1.0), 1e-4)
        assert result.error_bound < 1e-4
        assert abs(result.value - 0.5) <= result.error_bound

    def test_second_moment_against_enclosure(self):
        moments = central_moment_bounds(2, level=14)
        result = integrate(square, monotone_oscillation(square), 1e-4)
        # ∫ y² dμ = m_2 + 1/4
        assert abs(result.value - (moments.center[2] + 0.25)) <= result.error_bound + moments.radius[2]

    def test_bound_shrinks_with_eps(self):
        coarse = integrate(log2_1p, monotone_oscillation(log2_1p), 1e-3)
        fine = integrate(log2_1p, monotone_oscillation(log2_1p), 1e-4)
        assert fine.error_bound <= coarse.error_bound
        assert fine.intervals_used >= coarse.intervals_used

    def test_representatives_agree_within_bounds(self):
        mid = integrate(log2_1p, monotone_oscillation(log2_1p), 1e-4, representative='midpoint')
        left = integrate(log2_1p, monotone_oscillation(log2_1p), 1e-4, representative='left')
        assert abs(mid.value - left.value) <= mid.error_bound + left.error_bound

    def test_budget(self):
        with pytest.raises(ToleranceNotReachedError):
            integrate(log2_1p, monotone_oscillation(log2_1p), 1e-9, max_intervals=100)

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            integrate(log2_1p, monotone_oscillation(log2_1p), 0.0)
        with pytest.raises(DomainError):
            integrate(log2_1p, monotone_oscillation(log2_1p), 1e-3, representative='right')


class TestMoments:
    def test_enclosures(self):
        moments = central_moment_bounds(10, level=12)
        assert moments.lower[0] == moments.upper[0] == 1.0
        assert np.all(moments.lower <= moments.upper)
        assert np.all(moments.lower[1::2] == 0.0)
        # |y - 1/2| <= 1/2
        assert moments.upper[2] <= 0.25
        assert np.all(np.diff(moments.upper[2::2]) <= 0)

    def test_refinement_tightens(self):
        coarse = central_moment_bounds(6, level=8)
        fine = central_moment_bounds(6, level=12)
        assert fine.radius[2] < coarse.radius[2]
        assert fine.lower[2] >= coarse.lower[2] * (1 - 1e-12)
        assert fine.upper[2] <= coarse.upper[2] * (1 + 1e-12)

    def test_estimate_inside_enclosure(self):
        moments = central_moment_bounds(20, level=10)
        assert np.all(moments.lower <= moments.center)
        assert np.all(moments.center <= moments.upper)
        assert np.all(moments.radius <= moments.upper - moments.lower)

    def test_estimate_beats_endpoint_average(self):
        reference = central_moment_bounds(4, level=16).center
        coarse = central_moment_bounds(4, level=10)
        endpoint_average = (coarse.lower + coarse.upper) / 2
        for k in (2, 4):
            assert abs(coarse.center[k] - reference[k]) < abs(endpoint_average[k] - reference[k])

    def test_rejects_bad_arguments(self):
        with pytest.raises(DomainError):
            central_moment_bounds(4, level=0)
        with pytest.raises(DomainError):
            central_moment_bounds(-1, level=4)


class TestKinney:
    def test_small_moment_integral_encloses_truth(self):
        result = kinney_integral(leaf_level=10, moment_level=12, order=60)
        truth = 1.0 / (2.0 * DIMENSION)
        assert result.error_bound < 1e-3
        assert abs(result.value - truth) <= result.error_bound + 1e-14
        assert result.intervals_used == 2 ** 10

    def test_adaptive_dimension(self):
        estimate = kinney_dimension(1e-3, method='adaptive')
        assert estimate.method == 'adaptive'
        assert estimate.error_bound <= 1e-3
        assert abs(estimate.dimension - DIMENSION) <= estimate.error_bound
        low, high = estimate.bracket
        assert low <= DIMENSION <= high

    def test_unknown_method(self):
        with pytest.raises(DomainError):
            kinney_dimension(1e-3, method='simpson')

    def test_rejects_non_positive_eps(self):
        with pytest.raises(DomainError):
            kinney_dimension(0.0)

    @pytest.mark.slow
    def test_moment_dimension_hits_published_bracket(self):
        estimate = kinney_dimension(1e-10)
        assert estimate.error_bound <= 1e-10
        assert DIMENSION_BRACKET[0] <= estimate.dimension <= DIMENSION_BRACKET[1]
        low, high = estimate.bracket
        assert low <= DIMENSION_BRACKET[0] and high >= DIMENSION_BRACKET[1]

    @pytest.mark.slow
    def test_methods_agree(self):
        moment = kinney_dimension(1e-10)
        adaptive = kinney_dimension(1e-4, method='adaptive')
        assert abs(moment.dimension - adaptive.dimension) <= moment.error_bound + adaptive.error_bound


class TestAtoms:
    def test_level_one(self):
        atoms = discretize(1)
        assert atoms.points.tolist() == [0.25, 0.75]
        assert atoms.weights.tolist() == [0.5, 0.5]
        assert atoms.level == 1

    def test_level_two(self):
        atoms = discretize(2)
        assert atoms.points == pytest.approx([1 / 6, 5 / 12, 7 / 12, 5 / 6], abs=1e-15)

    @pytest.mark.parametrize("n", [0, 3, 8, 16])
    def test_weights_and_symmetry(self, n):
        atoms = discretize(n)
        assert len(atoms) == 2 ** n
        assert math.fsum(atoms.weights) == 1.0
        assert np.all(np.diff(atoms.points) > 0)
        assert np.allclose(atoms.points + atoms.points[::-1], 1.0, atol=1e-15)

    def test_arcsine_atoms(self):
        atoms = arcsine_atoms(8)
        assert len(atoms) == 8
        assert np.allclose(atoms.points + atoms.points[::-1], 1.0)
        with pytest.raises(DomainError):
            arcsine_atoms(0)


class TestRecurrence:
    def test_two_point_measure(self):
        atoms = MeasureAtoms(np.array([0.0, 1.0]), np.array([0.5, 0.5]))
        coeffs = recurrence_coeffs(atoms, 1)
        assert coeffs.a[0] == pytest.approx(0.5)
        assert coeffs.b[0] == pytest.approx(0.5)
        exact = recurrence_coeffs(atoms, 2, exact=True)
        assert exact.a.tolist() == [0.5, 0.5]
        assert exact.b.tolist() == [0.5, 0.0]

    def test_symmetric_atoms_have_centred_diagonal(self):
        coeffs = recurrence_coeffs(discretize(12), 40)
        assert np.allclose(coeffs.a, 0.5, atol=1e-9)
        assert np.all(coeffs.b > 0)
        assert np.all(coeffs.b <= 0.5)

    def test_exact_mode_agrees_with_floating_point(self):
        atoms = discretize(4)
        approx = recurrence_coeffs(atoms, 8)
        exact = recurrence_coeffs(atoms, 8, exact=True)
        assert np.allclose(approx.a, exact.a, atol=1e-9)
        assert np.allclose(approx.b, exact.b, atol=1e-9)

    def test_count_limits(self):
        atoms = discretize(3)
        with pytest.raises(DomainError):
            recurrence_coeffs(atoms, 9)
        with pytest.raises(DomainError):
            recurrence_coeffs(atoms, 0)
        with pytest.raises(DomainError):
            recurrence_coeffs(discretize(6), 31, exact=True)

    def test_arcsine_control(self):
        coeffs = recurrence_coeffs(arcsine_atoms(64), 40)
        assert np.allclose(coeffs.a, 0.5, atol=1e-10)
        assert coeffs.b[0] == pytest.approx(math.sqrt(1 / 8), abs=1e-10)
        assert np.allclose(coeffs.b[1:], 0.25, atol=1e-10)
        trend = regularity_diagnostic(coeffs)
        gaps = trend.table['gap'].to_numpy()
        assert np.all(np.diff(gaps) < 0)
        assert trend.final_gap < 0.003

    def test_resolved_recurrence_is_a_prefix(self):
        full = recurrence_coeffs(discretize(10), 60)
        resolved = resolved_recurrence(10, 60, tol=1e-3)
        assert 0 < len(resolved) <= 60
        assert np.array_equal(resolved.a, full.a[:len(resolved)])
        assert np.array_equal(resolved.b, full.b[:len(resolved)])
        fine = recurrence_coeffs(discretize(12), len(resolved))
        assert np.max(np.abs(resolved.b - fine.b)) <= 1e-3

    def test_frame(self):
        frame = recurrence_coeffs(discretize(8), 10).to_frame()
        assert list(frame.columns) == ['j', 'a', 'b', 'geo_mean']
        assert frame['j'].tolist() == list(range(1, 11))

    @pytest.mark.slow
    def test_geometric_mean_approaches_capacity(self):
        coeffs = recurrence_coeffs(discretize(18), 100)
        assert abs(coeffs.geo_mean[99] - 0.25) <= 0.05

    @pytest.mark.slow
    def test_arcsine_control_converges_faster(self):
        question_mark = regularity_diagnostic(recurrence_coeffs(discretize(18), 100))
        control = regularity_diagnostic(recurrence_coeffs(arcsine_atoms(1000), 100))
        assert control.final_gap < 0.001
        assert control.final_gap * 10 < question_mark.final_gap < 0.05


class TestDiagnostic:
    def test_first_geometric_mean_is_b1(self):
        trend = regularity_diagnostic(RecurrenceCoeffs(np.array([0.5]), np.array([0.3])))
        assert trend.table['geo_mean'].iloc[0] == pytest.approx(0.3)
        assert trend.final_gap == pytest.approx(0.05)

    def test_geometric_means(self):
        coeffs = RecurrenceCoeffs(np.array([0.5, 0.5]), np.array([0.5, 0.125]))
        assert coeffs.geo_mean == pytest.approx([0.5, 0.25])
        assert coeffs.gamma_log == pytest.approx([math.log(2), math.log(16)])


    @pytest.mark.filterwarnings('error')
    def test_terminal_zero_is_left_out(self):
        coeffs = RecurrenceCoeffs(np.array([0.5, 0.5]), np.array([0.3, 0.0]))
        assert coeffs.geo_mean[0] == pytest.approx(0.3)
        assert np.isnan(coeffs.geo_mean[1])
        assert np.isnan(coeffs.gamma_log[1])
        trend = regularity_diagnostic(coeffs)
        assert len(trend.table) == 1
        assert trend.final_gap == pytest.approx(0.05)

    @pytest.mark.filterwarnings('error')
    def test_full_count_on_finite_measure(self):
        coeffs = recurrence_coeffs(discretize(2), 4)
        assert coeffs.b[3] == 0.0
        assert np.all(np.isfinite(coeffs.geo_mean[:3]))
        assert len(regularity_diagnostic(coeffs).table) == 3
