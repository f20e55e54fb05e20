import math

import numpy as np
import pytest

from mfcomplexity.complexity import generalized_complexity
from mfcomplexity.errors import (
    DegenerateSupportError,
    DomainError,
    FitError,
    InfiniteDivergenceError,
    PartitionMismatchError,
)
from mfcomplexity.multifractal import (
    CascadeSpec,
    DimensionCurve,
    PartitionDistribution,
    ScaleSeries,
    box_counting,
    cascade_dimension_closed_form,
    cascade_partition,
    cascade_relative_dimension_closed_form,
    complexity_dimension_link_check,
    default_q_grid,
    dimension_derivative,
    dimension_increment_map,
    fit_dimension,
    generalized_dimensions,
    generalized_relative_dimensions,
    partition_sum_log,
    relative_complexity_dimension_link_check,
    relative_partition_sum_log,
    sample_cascade,
    symmetrized_relative_dimensions,
)

# mpmath, 40 digits
D1_37 = 0.88129089923069261822
D2_37 = 0.78587519464715257502
REL2 = 0.05889368905356851429
REL1 = 0.03116344515186040263
REL2_REVERSED = 0.06711419585853696730

C37 = CascadeSpec((0.3, 0.7), 12)
C46 = CascadeSpec((0.4, 0.6), 12)
Q = default_q_grid()


def cascade_levels(spec, levels=range(4, 13)):
    return [cascade_partition(spec, k) for k in levels]


def uniform_levels(levels=range(1, 13)):
    return [PartitionDistribution(2.0 ** -j, np.full(2 ** j, 2.0 ** -j)) for j in levels]


class TestPartitionDistribution:
    def test_rejects_empty_boxes(self):
        with pytest.raises(DomainError):
            PartitionDistribution(0.5, [1.0, 0.0])

    def test_rejects_bad_epsilon(self):
        with pytest.raises(DomainError):
            PartitionDistribution(0.0, [1.0])

    def test_default_boxes(self):
        assert PartitionDistribution(0.25, [0.5, 0.5]).boxes.tolist() == [0, 1]


class TestPartitionSums:
    @pytest.mark.parametrize("q", [-3, 0, 1, 2.5])
    def test_single_box(self, q):
        assert partition_sum_log(PartitionDistribution(1.0, [1.0]), q) == 0.0

    def test_equal_boxes(self):
        pd = PartitionDistribution(1 / 8, np.full(8, 1 / 8))
        assert partition_sum_log(pd, 2) == pytest.approx(-math.log(8), abs=1e-15)

    def test_two_boxes(self):
        pd = PartitionDistribution(0.5, [0.3, 0.7])
        assert partition_sum_log(pd, 2) == pytest.approx(math.log(0.58), abs=1e-15)
        assert partition_sum_log(pd, 1) == pytest.approx(
            0.3 * math.log(0.3) + 0.7 * math.log(0.7), abs=1e-15
        )

    def test_relative_examples(self):
        a = PartitionDistribution(0.5, [0.3, 0.7])
        b = PartitionDistribution(0.5, [0.4, 0.6])
        assert relative_partition_sum_log(a, a, 3) == pytest.approx(0.0, abs=1e-15)
        assert relative_partition_sum_log(a, b, 2) == pytest.approx(
            0.040821994520255130, abs=1e-15
        )
        assert relative_partition_sum_log(a, b, 1) == pytest.approx(
            0.021600854143546535, abs=1e-15
        )

    def test_relative_lattice_mismatch(self):
        with pytest.raises(PartitionMismatchError):
            relative_partition_sum_log(
                PartitionDistribution(0.5, [0.3, 0.7]), PartitionDistribution(0.25, [0.4, 0.6]), 2
            )

    def test_relative_absolute_continuity(self):
        a = PartitionDistribution(0.25, [0.5, 0.5], boxes=[0, 3])
        b = PartitionDistribution(0.25, [0.5, 0.5], boxes=[0, 1])
        with pytest.raises(InfiniteDivergenceError):
            relative_partition_sum_log(a, b, 2)

    def test_relative_alignment_on_box_index(self):
        a = PartitionDistribution(0.25, [1.0], boxes=[2])
        b = PartitionDistribution(0.25, [0.5, 0.5], boxes=[1, 2])
        assert relative_partition_sum_log(a, b, 1) == pytest.approx(math.log(2))
        with pytest.raises(DegenerateSupportError):
            relative_partition_sum_log(a, b, -1)


class TestFit:
    x = np.log(2.0 ** -np.arange(1, 8))

    def test_exact_lines(self):
        assert fit_dimension(ScaleSeries(self.x, self.x)) == pytest.approx((1.0, 1.0))
        slope, r2 = fit_dimension(ScaleSeries(self.x, 0.7 * self.x + 3))
        assert slope == pytest.approx(0.7, abs=1e-14) and r2 == pytest.approx(1.0)

    def test_reciprocal(self):
        slope, _ = fit_dimension(ScaleSeries(self.x, 0.7 * self.x), reciprocal=True)
        assert slope == pytest.approx(-0.7, abs=1e-14)

    def test_flat(self):
        assert fit_dimension(ScaleSeries(self.x, np.full(7, 2.0))) == (0.0, 1.0)

    def test_noisy_r2_below_one(self):
        y = self.x + np.array([0.1, -0.1, 0.1, -0.1, 0.1, -0.1, 0.1])
        slope, r2 = fit_dimension(ScaleSeries(self.x, y))
        assert 0.9 < r2 < 1.0

    def test_series_validation(self):
        with pytest.raises(FitError):
            ScaleSeries([-1.0, -2.0], [0.0, 1.0])
        with pytest.raises(FitError):
            ScaleSeries([-1.0, -1.0, -1.0], [0.0, 1.0, 2.0])
        with pytest.raises(FitError):
            ScaleSeries([-3.0, -2.0, -1.0], [0.0, 1.0, 2.0])

    def test_cascade_series(self):
        pds = cascade_levels(C37)
        x = np.log([pd.epsilon for pd in pds])
        slope, r2 = fit_dimension(ScaleSeries(x, [partition_sum_log(pd, 2) for pd in pds]))
        assert slope == pytest.approx(D2_37, abs=1e-10)
        assert r2 == pytest.approx(1.0, abs=1e-12)


class TestCascade:
    def test_partitions(self):
        pd = cascade_partition(C37, 1)
        assert pd.epsilon == 0.5 and pd.masses.tolist() == pytest.approx([0.3, 0.7])
        assert cascade_partition(C37, 2).masses == pytest.approx([0.09, 0.21, 0.21, 0.49], abs=1e-15)
        flat = cascade_partition(CascadeSpec((0.5, 0.5), 6), 6)
        assert np.all(flat.masses == 1 / 64) and len(flat) == 64

    def test_level_beyond_depth(self):
        with pytest.raises(DomainError):
            cascade_partition(CascadeSpec((0.3, 0.7), 3), 4)

    def test_closed_forms(self):
        flat = CascadeSpec((0.5, 0.5), 5)
        for q in (-4, 0, 1, 3):
            assert cascade_dimension_closed_form(flat, q) == pytest.approx(1.0, abs=1e-15)
        assert cascade_dimension_closed_form(C37, 1) == pytest.approx(D1_37, abs=1e-15)
        assert cascade_dimension_closed_form(C37, 2) == pytest.approx(D2_37, abs=1e-15)
        assert cascade_relative_dimension_closed_form(C37, C46, 2) == pytest.approx(REL2, abs=1e-15)
        assert cascade_relative_dimension_closed_form(C37, C46, 1) == pytest.approx(REL1, abs=1e-15)

    def test_invalid_spec(self):
        with pytest.raises(DomainError):
            CascadeSpec((0.0, 1.0), 3)
        with pytest.raises(DomainError):
            CascadeSpec((0.3, 0.6), 3)

    def test_sampler_matches_level_masses(self):
        rng = np.random.default_rng(7)
        x = sample_cascade(C37, 200_000, rng)
        assert np.all((x >= 0) & (x < 1))
        freq = np.bincount((x * 4).astype(int), minlength=4) / x.size
        assert freq == pytest.approx([0.09, 0.21, 0.21, 0.49], abs=5e-3)


class TestGeneralizedDimensions:
    def test_uniform_measure(self):
        curve = generalized_dimensions(uniform_levels(), Q)
        assert np.abs(curve.values - 1).max() < 1e-10
        assert np.all(curve.r_squared > 1 - 1e-12)

    def test_cascade_oracle(self):
        curve = generalized_dimensions(cascade_levels(C37), Q)
        expected = [cascade_dimension_closed_form(C37, q) for q in Q]
        assert np.abs(curve.values - expected).max() < 1e-10
        assert curve.value_at(0) == pytest.approx(1.0, abs=1e-12)
        assert curve.value_at(2) == pytest.approx(0.7859, abs=1e-4)
        assert curve.is_monotone()

    def test_multifractal_step(self):
        curve = generalized_dimensions(cascade_levels(C37), Q)
        for q in Q[Q > 0]:
            assert curve.value_at(-q) - curve.value_at(q) >= 0

    def test_scale_order_irrelevant(self):
        pds = cascade_levels(C37, range(3, 9))
        a = generalized_dimensions(pds, [0.5, 2])
        b = generalized_dimensions(pds[::-1], [0.5, 2])
        assert np.array_equal(a.values, b.values)

    def test_needs_three_scales(self):
        with pytest.raises(FitError):
            generalized_dimensions(cascade_levels(C37, [3, 4]), [2])


class TestRelativeDimensions:
    def test_self_is_zero(self):
        pds = cascade_levels(C37)
        curve = generalized_relative_dimensions(pds, pds, Q)
        assert np.abs(curve.values).max() < 1e-12

    def test_cascade_pair(self):
        curve = generalized_relative_dimensions(cascade_levels(C37), cascade_levels(C46), Q)
        assert curve.value_at(2) == pytest.approx(REL2, abs=1e-10)
        assert curve.value_at(1) == pytest.approx(REL1, abs=1e-10)
        expected = [cascade_relative_dimension_closed_form(C37, C46, q) for q in Q]
        assert np.abs(curve.values - expected).max() < 1e-9
        assert curve.relative and curve.is_monotone()

    def test_mismatched_lists(self):
        with pytest.raises(PartitionMismatchError):
            generalized_relative_dimensions(cascade_levels(C37), cascade_levels(C46, range(4, 12)), [1])

    def test_symmetrized(self):
        pq = generalized_relative_dimensions(cascade_levels(C37), cascade_levels(C46), Q)
        qp = generalized_relative_dimensions(cascade_levels(C46), cascade_levels(C37), Q)
        sym = symmetrized_relative_dimensions(pq, qp)
        assert sym.value_at(2) == pytest.approx(0.5 * (REL2 + REL2_REVERSED), abs=1e-10)
        assert np.array_equal(sym.r_squared, np.minimum(pq.r_squared, qp.r_squared))
        same = symmetrized_relative_dimensions(pq, pq)
        assert np.array_equal(same.values, pq.values)

    def test_symmetrized_grid_mismatch(self):
        a = DimensionCurve([1, 2], [0, 0], [1, 1], relative=True)
        b = DimensionCurve([1, 3], [0, 0], [1, 1], relative=True)
        with pytest.raises(PartitionMismatchError):
            symmetrized_relative_dimensions(a, b)
        zero = symmetrized_relative_dimensions(a, a)
        assert np.all(zero.values == 0)


class TestDerivativeAndMaps:
    def test_flat_curves(self):
        flat = DimensionCurve(Q, np.ones(Q.size), np.ones(Q.size))
        assert np.all(dimension_derivative(flat).values == 0)
        m = dimension_increment_map(flat, Q[::8], Q[::8])
        assert np.all(m.values == 0)

    def test_uniform_measure_derivative(self):
        curve = generalized_dimensions(uniform_levels(), Q)
        assert np.abs(dimension_derivative(curve).values).max() < 1e-9

    def test_cascade_derivative(self):
        curve = generalized_dimensions(cascade_levels(C37), Q)
        d = dimension_derivative(curve)
        h = 0.25
        assert d.value_at(2) == pytest.approx(-0.081620439196221381, abs=2 * h * h)
        assert np.all(d.values <= 1e-12)
        fine_q = np.arange(1.5, 2.51, 0.01)
        fine = dimension_derivative(generalized_dimensions(cascade_levels(C37), fine_q))
        assert fine.value_at(2) == pytest.approx(-0.081620439196221381, abs=2e-4)

    def test_relative_derivative_sign(self):
        curve = generalized_relative_dimensions(cascade_levels(C37), cascade_levels(C46), Q)
        assert np.all(dimension_derivative(curve).values >= -1e-12)

    def test_nonuniform_grid(self):
        c = DimensionCurve([0, 1, 3], [1, 1, 1], [1, 1, 1])
        with pytest.raises(DomainError):
            dimension_derivative(c)

    def test_raw_increment(self):
        curve = generalized_dimensions(cascade_levels(C37), Q)
        m = dimension_increment_map(curve, [0], [2], mode="raw")
        assert m.values[0, 0] == pytest.approx(1 - D2_37, abs=1e-10)

    def test_relative_increment_diagonal(self):
        curve = generalized_dimensions(cascade_levels(C37), Q)
        g = [-1.0, 0.5, 2.0]
        m = dimension_increment_map(curve, g, g)
        deriv = dimension_derivative(curve)
        for i, q in enumerate(g):
            assert m.values[i, i] == pytest.approx(deriv.value_at(q), abs=1e-15)
        assert m.values[0, 2] == pytest.approx(
            (curve.value_at(-1) - curve.value_at(2)) / -3, abs=1e-14
        )

    def test_interpolation_and_out_of_range(self):
        curve = DimensionCurve([0, 1, 2], [1.0, 0.8, 0.7], [1, 1, 1])
        m = dimension_increment_map(curve, [0.5, 3.0], [2.0], mode="raw")
        assert m.values[0, 0] == pytest.approx(0.9 - 0.7)
        assert np.isnan(m.values[1, 0])

    def test_bad_mode(self):
        with pytest.raises(DomainError):
            dimension_increment_map(DimensionCurve([0, 1, 2], [1, 1, 1], [1, 1, 1]), [0], [1], "log")


class TestLinkCheck:
    def test_monofractal(self):
        exp, inc = complexity_dimension_link_check(uniform_levels(), 0.5, 3)
        assert abs(exp) < 1e-12 and abs(inc) < 1e-12

    def test_cascade(self):
        exp, inc = complexity_dimension_link_check(cascade_levels(C37), 1, 2)
        assert exp == pytest.approx(D2_37 - D1_37, abs=1e-9)
        assert exp == pytest.approx(inc, abs=1e-9)

    def test_relative_cascade(self):
        exp, inc = relative_complexity_dimension_link_check(
            cascade_levels(C37), cascade_levels(C46), 1, 2
        )
        assert exp == pytest.approx(REL2 - REL1, abs=1e-9)
        assert exp == pytest.approx(inc, abs=1e-9)

    def test_complexity_scaling_is_exact_power_law(self):
        # C_{a,b}(P_eps) = eps^(D_b - D_a) exactly for a deterministic cascade
        for k in (3, 7):
            pd = cascade_partition(C37, k)
            assert math.log(generalized_complexity(pd.masses, 1, 2)) == pytest.approx(
                (D2_37 - D1_37) * math.log(pd.epsilon), abs=1e-12
            )


class TestBoxCounting:
    def test_counts(self):
        pd = box_counting([0.1, 0.2, 0.6, 0.7], 0.5, origin=0.0)
        assert pd.masses.tolist() == [0.5, 0.5] and pd.boxes.tolist() == [0, 1]

    def test_weights(self):
        pd = box_counting([0.1, 0.9], 0.5, origin=0.0, weights=[1e3, 1e6])
        assert pd.masses == pytest.approx([1e3 / (1e3 + 1e6), 1e6 / (1e3 + 1e6)], abs=1e-15)

    def test_last_edge_clamped(self):
        pd = box_counting([0.0, 1.0], 0.25, origin=0.0, n_boxes=4)
        assert pd.boxes.tolist() == [0, 3]

    def test_min_count(self):
        pd = box_counting([0.1, 0.15, 0.6], 0.5, origin=0.0, min_count=2)
        assert pd.boxes.tolist() == [0] and pd.masses.tolist() == [1.0]
        with pytest.raises(DomainError):
            box_counting([0.1, 0.6], 0.5, origin=0.0, min_count=2)

    def test_before_origin(self):
        with pytest.raises(DomainError):
            box_counting([-0.1], 0.5, origin=0.0)
