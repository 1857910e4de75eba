"""Unit tests for scalar quantizers and their design."""

import math

import numpy as np
import pytest

from qcs.quant.scalar import (
    BoxRegion,
    Companding,
    GaussianSource,
    KMeansPlusPlusLike,
    NoBracketError,
    SampleSource,
    ScalarQuantizer,
    UniformSpread,
    apply_scalar,
    box_region,
    distortion,
    gaussian_cell_probs,
    lloyd_design,
    uniform_design,
    uniform_quantizer,
)
from qcs.utils.validation import ValidationError


CENTROID = math.sqrt(2 / math.pi)


class TestScalarQuantizer:
    """Test quantizer construction and application."""

    def test_boundary_goes_to_lower_cell(self):
        q = ScalarQuantizer.from_levels([-1.0, 1.0])
        assert apply_scalar(q, 0.0) == (-1.0, 0)

    def test_level_is_fixed_point(self):
        q = ScalarQuantizer.from_levels([-2.0, 0.0, 2.0])
        for level in q.levels:
            assert apply_scalar(q, level)[0] == level

    def test_midpoint_thresholds(self):
        q = ScalarQuantizer.from_levels([-2.0, 0.0, 2.0])
        assert apply_scalar(q, 0.9) == (0.0, 1)
        assert apply_scalar(q, 1.1) == (2.0, 2)
        assert q.is_nearest_level()

    def test_quantize_keeps_shape(self):
        q = ScalarQuantizer.from_levels([-1.0, 1.0])
        levels, indices = q.quantize(np.array([[-3.0, 0.5], [0.0, 2.0]]))
        np.testing.assert_array_equal(levels, [[-1.0, 1.0], [-1.0, 1.0]])
        np.testing.assert_array_equal(indices, [[0, 1], [0, 1]])

    def test_rate(self):
        assert uniform_quantizer(16, 0.1).rate == pytest.approx(4.0)

    def test_rejects_unordered_levels(self):
        with pytest.raises(ValidationError, match="strictly increasing"):
            ScalarQuantizer.from_levels([1.0, 0.0])

    def test_rejects_finite_outer_thresholds(self):
        with pytest.raises(ValidationError, match="outer thresholds"):
            ScalarQuantizer(np.array([0.0]), np.array([-1.0, 1.0]))

    def test_rejects_level_outside_cell(self):
        with pytest.raises(ValidationError, match="inside its own cell"):
            ScalarQuantizer(np.array([0.0, 1.0]), np.array([-np.inf, -0.5, np.inf]))

    def test_uniform_quantizer_is_symmetric(self):
        q = uniform_quantizer(4, 0.5)
        np.testing.assert_allclose(q.levels, [-0.75, -0.25, 0.25, 0.75])
        np.testing.assert_allclose(q.finite_thresholds, [-0.5, 0.0, 0.5])


class TestBoxRegion:
    """Test quantization cells as boxes."""

    def test_single_level_box_is_unbounded(self):
        q = ScalarQuantizer.from_levels([0.0])
        box = box_region(q, np.array([0, 0, 0]))
        assert np.all(box.lower == -np.inf)
        assert np.all(box.upper == np.inf)

    def test_inner_cell(self):
        q = ScalarQuantizer.from_levels([-2.0, 0.0, 2.0])
        box = box_region(q, np.array([1]))
        assert box.lower[0] == -1.0
        assert box.upper[0] == 1.0

    def test_measurement_lies_in_its_box(self, gaussian_samples):
        q = uniform_quantizer(8, 0.5)
        y = gaussian_samples[:500]
        box = box_region(q, q.quantize(y))
        assert box.contains(y)
        assert box.contains(q.quantize(y).levels)

    def test_index_out_of_range(self):
        q = ScalarQuantizer.from_levels([-1.0, 1.0])
        with pytest.raises(ValidationError, match="out of range"):
            box_region(q, np.array([2]))

    def test_point_box(self):
        box = BoxRegion.point(np.array([1.0, 2.0]))
        assert box.is_singleton
        np.testing.assert_array_equal(box.center(), [1.0, 2.0])

    def test_center_of_half_open_box(self):
        box = BoxRegion(np.array([-np.inf, 1.0, -np.inf]), np.array([2.0, np.inf, np.inf]))
        np.testing.assert_array_equal(box.center(), [2.0, 1.0, 0.0])

    def test_violation_scaled_by_width(self):
        box = BoxRegion(np.array([0.0]), np.array([2.0]))
        assert box.violation(np.array([3.0])) == pytest.approx(0.5)
        assert box.violation(np.array([1.0])) == 0.0

    def test_empty_box_rejected(self):
        with pytest.raises(ValidationError):
            BoxRegion(np.array([1.0]), np.array([0.0]))


class TestDistortion:
    """Test distortion and Gaussian cell probabilities."""

    def test_zero_when_samples_are_levels(self):
        q = ScalarQuantizer.from_levels([-1.0, 0.5, 3.0])
        assert distortion(q, np.array([-1.0, 0.5, 3.0, 3.0])) == 0.0

    def test_single_level_gives_variance(self):
        q = ScalarQuantizer.from_levels([0.0])
        assert distortion(q, GaussianSource(2.0)) == pytest.approx(4.0, rel=1e-12)

    def test_two_level_centroid(self):
        q = ScalarQuantizer.from_levels([-CENTROID, CENTROID])
        assert distortion(q, GaussianSource(1.0)) == pytest.approx(1 - 2 / math.pi, abs=1e-9)

    def test_matches_sample_estimate(self, gaussian_samples):
        q = uniform_quantizer(8, 0.6)
        assert distortion(q, GaussianSource(1.0)) == pytest.approx(
            distortion(q, gaussian_samples), rel=0.05)

    def test_cell_probs_symmetric(self):
        p = gaussian_cell_probs(ScalarQuantizer.from_levels([-1.0, 1.0]), 3.0)
        np.testing.assert_allclose(p, [0.5, 0.5], atol=1e-15)

    def test_cell_probs_single_level(self):
        np.testing.assert_allclose(gaussian_cell_probs(ScalarQuantizer.from_levels([0.0]), 1.0), [1.0])

    def test_cell_probs_at_one_sigma(self):
        p = gaussian_cell_probs(ScalarQuantizer.from_levels([-2.0, 0.0, 2.0]), 1.0)
        np.testing.assert_allclose(p, [0.15866, 0.68269, 0.15866], atol=1e-5)

    def test_cell_probs_sum_to_one(self):
        p = gaussian_cell_probs(uniform_quantizer(64, 0.05), 0.7)
        assert p.sum() == pytest.approx(1.0, abs=1e-12)
        assert np.all(p >= 0)


class TestLloydDesign:
    """Test Lloyd quantizer design."""

    def test_single_level_is_sample_mean(self):
        samples = np.array([1.0, 2.0, 3.0, 4.0, 10.0])
        design = lloyd_design(samples, 1)
        assert design.quantizer.levels[0] == pytest.approx(4.0)
        assert design.history[-1] == pytest.approx(np.var(samples))

    def test_two_level_gaussian(self):
        design = lloyd_design(GaussianSource(1.0), 2)
        np.testing.assert_allclose(design.quantizer.levels, [-CENTROID, CENTROID], atol=1e-6)
        assert design.history[-1] == pytest.approx(1 - 2 / math.pi, abs=1e-6)

    def test_separable_clusters(self):
        design = lloyd_design(np.array([-1.0, -1.0, 1.0, 1.0]), 2)
        np.testing.assert_array_equal(design.quantizer.levels, [-1.0, 1.0])
        assert design.history[-1] == 0.0

    @pytest.mark.parametrize("M", [4, 8, 16, 32, 64])
    def test_no_worse_than_best_uniform(self, M):
        source = GaussianSource(1.0)
        lloyd = distortion(lloyd_design(source, M).quantizer, source)
        uniform = distortion(uniform_design(source, M).quantizer, source)
        assert lloyd <= uniform

    def test_history_never_increases(self, gaussian_samples):
        history = lloyd_design(gaussian_samples, 8).history
        assert all(b <= a for a, b in zip(history, history[1:]))

    def test_result_is_nearest_level(self, gaussian_samples):
        assert lloyd_design(gaussian_samples, 16).quantizer.is_nearest_level()

    @pytest.mark.parametrize("init", [KMeansPlusPlusLike(seed=3), Companding()])
    def test_initializations_reach_the_optimum(self, init):
        reference = lloyd_design(GaussianSource(1.0), 4).history[-1]
        assert lloyd_design(GaussianSource(1.0), 4, init=init).history[-1] == pytest.approx(reference, rel=1e-3)

    def test_many_levels_start_from_companding(self):
        default = lloyd_design(GaussianSource(1.0), 64)
        companded = lloyd_design(GaussianSource(1.0), 64, init=Companding())
        assert default.history[0] == companded.history[0]
        np.testing.assert_array_equal(default.quantizer.levels, companded.quantizer.levels)

    def test_many_levels_end_below_quantile_start(self):
        default = lloyd_design(GaussianSource(1.0), 64).history[-1]
        quantile = lloyd_design(GaussianSource(1.0), 64, init=UniformSpread()).history[-1]
        assert default <= quantile

    def test_few_levels_start_from_quantiles(self):
        default = lloyd_design(GaussianSource(1.0), 32)
        assert default.history[0] == lloyd_design(GaussianSource(1.0), 32, init=UniformSpread()).history[0]

    def test_sigma_scaling(self):
        unit = lloyd_design(GaussianSource(1.0), 8).quantizer.levels
        scaled = lloyd_design(GaussianSource(0.25), 8).quantizer.levels
        np.testing.assert_allclose(scaled, 0.25 * unit, rtol=1e-6)

    def test_too_few_distinct_samples(self):
        with pytest.raises(ValidationError, match="distinct samples"):
            lloyd_design(np.array([1.0, 1.0, 2.0]), 3)

    def test_empty_samples(self):
        with pytest.raises(ValidationError):
            SampleSource(np.array([]))


class TestUniformDesign:
    """Test optimal uniform quantizer design."""

    def test_two_levels_match_centroid(self):
        design = uniform_design(GaussianSource(1.0), 2)
        assert design.step / 2 == pytest.approx(CENTROID, abs=1e-4)

    def test_four_levels(self):
        design = uniform_design(GaussianSource(1.0), 4)
        assert design.step == pytest.approx(0.9957, abs=1e-3)
        assert distortion(design.quantizer, GaussianSource(1.0)) == pytest.approx(0.1188, abs=1e-4)

    def test_lloyd_beats_uniform(self):
        source = GaussianSource(1.0)
        lloyd = lloyd_design(source, 8).history[-1]
        uniform = distortion(uniform_design(source, 8).quantizer, source)
        assert lloyd <= uniform

    def test_no_bracket(self):
        with pytest.raises(NoBracketError) as info:
            uniform_design(GaussianSource(1.0), 4, step_grid=(2.0, 3.0, 8))
        assert info.value.at_edge == pytest.approx(2.0)

    def test_single_level_rejected(self):
        with pytest.raises(ValidationError):
            uniform_design(GaussianSource(1.0), 1)
