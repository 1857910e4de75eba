"""Unit tests for the numerical checks."""

import math

import numpy as np
import pytest

from qcs.bench.checks import (
    as_rows,
    matrix_quantization_check,
    mismatch_check,
    reconstruction_sandwich,
    theorem1_check,
    theorem3_check,
    verify_clt,
)
from qcs.bounds import SQ_NONUNIFORM, SQ_UNIFORM
from qcs.model import MatrixMode, MeasurementMatrix, gen_sparse_signal, measure
from qcs.quant.scalar import uniform_quantizer
from qcs.utils.validation import ValidationError


class TestCLT:
    """Test the Gaussian approximation of a measurement coordinate."""

    def test_large_support_is_close_to_normal(self):
        result = verify_clt(128, 64, 256, 10000, seed=1)
        assert result.statistic < 0.02
        assert result.critical_value == pytest.approx(1.63 / 100)

    def test_single_product_is_not_normal(self):
        result = verify_clt(128, 1, 256, 10000, seed=1)
        assert result.statistic > result.critical_value

    def test_seeded(self):
        assert verify_clt(16, 3, 32, 500, seed=4) == verify_clt(16, 3, 32, 500, seed=4)

    def test_k_above_n(self):
        with pytest.raises(ValidationError):
            verify_clt(16, 40, 32, 100)


class TestDistortionRateChecks:
    """Test the distortion-rate constant checks."""

    def test_low_rate_ordering(self):
        [row] = theorem1_check([4])
        assert row.lloyd_normalized < row.uniform_normalized
        assert row.lloyd_normalized < SQ_NONUNIFORM
        assert row.uniform_normalized_per_rate == pytest.approx(row.uniform_normalized / 4)

    def test_monte_carlo_column(self):
        [row] = theorem1_check([3], n_samples=50000, seed=2)
        assert row.lloyd_monte_carlo == pytest.approx(row.lloyd_normalized, rel=0.05)

    @pytest.mark.slow
    def test_lloyd_constant(self):
        rows = theorem1_check([8, 10])
        for row in rows:
            assert 2.58 <= row.lloyd_normalized <= 2.86

    @pytest.mark.slow
    def test_uniform_constant_approached_monotonically(self):
        rows = theorem1_check([8, 10, 12])
        gaps = [abs(row.uniform_normalized_per_rate - SQ_UNIFORM) for row in rows]
        assert gaps[0] >= gaps[1] >= gaps[2]
        assert rows[-1].uniform_normalized_per_rate == pytest.approx(SQ_UNIFORM, rel=0.30)

    @pytest.mark.slow
    def test_mismatch_at_rate_eight(self):
        result = mismatch_check(1.2, 1.0, 8)
        assert result.holds
        assert result.rate == 8
        assert result.normalized <= result.bound

    def test_entropy_coded_bracket(self):
        rows = theorem3_check([4, 6, 10])
        assert all(row.bracket_holds for row in rows)
        assert all(row.entropy <= row.mean_length <= row.entropy + 1 for row in rows)
        assert rows[-1].normalized <= 2.85 * 1.10

    def test_entropy_coded_step(self):
        [row] = theorem3_check([5], sigma=2.0)
        assert row.step == pytest.approx(math.sqrt(2 * math.pi * math.e) * 2.0 / 32)

    def test_mismatch(self):
        result = mismatch_check(1.2, 1.0, 6)
        assert result.holds
        assert result.bound == pytest.approx(SQ_NONUNIFORM * 1.44 * 1.05)

    def test_mismatch_direction(self):
        with pytest.raises(ValidationError):
            mismatch_check(1.0, 1.2, 6)

    def test_as_rows(self):
        rows = as_rows(theorem3_check([4]))
        assert rows[0]["rate"] == 4
        assert "bracket_holds" in rows[0]


class TestMatrixChecks:
    """Test matrix quantization and the reconstruction sandwich."""

    def test_fine_matrix_quantization(self, small_instance):
        phi, _, _ = small_instance
        check = matrix_quantization_check(phi, uniform_quantizer(2001, 1e-3), 3, trials=100, seed=3)
        assert abs(check.delta_after - check.delta_before) < 0.05
        assert check.mu1_after == pytest.approx(check.mu1_before, rel=1e-2)
        assert check.delta_is_lower_bound

    def test_sandwich_on_oracle_support(self, small_instance):
        phi, x, y = small_instance
        q = uniform_quantizer(8, 0.1)
        check = reconstruction_sandwich(phi, x, q.quantize(y).levels)
        assert check.projected_holds
        assert not check.delta_is_lower_bound
        assert check.error >= 0

    def test_sandwich_square_system(self):
        rng = np.random.default_rng(6)
        entries = rng.standard_normal((3, 3))
        phi = MeasurementMatrix(entries / np.linalg.norm(entries, axis=0), MatrixMode.COLUMN_NORMALIZED)
        x = gen_sparse_signal(3, 3, seed=6)
        y_hat = measure(phi, x) + 0.01 * rng.standard_normal(3)
        check = reconstruction_sandwich(phi, x, y_hat)
        assert check.holds
        assert check.projected_holds
