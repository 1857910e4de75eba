"""Unit tests for distortion constants and reconstruction bounds."""

import math

import pytest

from qcs.bounds import (
    FLAG_ASSUMPTIONS_I_ONLY,
    FLAG_LOWER_UNVERIFIED,
    FLAG_MIXED_NORMALIZATION,
    FLAG_UPPER_UNVERIFIED,
    BoundReport,
    DomainError,
    RipDeltas,
    Scheme,
    bound_table,
    c_bp,
    c_lb,
    c_sp,
    enc_bounds,
    enc_optimal_step,
    recon_bound_report,
    sq_bounds_with_matrix,
    sq_nonuniform_const,
    sq_uniform_const,
    vq_bounds,
)
from qcs.utils.validation import ValidationError


class TestDistortionConstants:
    """Test the measurement-side constants."""

    def test_nonuniform(self):
        assert sq_nonuniform_const() == pytest.approx(2.7206990, abs=1e-7)

    def test_uniform(self):
        assert sq_uniform_const() == pytest.approx(0.9241962, abs=1e-7)

    def test_unit_mu_collapses_to_constants(self):
        nonuniform, uniform = sq_bounds_with_matrix(1.0, 1.0)
        assert nonuniform.lower == nonuniform.upper == sq_nonuniform_const()
        assert uniform.lower == sq_uniform_const()
        assert uniform.upper is None

    def test_matrix_dependent(self):
        nonuniform, uniform = sq_bounds_with_matrix(0.9, 1.3)
        assert nonuniform.lower == pytest.approx(2.4486, abs=1e-4)
        assert nonuniform.upper == pytest.approx(3.5369, abs=1e-4)
        assert uniform.lower == pytest.approx(0.9 * 0.9241962, abs=1e-6)

    def test_mu1_above_mu2(self):
        with pytest.raises(DomainError) as info:
            sq_bounds_with_matrix(1.3, 0.9)
        assert info.value.inequality == "mu1 <= mu2"

    def test_entropy_coded(self):
        report = enc_bounds()
        assert report.lower == pytest.approx(math.pi * math.e / 6)
        assert report.lower == pytest.approx(1.4232890, abs=1e-6)
        assert report.upper == pytest.approx(2.8465780, abs=1e-6)

    def test_entropy_coded_step(self):
        assert enc_optimal_step(8, 128, 6) == pytest.approx(0.0034952, abs=1e-7)

    def test_entropy_coded_step_unit_ratio(self):
        assert enc_optimal_step(3, 6, 6) == pytest.approx(math.sqrt(2 * math.pi * math.e) / 8)

    def test_entropy_coded_step_invalid(self):
        with pytest.raises(ValidationError):
            enc_optimal_step(8, 0, 6)


class TestReconstructionConstants:
    """Test c_lb, c_sp and c_bp."""

    def test_c_lb_isometry(self):
        assert c_lb(0.0) == 1.0

    def test_c_sp(self):
        assert c_sp(0.1) == pytest.approx(1.11 / 0.09)

    def test_c_bp(self):
        assert c_bp(0.2) == pytest.approx(4 / (math.sqrt(2.4) - math.sqrt(1.2)))
        assert c_bp(0.2) == pytest.approx(8.8155, abs=1e-4)

    def test_c_bp_increasing(self):
        values = [c_bp(d / 100) for d in range(0, 50, 5)]
        assert all(b > a for a, b in zip(values, values[1:]))

    def test_c_lb_decreasing(self):
        values = [c_lb(d / 100) for d in range(0, 100, 10)]
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_c_sp_shape(self):
        values = [c_sp(d / 100) for d in range(50, 100, 5)]
        assert all(b > a for a, b in zip(values, values[1:]))
        assert all(c_sp(d / 100) >= 1 for d in range(1, 100))

    @pytest.mark.parametrize("func,delta", [
        (c_bp, 0.5),
        (c_bp, -0.1),
        (c_sp, 0.0),
        (c_sp, 1.0),
        (c_lb, 1.0),
        (c_lb, float("nan")),
    ])
    def test_domain(self, func, delta):
        with pytest.raises(DomainError):
            func(delta)


class TestVectorQuantizationBounds:
    """Test the two VQ bounds and their crossover."""

    def test_isometry_limit(self):
        bounds = vq_bounds(0.0, 12, 6, 1.0)
        assert bounds.first.lower == 1.0
        assert bounds.first.upper == 1.0
        assert FLAG_MIXED_NORMALIZATION in bounds.first.flags

    def test_first_bound_smaller(self):
        bounds = vq_bounds(0.2, 12, 6, 1.0)
        assert bounds.first_upper_per_K == pytest.approx(2.4)
        assert bounds.second.upper == pytest.approx(2.7207, abs=1e-4)
        assert bounds.first_is_smaller

    def test_first_bound_never_smaller(self):
        bounds = vq_bounds(0.0, 24, 6, 1.0)
        assert bounds.crossover_delta < 0
        assert not bounds.first_is_smaller


class TestReconBoundReport:
    """Test reconstruction-distortion reports."""

    def test_sq_isometry(self):
        report = recon_bound_report(Scheme.SQ, "sp", RipDeltas(0.0, 0.1), 128, 6)
        assert report.lower == pytest.approx(sq_nonuniform_const())
        assert report.upper == pytest.approx(c_sp(0.1) ** 2 * sq_nonuniform_const())
        assert report.name == "recon-sq-sp"

    def test_usq_with_matrix_keeps_lower_only(self):
        report = recon_bound_report("USQ", "bp", RipDeltas(0.1, None, 0.2), 128, 6, mu1=1.0, mu2=1.2)
        assert report.lower == pytest.approx(c_lb(0.1) ** 2 * sq_uniform_const())
        assert report.upper is None

    def test_usq_without_matrix(self):
        report = recon_bound_report("USQ", "bp", RipDeltas(0.1, None, 0.2), 128, 6)
        assert report.upper == pytest.approx(c_bp(0.2) ** 2 * sq_uniform_const())
        assert FLAG_ASSUMPTIONS_I_ONLY in report.flags

    def test_sampled_deltas_flag_both_sides(self):
        report = recon_bound_report("ENC", "sp", RipDeltas(0.1, 0.2, sampled=True), 128, 6)
        assert FLAG_UPPER_UNVERIFIED in report.flags
        assert FLAG_LOWER_UNVERIFIED in report.flags
        assert "upper-unverified" in report.to_row()["flags"].split(";")

    def test_missing_delta(self):
        with pytest.raises(DomainError):
            recon_bound_report("SQ", "bp", RipDeltas(0.1, 0.2), 128, 6)

    def test_invalid_delta_propagates(self):
        with pytest.raises(DomainError):
            recon_bound_report("SQ", "bp", RipDeltas(0.1, None, 0.7), 128, 6)

    def test_lower_above_upper(self):
        with pytest.raises(DomainError):
            BoundReport("bad", 2.0, 1.0, "D")


class TestBoundTable:
    """Test the assembled bound table."""

    def test_constants_only(self):
        names = [report.name for report in bound_table()]
        assert names == ["sq-nonuniform", "sq-uniform", "enc"]

    def test_full_table(self):
        reports = bound_table(128, 6, RipDeltas(0.1, 0.2, 0.3), mu1=1.0, mu2=1.2)
        names = [report.name for report in reports]
        assert len(reports) == 13
        assert names[3:5] == ["vq-first", "vq-second"]
        assert "recon-vq-bp" in names
        assert reports[0].upper == pytest.approx(1.2 * sq_nonuniform_const())

    def test_sp_only(self):
        reports = bound_table(128, 6, RipDeltas(0.1, 0.2))
        assert len(reports) == 9
        assert all(not report.name.endswith("-bp") for report in reports)
