"""Unit tests for the seeded Monte Carlo runner."""

import math

import numpy as np
import pytest

import qcs.bench.experiment as experiment
from qcs.bench.experiment import (
    design_quantizers,
    entropy_coded_design,
    run_experiment,
    training_samples,
)
from qcs.bench.report import emit_csv, summarize
from qcs.config.experiment import ExperimentConfig
from qcs.config.settings import ConfigError, PursuitConfig, Settings
from qcs.model import gen_gaussian_matrix, gen_sparse_signal, measure
from qcs.quant.scalar import GaussianSource, distortion
from qcs.utils.rng import Stream, stream_id


def small_config(**overrides):
    values = dict(m=32, N=64, K=3, rates=(3,), trials=2, master_seed=5,
                  quantizers=("lloyd", "uniform"), algorithms=("sp", "qsp"),
                  training_samples=20000)
    values.update(overrides)
    return ExperimentConfig(**values)


class TestTrainingData:
    """Test quantizer training data and design."""

    def test_training_samples_match_measurement_scale(self):
        config = small_config()
        samples = training_samples(config)
        assert samples.size == 20000
        assert np.std(samples) == pytest.approx(math.sqrt(3 / 32), rel=0.05)

    def test_training_samples_are_seeded(self):
        config = small_config()
        np.testing.assert_array_equal(training_samples(config), training_samples(config))

    def test_design_every_rate_and_kind(self):
        config = small_config(rates=(2, 3), quantizers=("lloyd", "uniform", "entropy"))
        designs = design_quantizers(config)
        assert set(designs) == {(r, k) for r in (2, 3) for k in ("lloyd", "uniform", "entropy")}
        assert designs[(3, "lloyd")].quantizer.M == 8
        assert designs[(3, "entropy")].code is not None

    def test_entropy_coded_design(self):
        q, code = entropy_coded_design(GaussianSource(1.0), 0.1)
        assert q.M == 160
        assert len(code.codewords) == 160
        assert code.kraft_sum() == pytest.approx(1.0)

    def test_entropy_coded_design_from_samples(self, gaussian_samples):
        q, code = entropy_coded_design(gaussian_samples, 0.5)
        assert len(code.codewords) == q.M


class TestRunExperiment:
    """Test record generation."""

    def test_record_order(self):
        records = run_experiment(small_config())
        assert len(records) == 2 * 1 * 2 * 2
        keys = [(r.trial_index, r.rate, r.quantizer_kind, r.algorithm) for r in records]
        assert keys == [(t, 3, k, a) for t in (0, 1) for k in ("lloyd", "uniform") for a in ("sp", "qsp")]

    def test_csv_is_reproducible(self, tmp_path):
        config = small_config()
        emit_csv(run_experiment(config), tmp_path / "a" / "records.csv")
        emit_csv(run_experiment(config), tmp_path / "b" / "records.csv")
        assert (tmp_path / "a" / "records.csv").read_bytes() == (tmp_path / "b" / "records.csv").read_bytes()

    def test_worker_count_does_not_change_records(self, tmp_path):
        config = small_config(trials=3)
        emit_csv(run_experiment(config, workers=1), tmp_path / "serial" / "records.csv")
        emit_csv(run_experiment(config, workers=3), tmp_path / "pooled" / "records.csv")
        assert ((tmp_path / "serial" / "records.csv").read_bytes()
                == (tmp_path / "pooled" / "records.csv").read_bytes())

    def test_fine_quantization_is_near_exact(self):
        config = ExperimentConfig(trials=1, rates=(6,), quantizers=("lloyd",), algorithms=("sp",),
                                  quantizer_training="analytic")
        records = run_experiment(config)
        assert len(records) == 1
        assert records[0].error is None
        assert records[0].reconstruction_mse < 1e-4
        assert records[0].support_recovered

    def test_entropy_records_carry_code_length(self):
        records = run_experiment(small_config(trials=1, quantizers=("entropy", "lloyd"), algorithms=("sp",)))
        by_kind = {r.quantizer_kind: r for r in records}
        assert by_kind["entropy"].code_length > 0
        assert by_kind["lloyd"].code_length is None

    def test_design_failure_is_recorded(self, monkeypatch):
        def broken(*args, **kwargs):
            raise RuntimeError("no design")

        monkeypatch.setattr(experiment, "lloyd_design", broken)
        records = run_experiment(small_config(trials=1))
        failed = [r for r in records if r.quantizer_kind == "lloyd"]
        assert failed and all(r.error == "RuntimeError: no design" for r in failed)
        assert all(r.error is None for r in records if r.quantizer_kind == "uniform")
        assert {s.quantizer for s in summarize(records)} == {"uniform"}

    def test_invalid_config(self):
        with pytest.raises(ConfigError):
            run_experiment(small_config(K=100))

    def test_measurement_mse_matches_recomputed_distortion(self):
        config = small_config(trials=3, rates=(2, 3))
        designs = design_quantizers(config)
        for r in run_experiment(config):
            phi = gen_gaussian_matrix(config.m, config.N, config.master_seed, mode=config.matrix_mode,
                                      stream=stream_id(Stream.MATRIX, r.trial_index))
            x = gen_sparse_signal(config.N, config.K, config.master_seed,
                                  stream=stream_id(Stream.SIGNAL, r.trial_index))
            q = designs[(r.rate, r.quantizer_kind)].quantizer
            assert r.measurement_mse == pytest.approx(distortion(q, measure(phi, x)), rel=1e-12)

    def test_pursuit_settings_reach_the_trial(self):
        settings = Settings(pursuit=PursuitConfig(sp_iter_factor=0))
        records = run_experiment(small_config(trials=2, quantizers=("lloyd",)), settings=settings)
        assert all(r.iterations == 0 for r in records)
        assert all(r.error is None for r in records)


@pytest.mark.slow
class TestQuantizedReconstructionOrderings:
    """Qualitative orderings of the m=128, N=256, K=6 Monte Carlo study."""

    def test_lloyd_measurements_beat_uniform_at_every_rate(self):
        config = ExperimentConfig(rates=(2, 3, 4, 5, 6), trials=200, master_seed=3, algorithms=("sp",),
                                  training_samples=200_000)
        summaries = {(s.rate, s.quantizer): s for s in summarize(run_experiment(config, workers=4))}
        for rate in config.rates:
            assert summaries[(rate, "lloyd")].mean_measurement_mse <= summaries[(rate, "uniform")].mean_measurement_mse

    def test_six_bit_reconstruction_orderings(self):
        config = ExperimentConfig(rates=(6,), trials=40, master_seed=3, quantizer_training="analytic")
        records = run_experiment(config, workers=4)
        assert all(r.error is None for r in records)
        means = {(s.quantizer, s.algorithm): s.mean_reconstruction_mse for s in summarize(records)}
        for kind in config.quantizers:
            assert means[(kind, "qsp")] <= 0.5 * means[(kind, "sp")]
            assert means[(kind, "sp")] < means[(kind, "bp")]
            assert means[(kind, "qsp")] < means[(kind, "qbp")]

        errors = {(r.trial_index, r.quantizer_kind, r.algorithm): r.reconstruction_mse for r in records}
        cells = [(t, kind) for t in range(config.trials) for kind in config.quantizers]
        wins = sum(errors[(t, kind, "qbp")] <= errors[(t, kind, "bp")] for t, kind in cells)
        assert wins >= 0.8 * len(cells)
