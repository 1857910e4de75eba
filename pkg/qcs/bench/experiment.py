"""Seeded Monte Carlo runs: design quantizers, quantize, reconstruct, record.

Quantizers are designed once per rate from training data drawn on their own
stream and shared read-only by every trial. Trial i draws its matrix and
signal from streams keyed by i, so records do not depend on worker count
or completion order.
"""

import math
import time
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import trio
from loguru import logger

from ..bounds import enc_optimal_step
from ..config.experiment import ExperimentConfig
from ..config.settings import Settings, get_settings
from ..model import MatrixMode, gen_gaussian_matrix, gen_sparse_signal, measure
from ..quant.entropy import PrefixCode, huffman
from ..quant.scalar import (
    GaussianSource,
    SampleSource,
    ScalarQuantizer,
    as_source,
    box_region,
    gaussian_cell_probs,
    lloyd_design,
    uniform_design,
    uniform_quantizer,
)
from ..recon.basis_pursuit import bp_reconstruct, qbp_reconstruct
from ..recon.subspace_pursuit import qsp_reconstruct, sp_reconstruct
from ..utils.rng import Stream, keyed_generator, stream_id


STANDARD_ALGORITHMS = ("sp", "bp")
MODIFIED_ALGORITHMS = ("qsp", "qbp")
ENTROPY_COVERAGE = 8.0
_TRAINING_CHUNK = 4096


@dataclass(frozen=True)
class TrialRecord:
    """One (trial, rate, quantizer, algorithm) outcome.

    ``reconstruction_mse`` is ||x - x_hat||^2 / N and ``measurement_mse`` is
    ||y - y_hat||^2 / m. Failed reconstructions keep ``error`` and leave the
    reconstruction fields empty.
    """
    trial_index: int
    rate: int
    quantizer_kind: str
    algorithm: str
    measurement_mse: Optional[float]
    reconstruction_mse: Optional[float]
    support_recovered: bool
    iterations: int
    converged: bool
    wall_time_seconds: float
    code_length: Optional[float] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DesignedQuantizer:
    kind: str
    rate: int
    quantizer: Optional[ScalarQuantizer]
    code: Optional[PrefixCode] = None
    error: Optional[str] = None


def training_samples(config: ExperimentConfig) -> np.ndarray:
    """Pooled measurement coordinates from independent (Phi, x) draws.

    A coordinate of y = Phi x only involves the K columns on the support,
    and columns are independent, so each draw generates just those columns.
    """
    rng = keyed_generator(config.master_seed, stream_id(Stream.TRAINING))
    m, K = config.m, config.K
    n_draws = math.ceil(config.training_samples / m)
    pooled = []
    for start in range(0, n_draws, _TRAINING_CHUNK):
        n = min(_TRAINING_CHUNK, n_draws - start)
        columns = rng.standard_normal((n, m, K))
        if config.matrix_mode == MatrixMode.COLUMN_NORMALIZED.value:
            columns /= np.linalg.norm(columns, axis=1, keepdims=True)
        else:
            columns /= math.sqrt(m)
        coefficients = rng.standard_normal((n, K))
        pooled.append(np.einsum("dmk,dk->dm", columns, coefficients).ravel())
    return np.concatenate(pooled)[:config.training_samples]


def entropy_coded_design(source, step: float) -> Tuple[ScalarQuantizer, PrefixCode]:
    """Uniform quantizer covering +/- 8 sigma and a Huffman code for its cells.

    Cell probabilities come from the Gaussian CDF or from the training
    frequencies of a sample source.
    """
    source = as_source(source)
    sigma = source.sigma if isinstance(source, GaussianSource) else source.std
    M = 2 * math.ceil(ENTROPY_COVERAGE * sigma / step)
    q = uniform_quantizer(M, step)
    if isinstance(source, GaussianSource):
        p = gaussian_cell_probs(q, source.sigma)
    else:
        counts = np.bincount(q.index(source.samples), minlength=M)
        p = counts / counts.sum()
    return q, huffman(p / p.sum())


def design_quantizers(config: ExperimentConfig) -> Dict[Tuple[int, str], DesignedQuantizer]:
    """Design every (rate, kind) quantizer the config asks for.

    Design failures are kept as DesignedQuantizer.error so the run can
    record them per trial instead of aborting.
    """
    if config.quantizer_training == "empirical":
        source = SampleSource(training_samples(config))
    else:
        source = GaussianSource(config.measurement_sigma)

    designs = {}
    for rate in config.rates:
        M = 2 ** rate
        for kind in config.quantizers:
            log = logger.bind(rate=rate, quantizer=kind)
            try:
                if kind == "lloyd":
                    designed = DesignedQuantizer(kind, rate, lloyd_design(source, M).quantizer)
                elif kind == "uniform":
                    designed = DesignedQuantizer(kind, rate, uniform_design(source, M).quantizer)
                else:
                    q, code = entropy_coded_design(source, enc_optimal_step(rate, config.m, config.K))
                    designed = DesignedQuantizer(kind, rate, q, code)
                log.debug("designed {} quantizer with {} levels", kind, designed.quantizer.M)
            except Exception as e:
                log.warning("quantizer design failed: {}", e)
                designed = DesignedQuantizer(kind, rate, None, error=f"{type(e).__name__}: {e}")
            designs[(rate, kind)] = designed
    return designs


def _reconstruct(algorithm: str, phi, y_hat, box, K: int, settings: Settings):
    """Run one algorithm; returns (x_hat, reported support, iterations, converged)."""
    if algorithm in ("sp", "qsp"):
        if algorithm == "sp":
            result = sp_reconstruct(phi, y_hat, K, config=settings.pursuit)
        else:
            result = qsp_reconstruct(phi, box, y_hat, K, config=settings.pursuit)
        return result.signal.values, set(result.signal.support), result.iterations, result.converged
    if algorithm == "bp":
        result = bp_reconstruct(phi, y_hat, settings.solver)
    else:
        result = qbp_reconstruct(phi, box, settings.solver)
    support = set(np.flatnonzero(np.abs(result.x) > settings.solver.debias_thresh).tolist())
    return result.x, support, result.iterations, result.converged


def run_trial(config: ExperimentConfig, designs: Dict[Tuple[int, str], DesignedQuantizer],
              trial_index: int, settings: Optional[Settings] = None) -> List[TrialRecord]:
    """All records of one trial, ordered by rate, quantizer, algorithm."""
    settings = settings or get_settings()
    phi = gen_gaussian_matrix(config.m, config.N, config.master_seed, mode=config.matrix_mode,
                              stream=stream_id(Stream.MATRIX, trial_index))
    x = gen_sparse_signal(config.N, config.K, config.master_seed, stream=stream_id(Stream.SIGNAL, trial_index))
    y = measure(phi, x)
    true_support = set(x.support)

    records = []
    for rate in config.rates:
        for kind in config.quantizers:
            designed = designs[(rate, kind)]
            log = logger.bind(trial=trial_index, rate=rate, quantizer=kind)
            if designed.quantizer is None:
                for algorithm in config.algorithms:
                    records.append(TrialRecord(trial_index, rate, kind, algorithm, None, None, False, 0,
                                               False, 0.0, error=designed.error))
                continue

            q = designed.quantizer
            y_hat, indices = q.quantize(y)
            box = box_region(q, indices)
            measurement_mse = float(np.mean((y - y_hat) ** 2))
            code_length = None
            if designed.code is not None:
                code_length = len(designed.code.encode(indices)) / config.m

            for algorithm in config.algorithms:
                start = time.perf_counter()
                try:
                    x_hat, support, iterations, converged = _reconstruct(
                        algorithm, phi, y_hat, box, config.K, settings)
                    elapsed = time.perf_counter() - start
                    records.append(TrialRecord(
                        trial_index, rate, kind, algorithm, measurement_mse,
                        float(np.sum((x.values - x_hat) ** 2) / config.N),
                        support == true_support, iterations, converged, elapsed, code_length,
                    ))
                except Exception as e:
                    elapsed = time.perf_counter() - start
                    log.warning("{} failed: {}", algorithm, e)
                    records.append(TrialRecord(
                        trial_index, rate, kind, algorithm, measurement_mse, None, False, 0, False,
                        elapsed, code_length, error=f"{type(e).__name__}: {e}",
                    ))
    return records


async def _run_pool(config, designs, settings, workers: int) -> List[List[TrialRecord]]:
    results: List[Optional[List[TrialRecord]]] = [None] * config.trials
    limiter = trio.CapacityLimiter(workers)

    async def run_one(i: int):
        results[i] = await trio.to_thread.run_sync(run_trial, config, designs, i, settings, limiter=limiter)

    async with trio.open_nursery() as nursery:
        for i in range(config.trials):
            nursery.start_soon(run_one, i)
    return results


def run_experiment(config: ExperimentConfig, settings: Optional[Settings] = None,
                   workers: int = 1) -> List[TrialRecord]:
    """Run every trial of the config; records are ordered by trial index.

    Args:
        config: Validated experiment configuration
        settings: Solver and pursuit settings (global settings by default)
        workers: Number of worker threads

    Returns:
        TrialRecords ordered by trial, rate, quantizer, algorithm
    """
    config.validate()
    settings = settings or get_settings()
    logger.info("experiment: m={} N={} K={} rates={} trials={} seed={}",
                config.m, config.N, config.K, list(config.rates), config.trials, config.master_seed)
    designs = design_quantizers(config)
    logger.info("experiment: {} quantizers designed", len(designs))

    if workers <= 1:
        per_trial = [run_trial(config, designs, i, settings) for i in range(config.trials)]
    else:
        per_trial = trio.run(_run_pool, config, designs, settings, workers)

    records = [record for trial in per_trial for record in trial]
    failures = sum(1 for r in records if r.error)
    logger.info("experiment: {} records, {} failed", len(records), failures)
    return records
