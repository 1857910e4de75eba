"""Numerical checks of the distortion-rate constants and related claims."""

import math
from dataclasses import asdict, dataclass
from typing import List, Optional, Sequence, Union

import numpy as np
from loguru import logger
from scipy import stats

from ..bounds import ENC_LOWER, ENC_UPPER, SQ_NONUNIFORM, SQ_UNIFORM, c_lb
from ..model import MeasurementMatrix, RipMode, SparseSignal, mu1, mu2, quantize_matrix, rip_delta
from ..quant.entropy import entropy, expected_length, huffman
from ..quant.scalar import (
    Companding,
    GaussianSource,
    ScalarQuantizer,
    distortion,
    gaussian_cell_probs,
    lloyd_design,
    uniform_design,
    uniform_quantizer,
)
from ..recon.projection import LeastSquaresProjector
from ..utils.rng import Stream, keyed_generator, stream_id
from ..utils.validation import ValidationError, validate_positive_int, validate_sparsity


KS_CRITICAL_1PCT = 1.63


@dataclass(frozen=True)
class CLTCheck:
    statistic: float
    pvalue: float
    critical_value: float
    n_samples: int


def verify_clt(m: int, K: int, N: int, n_samples: int, seed: int = 0) -> CLTCheck:
    """KS distance of sqrt(m/K) Y_i from the standard normal.

    Each sample is one coordinate of y = Phi x for an independent row of an
    i.i.d. N(0, 1/m) matrix and an independent K-sparse Gaussian x. Only the
    K row entries on the support contribute, so only those are drawn.
    """
    m = validate_positive_int(m, "m")
    N = validate_positive_int(N, "N")
    K = validate_sparsity(K, N)
    n_samples = validate_positive_int(n_samples, "n_samples")

    rng = keyed_generator(seed, stream_id(Stream.CLT))
    row = rng.standard_normal((n_samples, K)) / math.sqrt(m)
    coefficients = rng.standard_normal((n_samples, K))
    scaled = math.sqrt(m / K) * np.sum(row * coefficients, axis=1)
    result = stats.kstest(scaled, "norm")
    return CLTCheck(float(result.statistic), float(result.pvalue),
                    KS_CRITICAL_1PCT / math.sqrt(n_samples), n_samples)


@dataclass(frozen=True)
class Theorem1Row:
    rate: int
    lloyd_normalized: float
    uniform_normalized: float
    uniform_normalized_per_rate: float
    uniform_step: float
    nonuniform_constant: float = SQ_NONUNIFORM
    uniform_constant: float = SQ_UNIFORM
    lloyd_monte_carlo: Optional[float] = None


def theorem1_check(rates: Sequence[int], n_samples: int = 0, seed: int = 0) -> List[Theorem1Row]:
    """2^{2R} D for Lloyd and optimal-uniform quantizers of N(0, 1).

    Distortions come from numerical integration. With ``n_samples`` > 0 the
    Lloyd distortion is also estimated by Monte Carlo.
    """
    source = GaussianSource(1.0)
    rows = []
    for R in rates:
        R = validate_positive_int(R, "rate")
        M = 2 ** R
        lloyd = lloyd_design(source, M, init=Companding()).quantizer
        uniform = uniform_design(source, M)
        scale = 4.0 ** R
        d_lloyd = distortion(lloyd, source)
        d_uniform = distortion(uniform.quantizer, source)
        mc = None
        if n_samples > 0:
            samples = keyed_generator(seed, stream_id(Stream.DESIGN, R)).standard_normal(n_samples)
            mc = scale * distortion(lloyd, samples)
        rows.append(Theorem1Row(R, scale * d_lloyd, scale * d_uniform, scale * d_uniform / R,
                                uniform.step, lloyd_monte_carlo=mc))
        logger.info("theorem1: R={} lloyd={:.5f} uniform/R={:.5f}", R, scale * d_lloyd, scale * d_uniform / R)
    return rows


@dataclass(frozen=True)
class Theorem3Row:
    rate: int
    step: float
    levels: int
    mean_length: float
    entropy: float
    normalized: float
    bracket_holds: bool
    lower_constant: float = ENC_LOWER
    upper_constant: float = ENC_UPPER


def theorem3_check(rates: Sequence[int], sigma: float = 1.0) -> List[Theorem3Row]:
    """Huffman-coded uniform quantization of N(0, sigma^2).

    Uses the step sqrt(2 pi e) sigma 2^-R and enough levels to cover
    +/- 8 sigma, then reports the mean code length, the entropy of the cell
    probabilities and 2^{2 L} D / sigma^2.
    """
    source = GaussianSource(sigma)
    rows = []
    for R in rates:
        R = validate_positive_int(R, "rate")
        step = math.sqrt(2 * math.pi * math.e) * sigma * 2.0 ** -R
        M = 2 * math.ceil(8 * sigma / step)
        q = uniform_quantizer(M, step)
        p = gaussian_cell_probs(q, sigma)
        p = p / p.sum()
        code = huffman(p)
        L = expected_length(code, p)
        H = entropy(p)
        D = distortion(q, source)
        bracket = bool(np.all(p > 0)) and H <= L <= H + 1
        rows.append(Theorem3Row(R, step, M, L, H, 4.0 ** L * D / sigma ** 2, bracket))
    return rows


@dataclass(frozen=True)
class MismatchCheck:
    rate: int
    design_sigma: float
    source_sigma: float
    normalized: float
    bound: float
    holds: bool


def mismatch_check(design_sigma: float, source_sigma: float, rate: int, slack: float = 1.05) -> MismatchCheck:
    """Lloyd quantizer designed for N(0, s1^2) applied to N(0, s0^2), s0 < s1.

    Compares 2^{2R} D with (pi sqrt(3)/2) s1^2 times ``slack``.
    """
    if not source_sigma < design_sigma:
        raise ValidationError("mismatch check needs source_sigma < design_sigma")
    rate = validate_positive_int(rate, "rate")
    q = lloyd_design(GaussianSource(design_sigma), 2 ** rate, init=Companding()).quantizer
    normalized = 4.0 ** rate * distortion(q, GaussianSource(source_sigma))
    bound = SQ_NONUNIFORM * design_sigma ** 2 * slack
    return MismatchCheck(rate, design_sigma, source_sigma, normalized, bound, normalized <= bound)


@dataclass(frozen=True)
class MatrixQuantizationCheck:
    mu1_before: float
    mu2_before: float
    delta_before: float
    mu1_after: float
    mu2_after: float
    delta_after: float
    delta_is_lower_bound: bool


def matrix_quantization_check(phi: MeasurementMatrix, q: ScalarQuantizer, K: int,
                              mode: Union[RipMode, str] = RipMode.SAMPLED,
                              trials: Optional[int] = None, seed: int = 0) -> MatrixQuantizationCheck:
    """Matrix statistics before and after entrywise quantization.

    Both delta estimates use the same supports (same seed).
    """
    quantized = quantize_matrix(phi, q)
    before = rip_delta(phi, K, mode=mode, trials=trials, seed=seed)
    after = rip_delta(quantized, K, mode=mode, trials=trials, seed=seed)
    return MatrixQuantizationCheck(mu1(phi), mu2(phi, K), before.delta,
                                   mu1(quantized), mu2(quantized, K), after.delta,
                                   before.is_lower_bound)


@dataclass(frozen=True)
class SandwichCheck:
    error: float
    measurement_error: float
    lower_bound: float
    projected_lower_bound: float
    delta_k: float
    delta_is_lower_bound: bool
    holds: bool
    projected_holds: bool


def reconstruction_sandwich(phi: MeasurementMatrix, x: SparseSignal, y_hat,
                            delta_k: Optional[float] = None,
                            mode: Union[RipMode, str] = RipMode.EXACT) -> SandwichCheck:
    """Oracle-support reconstruction error against its lower bounds.

    With the true support T, x_hat = pcoeff(y_hat, Phi_T). ``lower_bound`` is
    c_lb(delta_K)^2 ||E||^2 over the whole quantization error E.
    ``projected_lower_bound`` is ||P_T E||^2 / (1 + delta_K), using only the
    part of E inside span(Phi_T), which is what the reconstruction sees.
    """
    y_hat = np.asarray(y_hat, dtype=float)
    y = phi.entries @ x.values
    if delta_k is None:
        estimate = rip_delta(phi, x.K, mode=mode)
        delta_k, sampled = estimate.delta, estimate.is_lower_bound
    else:
        sampled = False
    projector = LeastSquaresProjector(phi.columns(x.support), support=x.support)
    e = y_hat - y
    x_hat = np.zeros(x.N)
    x_hat[list(x.support)] = projector.pcoeff(y_hat)
    error = float(np.sum((x_hat - x.values) ** 2))
    measurement_error = float(np.sum(e ** 2))
    lower = c_lb(min(delta_k, 1 - 1e-12)) ** 2 * measurement_error
    projected = float(np.sum(projector.proj(e) ** 2)) / (1 + delta_k)
    tol = 1e-9 * max(1.0, measurement_error)
    return SandwichCheck(error, measurement_error, lower, projected, float(delta_k), sampled,
                         error >= lower - tol, error >= projected - tol)


def as_rows(items) -> List[dict]:
    return [asdict(item) for item in items]
