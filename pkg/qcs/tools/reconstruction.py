"""Reconstruction tools for the QCS MCP server.

Tools for drawing sensing instances, measuring matrix statistics, and
recovering sparse signals with SP, BP and their quantization-aware forms.
"""

from typing import Dict, List, Optional

import numpy as np
from mcp.server.fastmcp import Context

from ..model import (
    MatrixMode,
    MeasurementMatrix,
    gen_gaussian_matrix,
    gen_sparse_signal,
    measure,
    mu1,
    mu2,
    rip_delta,
)
from ..quant.scalar import BoxRegion, box_region
from ..recon.basis_pursuit import bp_reconstruct, qbp_reconstruct
from ..recon.projection import matrix_entries
from ..recon.subspace_pursuit import qsp_reconstruct, sp_reconstruct
from ..utils.decorators import handle_errors
from ..utils.rng import Stream, stream_id
from ..utils.validation import ValidationError, validate_finite_array
from .utilities import create_success_response, quantizer_from_payload, to_json_list


ALGORITHMS = ("sp", "bp", "qsp", "qbp")


@handle_errors("generate instance")
def generate_instance(
    ctx: Context,
    m: int,
    N: int,
    K: int,
    seed: int = 0,
    mode: str = MatrixMode.COLUMN_NORMALIZED.value,
) -> Dict:
    """Draw a Gaussian sensing matrix, a K-sparse signal and its measurements.

    Args:
        ctx: MCP context
        m: Number of measurements
        N: Signal length
        K: Sparsity
        seed: Master seed
        mode: "column-normalized" or "iid-scaled"

    Returns:
        Matrix rows, signal, support and measurements
    """
    phi = gen_gaussian_matrix(m, N, seed, mode=mode, stream=stream_id(Stream.MATRIX))
    x = gen_sparse_signal(N, K, seed, stream=stream_id(Stream.SIGNAL))
    return create_success_response(
        f"Generated {m}x{N} instance with K={K}",
        matrix=to_json_list(phi.entries),
        signal=to_json_list(x.values),
        support=list(x.support),
        measurements=to_json_list(measure(phi, x)),
    )


@handle_errors("matrix statistics")
def matrix_statistics(
    ctx: Context,
    matrix: List[List[float]],
    K: int,
    rip_mode: str = "sampled",
    trials: Optional[int] = None,
    seed: int = 0,
) -> Dict:
    """mu1, mu2 and the restricted isometry constant of order K.

    Exact mode enumerates every K-subset and fails above the enumeration cap.
    """
    entries = validate_finite_array(matrix, "matrix", ndim=2)
    phi = _as_matrix(entries)
    estimate = rip_delta(phi, K, mode=rip_mode, trials=trials, seed=seed)
    return create_success_response(
        "Computed matrix statistics",
        mu1=mu1(phi),
        mu2=mu2(phi, K),
        delta=estimate.delta,
        delta_is_lower_bound=estimate.is_lower_bound,
        n_supports=estimate.n_supports,
    )


def _as_matrix(entries: np.ndarray):
    # uploaded matrices carry no generation mode; iid-scaled skips the column check
    return MeasurementMatrix(entries, MatrixMode.IID_SCALED)


def _box(measurements: np.ndarray, levels, thresholds) -> BoxRegion:
    if levels is None:
        raise ValidationError("qsp and qbp need the quantizer levels")
    q = quantizer_from_payload(levels, thresholds)
    indices = q.index(measurements)
    if not np.allclose(q.levels[indices], measurements, rtol=0, atol=1e-12):
        raise ValidationError("measurements are not levels of the given quantizer")
    return box_region(q, indices)


@handle_errors("reconstruct signal")
def reconstruct_signal(
    ctx: Context,
    matrix: List[List[float]],
    measurements: List[float],
    algorithm: str,
    K: Optional[int] = None,
    levels: Optional[List[float]] = None,
    thresholds: Optional[List[float]] = None,
    max_iter: Optional[int] = None,
) -> Dict:
    """Recover a sparse signal.

    Args:
        ctx: MCP context
        matrix: Sensing matrix rows
        measurements: Measurements, or quantized measurements for qsp/qbp
        algorithm: sp, bp, qsp or qbp
        K: Sparsity (required for sp and qsp)
        levels: Quantizer levels (required for qsp and qbp)
        thresholds: Finite quantizer thresholds; level midpoints when omitted
        max_iter: Iteration cap for sp and qsp

    Returns:
        Estimated signal, support, iteration count and convergence flag
    """
    if algorithm not in ALGORITHMS:
        raise ValidationError(f"algorithm must be one of {ALGORITHMS}, got {algorithm!r}")
    entries = matrix_entries(matrix)
    y = validate_finite_array(measurements, "measurements", ndim=1)
    if algorithm in ("sp", "qsp") and K is None:
        raise ValidationError(f"{algorithm} needs the sparsity K")

    if algorithm == "sp":
        result = sp_reconstruct(entries, y, K, max_iter=max_iter)
    elif algorithm == "qsp":
        result = qsp_reconstruct(entries, _box(y, levels, thresholds), y, K, max_iter=max_iter)
    elif algorithm == "bp":
        result = bp_reconstruct(entries, y)
    else:
        result = qbp_reconstruct(entries, _box(y, levels, thresholds))

    if algorithm in ("sp", "qsp"):
        x_hat, support = result.signal.values, list(result.signal.support)
        residual = result.trace[-1].residual_norm
    else:
        x_hat, residual = result.x, result.primal_residual
        support = [int(j) for j in np.flatnonzero(x_hat)]
    return create_success_response(
        f"Reconstructed with {algorithm}",
        signal=to_json_list(x_hat),
        support=support,
        iterations=int(result.iterations),
        converged=bool(result.converged),
        residual=float(residual),
    )


def register_reconstruction_tools(mcp):
    """Register reconstruction tools with the MCP server."""
    mcp.tool()(generate_instance)
    mcp.tool()(matrix_statistics)
    mcp.tool()(reconstruct_signal)
