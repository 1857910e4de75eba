"""Bound tools for the QCS MCP server.

Tools for the distortion-rate constants and the reconstruction bounds
built from them.
"""

from typing import Dict, Optional

from mcp.server.fastmcp import Context

from ..bounds import (
    RipDeltas,
    bound_table,
    c_bp,
    c_lb,
    c_sp,
    enc_bounds,
    enc_optimal_step,
    sq_nonuniform_const,
    sq_uniform_const,
    vq_bounds,
)
from ..utils.decorators import handle_errors
from .utilities import create_success_response


@handle_errors("get distortion constants")
def get_distortion_constants(ctx: Context) -> Dict:
    """Asymptotic constants of optimal, uniform and entropy-coded scalar quantization."""
    return create_success_response(
        "Distortion-rate constants",
        sq_nonuniform=sq_nonuniform_const(),
        sq_uniform=sq_uniform_const(),
        enc_lower=enc_bounds().lower,
        enc_upper=enc_bounds().upper,
    )


@handle_errors("get reconstruction constants")
def get_reconstruction_constants(
    ctx: Context,
    delta_k: Optional[float] = None,
    delta_3k: Optional[float] = None,
    delta_4k: Optional[float] = None,
) -> Dict:
    """c_lb, c_sp and c_bp for whichever restricted isometry constants are given."""
    constants = {}
    if delta_k is not None:
        constants["c_lb"] = c_lb(delta_k)
    if delta_3k is not None:
        constants["c_sp"] = c_sp(delta_3k)
    if delta_4k is not None:
        constants["c_bp"] = c_bp(delta_4k)
    return create_success_response("Reconstruction constants", **constants)


@handle_errors("entropy coded step")
def entropy_coded_step(ctx: Context, rate: float, m: int, K: int) -> Dict:
    """Uniform step used ahead of Huffman coding at the given rate."""
    return create_success_response("Entropy-coded quantizer step", step=enc_optimal_step(rate, m, K))


@handle_errors("compare vq bounds")
def compare_vq_bounds(ctx: Context, delta_k: float, m: int, K: int, mu2: float = 1.0) -> Dict:
    """Both vector-quantization upper bounds and which one is smaller."""
    result = vq_bounds(delta_k, m, K, mu2)
    return create_success_response(
        "Vector quantization bounds",
        first=result.first.to_row(),
        second=result.second.to_row(),
        first_upper_per_K=result.first_upper_per_K,
        crossover_delta=result.crossover_delta,
        first_is_smaller=result.first_is_smaller,
    )


@handle_errors("get bound table")
def get_bound_table(
    ctx: Context,
    m: Optional[int] = None,
    K: Optional[int] = None,
    delta_k: Optional[float] = None,
    delta_3k: Optional[float] = None,
    delta_4k: Optional[float] = None,
    mu1: Optional[float] = None,
    mu2: Optional[float] = None,
    sampled: bool = False,
) -> Dict:
    """All bound reports the inputs determine.

    Args:
        ctx: MCP context
        m: Number of measurements
        K: Sparsity
        delta_k: Restricted isometry constant of order K
        delta_3k: Order 3K constant (SP bounds)
        delta_4k: Order 4K constant (BP bounds)
        mu1: Average column energy of the matrix
        mu2: Worst row-restricted energy of the matrix
        sampled: Whether the deltas come from sampled supports

    Returns:
        Rows with name, lower, upper, normalization and flags
    """
    deltas = RipDeltas(delta_k, delta_3k, delta_4k, sampled) if delta_k is not None else None
    rows = [report.to_row() for report in bound_table(m, K, deltas, mu1, mu2)]
    return create_success_response(f"Computed {len(rows)} bound reports", reports=rows)


def register_bound_tools(mcp):
    """Register bound tools with the MCP server."""
    mcp.tool()(get_distortion_constants)
    mcp.tool()(get_reconstruction_constants)
    mcp.tool()(entropy_coded_step)
    mcp.tool()(compare_vq_bounds)
    mcp.tool()(get_bound_table)
