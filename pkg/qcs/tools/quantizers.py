"""Quantizer tools for the QCS MCP server.

Tools for designing scalar, vector and entropy-coded quantizers and for
quantizing measurement vectors.
"""

from typing import Dict, List, Optional

import numpy as np
from mcp.server.fastmcp import Context

from ..quant.entropy import entropy, expected_length, huffman
from ..quant.scalar import (
    Companding,
    GaussianSource,
    KMeansPlusPlusLike,
    SampleSource,
    UniformSpread,
    box_region,
    distortion,
    gaussian_cell_probs,
    lloyd_design,
    uniform_design,
)
from ..quant.vector import lbg_design
from ..utils.decorators import handle_errors
from ..utils.validation import ValidationError
from .utilities import create_success_response, quantizer_from_payload, quantizer_payload, to_json_list


def _lloyd_init(name: str, seed: int):
    if name == "auto":
        return None
    if name == "uniform-spread":
        return UniformSpread()
    if name == "kmeans++":
        return KMeansPlusPlusLike(seed)
    if name == "companding":
        return Companding()
    raise ValidationError(f"unknown init {name!r}; expected auto, uniform-spread, kmeans++ or companding")


@handle_errors("design scalar quantizer")
def design_scalar_quantizer(
    ctx: Context,
    M: int,
    kind: str = "lloyd",
    sigma: float = 1.0,
    samples: Optional[List[float]] = None,
    init: str = "auto",
    seed: int = 0,
) -> Dict:
    """Design a Lloyd or optimal-uniform scalar quantizer.

    Args:
        ctx: MCP context
        M: Number of levels
        kind: "lloyd" or "uniform"
        sigma: Standard deviation of the Gaussian source (ignored with samples)
        samples: Optional training samples; switches to an empirical source
        init: Lloyd initialization: auto (uniform-spread up to 32 levels, companding
            above), uniform-spread, kmeans++ or companding
        seed: Seed for the kmeans++ initialization

    Returns:
        Levels, finite thresholds and the design distortion
    """
    source = SampleSource(np.asarray(samples, dtype=float)) if samples is not None else GaussianSource(sigma)
    if kind == "lloyd":
        design = lloyd_design(source, M, init=_lloyd_init(init, seed))
        q, extra = design.quantizer, {"history": [float(d) for d in design.history]}
    elif kind == "uniform":
        design = uniform_design(source, M)
        q, extra = design.quantizer, {"step": design.step}
    else:
        raise ValidationError(f"kind must be 'lloyd' or 'uniform', got {kind!r}")

    return create_success_response(
        f"Designed {kind} quantizer with {q.M} levels",
        quantizer=quantizer_payload(q),
        distortion=distortion(q, source),
        **extra,
    )


@handle_errors("quantize measurements")
def quantize_measurements(
    ctx: Context,
    values: List[float],
    levels: List[float],
    thresholds: Optional[List[float]] = None,
) -> Dict:
    """Quantize a vector and return its quantization cell.

    Args:
        ctx: MCP context
        values: Measurements to quantize
        levels: Quantizer levels in increasing order
        thresholds: Finite thresholds; level midpoints when omitted

    Returns:
        Quantized values, cell indices and the box bounds (null for infinite)
    """
    q = quantizer_from_payload(levels, thresholds)
    quantized = q.quantize(np.asarray(values, dtype=float))
    box = box_region(q, quantized)
    return create_success_response(
        f"Quantized {len(values)} values with {q.M} levels",
        quantized=to_json_list(quantized.levels),
        indices=[int(i) for i in quantized.indices],
        lower=to_json_list(box.lower),
        upper=to_json_list(box.upper),
    )


@handle_errors("gaussian cell probabilities")
def gaussian_cell_probabilities(
    ctx: Context,
    levels: List[float],
    sigma: float = 1.0,
    thresholds: Optional[List[float]] = None,
) -> Dict:
    """Cell probabilities of a quantizer under N(0, sigma^2)."""
    q = quantizer_from_payload(levels, thresholds)
    p = gaussian_cell_probs(q, sigma)
    return create_success_response(
        "Computed cell probabilities",
        probabilities=to_json_list(p),
        entropy=entropy(p),
        distortion=distortion(q, GaussianSource(sigma)),
    )


@handle_errors("build huffman code")
def build_huffman_code(ctx: Context, probabilities: List[float]) -> Dict:
    """Build an optimal prefix code.

    Args:
        ctx: MCP context
        probabilities: Symbol probabilities summing to 1

    Returns:
        Codewords keyed by symbol index, mean length and entropy
    """
    code = huffman(probabilities)
    return create_success_response(
        f"Built prefix code for {len(probabilities)} symbols",
        codewords={str(s): w for s, w in sorted(code.codewords.items())},
        expected_length=expected_length(code, probabilities),
        entropy=entropy(probabilities),
        kraft_sum=code.kraft_sum(),
    )


@handle_errors("design vector quantizer")
def design_vector_quantizer(
    ctx: Context,
    samples: List[List[float]],
    M: int,
    seed: int = 0,
) -> Dict:
    """Generalized Lloyd (LBG) codebook design.

    Args:
        ctx: MCP context
        samples: Training vectors, one per row
        M: Codebook size
        seed: Seed for the k-means++ initialization

    Returns:
        Codebook and the per-dimension distortion history
    """
    design = lbg_design(samples, M, seed=seed)
    return create_success_response(
        f"Designed {M}-point codebook",
        codebook=to_json_list(design.quantizer.codebook),
        history=[float(d) for d in design.history],
    )


def register_quantizer_tools(mcp):
    """Register quantizer tools with the MCP server."""
    mcp.tool()(design_scalar_quantizer)
    mcp.tool()(quantize_measurements)
    mcp.tool()(gaussian_cell_probabilities)
    mcp.tool()(build_huffman_code)
    mcp.tool()(design_vector_quantizer)
