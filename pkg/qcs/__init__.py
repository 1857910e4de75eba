"""Quantized compressive sensing toolkit.

This package provides:
- Gaussian sensing matrices, sparse signals and matrix statistics (model)
- Scalar, vector and entropy-coded quantizer design (quant)
- Standard and quantization-aware Subspace Pursuit and Basis Pursuit (recon)
- Asymptotic distortion constants and reconstruction bounds (bounds)
- Seeded Monte Carlo experiments and numerical checks (bench)
"""

__version__ = "0.1.0"

# Main API exports
from .config import ExperimentConfig, Settings, get_settings
from .model import (
    MatrixMode,
    MeasurementMatrix,
    RipMode,
    SparseSignal,
    gen_gaussian_matrix,
    gen_sparse_signal,
    measure,
    rip_delta,
)
from .quant import ScalarQuantizer, box_region, lloyd_design, uniform_design
from .recon import bp_reconstruct, qbp_reconstruct, qsp_reconstruct, sp_reconstruct
from .bench import run_experiment, summarize

__all__ = [
    "__version__",
    "ExperimentConfig",
    "Settings",
    "get_settings",
    "MatrixMode",
    "MeasurementMatrix",
    "RipMode",
    "SparseSignal",
    "gen_gaussian_matrix",
    "gen_sparse_signal",
    "measure",
    "rip_delta",
    "ScalarQuantizer",
    "box_region",
    "lloyd_design",
    "uniform_design",
    "bp_reconstruct",
    "qbp_reconstruct",
    "qsp_reconstruct",
    "sp_reconstruct",
    "run_experiment",
    "summarize",
]
