"""Sparse reconstruction from exact and quantized measurements."""

from .projection import LeastSquaresProjector, RankDeficiencyError, pcoeff, proj, resid
from .constrained import (
    ConstrainedProjection,
    ConvergenceError,
    constrained_projection,
    pcoeff_q,
    reconstruction_error,
    resid_q,
)
from .subspace_pursuit import SPResult, SPStep, qsp_reconstruct, sp_reconstruct
from .basis_pursuit import BPResult, bp_reconstruct, qbp_reconstruct, shrink

__all__ = [
    'LeastSquaresProjector',
    'RankDeficiencyError',
    'pcoeff',
    'proj',
    'resid',
    'ConstrainedProjection',
    'ConvergenceError',
    'constrained_projection',
    'pcoeff_q',
    'reconstruction_error',
    'resid_q',
    'SPResult',
    'SPStep',
    'qsp_reconstruct',
    'sp_reconstruct',
    'BPResult',
    'bp_reconstruct',
    'qbp_reconstruct',
    'shrink',
]
