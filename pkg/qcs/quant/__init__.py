"""Quantizer representation, design, and entropy coding."""

from .scalar import (
    BoxRegion,
    Companding,
    EmptyCellError,
    GaussianSource,
    KMeansPlusPlusLike,
    LloydDesign,
    NoBracketError,
    QuantizedVector,
    SampleSource,
    ScalarQuantizer,
    UniformDesign,
    UniformSpread,
    apply_scalar,
    as_source,
    box_region,
    distortion,
    gaussian_cell_probs,
    lloyd_design,
    uniform_design,
    uniform_quantizer,
)
from .entropy import PrefixCode, entropy, expected_length, huffman
from .vector import LbgDesign, VectorQuantizer, lbg_design

__all__ = [
    'BoxRegion',
    'Companding',
    'EmptyCellError',
    'GaussianSource',
    'KMeansPlusPlusLike',
    'LloydDesign',
    'NoBracketError',
    'QuantizedVector',
    'SampleSource',
    'ScalarQuantizer',
    'UniformDesign',
    'UniformSpread',
    'apply_scalar',
    'as_source',
    'box_region',
    'distortion',
    'gaussian_cell_probs',
    'lloyd_design',
    'uniform_design',
    'uniform_quantizer',
    'PrefixCode',
    'entropy',
    'expected_length',
    'huffman',
    'LbgDesign',
    'VectorQuantizer',
    'lbg_design',
]
