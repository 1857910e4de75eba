"""Counter-based random streams.

Every random draw in the toolkit comes from a Philox generator keyed by
(seed, stream id). A trial's matrix, signal, and training draws each get
their own stream id, so trial i never depends on how many numbers trial
i - 1 consumed and trials can run in any order.
"""

from enum import IntEnum

import numpy as np

from .validation import validate_seed


_INDEX_BITS = 48
_INDEX_MASK = (1 << _INDEX_BITS) - 1


class Stream(IntEnum):
    """Purpose tags folded into the Philox key."""
    DEFAULT = 0
    MATRIX = 1
    SIGNAL = 2
    TRAINING = 3
    DESIGN = 4
    SUPPORTS = 5
    CLT = 6


def stream_id(purpose: Stream, index: int = 0) -> int:
    """Pack a purpose tag and an index into one 64-bit stream id."""
    if not 0 <= index <= _INDEX_MASK:
        raise ValueError(f"stream index {index} out of range")
    return (int(purpose) << _INDEX_BITS) | index


def keyed_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Generator whose 128-bit Philox key is (seed, stream).

    Identical (seed, stream) pairs give bitwise-identical draws on every
    platform numpy supports.
    """
    seed = validate_seed(seed)
    key = (seed << 64) | (int(stream) & 0xFFFFFFFFFFFFFFFF)
    return np.random.Generator(np.random.Philox(key=key))
