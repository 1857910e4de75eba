"""Huffman prefix codes for quantizer indices."""

import heapq
from dataclasses import dataclass
from typing import Dict, Iterable, List

import numpy as np
from scipy.stats import entropy as _scipy_entropy

from ..utils.validation import ValidationError, validate_probability_vector


@dataclass(frozen=True)
class PrefixCode:
    """Map from symbol index to bit string."""
    codewords: Dict[int, str]

    def __post_init__(self):
        if not self.codewords:
            raise ValidationError("a prefix code needs at least one codeword")
        for symbol, word in self.codewords.items():
            if not word or set(word) - {"0", "1"}:
                raise ValidationError(f"codeword for {symbol} must be a nonempty bit string")
        if not self.is_prefix_free():
            raise ValidationError("codewords are not prefix-free")

    @property
    def lengths(self) -> np.ndarray:
        """Codeword lengths ordered by symbol index."""
        return np.array([len(self.codewords[s]) for s in sorted(self.codewords)])

    def kraft_sum(self) -> float:
        return float(np.sum(2.0 ** -self.lengths))

    def is_prefix_free(self) -> bool:
        # in sorted order a prefix always lands right before one of its extensions
        words = sorted(self.codewords.values())
        return all(not b.startswith(a) for a, b in zip(words, words[1:]))

    def encode(self, symbols: Iterable[int]) -> str:
        try:
            return "".join(self.codewords[int(s)] for s in symbols)
        except KeyError as e:
            raise ValidationError(f"symbol {e.args[0]} has no codeword")

    def decode(self, bits: str) -> List[int]:
        lookup = {word: symbol for symbol, word in self.codewords.items()}
        symbols, word = [], ""
        for bit in bits:
            word += bit
            if word in lookup:
                symbols.append(lookup[word])
                word = ""
        if word:
            raise ValidationError(f"bit stream ends inside a codeword ({word!r})")
        return symbols


def huffman(p) -> PrefixCode:
    """Optimal prefix code for the probability vector p.

    Repeatedly merges the two least probable nodes; ties go to the node
    with the lower id (leaves are 0..M-1, merged nodes get M, M+1, ... in
    creation order), and the first node popped takes the "0" branch. A
    single symbol gets the one-bit codeword "0".
    """
    p = validate_probability_vector(p)
    M = p.size
    if M == 1:
        return PrefixCode({0: "0"})

    heap = [(float(prob), node) for node, prob in enumerate(p)]
    heapq.heapify(heap)
    children: Dict[int, tuple] = {}
    next_id = M
    while len(heap) > 1:
        p0, n0 = heapq.heappop(heap)
        p1, n1 = heapq.heappop(heap)
        children[next_id] = (n0, n1)
        heapq.heappush(heap, (p0 + p1, next_id))
        next_id += 1

    codewords: Dict[int, str] = {}
    stack = [(heap[0][1], "")]
    while stack:
        node, prefix = stack.pop()
        if node < M:
            codewords[node] = prefix
        else:
            left, right = children[node]
            stack.append((left, prefix + "0"))
            stack.append((right, prefix + "1"))
    return PrefixCode(codewords)


def expected_length(code: PrefixCode, p) -> float:
    """Average codeword length sum(p_i * l_i)."""
    p = validate_probability_vector(p)
    if p.size != len(code.codewords):
        raise ValidationError(f"code has {len(code.codewords)} symbols, p has {p.size}")
    return float(np.dot(p, code.lengths))


def entropy(p) -> float:
    """Shannon entropy in bits."""
    p = validate_probability_vector(p)
    return float(_scipy_entropy(p, base=2))
