"""Unit tests for Huffman coding of quantizer indices."""

import itertools

import numpy as np
import pytest

from qcs.quant.entropy import PrefixCode, entropy, expected_length, huffman
from qcs.utils.validation import ValidationError


class TestHuffman:
    """Test Huffman code construction."""

    def test_dyadic_distribution_meets_entropy(self):
        p = [0.5, 0.25, 0.25]
        code = huffman(p)
        np.testing.assert_array_equal(code.lengths, [1, 2, 2])
        assert expected_length(code, p) == pytest.approx(1.5)
        assert entropy(p) == pytest.approx(1.5)

    def test_uniform_distribution(self):
        code = huffman([0.25] * 4)
        np.testing.assert_array_equal(code.lengths, [2, 2, 2, 2])
        assert expected_length(code, [0.25] * 4) == pytest.approx(2.0)

    def test_skewed_distribution(self):
        p = [0.4, 0.3, 0.2, 0.1]
        code = huffman(p)
        np.testing.assert_array_equal(code.lengths, [1, 2, 3, 3])
        assert expected_length(code, p) == pytest.approx(1.9)
        assert entropy(p) == pytest.approx(1.84644, abs=1e-5)

    def test_single_symbol(self):
        code = huffman([1.0])
        assert code.codewords == {0: "0"}

    def test_deterministic_ties(self):
        assert huffman([0.25] * 4).codewords == huffman([0.25] * 4).codewords

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_length_within_one_bit_of_entropy(self, seed):
        p = np.random.default_rng(seed).dirichlet(np.ones(12))
        code = huffman(p)
        H = entropy(p)
        assert H - 1e-12 <= expected_length(code, p) <= H + 1
        assert code.kraft_sum() == pytest.approx(1.0)

    def test_zero_probability_symbols_get_codewords(self):
        code = huffman([0.5, 0.5, 0.0])
        assert set(code.codewords) == {0, 1, 2}

    def test_rejects_bad_probabilities(self):
        with pytest.raises(ValidationError, match="sum to 1"):
            huffman([0.5, 0.2])
        with pytest.raises(ValidationError, match="non-negative"):
            huffman([1.5, -0.5])


class TestPrefixCode:
    """Test prefix code encoding and validation."""

    def test_encode_decode(self):
        code = huffman([0.4, 0.3, 0.2, 0.1])
        symbols = [0, 3, 1, 1, 2, 0]
        bits = code.encode(symbols)
        assert len(bits) == sum(code.lengths[s] for s in symbols)
        assert code.decode(bits) == symbols

    def test_not_prefix_free(self):
        with pytest.raises(ValidationError, match="prefix-free"):
            PrefixCode({0: "0", 1: "01"})

    def test_truncated_stream(self):
        code = PrefixCode({0: "0", 1: "10", 2: "11"})
        with pytest.raises(ValidationError, match="inside a codeword"):
            code.decode("01")

    def test_unknown_symbol(self):
        with pytest.raises(ValidationError, match="no codeword"):
            PrefixCode({0: "0", 1: "1"}).encode([2])

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            expected_length(PrefixCode({0: "0", 1: "1"}), [0.2, 0.3, 0.5])


def _best_prefix_length(p):
    """Smallest mean length over every codeword-length vector meeting Kraft's inequality."""
    M = len(p)
    best = np.inf
    for lengths in itertools.product(range(1, M), repeat=M):
        lengths = np.array(lengths)
        if np.sum(2.0 ** -lengths) <= 1.0:
            best = min(best, float(np.dot(p, lengths)))
    return best


class TestHuffmanOptimality:
    """Huffman codes against exhaustive search over small alphabets."""

    @pytest.mark.parametrize("M", [2, 3, 4, 5, 6])
    @pytest.mark.parametrize("seed", range(4))
    def test_no_prefix_code_is_shorter(self, M, seed):
        p = np.random.default_rng(100 * M + seed).dirichlet(np.ones(M))
        code = huffman(p)
        assert code.is_prefix_free()
        assert expected_length(code, p) == pytest.approx(_best_prefix_length(p), abs=1e-12)
