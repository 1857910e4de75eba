"""Unit tests for keyed random streams."""

import numpy as np
import pytest

from qcs.utils.rng import Stream, keyed_generator, stream_id
from qcs.utils.validation import ValidationError


class TestStreams:
    """Test stream ids and keyed generators."""

    def test_same_key_same_draws(self):
        a = keyed_generator(7, stream_id(Stream.MATRIX, 3)).standard_normal(100)
        b = keyed_generator(7, stream_id(Stream.MATRIX, 3)).standard_normal(100)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("other", [
        (8, stream_id(Stream.MATRIX, 3)),
        (7, stream_id(Stream.MATRIX, 4)),
        (7, stream_id(Stream.SIGNAL, 3)),
    ])
    def test_different_keys_differ(self, other):
        a = keyed_generator(7, stream_id(Stream.MATRIX, 3)).standard_normal(10)
        b = keyed_generator(*other).standard_normal(10)
        assert not np.array_equal(a, b)

    def test_stream_ids_are_distinct(self):
        ids = {stream_id(purpose, index) for purpose in Stream for index in range(5)}
        assert len(ids) == len(Stream) * 5

    def test_default_stream(self):
        assert stream_id(Stream.DEFAULT) == 0

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            stream_id(Stream.SIGNAL, -1)

    def test_large_seed(self):
        keyed_generator(2**64 - 1).standard_normal(3)
        with pytest.raises(ValidationError):
            keyed_generator(2**64)
