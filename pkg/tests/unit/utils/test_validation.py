"""Unit tests for validation utilities."""

import math

import numpy as np
import pytest

from qcs.utils.validation import (
    ValidationError,
    validate_finite_array,
    validate_positive_float,
    validate_positive_int,
    validate_probability_vector,
    validate_seed,
    validate_sparsity,
)


class TestValidationFunctions:
    """Test individual validation functions."""

    def test_positive_int(self):
        assert validate_positive_int(3, "M") == 3
        assert validate_positive_int(np.int64(5), "M") == 5
        assert validate_positive_int(0, "K", minimum=0) == 0

    @pytest.mark.parametrize("value", [0, -2, 1.5, "3", True, None])
    def test_positive_int_rejects(self, value):
        with pytest.raises(ValidationError, match="M"):
            validate_positive_int(value, "M")

    def test_positive_float(self):
        assert validate_positive_float("0.5", "sigma") == 0.5

    @pytest.mark.parametrize("value", [0.0, -1.0, math.inf, math.nan, "abc"])
    def test_positive_float_rejects(self, value):
        with pytest.raises(ValidationError, match="sigma"):
            validate_positive_float(value, "sigma")

    def test_seed_range(self):
        assert validate_seed(2**64 - 1) == 2**64 - 1
        with pytest.raises(ValidationError, match="64 bits"):
            validate_seed(2**64)
        with pytest.raises(ValidationError):
            validate_seed(-1)

    def test_finite_array(self):
        array = validate_finite_array([[1, 2], [3, 4]], "A", ndim=2)
        assert array.dtype == float
        with pytest.raises(ValidationError, match="2-dimensional"):
            validate_finite_array([1, 2], "A", ndim=2)
        with pytest.raises(ValidationError, match="finite"):
            validate_finite_array([1.0, np.inf], "A")

    def test_probability_vector(self):
        np.testing.assert_array_equal(validate_probability_vector([0.25, 0.75]), [0.25, 0.75])
        with pytest.raises(ValidationError, match="nonempty"):
            validate_probability_vector([])
        with pytest.raises(ValidationError, match="sum to 1"):
            validate_probability_vector([0.3, 0.3])

    def test_sparsity(self):
        assert validate_sparsity(0, 5, allow_zero=True) == 0
        with pytest.raises(ValidationError):
            validate_sparsity(0, 5)
        with pytest.raises(ValidationError, match="exceeds"):
            validate_sparsity(6, 5)

    def test_is_value_error(self):
        assert issubclass(ValidationError, ValueError)
