"""Unit tests for tool error handling."""

import pytest

from qcs.bounds import DomainError, c_bp
from qcs.model import EnumerationCapError
from qcs.recon.constrained import ConvergenceError
from qcs.utils.decorators import classify_error, handle_errors
from qcs.utils.validation import ValidationError


class TestClassifyError:
    """Test the exception to error_type mapping."""

    @pytest.mark.parametrize("error,expected", [
        (EnumerationCapError(10, 5), "enumeration_cap"),
        (ValidationError("bad"), "validation"),
        (DomainError("0 <= delta_4K < 0.5", 0.7), "domain"),
        (ConvergenceError(100, 0.1), "convergence"),
        (FileNotFoundError("x"), "not_found"),
        (KeyError("x"), None),
    ])
    def test_mapping(self, error, expected):
        assert classify_error(error) == expected


class TestHandleErrors:
    """Test the handle_errors decorator."""

    def test_success_dict_gets_status(self):
        @handle_errors("compute")
        def compute():
            return {"value": 1}

        assert compute() == {"value": 1, "status": "success"}

    def test_success_non_dict(self):
        @handle_errors("compute")
        def compute():
            return 3

        result = compute()
        assert result["status"] == "success"
        assert result["result"] == 3

    def test_validation_error(self):
        @handle_errors("design quantizer")
        def design():
            raise ValidationError("M must be >= 1, got 0")

        result = design()
        assert result == {
            "status": "error",
            "message": "Validation error in design quantizer: M must be >= 1, got 0",
            "error_type": "validation",
        }

    def test_domain_error_carries_inequality(self):
        @handle_errors("bp constant")
        def constant():
            return c_bp(0.7)

        result = constant()
        assert result["error_type"] == "domain"
        assert result["inequality"] == "0.0 <= delta_4K < 0.5"

    def test_enumeration_cap_fields(self):
        @handle_errors()
        def exact_rip():
            raise EnumerationCapError(142506, 1000)

        result = exact_rip()
        assert result["error_type"] == "enumeration_cap"
        assert (result["n_supports"], result["cap"]) == (142506, 1000)
        assert result["message"].startswith("Error in exact rip:")

    def test_unexpected_error(self):
        @handle_errors("compute")
        def compute():
            raise KeyError("boom")

        result = compute()
        assert result["status"] == "error"
        assert result["error_type"] == "internal"
        assert result["message"].startswith("Failed to compute:")

    @pytest.mark.asyncio
    async def test_async_function(self):
        @handle_errors("async compute")
        async def compute(value):
            if value < 0:
                raise ValidationError("negative")
            return {"value": value}

        assert (await compute(2))["status"] == "success"
        assert (await compute(-1))["error_type"] == "validation"

    def test_preserves_metadata(self):
        @handle_errors()
        def documented():
            """Docstring survives."""
            return {}

        assert documented.__name__ == "documented"
        assert documented.__doc__ == "Docstring survives."
