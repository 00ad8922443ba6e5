"""
Unit tests for input validation module.

This module tests the InputValidator class used by graph construction,
hierarchy specs, the spreading simulator and the CLI.
"""

import numpy as np
import pytest

from app.exceptions import ValidationError
from app.input_validators import InputValidator


class TestNumericInput:
    """Test numeric conversion."""

    def test_valid_numbers(self):
        """Test strings, numpy scalars and plain numbers."""
        assert InputValidator.validate_numeric_input("3") == 3
        assert isinstance(InputValidator.validate_numeric_input(" 3 "), int)
        assert InputValidator.validate_numeric_input("1e-3") == 0.001
        assert InputValidator.validate_numeric_input(np.int64(7)) == 7
        assert isinstance(InputValidator.validate_numeric_input(np.float32(0.5)), float)

    @pytest.mark.parametrize("value, message", [
        (None, "cannot be None"),
        (True, "Booleans are not numbers"),
        ("", "Empty string"),
        ("three", "Invalid number format"),
        ([1], "Invalid input type"),
        (float("nan"), "Non-finite"),
        ("inf", "Non-finite"),
    ])
    def test_invalid_numbers(self, value, message):
        """Test rejected inputs name their rule."""
        with pytest.raises(ValidationError, match=message):
            InputValidator.validate_numeric_input(value)

    def test_negative_values(self):
        """Test the allow_negative switch."""
        assert InputValidator.validate_numeric_input(-2) == -2
        with pytest.raises(ValidationError, match="Negative values"):
            InputValidator.validate_numeric_input(-2, allow_negative=False)


class TestParameterValidators:
    """Test the domain-specific validators."""

    def test_integer(self):
        assert InputValidator.validate_integer("4", 1) == 4
        assert InputValidator.validate_integer(4.0) == 4
        with pytest.raises(ValidationError, match="depth must be an integer"):
            InputValidator.validate_integer(2.5, 1, "depth")
        with pytest.raises(ValidationError, match="depth must be at least 1"):
            InputValidator.validate_integer(0, 1, "depth")

    def test_positive_weight(self):
        assert InputValidator.validate_positive_weight("0.25") == 0.25
        assert isinstance(InputValidator.validate_positive_weight(2), float)
        with pytest.raises(ValidationError, match="alpha must be positive"):
            InputValidator.validate_positive_weight(0, "alpha")

    @pytest.mark.parametrize("value", [0, -0.5, 1.01])
    def test_probability_outside_unit_interval(self, value):
        with pytest.raises(ValidationError, match=r"must lie in \(0, 1\]"):
            InputValidator.validate_probability(value)

    def test_probability(self):
        assert InputValidator.validate_probability(1) == 1.0
        assert InputValidator.validate_probability("0.1") == 0.1

    def test_node_index(self):
        assert InputValidator.validate_node_index(4, 5) == 4
        with pytest.raises(ValidationError, match="start index out of range for order 5"):
            InputValidator.validate_node_index(5, 5, "start")
        with pytest.raises(ValidationError):
            InputValidator.validate_node_index(-1, 5)

    def test_seed(self):
        assert InputValidator.validate_seed("12") == 12
        with pytest.raises(ValidationError, match="seed is required"):
            InputValidator.validate_seed(None)
        with pytest.raises(ValidationError, match="seed must be at least 0"):
            InputValidator.validate_seed(-3)
