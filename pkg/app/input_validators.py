"""
Input validation functions for the topology toolkit.

This module provides the validators shared by graph construction, hierarchy
specs, the spreading simulator and the CLI. Each validator either returns a
normalized value or raises ValidationError naming the violated rule.
"""

import math
import numbers
from typing import Any, Union

from .exceptions import ValidationError

# Type alias for numeric types
Number = Union[int, float]


class InputValidator:
    """
    Static validators for numeric parameters of the toolkit.

    Every method accepts loosely typed input (CLI strings included) and
    returns the value converted to the type downstream code expects.
    """

    @staticmethod
    def validate_numeric_input(value: Any, allow_negative: bool = True) -> Number:
        """
        Validate and convert input to a finite numeric value.

        Args:
            value: The input value to validate
            allow_negative (bool): Whether negative values are allowed

        Returns:
            Number: Validated numeric value (int preserved when integral input)

        Raises:
            ValidationError: If input is not numeric, not finite, or negative when disallowed
        """
        if value is None:
            raise ValidationError(value, "Input cannot be None", "Expected numeric value")
        if isinstance(value, bool):
            raise ValidationError(value, "Booleans are not numbers", "Expected int or float")

        if isinstance(value, str):
            cleaned = value.strip()
            if not cleaned:
                raise ValidationError(value, "Empty string is not a valid number", "Non-empty numeric string required")
            try:
                value = int(cleaned)
            except ValueError:
                try:
                    value = float(cleaned)
                except ValueError:
                    raise ValidationError(value, "Invalid number format", "Examples: '3', '0.5', '1e-3'")

        if isinstance(value, numbers.Integral):
            value = int(value)
        elif isinstance(value, numbers.Real):
            value = float(value)

        if not isinstance(value, (int, float)):
            raise ValidationError(
                value,
                f"Invalid input type: {type(value).__name__}",
                "Expected int, float, or numeric string",
            )

        if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
            raise ValidationError(value, "Non-finite values are not allowed", "Finite numeric value required")

        if not allow_negative and value < 0:
            raise ValidationError(value, "Negative values are not allowed", "Non-negative numeric value required")

        return value

    @staticmethod
    def validate_integer(value: Any, min_value: int = 0, name: str = "value") -> int:
        """
        Validate that a value is an integer no smaller than ``min_value``.

        Raises:
            ValidationError: If value is fractional or below the minimum
        """
        numeric_value = InputValidator.validate_numeric_input(value)
        if isinstance(numeric_value, float):
            if not numeric_value.is_integer():
                raise ValidationError(value, f"{name} must be an integer", "Whole number required")
            numeric_value = int(numeric_value)
        if numeric_value < min_value:
            raise ValidationError(value, f"{name} must be at least {min_value}", f"Integer >= {min_value}")
        return numeric_value

    @staticmethod
    def validate_positive_weight(value: Any, name: str = "weight") -> float:
        """
        Validate an edge weight or level weight; must be strictly positive.

        Raises:
            ValidationError: If the weight is zero or negative
        """
        numeric_value = InputValidator.validate_numeric_input(value)
        if numeric_value <= 0:
            raise ValidationError(value, f"{name} must be positive", f"{name} > 0")
        return float(numeric_value)

    @staticmethod
    def validate_probability(value: Any, name: str = "probability") -> float:
        """
        Validate a success probability in the half-open interval (0, 1].

        Raises:
            ValidationError: If the value lies outside (0, 1]
        """
        numeric_value = InputValidator.validate_numeric_input(value)
        if not 0 < numeric_value <= 1:
            raise ValidationError(value, f"{name} must lie in (0, 1]", "0 < p <= 1")
        return float(numeric_value)

    @staticmethod
    def validate_node_index(value: Any, order: int, name: str = "node") -> int:
        """
        Validate a node index against a graph order.

        Raises:
            ValidationError: If the index is outside 0..order-1
        """
        index = InputValidator.validate_integer(value, 0, name)
        if index >= order:
            raise ValidationError(value, f"{name} index out of range for order {order}", f"0 <= {name} < {order}")
        return index

    @staticmethod
    def validate_seed(value: Any) -> int:
        """
        Validate a random seed; randomized paths require an explicit non-negative integer.

        Raises:
            ValidationError: If the seed is missing, fractional, or negative
        """
        if value is None:
            raise ValidationError(value, "A seed is required for randomized runs", "Non-negative integer seed")
        return InputValidator.validate_integer(value, 0, "seed")
