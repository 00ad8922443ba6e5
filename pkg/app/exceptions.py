"""
Custom exception classes for the hierarchical topology toolkit.

This module defines specific exception types for the error scenarios that can
occur while building graphs, composing hierarchies, solving spectra, running
spreading simulations and placing circuits. Every error carries a short code
so log lines and CLI diagnostics can be grepped by category.
"""

from typing import Optional


class TopologyError(Exception):
    """Base exception class for all toolkit errors."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        """
        Initialize the toolkit error.

        Args:
            message (str): Human-readable error message
            error_code (str, optional): Specific error code for logging/debugging
        """
        super().__init__(message)
        self.message = message
        self.error_code = error_code

    def __str__(self):
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


class ValidationError(TopologyError):
    """Exception raised when input validation fails."""

    def __init__(self, input_value, validation_rule: str, expected_format: Optional[str] = None):
        """
        Initialize the validation error.

        Args:
            input_value: The invalid input value
            validation_rule (str): The validation rule that was violated
            expected_format (str, optional): The expected input format
        """
        message = f"Invalid input '{input_value}': {validation_rule}"
        if expected_format:
            message += f". Expected format: {expected_format}"
        super().__init__(message, "VAL_ERROR")
        self.input_value = input_value
        self.validation_rule = validation_rule
        self.expected_format = expected_format


class GraphError(TopologyError):
    """Exception raised when a graph cannot be built or measured."""

    def __init__(self, operation: str, reason: str):
        """
        Initialize the graph error.

        Args:
            operation (str): The graph operation that failed
            reason (str): Why the operation failed
        """
        message = f"Graph {operation} failed: {reason}"
        super().__init__(message, "GRAPH_ERROR")
        self.operation = operation
        self.reason = reason


class DisconnectedGraphError(GraphError):
    """Exception raised when a connected graph is required."""

    def __init__(self, operation: str, unreachable: int):
        super().__init__(
            operation=operation,
            reason=f"graph is disconnected ({unreachable} node pairs unreachable)",
        )
        self.unreachable = unreachable


class ProductError(TopologyError):
    """Exception raised when a hierarchical product or hierarchy spec is invalid."""

    def __init__(self, operation: str, reason: str):
        message = f"Product {operation} failed: {reason}"
        super().__init__(message, "PRODUCT_ERROR")
        self.operation = operation
        self.reason = reason


class AddressError(ValidationError):
    """Exception raised when a node address violates the addressal rules."""

    def __init__(self, digits, position: int, reason: str):
        """
        Initialize the address error.

        Args:
            digits: The offending address digits
            position (int): Index of the offending digit (0 = most significant)
            reason (str): Why the digit is invalid
        """
        super().__init__(
            input_value=tuple(digits),
            validation_rule=f"digit {position}: {reason}",
        )
        self.digits = tuple(digits)
        self.position = position


class SpectralError(TopologyError):
    """Exception raised when a spectrum cannot be computed reliably."""

    def __init__(self, reason: str, level: Optional[int] = None, mu: Optional[float] = None):
        """
        Initialize the spectral error.

        Args:
            reason (str): Why the computation failed
            level (int, optional): Hierarchy level being solved
            mu (float, optional): Eigenvalue of the level above driving the solve
        """
        message = f"Spectral computation failed: {reason}"
        if level is not None:
            message += f" (level {level}, mu={mu!r})"
        super().__init__(message, "SPECTRAL_ERROR")
        self.reason = reason
        self.level = level
        self.mu = mu


class SimulationError(TopologyError):
    """Exception raised when a spreading simulation cannot complete."""

    def __init__(self, reason: str):
        super().__init__(f"Simulation failed: {reason}", "SIM_ERROR")
        self.reason = reason


class PlacementError(TopologyError):
    """Exception raised when a circuit cannot be placed on a machine."""

    def __init__(self, operation: str, reason: str):
        message = f"Placement {operation} failed: {reason}"
        super().__init__(message, "PLACE_ERROR")
        self.operation = operation
        self.reason = reason


class ConfigurationError(TopologyError):
    """Exception raised when configuration loading or validation fails."""

    def __init__(self, config_key: str, reason: str):
        """
        Initialize the configuration error.

        Args:
            config_key (str): The configuration key that caused the error
            reason (str): Why the configuration is invalid
        """
        message = f"Configuration error for '{config_key}': {reason}"
        super().__init__(message, "CONFIG_ERROR")
        self.config_key = config_key
        self.reason = reason


class FileOperationError(TopologyError):
    """Exception raised when file operations fail."""

    def __init__(self, file_path: str, operation: str, reason: str):
        """
        Initialize the file operation error.

        Args:
            file_path (str): Path to the file that caused the error
            operation (str): The file operation that failed (read/write/parse)
            reason (str): Why the operation failed
        """
        message = f"File {operation} failed for '{file_path}': {reason}"
        super().__init__(message, "FILE_ERROR")
        self.file_path = file_path
        self.operation = operation
        self.reason = reason
