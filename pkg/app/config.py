"""
Configuration management for the topology toolkit.

Settings come from built-in defaults optionally overridden by an explicitly
named .env-style file parsed with python-dotenv. The process environment is
never consulted, so every run is fully described by its flags and config file.
"""

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from dotenv import dotenv_values

from .exceptions import ConfigurationError

# Type aliases
ConfigValue = Union[str, int, float, bool, List[str]]
ConfigDict = Dict[str, ConfigValue]


class ToolkitConfig:
    """
    Configuration manager for the topology toolkit.

    Holds logging settings, the numeric thresholds of the spectral and
    Cheeger solvers, simulator limits and the results-log location.
    """

    # Default configuration values
    DEFAULT_CONFIG = {
        # Base Directories
        "TOPOLOGY_LOG_DIR": "logs",
        "TOPOLOGY_RESULTS_DIR": "results",

        # Logging Settings
        "TOPOLOGY_LOG_LEVEL": "INFO",
        "TOPOLOGY_LOG_FILE": "topology.log",
        "TOPOLOGY_LOG_FORMAT": "%(asctime)s - %(name)s - %(levelname)s - %(message)s",

        # Results Settings
        "TOPOLOGY_RESULTS_FILE": "experiments.csv",
        "TOPOLOGY_DEFAULT_ENCODING": "utf-8",

        # Solver Settings
        "TOPOLOGY_CHEEGER_EXACT_MAX_ORDER": 30,
        "TOPOLOGY_CHAR_POLY_MAX_ORDER": 64,
        "TOPOLOGY_ROOT_IMAG_TOLERANCE": 1e-9,
        "TOPOLOGY_GHZ_STEP_CAP": 1_000_000,
        "TOPOLOGY_PLACEMENT_RESTARTS": 3,

        # Execution Settings
        "TOPOLOGY_JOBS": 1,

        # Feature Flags
        "TOPOLOGY_ENABLE_LOGGING": False,
        "TOPOLOGY_ENABLE_RESULTS_LOG": False,
    }

    def __init__(self, env_file: Optional[str] = None, auto_create_dirs: bool = False):
        """
        Initialize the configuration manager.

        Args:
            env_file (str, optional): Path to a .env-style file with overrides
            auto_create_dirs (bool): Whether to create log/results directories

        Raises:
            ConfigurationError: If the file is missing or a value is invalid
        """
        self._config: ConfigDict = {}
        self._env_file = env_file
        self._auto_create_dirs = auto_create_dirs

        self._load_configuration()

        if self._auto_create_dirs:
            self._create_directories()

    def _load_configuration(self) -> None:
        """Load defaults, then apply overrides from the config file."""
        self._config = self.DEFAULT_CONFIG.copy()

        overrides: Dict[str, Optional[str]] = {}
        if self._env_file is not None:
            if not Path(self._env_file).exists():
                raise ConfigurationError(self._env_file, "Config file does not exist")
            overrides = dotenv_values(self._env_file)

        for key, raw_value in overrides.items():
            if key not in self.DEFAULT_CONFIG:
                raise ConfigurationError(key, "Unknown configuration key")
            if raw_value is None:
                continue
            try:
                self._config[key] = self._convert_env_value(raw_value, type(self.DEFAULT_CONFIG[key]))
            except (ValueError, TypeError) as e:
                raise ConfigurationError(key, f"Invalid value '{raw_value}' for {key}: {str(e)}")

        self._validate_configuration()

    def _convert_env_value(self, value: str, target_type: type) -> ConfigValue:
        """
        Convert a config-file string to the type of the matching default.

        Raises:
            ValueError: If conversion fails
        """
        if target_type == bool:
            return value.lower() in ('true', '1', 'yes', 'on', 'enabled')
        elif target_type == int:
            return int(value)
        elif target_type == float:
            return float(value)
        elif target_type == list:
            return [item.strip() for item in value.split(',')]
        else:
            return value

    def _validate_configuration(self) -> None:
        """Validate configuration values."""
        if not 2 <= self.get_cheeger_exact_max_order() <= 30:
            raise ConfigurationError(
                "TOPOLOGY_CHEEGER_EXACT_MAX_ORDER",
                "Must be between 2 and 30"
            )

        if not 2 <= self.get_char_poly_max_order() <= 64:
            raise ConfigurationError(
                "TOPOLOGY_CHAR_POLY_MAX_ORDER",
                "Must be between 2 and 64"
            )

        if not 0 < self.get_root_imag_tolerance() < 1e-3:
            raise ConfigurationError(
                "TOPOLOGY_ROOT_IMAG_TOLERANCE",
                "Must be positive and below 1e-3"
            )

        if self.get_ghz_step_cap() < 1:
            raise ConfigurationError("TOPOLOGY_GHZ_STEP_CAP", "Must be at least 1")

        if self.get_placement_restarts() < 1:
            raise ConfigurationError("TOPOLOGY_PLACEMENT_RESTARTS", "Must be at least 1")

        if self.get_jobs() < 1:
            raise ConfigurationError("TOPOLOGY_JOBS", "Must be at least 1")

        valid_log_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if self.get_log_level().upper() not in valid_log_levels:
            raise ConfigurationError(
                "TOPOLOGY_LOG_LEVEL",
                f"Must be one of: {', '.join(valid_log_levels)}"
            )

        try:
            "test".encode(self.get_default_encoding())
        except LookupError:
            raise ConfigurationError(
                "TOPOLOGY_DEFAULT_ENCODING",
                f"Invalid encoding: {self.get_default_encoding()}"
            )

    def _create_directories(self) -> None:
        """Create the log and results directories for enabled features only."""
        directories = []
        if self.is_logging_enabled():
            directories.append(self.get_log_dir())
        if self.is_results_log_enabled():
            directories.append(self.get_results_dir())

        for directory in directories:
            try:
                Path(directory).mkdir(parents=True, exist_ok=True)
            except OSError as e:
                raise ConfigurationError(directory, f"Failed to create directory: {str(e)}")

    # Base Directory Settings
    def get_log_dir(self) -> str:
        """Get the log directory path."""
        return str(self._config["TOPOLOGY_LOG_DIR"])

    def get_results_dir(self) -> str:
        """Get the results directory path."""
        return str(self._config["TOPOLOGY_RESULTS_DIR"])

    # Logging Settings
    def get_log_level(self) -> str:
        return str(self._config["TOPOLOGY_LOG_LEVEL"])

    def get_log_file_path(self) -> str:
        """Get full log file path."""
        return str(Path(self.get_log_dir()) / str(self._config["TOPOLOGY_LOG_FILE"]))

    def get_log_format(self) -> str:
        return str(self._config["TOPOLOGY_LOG_FORMAT"])

    # Results Settings
    def get_results_file_path(self) -> str:
        """Get full experiment-results CSV path."""
        return str(Path(self.get_results_dir()) / str(self._config["TOPOLOGY_RESULTS_FILE"]))

    def get_default_encoding(self) -> str:
        return str(self._config["TOPOLOGY_DEFAULT_ENCODING"])

    # Solver Settings
    def get_cheeger_exact_max_order(self) -> int:
        """Largest graph order for which the exhaustive Cheeger search runs."""
        return int(self._config["TOPOLOGY_CHEEGER_EXACT_MAX_ORDER"])

    def get_char_poly_max_order(self) -> int:
        """Largest base-graph order accepted by the characteristic-polynomial solver."""
        return int(self._config["TOPOLOGY_CHAR_POLY_MAX_ORDER"])

    def get_root_imag_tolerance(self) -> float:
        """Largest imaginary part discarded from a polynomial root."""
        return float(self._config["TOPOLOGY_ROOT_IMAG_TOLERANCE"])

    def get_ghz_step_cap(self) -> int:
        return int(self._config["TOPOLOGY_GHZ_STEP_CAP"])

    def get_placement_restarts(self) -> int:
        """Number of seeded initial partitions tried per bisection."""
        return int(self._config["TOPOLOGY_PLACEMENT_RESTARTS"])

    def get_jobs(self) -> int:
        return int(self._config["TOPOLOGY_JOBS"])

    # Feature Flags
    def is_logging_enabled(self) -> bool:
        return bool(self._config["TOPOLOGY_ENABLE_LOGGING"])

    def is_results_log_enabled(self) -> bool:
        return bool(self._config["TOPOLOGY_ENABLE_RESULTS_LOG"])

    # Configuration Management
    def get_config_value(self, key: str, default: Any = None) -> ConfigValue:
        return self._config.get(key, default)

    def set_config_value(self, key: str, value: ConfigValue) -> None:
        """
        Set a configuration value.

        Args:
            key (str): Configuration key
            value (ConfigValue): New value

        Raises:
            ConfigurationError: If the key is unknown or the value is invalid
        """
        if key not in self.DEFAULT_CONFIG:
            raise ConfigurationError(key, "Unknown configuration key")

        default_type = type(self.DEFAULT_CONFIG[key])
        if not isinstance(value, default_type) or isinstance(value, bool) != (default_type == bool):
            try:
                value = self._convert_env_value(str(value), default_type)
            except (ValueError, TypeError):
                raise ConfigurationError(
                    key,
                    f"Invalid type for {key}: expected {default_type.__name__}, got {type(value).__name__}"
                )

        previous = self._config[key]
        self._config[key] = value
        try:
            self._validate_configuration()
        except ConfigurationError:
            self._config[key] = previous
            raise

    def get_all_config(self) -> ConfigDict:
        return self._config.copy()

    def export_config(self, file_path: Optional[str] = None) -> str:
        """
        Export configuration to a JSON string, optionally writing it to a file.

        Returns:
            str: JSON string of configuration (keys sorted)
        """
        try:
            config_json = json.dumps(self._config, indent=2, sort_keys=True, default=str)

            if file_path:
                with open(file_path, 'w', encoding=self.get_default_encoding()) as f:
                    f.write(config_json)

            return config_json

        except OSError as e:
            raise ConfigurationError(
                file_path or "export",
                f"Failed to export configuration: {str(e)}"
            )

    def get_summary(self) -> Dict[str, Any]:
        """
        Get a summary of current configuration.

        Returns:
            Dict[str, Any]: Configuration summary
        """
        return {
            "env_file": self._env_file,
            "log_file_path": self.get_log_file_path(),
            "results_file_path": self.get_results_file_path(),
            "cheeger_exact_max_order": self.get_cheeger_exact_max_order(),
            "char_poly_max_order": self.get_char_poly_max_order(),
            "ghz_step_cap": self.get_ghz_step_cap(),
            "jobs": self.get_jobs(),
            "features_enabled": {
                "logging": self.is_logging_enabled(),
                "results_log": self.is_results_log_enabled(),
            },
        }

    def __repr__(self) -> str:
        return f"ToolkitConfig(env_file={self._env_file!r}, keys={len(self._config)})"


# Global configuration instance
_config_instance: Optional[ToolkitConfig] = None


def get_config(env_file: Optional[str] = None, reload: bool = False) -> ToolkitConfig:
    """
    Get the global configuration instance.

    Args:
        env_file (str, optional): Path to a .env-style override file
        reload (bool): Whether to rebuild the instance

    Returns:
        ToolkitConfig: Global configuration instance
    """
    global _config_instance

    if reload:
        reset_config()
    if _config_instance is None:
        _config_instance = ToolkitConfig(env_file)

    return _config_instance


def reset_config() -> None:
    """Reset the global configuration instance."""
    global _config_instance
    _config_instance = None
