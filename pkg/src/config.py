"""Configuration management for alpha-sat-thresholds"""

import os
import yaml
from pathlib import Path
from typing import Dict, Any, Optional
from dataclasses import dataclass

from src.errors import ConfigError

MAX_COVERAGE_CAP = 30


@dataclass
class CoverageConfig:
    """Limits for structures that scale as 2^n"""
    cap: int


@dataclass
class SolverConfig:
    """Moser-Tardos settings"""
    resample_factor: int


@dataclass
class MaximalConfig:
    """Greedy maximal builder settings"""
    enumeration_budget: int
    max_consecutive_rejections: int
    verify_budget: int


@dataclass
class StorageConfig:
    """Results store settings"""
    data_dir: str


class ConfigManager:
    """Simple configuration manager"""

    def __init__(self, config_path: Optional[str] = None):
        self.config_path = Path(
            config_path or os.getenv("ALPHASAT_CONFIG", "alphasat.yaml")
        )
        self._config_data: Dict[str, Any] = {}
        self._load_config()

    def _load_config(self) -> None:
        """Load configuration from YAML file"""
        self._config_data = self._get_default_config()
        if self.config_path.exists():
            with open(self.config_path, 'r', encoding='utf-8') as f:
                loaded = yaml.safe_load(f) or {}
            if not isinstance(loaded, dict):
                raise ConfigError(f"{self.config_path}: top level must be a mapping")
            for section, values in loaded.items():
                self._config_data.setdefault(section, {}).update(values or {})

        # Apply environment variable overrides
        self._apply_env_overrides()

    def _get_default_config(self) -> Dict[str, Any]:
        """Default configuration if no file exists"""
        return {
            "coverage": {
                "cap": 26
            },
            "solver": {
                "resample_factor": 1000
            },
            "maximal": {
                "enumeration_budget": 10_000_000,
                "max_consecutive_rejections": 100_000,
                "verify_budget": 1_000_000
            },
            "storage": {
                "data_dir": "./data"
            }
        }

    def _apply_env_overrides(self) -> None:
        """Apply environment variable overrides"""
        if os.getenv("ALPHASAT_COVERAGE_CAP"):
            raw = os.getenv("ALPHASAT_COVERAGE_CAP")
            try:
                self._config_data["coverage"]["cap"] = int(raw)
            except ValueError:
                raise ConfigError(f"ALPHASAT_COVERAGE_CAP must be an integer, got {raw!r}")
        if os.getenv("ALPHASAT_DATA_DIR"):
            self._config_data["storage"]["data_dir"] = os.getenv("ALPHASAT_DATA_DIR")

    def get_coverage_config(self) -> CoverageConfig:
        """Get coverage cap configuration"""
        cap = int(self._config_data.get("coverage", {}).get("cap", 26))
        if not 1 <= cap <= MAX_COVERAGE_CAP:
            raise ConfigError(f"coverage cap must be in 1..{MAX_COVERAGE_CAP}, got {cap}")
        return CoverageConfig(cap=cap)

    def get_solver_config(self) -> SolverConfig:
        """Get solver configuration"""
        config = self._config_data.get("solver", {})
        factor = int(config.get("resample_factor", 1000))
        if factor < 1:
            raise ConfigError(f"resample_factor must be positive, got {factor}")
        return SolverConfig(resample_factor=factor)

    def get_maximal_config(self) -> MaximalConfig:
        """Get maximal builder configuration"""
        config = self._config_data.get("maximal", {})
        result = MaximalConfig(
            enumeration_budget=int(config.get("enumeration_budget", 10_000_000)),
            max_consecutive_rejections=int(config.get("max_consecutive_rejections", 100_000)),
            verify_budget=int(config.get("verify_budget", 1_000_000))
        )
        for name, value in vars(result).items():
            if value < 1:
                raise ConfigError(f"maximal.{name} must be positive, got {value}")
        return result

    def get_storage_config(self) -> StorageConfig:
        """Get storage configuration"""
        config = self._config_data.get("storage", {})
        return StorageConfig(
            data_dir=config.get("data_dir", "./data")
        )


# Simple convenience functions. A fresh manager is built per call so that
# environment overrides set after import are honoured.
def get_coverage_cap() -> int:
    """Get the maximum n for 2^n coverage and brute-force scans"""
    return ConfigManager().get_coverage_config().cap


def get_solver_config() -> SolverConfig:
    """Get solver configuration"""
    return ConfigManager().get_solver_config()


def get_maximal_config() -> MaximalConfig:
    """Get maximal builder configuration"""
    return ConfigManager().get_maximal_config()


def get_storage_config() -> StorageConfig:
    """Get storage configuration"""
    return ConfigManager().get_storage_config()
