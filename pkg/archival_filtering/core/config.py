# archival_filtering/core/config.py
# Revision No: 002
# Goals: Define configuration settings for filtering, metrics and the bench harness.
# Type of Code Response: Rewrite

import os
from typing import Any, Dict, Optional
from dataclasses import dataclass, fields
from pathlib import Path
import yaml
import logging

logger = logging.getLogger(__name__)

ENV_PREFIX = "ARCHIVAL_"


@dataclass
class FilteringConfig:
    """Configuration settings for the filtering framework."""
    # noise defaults (weak / strong)
    gaussian_sigma_weak: float = 10.0
    gaussian_sigma_strong: float = 30.0
    speckle_variance_weak: float = 0.04
    speckle_variance_strong: float = 0.16
    salt_pepper_density_weak: float = 0.02
    salt_pepper_density_strong: float = 0.10

    # Metrics
    psnr_peak: float = 255.0
    sr_tile: int = 5
    rsc_segment_length: int = 3
    rsc_epsilon: float = 1e-6
    rsc_ratio_cap: float = 1e6
    lee_enabled: bool = False
    lee_window: int = 5

    # Bench
    max_workers: int = 8  # capped by the CPU count
    executor: str = "process"  # "process" or "thread"
    output_dir: Path = Path("./bench_results")
    log_level: str = "WARNING"
    debug: bool = False

    def noise_parameter(self, kind: str, strength: str) -> float:
        """Default parameter for a (kind, strength) noise model."""
        table = {
            ("gaussian", "weak"): self.gaussian_sigma_weak,
            ("gaussian", "strong"): self.gaussian_sigma_strong,
            ("speckle", "weak"): self.speckle_variance_weak,
            ("speckle", "strong"): self.speckle_variance_strong,
            ("salt_pepper", "weak"): self.salt_pepper_density_weak,
            ("salt_pepper", "strong"): self.salt_pepper_density_strong,
        }
        try:
            return table[(kind, strength)]
        except KeyError:
            raise ValueError(f"Unknown noise model: {kind}/{strength}") from None

    @classmethod
    def from_env(cls) -> "FilteringConfig":
        """Create config from ARCHIVAL_* environment variables."""
        values: Dict[str, Any] = {}
        try:
            for f in fields(cls):
                raw = os.getenv(ENV_PREFIX + f.name.upper())
                if raw is not None:
                    values[f.name] = _coerce(f.name, raw, f.default)
            return cls(**values)
        except (ValueError, TypeError) as e:
            logger.error(f"Invalid environment variable: {e}")
            raise

    @classmethod
    def from_yaml(cls, path: Path) -> "FilteringConfig":
        """Create config from YAML file."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Config file not found: {path}")

        try:
            with open(path) as f:
                data = yaml.safe_load(f) or {}

            known = {f.name: f.default for f in fields(cls)}
            unknown = set(data) - set(known)
            if unknown:
                logger.warning(f"Ignoring unknown config keys: {sorted(unknown)}")

            return cls(**{
                key: _coerce(key, value, known[key])
                for key, value in data.items() if key in known
            })
        except (ValueError, TypeError, AttributeError) as e:
            logger.error(f"Invalid config file format: {e}")
            raise

    @classmethod
    def load(cls, path: Optional[Path] = None) -> "FilteringConfig":
        return cls.from_yaml(path) if path else cls.from_env()


def _coerce(name: str, value: Any, default: Any) -> Any:
    """Coerce a raw value to the type of the field's default."""
    if isinstance(default, bool):
        if isinstance(value, bool):
            return value
        return str(value).lower() in ("1", "true", "yes", "on")
    if isinstance(default, Path):
        return Path(value)
    if isinstance(default, int):
        return int(value)
    if isinstance(default, float):
        return float(value)
    return str(value)

# Dependencies: os, typing, dataclasses, pathlib, yaml, logging
# Required Actions: None
# CLI Commands: None
