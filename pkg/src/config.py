"""Runtime configuration loaded from ``configs/*.yaml``.

Two files are read, both optional:

numerics.yaml   Tolerances (hermiticity, positivity, normalization, region,
                hull margin, eigenvalue pairing, method agreement, and the
                epsilon_0 monotonicity and convexity checks).
sampling.yaml   Product-state sampling defaults (certification samples and
                seed, chunk size, workers, scheme, ellipse points, grid size).

Missing files or keys fall back to the dataclass defaults below.

Environment variables
---------------------
SPININV_CONFIG_DIR   Directory holding the YAML files (default: ``configs``).
"""

from __future__ import annotations

import dataclasses
import functools
import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import yaml

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(os.getenv("SPININV_CONFIG_DIR", "configs"))

SAMPLING_SCHEMES = ("haar", "tilted", "mixed")


@dataclass(frozen=True)
class NumericsConfig:
    hermiticity_tol: float = 1e-12
    positivity_tol: float = 1e-12
    normalization_tol: float = 1e-10
    region_tol: float = 1e-10
    hull_margin: float = 1e-9
    pairing_tol: float = 1e-9
    method_agreement_tol: float = 1e-10
    monotonicity_tol: float = 1e-12
    convexity_tol: float = 1e-9

    def __post_init__(self) -> None:
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not isinstance(value, int | float) or value < 0:
                raise ValueError(f"{field.name} must be a non-negative number, got {value!r}")


@dataclass(frozen=True)
class SamplingConfig:
    certification_samples: int = 10_000
    certification_seed: int = 20050101
    chunk_size: int = 4096
    workers: int = 1
    scheme: str = "mixed"
    ellipse_points: int = 101
    epsilon_grid: int = 101

    def __post_init__(self) -> None:
        if self.scheme not in SAMPLING_SCHEMES:
            raise ValueError(
                f"scheme must be one of {SAMPLING_SCHEMES}, got {self.scheme!r}"
            )
        if self.chunk_size < 1 or self.workers < 1:
            raise ValueError("chunk_size and workers must be positive")
        if self.certification_samples < 0:
            raise ValueError("certification_samples must be non-negative")
        if self.ellipse_points < 2 or self.epsilon_grid < 2:
            raise ValueError("ellipse_points and epsilon_grid must be at least 2")


@dataclass(frozen=True)
class Settings:
    numerics: NumericsConfig = dataclasses.field(default_factory=NumericsConfig)
    sampling: SamplingConfig = dataclasses.field(default_factory=SamplingConfig)


def _read_section(path: Path, cls: type) -> Any:
    if not path.exists():
        logger.debug("Config %s not found; using defaults", path)
        return cls()
    with open(path) as f:
        raw = yaml.safe_load(f) or {}
    if not isinstance(raw, dict):
        raise ValueError(f"{path} must contain a mapping, got {type(raw).__name__}")

    known = {field.name for field in dataclasses.fields(cls)}
    unknown = sorted(set(raw) - known)
    if unknown:
        logger.warning("Ignoring unknown keys in %s: %s", path, ", ".join(unknown))
    return cls(**{k: v for k, v in raw.items() if k in known})


def load_settings(config_dir: Path | None = None) -> Settings:
    """Read ``numerics.yaml`` and ``sampling.yaml`` from *config_dir*."""
    base = Path(config_dir) if config_dir is not None else CONFIG_DIR
    return Settings(
        numerics=_read_section(base / "numerics.yaml", NumericsConfig),
        sampling=_read_section(base / "sampling.yaml", SamplingConfig),
    )


@functools.cache
def get_settings() -> Settings:
    """Process-wide settings, loaded once from ``CONFIG_DIR``."""
    return load_settings()
