"""
Analysis configuration: numeric presets, tolerances, and precision handling.

Presets:
- STANDARD (default): 96-bit working precision, default tolerances
- FAST: 64-bit precision and lighter sampling, for exhaustive sweeps
- STRICT: 192-bit precision, tighter quadrature
"""

import os
from dataclasses import dataclass, field, asdict, fields
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Optional

from mpmath import mp

from .errors import ConfigError

PRECISION_ENV_VAR = "KERNELWALK_PRECISION"


class AnalysisPreset(Enum):
    """Named numeric presets."""
    FAST = "fast"
    STANDARD = "standard"
    STRICT = "strict"


@dataclass
class ContinuationConfig:
    """
    Settings for the continuation of r_x and r_y.

    The series truncation must satisfy t^(N+1)/(1-t) <= tail_tolerance,
    which bounds the tail because the step weights are probabilities.
    """
    truncation: int = 40                 # series truncation N
    tail_tolerance: float = 1e-9
    pole_threshold: float = 1e-3         # omega-units
    base_margin: float = 0.05            # |x| < 1 - margin for base evaluation
    shift_budget: int = 64               # max |n| in omega - n*omega3 search

    def __post_init__(self):
        """Validate continuation parameters."""
        assert self.truncation >= 0, "truncation must be >= 0"
        assert self.tail_tolerance > 0, "tail_tolerance must be positive"
        assert 0 < self.base_margin < 1, "base_margin must be in (0, 1)"
        assert self.pole_threshold > 0, "pole_threshold must be positive"
        assert self.shift_budget >= 1, "shift_budget must be >= 1"

    def tail_bound(self, t: Fraction) -> float:
        """Tail bound t^(N+1)/(1-t) for the configured truncation."""
        t_val = float(t)
        return t_val ** (self.truncation + 1) / (1.0 - t_val)

    def validate_for(self, t: Fraction):
        """
        Check the truncation against the model's t.

        Raises:
            ConfigError: if the tail bound exceeds the tolerance
        """
        if self.tail_bound(t) > self.tail_tolerance:
            raise ConfigError(
                f"truncation N={self.truncation} gives tail bound "
                f"{self.tail_bound(t):.3e} > tolerance {self.tail_tolerance:.1e} at t={t}"
            )

    @classmethod
    def for_model(cls, t: Fraction, tail_tolerance: float = 1e-9, **overrides) -> 'ContinuationConfig':
        """Smallest truncation meeting tail_tolerance at t."""
        t_val = float(t)
        n = 0
        while t_val ** (n + 1) / (1.0 - t_val) > tail_tolerance:
            n += 1
        return cls(truncation=n, tail_tolerance=tail_tolerance, **overrides)


@dataclass
class AnalysisConfig:
    """
    Numeric configuration for a full analysis run.

    Absolute tolerances unless marked relative.
    """
    precision_bits: int = 96
    root_tolerance: float = 1e-12
    quad_tolerance: float = 1e-10          # relative, step-halving check
    quad_degree: int = 7                   # tanh-sinh max degree
    uniformization_tolerance: float = 1e-8
    orbit_tolerance: float = 1e-8
    max_denominator: int = 200
    reconstruction_tolerance: float = 1e-9
    orbit_samples: int = 20
    orbit_probe_bound: Optional[int] = None  # None: same as max_denominator
    seed: int = 0
    continuation: ContinuationConfig = field(default_factory=ContinuationConfig)
    preset: AnalysisPreset = AnalysisPreset.STANDARD

    def __post_init__(self):
        """Validate configuration."""
        assert self.precision_bits >= 64, "precision_bits must be >= 64"
        assert self.quad_degree >= 3, "quad_degree must be >= 3"
        assert self.max_denominator >= 1, "max_denominator must be >= 1"
        assert self.orbit_samples >= 1, "orbit_samples must be >= 1"
        assert 0 < self.reconstruction_tolerance < 1, "reconstruction_tolerance must be in (0, 1)"
        if self.orbit_probe_bound is not None:
            assert 1 <= self.orbit_probe_bound <= 10 ** 6, "orbit_probe_bound must be in [1, 1e6]"

    @property
    def probe_bound(self) -> int:
        """Orbit probe bound actually used."""
        return self.orbit_probe_bound if self.orbit_probe_bound is not None else self.max_denominator

    @classmethod
    def standard(cls) -> 'AnalysisConfig':
        """Standard preset (default)."""
        return cls(preset=AnalysisPreset.STANDARD)

    @classmethod
    def fast(cls) -> 'AnalysisConfig':
        """
        Fast preset for sweeps over many models.

        - 64-bit precision
        - lower quadrature degree
        - fewer orbit samples
        """
        return cls(
            precision_bits=64,
            quad_degree=6,
            orbit_samples=5,
            preset=AnalysisPreset.FAST
        )

    @classmethod
    def strict(cls) -> 'AnalysisConfig':
        """Strict preset: 192-bit precision, higher quadrature degree."""
        return cls(
            precision_bits=192,
            quad_degree=9,
            preset=AnalysisPreset.STRICT
        )

    @staticmethod
    def from_preset(preset: AnalysisPreset, **overrides) -> 'AnalysisConfig':
        """
        Create config from preset with optional overrides.

        Args:
            preset: Preset to start from
            **overrides: Override specific config values

        Returns:
            AnalysisConfig instance
        """
        if preset == AnalysisPreset.FAST:
            config = AnalysisConfig.fast()
        elif preset == AnalysisPreset.STRICT:
            config = AnalysisConfig.strict()
        else:
            config = AnalysisConfig.standard()

        for key, value in overrides.items():
            if value is None:
                continue
            if not hasattr(config, key):
                raise ConfigError(f"unknown setting '{key}'")
            setattr(config, key, value)
        config.__post_init__()
        return config

    @staticmethod
    def from_environment(preset: AnalysisPreset = AnalysisPreset.STANDARD, **overrides) -> 'AnalysisConfig':
        """
        Preset, then KERNELWALK_PRECISION, then explicit overrides.

        Raises:
            ConfigError: if the environment value is not an integer >= 64
        """
        env_value = os.environ.get(PRECISION_ENV_VAR)
        env_overrides: Dict[str, Any] = {}
        if env_value:
            try:
                bits = int(env_value)
            except ValueError:
                raise ConfigError(f"{PRECISION_ENV_VAR}={env_value!r} is not an integer")
            if bits < 64:
                raise ConfigError(f"{PRECISION_ENV_VAR}={bits} is below 64 bits")
            env_overrides["precision_bits"] = bits
        env_overrides.update({k: v for k, v in overrides.items() if v is not None})
        return AnalysisConfig.from_preset(preset, **env_overrides)

    def with_precision(self, bits: int) -> 'AnalysisConfig':
        """Copy with a different working precision."""
        values = {f.name: getattr(self, f.name) for f in fields(self)}
        values["precision_bits"] = bits
        return AnalysisConfig(**values)

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready snapshot for reports."""
        data = asdict(self)
        data["preset"] = self.preset.value
        data["orbit_probe_bound"] = self.probe_bound
        return data

    def __str__(self) -> str:
        """String representation for logging."""
        return (
            f"AnalysisConfig(preset={self.preset.value}, bits={self.precision_bits}, "
            f"Lmax={self.max_denominator}, tol={self.reconstruction_tolerance:.0e}, "
            f"seed={self.seed}, N={self.continuation.truncation})"
        )


def working_precision(bits: int):
    """Context manager setting mpmath's binary precision."""
    return mp.workprec(bits)
