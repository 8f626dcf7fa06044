#!/usr/bin/env python3
"""
Test analysis presets, environment overrides and continuation settings.
"""

import os
import sys
from fractions import Fraction
from pathlib import Path
from unittest import mock

sys.path.insert(0, str(Path(__file__).parent))

from kernelwalk import AnalysisConfig, AnalysisPreset, ConfigError, ContinuationConfig
from kernelwalk.config import PRECISION_ENV_VAR


def test_presets():
    assert AnalysisConfig().precision_bits == 96
    assert AnalysisConfig.fast().precision_bits == 64
    assert AnalysisConfig.strict().precision_bits == 192
    config = AnalysisConfig.from_preset(AnalysisPreset.FAST, max_denominator=50, seed=None)
    assert config.max_denominator == 50
    assert config.probe_bound == 50
    assert config.seed == 0
    assert "preset=fast" in str(config)
    assert config.to_dict()["preset"] == "fast"


def test_invalid_settings():
    try:
        AnalysisConfig.from_preset(AnalysisPreset.STANDARD, colour="blue")
        raise AssertionError("ConfigError not raised")
    except ConfigError:
        pass
    message = None
    try:
        AnalysisConfig(precision_bits=32)
    except AssertionError as e:
        message = str(e)
    assert message is not None and "precision_bits" in message


def test_environment_precision():
    with mock.patch.dict(os.environ, {PRECISION_ENV_VAR: "128"}):
        assert AnalysisConfig.from_environment().precision_bits == 128
        # explicit flag beats the environment
        assert AnalysisConfig.from_environment(precision_bits=160).precision_bits == 160
    for bad in ("lots", "48"):
        with mock.patch.dict(os.environ, {PRECISION_ENV_VAR: bad}):
            try:
                AnalysisConfig.from_environment()
                raise AssertionError(f"ConfigError not raised for {bad!r}")
            except ConfigError as e:
                assert PRECISION_ENV_VAR in str(e)


def test_continuation_truncation():
    assert ContinuationConfig.for_model(Fraction(1, 2)).truncation == 30
    third = ContinuationConfig.for_model(Fraction(1, 3))
    assert third.tail_bound(Fraction(1, 3)) <= 1e-9
    assert ContinuationConfig(truncation=third.truncation - 1).tail_bound(Fraction(1, 3)) > 1e-9
    ContinuationConfig().validate_for(Fraction(1, 2))
    try:
        ContinuationConfig(truncation=10).validate_for(Fraction(1, 2))
        raise AssertionError("ConfigError not raised")
    except ConfigError as e:
        assert "N=10" in str(e)


def test_doubled_precision_copy():
    config = AnalysisConfig.fast()
    doubled = config.with_precision(128)
    assert doubled.precision_bits == 128
    assert doubled.orbit_samples == config.orbit_samples
    assert config.precision_bits == 64


if __name__ == "__main__":
    tests = [
        test_presets,
        test_invalid_settings,
        test_environment_precision,
        test_continuation_truncation,
        test_doubled_precision_copy,
    ]
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except AssertionError as e:
            print(f"❌ {test.__name__}: {e}")
            failed += 1
    sys.exit(0 if failed == 0 else 1)
