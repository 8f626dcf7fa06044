#!/usr/bin/env python3
"""
Test the continuation of r_x and r_y beyond the base domain.
"""

import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from kernelwalk import (ConfigError, ContinuationConfig, ContinuationEngine, NumericError,
                        PoleProximityError, analyze_curve, continuation_summary, parse_model)

WALKS = Path(__file__).parent / "walks"
TOLERANCE = 1e-6


def engine_for(name: str, cls=ContinuationEngine) -> ContinuationEngine:
    return cls(analyze_curve(parse_model((WALKS / name).read_text())))


class NegatedShiftEngine(ContinuationEngine):
    """Continuation with the wrong sign on b_x."""

    def bx(self, omega: complex) -> complex:
        return -super().bx(omega)


class SheetDependentEngine(ContinuationEngine):
    """x(omega) that changes by 1e-3 on every other sheet of omega1."""

    def x(self, omega: complex) -> complex:
        return super().x(omega) + 1e-3 * round(omega.imag / self.omega1.imag)


def grid(engine: ContinuationEngine, size: int = 9):
    for a in np.linspace(-0.9, 1.9, size):
        for b in np.linspace(-0.45, 0.45, size):
            yield complex(a * engine.omega2, b * engine.omega1.imag)


def shifted_points(engine: ContinuationEngine, limit: int = 12):
    """Grid points outside the base domain that are not close to a predicted pole."""
    points = []
    for omega in grid(engine):
        if engine.base_condition(engine.reduce(omega)) is not None:
            continue
        try:
            engine.continue_rx(omega)
        except PoleProximityError:
            continue
        points.append(omega)
        if len(points) == limit:
            break
    return points


def test_simple_walk_summary():
    summary = continuation_summary(engine_for("simple.walk"), samples=50, seed=0)
    assert summary["samples"] == 50
    assert summary["truncation"] == 40
    assert summary["tail_bound"] < 1e-11
    for key in ("identity_max", "periodicity_max", "telescoping_max"):
        assert summary[key] < TOLERANCE, (key, summary[key])


def test_base_samples():
    engine = engine_for("tandem.walk")
    margin = 1 - engine.config.base_margin
    for sample in engine.sample_base_domain(20, seed=3, region="any"):
        assert sample.condition in ("x", "y", "both")
        if sample.condition in ("x", "both"):
            assert abs(sample.x) < margin
        if sample.condition in ("y", "both"):
            assert abs(sample.y) < margin
    # on the overlap both series pieces must describe the same point
    for sample in engine.sample_base_domain(20, seed=4, region="both"):
        gap = engine.F1(sample.x)[0] + engine.F2(sample.y)[0] - engine.origin + sample.x * sample.y
        assert abs(gap) < 1e-9, abs(gap)


def test_identity_away_from_base():
    for name in ("simple.walk", "tandem.walk"):
        engine = engine_for(name)
        points = shifted_points(engine)
        assert points, name
        for omega in points:
            assert engine.find_shift(omega) != 0
            assert engine.identity_check(omega) < TOLERANCE, (name, omega)


def test_wrong_shift_sign_is_detected():
    engine = engine_for("simple.walk", NegatedShiftEngine)
    worst = max(engine.identity_check(omega) for omega in shifted_points(engine))
    assert worst > 1e-4, worst


def test_base_evaluation_refuses_outside():
    engine = engine_for("simple.walk")
    outside = [omega for omega in grid(engine) if engine.base_condition(engine.reduce(omega)) is None]
    assert outside
    try:
        engine.rx_base(outside[0])
        raise AssertionError("NumericError not raised")
    except NumericError as e:
        assert "outside the base domain" in str(e)


def test_predicted_poles():
    engine = engine_for("tandem.walk")
    window = (-engine.omega2, 2 * engine.omega2, -engine.omega1.imag, engine.omega1.imag)
    poles = engine.predicted_poles(window)
    x_only = engine.predicted_poles(window, include_bx=False)
    assert len(x_only) <= len(poles)
    for pole in poles:
        assert pole.label == "candidate"
        assert pole.source in ("x", "b_x")
        assert window[0] <= pole.omega.real <= window[1]
        assert window[2] <= pole.omega.imag <= window[3]

    near = engine.pole_set()[0]
    try:
        engine.continue_rx(near)
        raise AssertionError("PoleProximityError not raised")
    except PoleProximityError:
        pass


def test_periodicity_uses_unreduced_path():
    engine = engine_for("simple.walk")
    for omega in shifted_points(engine) + [s.omega for s in engine.sample_base_domain(10, seed=7)]:
        lifted = omega + engine.omega1
        try:
            rx_gap = engine.continue_rx(lifted, reduce_period=False) - engine.continue_rx(omega)
            ry_gap = engine.continue_ry(lifted, reduce_period=False) - engine.continue_ry(omega)
        except PoleProximityError:
            continue
        assert abs(rx_gap) < TOLERANCE and abs(ry_gap) < TOLERANCE, omega

    broken = engine_for("simple.walk", SheetDependentEngine)
    summary = continuation_summary(broken, samples=20, seed=0)
    assert summary["periodicity_max"] > 1e-5, summary["periodicity_max"]


def test_x_blows_up_at_listed_poles():
    engine = engine_for("simple.walk")
    w1 = engine.omega1.imag
    window = (-engine.omega2, 2 * engine.omega2, -w1, w1)
    listed = engine.predicted_poles(window, include_bx=False)
    in_domain, _ = engine.base_poles()
    assert in_domain
    for pole in in_domain:
        assert any(abs(c.omega - pole) < 1e-9 for c in listed), pole
        sizes = [abs(engine.x(pole + offset)) for offset in (1e-2, 1e-3, 1e-4)]
        assert sizes[1] > 5 * sizes[0] and sizes[2] > 5 * sizes[1], sizes
        assert sizes[2] > 1e2, sizes
    # listed points are closed under omega1 inside the window
    for c in listed:
        up = c.omega + engine.omega1
        if up.imag <= window[3]:
            assert any(abs(d.omega - up) < 1e-9 for d in listed), c.omega


def test_configuration_checks():
    analytics = analyze_curve(parse_model((WALKS / "simple.walk").read_text()))
    try:
        ContinuationEngine(analytics, ContinuationConfig(truncation=5))
        raise AssertionError("ConfigError not raised")
    except ConfigError as e:
        assert str(e).startswith("config: ")
    assert ContinuationConfig.for_model(analytics.model.t).truncation == 30

    engine = ContinuationEngine(analytics)
    omega = complex(0.3 * engine.omega2, 0.1 * engine.omega1.imag)
    assert abs(engine.reduce(omega + 3 * engine.omega1) - omega) < 1e-12


if __name__ == "__main__":
    tests = [
        test_simple_walk_summary,
        test_base_samples,
        test_identity_away_from_base,
        test_wrong_shift_sign_is_detected,
        test_base_evaluation_refuses_outside,
        test_predicted_poles,
        test_periodicity_uses_unreduced_path,
        test_x_blows_up_at_listed_poles,
        test_configuration_checks,
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
