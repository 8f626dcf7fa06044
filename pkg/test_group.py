#!/usr/bin/env python3
"""
Test the finiteness decision for the group of the walk.
"""

import sys
from fractions import Fraction
from pathlib import Path
from unittest import mock

from mpmath import mp

sys.path.insert(0, str(Path(__file__).parent))

from kernelwalk import (AnalysisConfig, GroupInconsistencyError, GroupVerdict, NumericError,
                        WeightedModel, analyze_curve, confirm_order, equal_weight_model, group_report,
                        orbit_probe, parse_model, reconstruct_rational)
from kernelwalk.group import (continued_fraction, escalated_config, precision_stability,
                              sample_curve_points)

WALKS = Path(__file__).parent / "walks"


def load(name: str) -> WeightedModel:
    return parse_model((WALKS / name).read_text())


def test_simple_walk_group():
    report = group_report(analyze_curve(load("simple.walk")))
    assert report.verdict == GroupVerdict.FINITE
    assert (report.k, report.ell) == (1, 2)
    assert report.first_return == 2
    assert report.order_group == 4
    assert str(report) == "Finite(k=1, l=2, order_group=4)"


def test_tandem_walk_group():
    report = group_report(analyze_curve(load("tandem.walk")))
    assert report.is_finite
    assert report.ell == 3
    assert report.order_group == 6


def test_kreweras_type_group_is_weight_independent():
    # Both involutions are monomial maps for NE, W, S, so sigma has order 3 for any weights
    model = WeightedModel.from_weights({(1, 1): Fraction(1, 7), (-1, 0): Fraction(3, 7),
                                        (0, -1): Fraction(3, 7)}, Fraction(1, 2))
    report = group_report(analyze_curve(model))
    assert report.is_finite and report.ell == 3


def test_infinite_group_presumed():
    report = group_report(analyze_curve(load("weighted-infinite.walk")))
    assert report.verdict == GroupVerdict.INFINITE_PRESUMED
    assert report.bound_checked == 200
    assert report.first_return is None
    assert str(report) == "InfinitePresumed(bound 200)"
    assert report.to_dict()["caveat"]


def test_continued_fractions():
    with mp.workprec(96):
        assert continued_fraction(mp.mpf(355) / 113, 10) == [3, 7, 16]
        assert reconstruct_rational(mp.mpf(1) / 2) == (1, 2)
        assert reconstruct_rational(mp.mpf(2) / 7 + mp.mpf(10) ** -12) == (2, 7)
        assert reconstruct_rational(mp.sqrt(2) - 1) is None
        assert reconstruct_rational(mp.mpf(3) / 2) is None
        assert reconstruct_rational(mp.mpf(1) / 251, max_denominator=250) is None


def test_confirm_order():
    analytics = analyze_curve(load("simple.walk"))
    assert confirm_order(2, analytics)
    assert confirm_order(4, analytics)
    assert not confirm_order(3, analytics)
    # sigma^2 is the identity but 2 omega3 = omega2, not 0
    try:
        confirm_order(2, analytics, k=0)
        raise AssertionError("GroupInconsistencyError not raised")
    except GroupInconsistencyError as e:
        assert "lattice check says False but orbit check says True" in str(e)


def test_fast_preset_symmetric_support():
    # 64-bit periods put omega3/omega2 a few 1e-10 off 1/2 for this support
    model = equal_weight_model([(-1, -1), (0, 1), (1, -1)], Fraction(1, 2))
    fast = AnalysisConfig.fast()
    report = group_report(analyze_curve(model, fast), fast)
    assert report.is_finite and report.ell == 2
    assert report.precision_bits in (None, escalated_config(fast).precision_bits)


def test_disagreement_reruns_at_higher_precision():
    fast = AnalysisConfig.fast()
    retry = escalated_config(fast)
    assert retry.precision_bits == 128
    assert retry.quad_degree == AnalysisConfig.standard().quad_degree
    assert retry.orbit_samples == fast.orbit_samples
    analytics = analyze_curve(load("simple.walk"), fast)
    disagreement = GroupInconsistencyError("group", "lattice check says True but orbit check says False for l=2")
    with mock.patch("kernelwalk.group.confirm_order", side_effect=[disagreement, True]):
        report = group_report(analytics, fast)
    assert report.is_finite and report.ell == 2
    assert report.precision_bits == 128
    assert report.to_dict()["precision_bits"] == 128
    with mock.patch("kernelwalk.group.confirm_order", side_effect=[disagreement, disagreement]):
        try:
            group_report(analytics, fast)
            raise AssertionError("GroupInconsistencyError not raised")
        except GroupInconsistencyError:
            pass


def test_orbit_probe_bounds():
    analytics = analyze_curve(load("simple.walk"))
    point = sample_curve_points(analytics, 1, seed=5)[0]
    assert orbit_probe(point, analytics, 10) == 2
    assert orbit_probe(point, analytics, 1) is None
    for bound in (0, 10 ** 6 + 1):
        try:
            orbit_probe(point, analytics, bound)
            raise AssertionError("NumericError not raised")
        except NumericError:
            pass


def test_precision_stability():
    stability = precision_stability(load("tandem.walk"), AnalysisConfig.fast())
    assert stability.stable
    assert stability.to_dict()["base"] == stability.to_dict()["doubled"]


if __name__ == "__main__":
    tests = [
        test_simple_walk_group,
        test_tandem_walk_group,
        test_kreweras_type_group_is_weight_independent,
        test_infinite_group_presumed,
        test_continued_fractions,
        test_confirm_order,
        test_fast_preset_symmetric_support,
        test_disagreement_reruns_at_higher_precision,
        test_orbit_probe_bounds,
        test_precision_stability,
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
