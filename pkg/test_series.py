#!/usr/bin/env python3
"""
Test exact walk counting against brute-force enumeration and the functional equation.
"""

import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from kernelwalk import (WeightedModel, check_functional_equation, count_walks,
                        enumerate_walks_oracle, eval_F1, eval_Q, export_table,
                        parse_model, parse_table)
from kernelwalk.model import STEPS
from kernelwalk.series import SeriesError, tail_bound

WALKS = Path(__file__).parent / "walks"


def load(name: str) -> WeightedModel:
    return parse_model((WALKS / name).read_text())


def random_models(count: int, seed: int = 0, size: int = 3):
    """Random rational weights on random supports of the given size, t = 1/2."""
    rng = np.random.default_rng(seed)
    models = []
    for _ in range(count):
        picks = rng.choice(len(STEPS), size=size, replace=False)
        raw = rng.integers(1, 4, size=size)
        total = int(raw.sum())
        weights = {STEPS[int(p)]: Fraction(int(w), total) for p, w in zip(picks, raw)}
        models.append(WeightedModel.from_weights(weights, Fraction(1, 2)))
    return models


def test_matches_oracle():
    # Enumeration is exponential in the walk length, so the random supports stay small
    cases = [(load("simple.walk"), 9), (load("tandem.walk"), 10)] + [(m, 10) for m in random_models(3)]
    for model, max_steps in cases:
        fast = count_walks(model, max_steps)
        slow = enumerate_walks_oracle(model, max_steps)
        assert fast.entries() == slow.entries(), model
        assert fast.check_invariants()


def test_simple_walk_values():
    table = count_walks(load("simple.walk"), 4)
    assert table.mass(1) == Fraction(1, 2)
    # E W and N S
    assert table.q(0, 0, 2) == Fraction(2, 16)
    assert table.q(1, 1, 2) == Fraction(2, 16)
    # Catalan-type count: 10 excursions of length 4 in the quarter plane
    assert table.q(0, 0, 4) == Fraction(10, 256)


def test_origin_model_excursions():
    model = load("origin.walk")
    table = count_walks(model, 5)
    assert table.excursions() == [Fraction(1)] * 6
    assert len(table.entries()) == 6


def test_functional_equation():
    for model in [load("simple.walk"), load("tandem.walk")] + random_models(3, seed=7):
        assert check_functional_equation(model, 10)


def test_functional_equation_detects_corruption():
    model = load("simple.walk")
    table = count_walks(model, 6)
    bad = table.replaced(1, 1, 2, table.q(1, 1, 2) + Fraction(1, 1000))
    assert not check_functional_equation(model, 6, table=bad)


def test_invalid_requests():
    model = load("simple.walk")
    for call in (lambda: count_walks(model, -1),
                 lambda: check_functional_equation(model, -1),
                 lambda: eval_F1(count_walks(model, 3), model, 1.5)):
        try:
            call()
            raise AssertionError("SeriesError not raised")
        except SeriesError:
            pass


def test_evaluation_and_tail():
    model = load("simple.walk")
    table = count_walks(model, 40)
    value, tail = eval_Q(table, 0.3, -0.2j, 0.5)
    assert tail == tail_bound(40, 0.5)
    assert tail < 1e-11
    assert abs(value) < 1 / (1 - 0.5) + tail
    exported = export_table(count_walks(model, 5))
    assert parse_table(exported).entries() == count_walks(model, 5).entries()


if __name__ == "__main__":
    tests = [
        test_matches_oracle,
        test_simple_walk_values,
        test_origin_model_excursions,
        test_functional_equation,
        test_functional_equation_detects_corruption,
        test_invalid_requests,
        test_evaluation_and_tail,
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
