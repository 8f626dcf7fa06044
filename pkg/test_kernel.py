#!/usr/bin/env python3
"""
Test kernel algebra: discriminants, degeneracy criterion against the
reducibility oracle, and the genus classification.
"""

import itertools
import sys
from fractions import Fraction
from pathlib import Path

import sympy as sp
from mpmath import mp

sys.path.insert(0, str(Path(__file__).parent))

from kernelwalk import (Axis, DegeneracyCase, HalfPlaneClass, WeightedModel, apply_symmetry,
                        build_kernel, degeneracy_oracle, degeneracy_test, discriminant,
                        equal_weight_model, genus_classify, homogenize, parse_model, reflect,
                        step_set)
from kernelwalk.errors import DegenerateModelError
from kernelwalk.kernel import classify_model_genus, compass_normals, kernel_curve_invariants
from kernelwalk.model import SQUARE_SYMMETRIES

WALKS = Path(__file__).parent / "walks"
NONZERO_STEPS = [(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1) if (i, j) != (0, 0)]


def load(name: str) -> WeightedModel:
    return parse_model((WALKS / name).read_text())


def all_supports():
    """The 256 subsets of the eight nonzero steps, as equal-weight models at t = 1/2."""
    for size in range(len(NONZERO_STEPS) + 1):
        for subset in itertools.combinations(NONZERO_STEPS, size):
            yield equal_weight_model(subset if subset else [(0, 0)], Fraction(1, 2))


def test_kernel_values():
    model = load("simple.walk")
    kernel = build_kernel(model)
    x, y = Fraction(1, 3), Fraction(2, 5)
    expected = x * y * (1 - model.t * (x + 1 / x + y + 1 / y) / 4)
    assert kernel.evaluate(x, y) == expected
    assert kernel.origin_value() == 0
    homogeneous = homogenize(kernel)
    assert homogeneous.evaluate(x, 1, y, 1) == expected
    assert homogeneous.evaluate(2 * x, 2, 3 * y, 3) == 36 * expected


def test_simple_walk_discriminant():
    kernel = build_kernel(load("simple.walk"))
    z = sp.Symbol("z")
    expected = sp.Poly((z ** 2 - 6 * z + 1) * (z ** 2 - 10 * z + 1), z, domain=sp.QQ)
    for axis in (Axis.X, Axis.Y):
        delta = discriminant(kernel, axis)
        assert delta.as_poly() * 64 == expected, axis


def test_discriminant_requires_quadratic():
    model = equal_weight_model([(1, 0), (-1, 0), (0, -1)])
    try:
        discriminant(build_kernel(model), Axis.X)
        raise AssertionError("DegenerateModelError not raised")
    except DegenerateModelError as e:
        assert str(e).startswith("kernel: ")


def test_degeneracy_matches_oracle():
    disagreements = []
    for model in all_supports():
        pattern = degeneracy_test(model).verdict
        oracle = degeneracy_oracle(build_kernel(model), model.t)
        if pattern != oracle:
            disagreements.append(sorted(step_set(model).steps))
    assert not disagreements, f"{len(disagreements)} disagreements, first {disagreements[0]}"


def test_degeneracy_cases():
    assert degeneracy_test(load("origin.walk")).matched_case == DegeneracyCase.CASE1_I_MINUS
    assert degeneracy_test(load("simple.walk")).matched_case == DegeneracyCase.NONE
    diagonal = equal_weight_model([(1, 1), (-1, -1)])
    assert degeneracy_test(diagonal).matched_case == DegeneracyCase.CASE3_DIAGONAL


def test_genus_classification():
    assert classify_model_genus(load("simple.walk")).is_elliptic
    assert classify_model_genus(load("tandem.walk")).is_elliptic
    assert classify_model_genus(load("weighted-infinite.walk")).is_elliptic
    assert classify_model_genus(load("family1.walk")).classification == HalfPlaneClass.FAMILY1
    family2 = equal_weight_model([(-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1)])
    assert classify_model_genus(family2).classification == HalfPlaneClass.FAMILY2


FAMILY_BY_NORMAL = {
    (1, 1): HalfPlaneClass.FAMILY1,
    (-1, 1): HalfPlaneClass.FAMILY2,
    (-1, -1): HalfPlaneClass.FAMILY3,
    (1, -1): HalfPlaneClass.FAMILY4,
}


def containing_normals(model: WeightedModel):
    steps = step_set(model).nonzero()
    return [n for n in compass_normals() if all(n[0] * i + n[1] * j >= 0 for i, j in steps)]


def test_genus_symmetry_invariance():
    for model in all_supports():
        base = genus_classify(step_set(model))
        normals = containing_normals(model)
        for g in range(8):
            moved = genus_classify(step_set(apply_symmetry(model, g)))
            assert moved.is_elliptic == base.is_elliptic
            degenerate = HalfPlaneClass.DEGENERATE_HALF_PLANE
            assert (moved.classification == degenerate) == (base.classification == degenerate)
            if base.classification in FAMILY_BY_NORMAL.values() and len(normals) == 1:
                # the family follows its half-plane normal under the symmetry
                a, b, c, e = SQUARE_SYMMETRIES[g]
                (u, v), = normals
                image = (a * u + b * v, c * u + e * v)
                assert moved.classification == FAMILY_BY_NORMAL[image], (model.weights, g)


def test_reflection_swaps_families_two_and_four():
    family1 = equal_weight_model([(1, 0), (0, 1), (1, 1), (1, -1), (-1, 1)])
    assert genus_classify(step_set(family1)).classification == HalfPlaneClass.FAMILY1
    assert genus_classify(step_set(reflect(family1))).classification == HalfPlaneClass.FAMILY1
    family2 = equal_weight_model([(-1, -1), (-1, 0), (-1, 1), (0, 1), (1, 1)])
    assert genus_classify(step_set(reflect(family2))).classification == HalfPlaneClass.FAMILY4
    family4 = reflect(family2)
    assert genus_classify(step_set(reflect(family4))).classification == HalfPlaneClass.FAMILY2


def test_curve_invariants_agree_between_roots():
    # g2 and g3 do not depend on which root the normal form starts from
    delta = discriminant(build_kernel(load("simple.walk")), Axis.X)
    with mp.workprec(96):
        first = kernel_curve_invariants(delta, 5 - 2 * mp.sqrt(6))
        second = kernel_curve_invariants(delta, 3 - 2 * mp.sqrt(2))
        third = kernel_curve_invariants(delta, 5 + 2 * mp.sqrt(6))
        for a, b, c in zip(first, second, third):
            assert mp.almosteq(a, b, 1e-20), (a, b)
            assert mp.almosteq(a, c, 1e-20), (a, c)


if __name__ == "__main__":
    tests = [
        test_kernel_values,
        test_simple_walk_discriminant,
        test_discriminant_requires_quadratic,
        test_degeneracy_matches_oracle,
        test_degeneracy_cases,
        test_genus_classification,
        test_genus_symmetry_invariance,
        test_reflection_swaps_families_two_and_four,
        test_curve_invariants_agree_between_roots,
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
