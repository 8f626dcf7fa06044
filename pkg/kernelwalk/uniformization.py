"""
Uniformization of the kernel curve and its involutions.

Lambda(omega) = (x(omega), y(omega)) with

    x(omega) = a4 + D1'(a4) / (p(omega) - D1''(a4)/6)        (a4 finite)
    x(omega) = (p(omega) - alpha2/3) / alpha3                 (a4 = [1:0])

and y the same construction on Delta_2 and b4, evaluated at omega - s with
2s = omega3 modulo the lattice. Then i1 lifts to -omega, i2 to omega3 - omega
and sigma = i2 o i1 to omega + omega3.
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from mpmath import mp

from .config import AnalysisConfig, working_precision
from .curve import (BranchPoints, CurvePoint, Periods, ProjectivePoint,
                    branch_points, omega3, periods)
from .errors import DegenerateModelError, NumericError, PoleProximityError
from .kernel import (Axis, GenusReport, HomogeneousKernel, KernelPolynomial,
                     QuarticDiscriminant, build_kernel, classify_model_genus,
                     degeneracy_test, discriminant, homogenize, kernel_curve_invariants,
                     to_mpf)
from .model import WeightedModel
from .weierstrass import LatticeContext, lattice_context, wp


@dataclass(frozen=True)
class UniformizationData:
    """
    Constants of the active x- and y-formulas.

    x_constants is (a4, D1'(a4), D1''(a4)) when a4 is finite, else
    (alpha2, alpha3); likewise y_constants with b4 and Delta_2.
    """
    x_at_infinity: bool
    y_at_infinity: bool
    x_constants: Tuple[object, ...]
    y_constants: Tuple[object, ...]
    y_shift: object

    def to_dict(self) -> Dict[str, object]:
        return {
            "x_case": "a4=[1:0]" if self.x_at_infinity else "a4 finite",
            "y_case": "b4=[1:0]" if self.y_at_infinity else "b4 finite",
            "y_shift": [float(mp.re(self.y_shift)), float(mp.im(self.y_shift))],
        }


def _formula_constants(delta: QuarticDiscriminant, root: ProjectivePoint) -> Tuple[bool, Tuple[object, ...]]:
    if root.is_infinite():
        return True, (to_mpf(delta.values[2]), to_mpf(delta.values[3]))
    a = mp.re(root.value)
    return False, (a, delta.derivative_at(a, 1), delta.derivative_at(a, 2))


def branch_map(p_value, at_infinity: bool, constants: Tuple[object, ...]) -> ProjectivePoint:
    """Projective image of a p-value under the x (or y) formula; p_value None means a pole."""
    if at_infinity:
        alpha2, alpha3 = constants
        if p_value is None:
            return ProjectivePoint.infinity()
        return ProjectivePoint(p_value - alpha2 / 3, alpha3)
    root, d1, d2 = constants
    if p_value is None:
        return ProjectivePoint.finite(root)
    den = p_value - d2 / 6
    return ProjectivePoint(root * den + d1, den)


def _wp_or_pole(z, lattice: LatticeContext):
    try:
        return wp(z, lattice)
    except PoleProximityError:
        return None


def curve_residual(point: CurvePoint, homogeneous: HomogeneousKernel):
    """|Kbar(x, y)| / (|x|^2 |y|^2 sum|c_ij|), scale-free."""
    x = point.x.normalized()
    y = point.y.normalized()
    value = homogeneous.evaluate(x.p0, x.p1, y.p0, y.p1)
    return abs(value) / homogeneous.abs_coefficient_sum()


@dataclass(frozen=True)
class CurveAnalytics:
    """
    Everything known about the curve of one elliptic model at its t.

    Evaluation methods run at precision_bits regardless of the caller's
    mpmath state.
    """
    model: WeightedModel
    config: AnalysisConfig
    kernel: KernelPolynomial
    homogeneous: HomogeneousKernel
    delta1: QuarticDiscriminant
    delta2: QuarticDiscriminant
    branch: BranchPoints
    periods: Periods
    lattice: LatticeContext
    uniformization: UniformizationData
    invariants: Tuple[object, object] = field(default=(None, None))

    @property
    def precision_bits(self) -> int:
        return self.config.precision_bits

    @property
    def omega1(self):
        return self.periods.omega1

    @property
    def omega2(self):
        return self.periods.omega2

    @property
    def omega3(self):
        return self.periods.omega3

    def x(self, omega) -> ProjectivePoint:
        data = self.uniformization
        with working_precision(self.precision_bits):
            return branch_map(_wp_or_pole(omega, self.lattice), data.x_at_infinity, data.x_constants)

    def y(self, omega) -> ProjectivePoint:
        data = self.uniformization
        with working_precision(self.precision_bits):
            shifted = mp.mpc(omega) - data.y_shift
            return branch_map(_wp_or_pole(shifted, self.lattice), data.y_at_infinity, data.y_constants)

    def point(self, omega) -> CurvePoint:
        return CurvePoint(self.x(omega), self.y(omega))

    def residual(self, point: CurvePoint):
        with working_precision(self.precision_bits):
            return curve_residual(point, self.homogeneous)

    def invariant_mismatch(self) -> float:
        """Relative gap between lattice (g2, g3) and the quartic's algebraic invariants."""
        g2, g3 = self.invariants
        if g2 is None:
            return 0.0
        with working_precision(self.precision_bits):
            gap2 = abs(self.lattice.g2 - g2) / max(mp.one, abs(g2))
            gap3 = abs(self.lattice.g3 - g3) / max(mp.one, abs(g3))
            return float(max(gap2, gap3))

    def to_dict(self) -> Dict[str, object]:
        data = {
            "branch_points": self.branch.to_dict(),
            "periods": self.periods.to_dict(),
            "lattice": self.lattice.to_dict(),
            "uniformization": self.uniformization.to_dict(),
            "invariant_mismatch": self.invariant_mismatch(),
        }
        return data


def uniformize(omega, analytics: CurveAnalytics) -> CurvePoint:
    """Lambda(omega) = (x(omega), y(omega))."""
    return analytics.point(omega)


def _other_root(a, b, c, root: ProjectivePoint) -> ProjectivePoint:
    """
    Second root of a z0^2 + b z0 z1 + c z1^2 given one root [r0 : r1].

    Uses the product of roots (c/a) when r0 dominates and their sum (-b/a)
    when r1 dominates; both divide by a component of modulus >= 1/sqrt(2).
    """
    r = root.normalized()
    if abs(r.p1) >= abs(r.p0):
        v = a / r.p1
        u = (-b - r.p0 * v) / r.p1
    else:
        u = c / r.p0
        v = (-b - r.p1 * u) / r.p0
    other = ProjectivePoint(u, v)
    if other.norm == 0:
        raise NumericError("curve", "quadratic vanishes identically over this point")
    return other


def _check_on_curve(point: CurvePoint, analytics: CurveAnalytics, tolerance: float):
    residual = analytics.residual(point)
    if residual > tolerance:
        raise NumericError("curve", f"point too far off-curve (residual {float(residual):.2e})")


def involution1(point: CurvePoint, analytics: CurveAnalytics, off_curve_tolerance: float = 1e-6) -> CurvePoint:
    """i1: keep x, swap the two y-roots of Kbar(x, .) = 0."""
    with working_precision(analytics.precision_bits):
        _check_on_curve(point, analytics, off_curve_tolerance)
        x = point.x.normalized()
        a, b, c = analytics.homogeneous.y_quadratic(x.p0, x.p1)
        return CurvePoint(point.x, _other_root(a, b, c, point.y))


def involution2(point: CurvePoint, analytics: CurveAnalytics, off_curve_tolerance: float = 1e-6) -> CurvePoint:
    """i2: keep y, swap the two x-roots of Kbar(., y) = 0."""
    with working_precision(analytics.precision_bits):
        _check_on_curve(point, analytics, off_curve_tolerance)
        y = point.y.normalized()
        a, b, c = analytics.homogeneous.x_quadratic(y.p0, y.p1)
        return CurvePoint(_other_root(a, b, c, point.x), point.y)


def sigma(point: CurvePoint, analytics: CurveAnalytics, off_curve_tolerance: float = 1e-6) -> CurvePoint:
    """QRT map sigma = i2 o i1."""
    return involution2(involution1(point, analytics, off_curve_tolerance), analytics, off_curve_tolerance)


def _probe_omegas(per: Periods, count: int = 4):
    return [(mp.mpf(21 + 13 * k) / 100) * per.omega2 + (mp.mpf(17 + 11 * k) / 100) * per.omega1
            for k in range(count)]


def uniformization_data(homogeneous: HomogeneousKernel, delta1: QuarticDiscriminant,
                        delta2: QuarticDiscriminant, branch: BranchPoints, per: Periods,
                        lattice: LatticeContext, tolerance: float = 1e-8) -> UniformizationData:
    """
    Formula constants plus the y-offset s.

    s is taken among omega3/2 + {0, omega1/2, omega2/2, (omega1+omega2)/2},
    the candidate with the smallest curve residual at fixed probe points.

    Raises:
        NumericError: no candidate satisfies the curve equation to tolerance
    """
    x_inf, x_consts = _formula_constants(delta1, branch.a[3])
    y_inf, y_consts = _formula_constants(delta2, branch.b[3])

    half = per.omega3 / 2
    candidates = [half, half + per.omega1 / 2, half + per.omega2 / 2, half + (per.omega1 + per.omega2) / 2]
    probes = _probe_omegas(per)

    best = None
    for s in candidates:
        s = mp.mpc(s)
        worst = mp.zero
        for omega in probes:
            x = branch_map(_wp_or_pole(omega, lattice), x_inf, x_consts)
            y = branch_map(_wp_or_pole(omega - s, lattice), y_inf, y_consts)
            worst = max(worst, curve_residual(CurvePoint(x, y), homogeneous))
        if best is None or worst < best[0]:
            best = (worst, s)

    if best[0] > tolerance:
        raise NumericError("curve", f"no y-offset reproduces the curve (best residual {float(best[0]):.2e})")
    return UniformizationData(x_at_infinity=x_inf, y_at_infinity=y_inf,
                              x_constants=x_consts, y_constants=y_consts, y_shift=best[1])


def analyze_curve(model: WeightedModel, config: Optional[AnalysisConfig] = None) -> CurveAnalytics:
    """
    Branch points, periods, omega3, lattice and uniformization for a model.

    Raises:
        DegenerateModelError: model is degenerate or its curve has genus 0
        NumericError: any numeric stage failing its tolerance
    """
    config = config or AnalysisConfig()
    degeneracy = degeneracy_test(model)
    if degeneracy.verdict:
        raise DegenerateModelError("curve", f"model is degenerate ({degeneracy.matched_case.value})")
    genus: GenusReport = classify_model_genus(model)
    if not genus.is_elliptic:
        raise DegenerateModelError("curve", f"kernel curve is not elliptic ({genus.classification.value})")

    with working_precision(config.precision_bits):
        kernel = build_kernel(model)
        homogeneous = homogenize(kernel)
        delta1 = discriminant(kernel, Axis.X)
        delta2 = discriminant(kernel, Axis.Y)
        branch = branch_points(delta1, delta2, config.root_tolerance)
        per = periods(delta1, branch, config)
        per = omega3(homogeneous, delta1, branch, per, config)
        lattice = lattice_context(per.omega1, per.omega2)
        data = uniformization_data(homogeneous, delta1, delta2, branch, per, lattice,
                                   config.uniformization_tolerance)
        a4 = branch.a[3]
        invariants = kernel_curve_invariants(delta1, None if a4.is_infinite() else mp.re(a4.value))
        invariants = tuple(to_mpf(v) if not isinstance(v, mp.mpf) else v for v in invariants)

    return CurveAnalytics(model=model, config=config, kernel=kernel, homogeneous=homogeneous,
                          delta1=delta1, delta2=delta2, branch=branch, periods=per,
                          lattice=lattice, uniformization=data, invariants=invariants)
