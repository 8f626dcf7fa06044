"""
Real geometry of the kernel curve: projective points, branch points, periods.

Branch points are the real roots of the discriminants Delta_1, Delta_2,
isolated exactly over QQ and ordered along the cycle of P^1(R) that starts
at -1, runs up through +infinity and returns from -infinity to -1.

Periods are elliptic integrals of dx/sqrt|D_1(x)| over arcs of P^1(R).
Arcs are parametrized by the angle theta with x = tan(theta); the point
[1:0] sits at theta = pi/2 and needs no special handling. All functions
here compute at the caller's mpmath working precision.
"""

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import sympy as sp
from mpmath import mp

from .config import AnalysisConfig
from .errors import NumericError
from .kernel import HomogeneousKernel, QuarticDiscriminant, to_mpf


@dataclass(frozen=True)
class ProjectivePoint:
    """
    A point [p0 : p1] of the projective line.

    Components are mpf/mpc (or exact numbers); equality is up to scale,
    so compare with chordal_distance rather than ==.
    """
    p0: object
    p1: object

    @classmethod
    def finite(cls, value) -> 'ProjectivePoint':
        return cls(value, mp.one)

    @classmethod
    def infinity(cls) -> 'ProjectivePoint':
        return cls(mp.one, mp.zero)

    @property
    def norm(self):
        return mp.hypot(abs(self.p0), abs(self.p1))

    def is_infinite(self, tolerance: float = 0.0) -> bool:
        n = self.norm
        return n == 0 or abs(self.p1) <= tolerance * n

    @property
    def value(self):
        """Affine coordinate p0/p1 (mp.inf at [1:0])."""
        if self.p1 == 0:
            return mp.inf
        return self.p0 / self.p1

    def normalized(self) -> 'ProjectivePoint':
        """Representative with unit Euclidean norm."""
        n = self.norm
        if n == 0:
            raise NumericError("curve", "projective point [0:0]")
        return ProjectivePoint(self.p0 / n, self.p1 / n)

    def canonical(self, tolerance: float = 0.0) -> 'ProjectivePoint':
        """[z : 1] when finite, [1 : 0] at infinity."""
        if self.is_infinite(tolerance):
            return ProjectivePoint.infinity()
        return ProjectivePoint(self.p0 / self.p1, mp.one)

    def chordal_distance(self, other: 'ProjectivePoint'):
        """|p0 q1 - p1 q0| / (|p| |q|), a metric on P^1."""
        return abs(self.p0 * other.p1 - self.p1 * other.p0) / (self.norm * other.norm)

    def to_json(self):
        """Float for finite real points, "inf" for [1:0], [re, im] pairs otherwise."""
        if self.is_infinite(1e-30):
            return "inf"
        z = mp.mpc(self.value)
        if mp.im(z) == 0:
            return float(mp.re(z))
        return [float(mp.re(z)), float(mp.im(z))]

    def __str__(self) -> str:
        if self.is_infinite(1e-30):
            return "[1:0]"
        return mp.nstr(self.value, 12)


@dataclass(frozen=True)
class CurvePoint:
    """A point (x, y) of P^1 x P^1."""
    x: ProjectivePoint
    y: ProjectivePoint

    def distance(self, other: 'CurvePoint'):
        return max(self.x.chordal_distance(other.x), self.y.chordal_distance(other.y))

    def normalized(self) -> 'CurvePoint':
        return CurvePoint(self.x.normalized(), self.y.normalized())


def cycle_angle(point: ProjectivePoint):
    """
    Position on the real cycle starting at -1, in [-pi/4, 3pi/4).

    x = tan(theta); values below -1 are pushed past pi/2 so the cycle reads
    -1 -> 0 -> +inf = -inf -> -1.
    """
    if point.is_infinite():
        return mp.pi / 2
    r = mp.re(point.value)
    theta = mp.atan(r)
    if r < -1:
        theta += mp.pi
    return theta


@dataclass(frozen=True)
class BranchPoints:
    """
    a1..a4 (roots of Delta_1) and b1..b4 (roots of Delta_2) in cycle order.

    a_angles/b_angles are the matching cycle angles; error_radius bounds
    the distance of every finite branch point from an exact root.
    """
    a: Tuple[ProjectivePoint, ...]
    b: Tuple[ProjectivePoint, ...]
    a_angles: Tuple[object, ...]
    b_angles: Tuple[object, ...]
    error_radius: object

    @property
    def contour_note(self) -> str:
        """Description of the omega_2 contour a4 -> a1."""
        if self.a_angles[3] < mp.pi / 2:
            return "a4 -> +inf = -inf -> a1 (through [1:0] and -1)"
        return "a4 -> -1 -> a1 (finite, through -1)"

    def to_dict(self) -> Dict[str, object]:
        return {
            "a": [p.to_json() for p in self.a],
            "b": [p.to_json() for p in self.b],
            "error_radius": float(self.error_radius),
            "contour": self.contour_note,
        }


def _rational_to_mpf(value):
    r = sp.Rational(value)
    return to_mpf(Fraction(int(r.p), int(r.q)))


def isolate_branch_points(delta: QuarticDiscriminant,
                          tolerance: float = 1e-12) -> Tuple[Tuple[ProjectivePoint, ...], Tuple[object, ...], object]:
    """
    Real projective roots of a quartic discriminant, in cycle order.

    Roots are bracketed with sympy's exact real-root isolation over QQ and
    refined to width below both tolerance and the working precision.

    Returns:
        (points, angles, error_radius)

    Raises:
        NumericError: repeated roots or fewer than four real roots
    """
    poly = delta.as_poly()
    if poly.is_zero:
        raise NumericError("curve", "discriminant vanishes identically")

    eps = min(sp.Rational(tolerance), sp.Rational(1, 2 ** (mp.prec + 8)))
    intervals = poly.intervals(eps=eps)

    points: List[ProjectivePoint] = []
    radius = mp.mpf(0)
    for (lo, hi), multiplicity in intervals:
        if multiplicity > 1:
            raise NumericError("curve", f"repeated branch point near {float(lo):.6g}")
        lo_f = _rational_to_mpf(lo)
        hi_f = _rational_to_mpf(hi)
        mid = (lo_f + hi_f) / 2
        points.append(ProjectivePoint.finite(mid))
        # half the isolating interval plus the rounding of its midpoint
        half_width = _rational_to_mpf((hi - lo) / 2)
        radius = max(radius, half_width + abs(mid) * mp.eps)

    # [1:0] is a root iff the leading coefficient vanishes; simple iff the next does not
    if delta.values[4] == 0:
        if delta.values[3] == 0:
            raise NumericError("curve", "repeated branch point at [1:0]")
        points.append(ProjectivePoint.infinity())

    if len(points) != 4:
        raise NumericError("curve", f"fewer than four distinct real branch points (found {len(points)})")

    ordered = sorted(points, key=cycle_angle)
    return tuple(ordered), tuple(cycle_angle(p) for p in ordered), radius


def branch_points(delta1: QuarticDiscriminant, delta2: QuarticDiscriminant,
                  tolerance: float = 1e-12) -> BranchPoints:
    """Branch points of both projections of the kernel curve."""
    a, a_angles, a_radius = isolate_branch_points(delta1, tolerance)
    b, b_angles, b_radius = isolate_branch_points(delta2, tolerance)
    return BranchPoints(a=a, b=b, a_angles=a_angles, b_angles=b_angles,
                        error_radius=max(a_radius, b_radius))


@dataclass(frozen=True)
class Periods:
    """
    omega1 in i*R_{>0}, omega2 > 0 and, once computed, omega3 in (0, omega2).

    Errors are the step-halving differences of the quadratures.
    """
    omega1: object
    omega2: object
    omega1_error: float
    omega2_error: float
    omega3: Optional[object] = None
    omega3_error: Optional[float] = None

    @property
    def ratio(self):
        """omega3 / omega2."""
        if self.omega3 is None:
            raise NumericError("curve", "omega3 not computed")
        return self.omega3 / self.omega2

    def check(self):
        """Raise if the typing of the periods is violated."""
        if not (mp.re(self.omega1) == 0 and mp.im(self.omega1) > 0):
            raise NumericError("curve", f"omega1 = {self.omega1} is not in i*R_>0")
        if not self.omega2 > 0:
            raise NumericError("curve", f"omega2 = {self.omega2} is not positive")
        if self.omega3 is not None and not 0 < self.omega3 < self.omega2:
            raise NumericError("curve", f"omega3 = {self.omega3} outside (0, omega2)")

    def to_dict(self) -> Dict[str, object]:
        data = {
            "omega1": {"im": float(mp.im(self.omega1)), "error": float(self.omega1_error)},
            "omega2": {"value": float(self.omega2), "error": float(self.omega2_error)},
        }
        if self.omega3 is not None:
            data["omega3"] = {"value": float(self.omega3), "error": float(self.omega3_error)}
            data["ratio"] = float(self.ratio)
        return data


class FactoredQuartic:
    """
    |Delta(sin theta, cos theta)| = |lam| * prod |sin(theta - theta_i)|.

    The scale is fixed at theta = -pi/4 (x = -1), which is never a root.
    """

    def __init__(self, delta: QuarticDiscriminant, angles: Tuple[object, ...]):
        self.angles = angles
        ref = -mp.pi / 4
        product = mp.one
        for theta in angles:
            product *= mp.sin(ref - theta)
        self.scale = abs(delta.evaluate(mp.sin(ref), mp.cos(ref)) / product)

    def arc_integrand(self, start: int, end_theta, end_root: Optional[int]):
        """
        Integrand in phi for theta = theta_start + h sin^2(phi), phi in [0, pi/2].

        Distances to the endpoint roots are taken exactly (h sin^2, h cos^2)
        and divided out with sinc, which leaves a smooth integrand.
        """
        theta_a = self.angles[start]
        h = end_theta - theta_a

        def f(phi):
            s = mp.sin(phi)
            c = mp.cos(phi)
            theta = theta_a + h * s * s
            product = self.scale
            for i, theta_i in enumerate(self.angles):
                if i == start or i == end_root:
                    continue
                product *= abs(mp.sin(theta - theta_i))
            # dtheta = 2h s c dphi and |sin(h s^2)| = h s^2 |sinc(h s^2)|
            value = 2 * h / mp.sqrt(product * h * abs(mp.sinc(h * s * s)))
            if end_root is None:
                return value * c
            return value / mp.sqrt(h * abs(mp.sinc(h * c * c)))

        return f


def _quad(f, degree: int, tolerance: float, what: str) -> Tuple[object, float]:
    """
    tanh-sinh quadrature over [0, pi/2] with a step-halving check.

    Raises:
        NumericError: when two consecutive degrees differ by more than tolerance (relative)
    """
    fine, fine_err = mp.quad(f, [0, mp.pi / 2], method='tanh-sinh', maxdegree=degree, error=True)
    coarse = mp.quad(f, [0, mp.pi / 2], method='tanh-sinh', maxdegree=degree - 1)
    error = max(abs(fine - coarse), abs(fine_err))
    if not mp.isfinite(fine) or error > tolerance * abs(fine):
        raise NumericError("curve", f"quadrature for {what} did not converge (relative error {float(error / abs(fine)):.2e})")
    return fine, float(error)


def _check_arc_sign(delta: QuarticDiscriminant, lo, hi, positive: bool, what: str):
    mid = (lo + hi) / 2
    value = delta.evaluate(mp.sin(mid), mp.cos(mid))
    if (value > 0) != positive:
        raise NumericError("curve", f"discriminant has the wrong sign on the {what} contour")


def periods(delta1: QuarticDiscriminant, branch: BranchPoints,
            config: Optional[AnalysisConfig] = None) -> Periods:
    """
    omega1 = i * int_{a3}^{a4} dx/sqrt|D1|,  omega2 = int_{a4}^{a1} dx/sqrt(D1).

    The omega2 contour follows the cycle from a4 to a1 (through -1).

    Raises:
        NumericError: sign inconsistency of D1 on a contour, or non-convergence
    """
    config = config or AnalysisConfig()
    theta = branch.a_angles
    _check_arc_sign(delta1, theta[2], theta[3], False, "omega1")
    _check_arc_sign(delta1, theta[3], theta[0] + mp.pi, True, "omega2")

    quartic = FactoredQuartic(delta1, theta)
    i34, err34 = _quad(quartic.arc_integrand(2, theta[3], 3), config.quad_degree, config.quad_tolerance, "omega1")
    i41, err41 = _quad(quartic.arc_integrand(3, theta[0] + mp.pi, 0), config.quad_degree, config.quad_tolerance, "omega2")

    result = Periods(omega1=mp.mpc(0, i34), omega2=i41, omega1_error=err34, omega2_error=err41)
    result.check()
    return result


def _double_root_candidates(a, b, c) -> List[ProjectivePoint]:
    """Both roots of a x0^2 + b x0 x1 + c x1^2 (nearly a double root)."""
    disc = b * b - 4 * a * c
    root = mp.sqrt(disc) if disc > 0 else mp.zero
    if abs(a) >= abs(c):
        return [ProjectivePoint(-b + root, 2 * a), ProjectivePoint(-b - root, 2 * a)]
    return [ProjectivePoint(2 * c, -b - root), ProjectivePoint(2 * c, -b + root)]


def omega3(homogeneous: HomogeneousKernel, delta1: QuarticDiscriminant, branch: BranchPoints,
           base: Periods, config: Optional[AnalysisConfig] = None,
           coincidence_tolerance: float = 1e-6) -> Periods:
    """
    omega3 = int_{a4}^{X(b4)} dx/sqrt(D1) along the omega2 contour.

    X(b4) solves Kbar(X, b4) = 0; over the branch point b4 the two roots
    coincide, so candidates closer than coincidence_tolerance count once.

    Returns:
        base with omega3 filled in

    Raises:
        NumericError: no candidate on the contour, or two distinct ones
    """
    config = config or AnalysisConfig()
    b4 = branch.b[3].normalized()
    a, b, c = homogeneous.x_quadratic(b4.p0, b4.p1)
    candidates = _double_root_candidates(a, b, c)
    if candidates[0].chordal_distance(candidates[1]) < coincidence_tolerance:
        candidates = candidates[:1]

    theta = branch.a_angles
    lo, hi = theta[3], theta[0] + mp.pi
    qualifying = []
    for point in candidates:
        angle = cycle_angle(point)
        while angle <= lo:
            angle += mp.pi
        while angle > lo + mp.pi:
            angle -= mp.pi
        if lo < angle < hi:
            qualifying.append(angle)

    if not qualifying:
        raise NumericError("curve", "no omega3 candidate lies on the omega2 contour")
    if len(qualifying) > 1:
        raise NumericError("curve", "both omega3 candidates lie on the omega2 contour")

    quartic = FactoredQuartic(delta1, theta)
    value, error = _quad(quartic.arc_integrand(3, qualifying[0], None), config.quad_degree,
                         config.quad_tolerance, "omega3")
    result = replace(base, omega3=value, omega3_error=error)
    result.check()
    return result
