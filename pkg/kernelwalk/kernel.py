"""
Kernel polynomial algebra.

K(x,y;t) = xy(1 - t S(x,y)) = xy - t sum d_{i,j} x^(i+1) y^(j+1), its
bihomogeneous form Kbar, the quartic discriminants Delta_1 (y eliminated)
and Delta_2 (x eliminated), the degeneracy criterion with an independent
reducibility oracle, and the half-plane / genus classification.
"""

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Optional, Tuple

import sympy as sp
from mpmath import mp

from .errors import DegenerateModelError
from .model import Step, StepSet, WeightedModel, step_set

# A polynomial in t of degree <= 2: (c0, c1, c2)
TPoly = Tuple[Fraction, Fraction, Fraction]

_T = sp.Symbol("t")
_X = sp.Symbol("x")
_Y = sp.Symbol("y")


def _tpoly_eval(p: TPoly, t) -> object:
    return p[0] + p[1] * t + p[2] * t * t


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def to_mpf(value: Fraction):
    """Fraction -> mpf at the current working precision."""
    return mp.mpf(value.numerator) / value.denominator


def _lift(values, *probe):
    """Exact coefficients, or their mpf images when evaluating at mpmath numbers."""
    if _is_exact(*probe):
        return values
    return tuple(to_mpf(v) if isinstance(v, Fraction) else v for v in values)


@dataclass(frozen=True)
class KernelPolynomial:
    """
    K(x,y;t) as coefficients of x^a y^b (0 <= a, b <= 2), each c0 + c1 t.

    A_m(x) (m = -1, 0, 1) and B_m(y) are Laurent polynomials stored as
    {power: coefficient} with S = A_{-1}/y + A_0 + A_1 y = B_{-1}/x + B_0 + B_1 x.
    """
    model: WeightedModel
    coefficients: Tuple[Tuple[Tuple[Fraction, Fraction], ...], ...]

    @property
    def t(self) -> Fraction:
        return self.model.t

    def coefficient(self, a: int, b: int, t=None):
        """Coefficient of x^a y^b at t (model t by default)."""
        c0, c1 = self.coefficients[a][b]
        t = self.t if t is None else t
        return c0 + c1 * t

    def A(self, m: int) -> Dict[int, Fraction]:
        """A_m(x) = sum_i d_{i,m} x^i."""
        return {i: self.model.d(i, m) for i in (-1, 0, 1) if self.model.d(i, m) != 0}

    def B(self, m: int) -> Dict[int, Fraction]:
        """B_m(y) = sum_j d_{m,j} y^j."""
        return {j: self.model.d(m, j) for j in (-1, 0, 1) if self.model.d(m, j) != 0}

    def evaluate(self, x, y, t=None):
        """Numeric or exact evaluation of K(x,y;t)."""
        t = self.t if t is None else t
        total = 0
        for a in range(3):
            for b in range(3):
                c0, c1 = self.coefficients[a][b]
                if c0 or c1:
                    coeff, = _lift((c0 + c1 * t,), x, y)
                    total += coeff * x ** a * y ** b
        return total

    def as_poly(self, t: Optional[Fraction] = None) -> sp.Poly:
        """K at a rational t as a sympy Poly in x, y over QQ."""
        t = self.t if t is None else Fraction(t)
        expr = 0
        for a in range(3):
            for b in range(3):
                value = self.coefficient(a, b, t)
                if value:
                    expr += sp.Rational(value.numerator, value.denominator) * _X ** a * _Y ** b
        return sp.Poly(expr, _X, _Y, domain=sp.QQ)

    def origin_value(self, t=None):
        """K(0,0;t) = -t d_{-1,-1}."""
        return self.coefficient(0, 0, t)

    def __str__(self) -> str:
        expr = 0
        for a in range(3):
            for b in range(3):
                c0, c1 = self.coefficients[a][b]
                term = sp.Rational(c0.numerator, c0.denominator) + sp.Rational(c1.numerator, c1.denominator) * _T
                expr += term * _X ** a * _Y ** b
        return str(sp.expand(expr))


def build_kernel(model: WeightedModel) -> KernelPolynomial:
    """Exact coefficients of K = xy - t sum d_{i,j} x^(i+1) y^(j+1)."""
    coefficients = []
    for a in range(3):
        row = []
        for b in range(3):
            c0 = Fraction(1) if (a, b) == (1, 1) else Fraction(0)
            c1 = -model.d(a - 1, b - 1)
            row.append((c0, c1))
        coefficients.append(tuple(row))
    return KernelPolynomial(model=model, coefficients=tuple(coefficients))


@dataclass(frozen=True)
class HomogeneousKernel:
    """
    Kbar(x0,x1,y0,y1;t) = sum c[i][j] x0^i x1^(2-i) y0^j y1^(2-j).

    c[i][j] = (const, t-coefficient); Kbar(x,1,y,1) = K(x,y).
    """
    kernel: KernelPolynomial
    coefficients: Tuple[Tuple[Tuple[Fraction, Fraction], ...], ...]

    def specialize(self, t=None, *probe) -> Tuple[Tuple[object, ...], ...]:
        """3x3 coefficient matrix at t, lifted to mpf when probe values are not exact."""
        t = self.kernel.t if t is None else t
        return tuple(_lift(tuple(c0 + c1 * t for (c0, c1) in row), *probe) for row in self.coefficients)

    def evaluate(self, x0, x1, y0, y1, t=None):
        c = self.specialize(t, x0, x1, y0, y1)
        xs = (x1 * x1, x0 * x1, x0 * x0)
        ys = (y1 * y1, y0 * y1, y0 * y0)
        return sum(c[i][j] * xs[i] * ys[j] for i in range(3) for j in range(3))

    def y_quadratic(self, x0, x1, t=None):
        """(a, b, c) with Kbar = a y0^2 + b y0 y1 + c y1^2 at fixed [x0:x1]."""
        m = self.specialize(t, x0, x1)
        xs = (x1 * x1, x0 * x1, x0 * x0)
        return tuple(sum(m[i][j] * xs[i] for i in range(3)) for j in (2, 1, 0))

    def x_quadratic(self, y0, y1, t=None):
        """(a, b, c) with Kbar = a x0^2 + b x0 x1 + c x1^2 at fixed [y0:y1]."""
        m = self.specialize(t, y0, y1)
        ys = (y1 * y1, y0 * y1, y0 * y0)
        return tuple(sum(m[i][j] * ys[j] for j in range(3)) for i in (2, 1, 0))

    def abs_coefficient_sum(self, t=None) -> float:
        m = self.specialize(t)
        return float(sum(abs(v) for row in m for v in row))


def homogenize(kernel: KernelPolynomial) -> HomogeneousKernel:
    """Coefficient transcription of K into Kbar."""
    return HomogeneousKernel(kernel=kernel, coefficients=kernel.coefficients)


class Axis(Enum):
    """Which variable the discriminant keeps."""
    X = "x"   # Delta_1: y eliminated, quartic in (x0, x1)
    Y = "y"   # Delta_2: x eliminated, quartic in (y0, y1)


@dataclass(frozen=True)
class QuarticDiscriminant:
    """
    Delta(z0,z1) = sum coefficients[i](t) z0^i z1^(4-i).

    coefficients[i] is a polynomial in t of degree <= 2; values[i] is its
    specialization at the model's t.
    """
    axis: Axis
    coefficients: Tuple[TPoly, ...]
    values: Tuple[Fraction, ...]

    def evaluate(self, z0, z1):
        """Delta at a homogeneous point."""
        v = _lift(self.values, z0, z1)
        return sum(v[i] * z0 ** i * z1 ** (4 - i) for i in range(5))

    def value_at(self, z):
        """D(z) = Delta(z, 1) for finite z."""
        v = _lift(self.values, z)
        return sum(v[i] * z ** i for i in range(5))

    def derivative_at(self, z, order: int = 1):
        """d^order/dz^order of D(z) = Delta(z,1)."""
        v = _lift(self.values, z)
        total = 0
        for i in range(order, 5):
            falling = 1
            for r in range(order):
                falling *= (i - r)
            total += falling * v[i] * z ** (i - order)
        return total

    def coefficient_at(self, i: int, t) -> object:
        """alpha_i(t) (or beta_i) at an arbitrary t."""
        return _tpoly_eval(self.coefficients[i], t)

    def as_poly(self) -> sp.Poly:
        """Dehomogenized D(z) as a sympy Poly over QQ."""
        z = sp.Symbol("z")
        expr = sum(sp.Rational(v.numerator, v.denominator) * z ** i for i, v in enumerate(self.values))
        return sp.Poly(expr, z, domain=sp.QQ)


def discriminant(kernel: KernelPolynomial, axis: Axis) -> QuarticDiscriminant:
    """
    Discriminant of Kbar viewed as a quadratic in the eliminated variable.

    Raises:
        DegenerateModelError: when the eliminated degree is < 2
    """
    poly = kernel.as_poly()
    eliminated = _Y if axis == Axis.X else _X
    if poly.degree(eliminated) < 2:
        raise DegenerateModelError(
            "kernel", f"degree in {eliminated} is {poly.degree(eliminated)} < 2; discriminant undefined"
        )

    # Quadratic coefficients as expressions in the kept variable z and t
    z = _X if axis == Axis.X else _Y
    quad = {0: 0, 1: 0, 2: 0}
    for a in range(3):
        for b in range(3):
            c0, c1 = kernel.coefficients[a][b]
            if not (c0 or c1):
                continue
            coeff = sp.Rational(c0.numerator, c0.denominator) + sp.Rational(c1.numerator, c1.denominator) * _T
            kept, elim = (a, b) if axis == Axis.X else (b, a)
            quad[elim] += coeff * z ** kept
    delta = sp.Poly(sp.expand(quad[1] ** 2 - 4 * quad[2] * quad[0]), z, _T, domain=sp.QQ)

    coefficients = []
    for i in range(5):
        tp = [Fraction(0), Fraction(0), Fraction(0)]
        for (zi, ti), c in zip(delta.monoms(), delta.coeffs()):
            if zi == i:
                tp[ti] = Fraction(int(c.p), int(c.q))
        coefficients.append(tuple(tp))
    values = tuple(_tpoly_eval(c, kernel.t) for c in coefficients)
    return QuarticDiscriminant(axis=axis, coefficients=tuple(coefficients), values=values)


class DegeneracyCase(Enum):
    """Matched degeneracy pattern."""
    CASE1_I_MINUS = "case1(i=-1)"
    CASE1_I_PLUS = "case1(i=1)"
    CASE2_J_MINUS = "case2(j=-1)"
    CASE2_J_PLUS = "case2(j=1)"
    CASE3_DIAGONAL = "case3(diagonal)"
    CASE3_ANTIDIAGONAL = "case3(antidiagonal)"
    NONE = "none"


@dataclass(frozen=True)
class DegeneracyReport:
    """Degeneracy verdict with the matched case."""
    matched_case: DegeneracyCase

    @property
    def verdict(self) -> bool:
        return self.matched_case != DegeneracyCase.NONE


_DIAGONAL = frozenset({(-1, -1), (0, 0), (1, 1)})
_ANTIDIAGONAL = frozenset({(-1, 1), (0, 0), (1, -1)})


def degeneracy_test(model: WeightedModel) -> DegeneracyReport:
    """Weight-pattern criterion for degeneracy (t-independent)."""
    d = model.d
    for i, case in ((-1, DegeneracyCase.CASE1_I_MINUS), (1, DegeneracyCase.CASE1_I_PLUS)):
        if d(i, -1) == d(i, 0) == d(i, 1) == 0:
            return DegeneracyReport(case)
    for j, case in ((-1, DegeneracyCase.CASE2_J_MINUS), (1, DegeneracyCase.CASE2_J_PLUS)):
        if d(-1, j) == d(0, j) == d(1, j) == 0:
            return DegeneracyReport(case)
    support = step_set(model).steps
    if support <= _DIAGONAL:
        return DegeneracyReport(DegeneracyCase.CASE3_DIAGONAL)
    if support <= _ANTIDIAGONAL:
        return DegeneracyReport(DegeneracyCase.CASE3_ANTIDIAGONAL)
    return DegeneracyReport(DegeneracyCase.NONE)


def _is_square_over_C(poly: sp.Poly) -> bool:
    """A rational polynomial is a square over C iff every square-free multiplicity is even."""
    if poly.is_zero:
        return True
    _, factors = poly.sqf_list()
    return all(mult % 2 == 0 for _, mult in factors)


def degeneracy_oracle(kernel: KernelPolynomial, t: Fraction) -> bool:
    """
    Degeneracy from the definition: degree <= 1 in x or y, or K reducible over C.

    Factor shapes of a bidegree (2,2) polynomial are enumerated:
    a factor in x alone (nonconstant content in y), a factor in y alone,
    or two factors of bidegree (1,1), which happens iff the discriminant in
    y is a perfect square over C once the contents are trivial.
    """
    poly = kernel.as_poly(t)
    if poly.is_zero:
        return True
    if poly.degree(_X) <= 1 or poly.degree(_Y) <= 1:
        return True

    # Content with respect to y: gcd of the x-polynomial coefficients
    y_coeffs = [sp.Poly(poly.as_expr().coeff(_Y, b), _X, domain=sp.QQ) for b in range(3)]
    x_coeffs = [sp.Poly(poly.as_expr().coeff(_X, a), _Y, domain=sp.QQ) for a in range(3)]
    for coeffs in (y_coeffs, x_coeffs):
        g = None
        for c in coeffs:
            if c.is_zero:
                continue
            g = c if g is None else g.gcd(c)
        if g is not None and g.degree() >= 1:
            return True

    c, b, a = y_coeffs
    return _is_square_over_C(b ** 2 - 4 * a * c)


class HalfPlaneClass(Enum):
    """Genus classification."""
    ELLIPTIC = "elliptic"
    FAMILY1 = "genus0-family1"
    FAMILY2 = "genus0-family2"
    FAMILY3 = "genus0-family3"
    FAMILY4 = "genus0-family4"
    DEGENERATE_HALF_PLANE = "degenerate-half-plane"


@dataclass(frozen=True)
class GenusReport:
    """Classification with the witness normal when a half-plane contains the steps."""
    classification: HalfPlaneClass
    normal: Optional[Step] = None

    @property
    def is_elliptic(self) -> bool:
        return self.classification == HalfPlaneClass.ELLIPTIC


# Axis normals first: containment in an axis half-plane is the degenerate case
_NORMALS: Tuple[Tuple[Step, HalfPlaneClass], ...] = (
    ((1, 0), HalfPlaneClass.DEGENERATE_HALF_PLANE),
    ((-1, 0), HalfPlaneClass.DEGENERATE_HALF_PLANE),
    ((0, 1), HalfPlaneClass.DEGENERATE_HALF_PLANE),
    ((0, -1), HalfPlaneClass.DEGENERATE_HALF_PLANE),
    ((1, 1), HalfPlaneClass.FAMILY1),
    ((-1, 1), HalfPlaneClass.FAMILY2),
    ((-1, -1), HalfPlaneClass.FAMILY3),
    ((1, -1), HalfPlaneClass.FAMILY4),
)


def compass_normals() -> Tuple[Step, ...]:
    """The eight candidate normals."""
    return tuple(n for n, _ in _NORMALS)


def _contained(steps, normal: Step) -> bool:
    u, v = normal
    return all(u * i + v * j >= 0 for (i, j) in steps)


def genus_classify(steps: StepSet) -> GenusReport:
    """Elliptic iff no closed half-plane through the origin contains the steps."""
    nonzero = steps.nonzero()
    for normal, label in _NORMALS:
        if _contained(nonzero, normal):
            return GenusReport(label, normal)

    # Normals orthogonal to the steps themselves
    lookup = dict(_NORMALS)
    for (i, j) in sorted(nonzero):
        for normal in ((-j, i), (j, -i)):
            if normal != (0, 0) and _contained(nonzero, normal):
                return GenusReport(lookup[normal], normal)
    return GenusReport(HalfPlaneClass.ELLIPTIC)


def classify_model_genus(model: WeightedModel) -> GenusReport:
    """genus_classify on the model's step set."""
    return genus_classify(step_set(model))


def discriminant_value(delta: QuarticDiscriminant, x0, x1):
    """Exact (or numeric) Delta(x0, x1) at the model's t."""
    return delta.evaluate(x0, x1)


def kernel_curve_invariants(delta: QuarticDiscriminant, root=None) -> Tuple[object, object]:
    """
    Weierstrass invariants (g2, g3) of y^2 = D(x) sent to 4p^3 - g2 p - g3.

    With a finite root a of D, x = a + D'(a)/(p - D''(a)/6) gives
    D(x) dx^-2 proportional to the cubic p^3 - g2' p - g3', with g2 = 4 g2', g3 = 4 g3'.
    With root None the leading coefficient must vanish (root at infinity)
    and x = (p - alpha_2/3)/alpha_3 is used instead.

    Args:
        delta: Quartic discriminant
        root: Finite real root of D(x) = Delta(x,1), or None for [1:0]

    Returns:
        (g2, g3) in the arithmetic of root (mpf, Fraction, ...)
    """
    if root is None:
        a0, a1, a2, a3, a4 = delta.values
        if a4 != 0:
            raise DegenerateModelError("kernel", "[1:0] is not a root of the discriminant")
        g2p = a2 * a2 / 3 - a1 * a3
        g3p = -(2 * a2 ** 3 / 27 - a1 * a2 * a3 / 3 + a0 * a3 * a3)
        return 4 * g2p, 4 * g3p

    d1 = delta.derivative_at(root, 1)
    d3 = delta.derivative_at(root, 3)
    d4 = delta.derivative_at(root, 4)
    c = delta.derivative_at(root, 2) / 6
    g2p = 3 * c * c - d1 * d3 / 6
    g3p = -(2 * c ** 3 - c * d1 * d3 / 6 + d1 * d1 * d4 / 24)
    return 4 * g2p, 4 * g3p
