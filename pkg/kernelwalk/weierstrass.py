"""
Weierstrass p-function of the period lattice, evaluated through nome series.

For the lattice generated by omega1 and P = L * omega2, with tau = omega1/P,
q = exp(2 pi i tau) and u = exp(2 pi i z / P):

    p(z) = (2 pi i / P)^2 [1/12 + sum_n q^n u/(1 - q^n u)^2 - 2 sum_{m>=1} q^m/(1 - q^m)^2]

g2 and g3 come from the Eisenstein series E4, E6 in q. Arguments are reduced
into the fundamental parallelogram first, so every series term is bounded
by |q|^(m - 1/2).
"""

from dataclasses import dataclass
from typing import Tuple

from mpmath import mp

from .errors import NumericError, PoleProximityError


@dataclass(frozen=True)
class LatticeContext:
    """
    Lattice (omega1, L*omega2) with its nome and invariants.

    tau is normalized into the upper half-plane (omega1 flipped if needed).
    """
    omega1: object
    omega2: object
    multiplier: int
    tau: object
    q: object
    g2: object
    g3: object
    terms: int

    @property
    def real_period(self):
        """P = L * omega2."""
        return self.multiplier * self.omega2

    def to_dict(self):
        return {
            "multiplier": self.multiplier,
            "tau_im": float(mp.im(self.tau)),
            "nome": float(abs(self.q)),
            "g2": float(mp.re(self.g2)),
            "g3": float(mp.re(self.g3)),
        }


def _series_length(q) -> int:
    """Number of q-terms needed to reach the working precision."""
    aq = abs(q)
    if aq == 0:
        return 1
    return int(mp.ceil(mp.prec * mp.log(2) / -mp.log(aq))) + 2


def lattice_context(omega1, omega2, multiplier: int = 1) -> LatticeContext:
    """
    Build the p-function context for the lattice omega1*Z + (L*omega2)*Z.

    Raises:
        NumericError: |q| >= 1 (periods are collinear or corrupted)
    """
    if multiplier < 1:
        raise NumericError("curve", f"lattice multiplier must be >= 1 (got {multiplier})")
    omega1 = mp.mpc(omega1)
    period = multiplier * mp.mpf(mp.re(omega2))
    tau = omega1 / period
    if mp.im(tau) < 0:
        omega1, tau = -omega1, -tau
    q = mp.exp(2j * mp.pi * tau)
    if not abs(q) < 1:
        raise NumericError("curve", f"nome |q| = {mp.nstr(abs(q), 6)} is not below 1")

    terms = _series_length(q)
    e4 = mp.one
    e6 = mp.one
    for n in range(1, terms + 1):
        qn = q ** n
        e4 += 240 * n ** 3 * qn / (1 - qn)
        e6 -= 504 * n ** 5 * qn / (1 - qn)

    g2 = (4 * mp.pi ** 4 / 3) * e4 / period ** 4
    g3 = (8 * mp.pi ** 6 / 27) * e6 / period ** 6
    return LatticeContext(omega1=omega1, omega2=mp.mpf(mp.re(omega2)), multiplier=multiplier,
                          tau=tau, q=q, g2=g2, g3=g3, terms=terms)


def lattice_reduce(z, ctx: LatticeContext):
    """Representative of z modulo the lattice, centred on the origin."""
    z = mp.mpc(z)
    b = mp.nint(mp.im(z) / mp.im(ctx.omega1))
    z -= b * ctx.omega1
    a = mp.nint(mp.re(z) / ctx.real_period)
    return z - a * ctx.real_period


def _check_pole(z, ctx: LatticeContext, tolerance: float):
    if abs(z) < tolerance * ctx.real_period:
        raise PoleProximityError("curve", f"p evaluated within {tolerance:.0e} of a lattice point")


def wp(z, ctx: LatticeContext, pole_tolerance: float = 1e-12):
    """
    p(z) for the lattice of ctx.

    Raises:
        PoleProximityError: z within pole_tolerance * P of a lattice point
    """
    z = lattice_reduce(z, ctx)
    _check_pole(z, ctx, pole_tolerance)
    k = 2j * mp.pi / ctx.real_period
    u = mp.exp(k * z)
    total = mp.mpf(1) / 12 + u / (1 - u) ** 2
    qm = mp.one
    for _ in range(ctx.terms):
        qm *= ctx.q
        w1 = qm * u
        w2 = qm / u
        total += w1 / (1 - w1) ** 2 + w2 / (1 - w2) ** 2 - 2 * qm / (1 - qm) ** 2
    return k * k * total


def _g(w):
    return w * (1 + w) / (1 - w) ** 3


def wp_prime(z, ctx: LatticeContext, pole_tolerance: float = 1e-12):
    """p'(z), the derivative of wp term by term."""
    z = lattice_reduce(z, ctx)
    _check_pole(z, ctx, pole_tolerance)
    k = 2j * mp.pi / ctx.real_period
    u = mp.exp(k * z)
    total = _g(u)
    qm = mp.one
    for _ in range(ctx.terms):
        qm *= ctx.q
        total += _g(qm * u) - _g(qm / u)
    return k ** 3 * total


def weierstrass_roots(ctx: LatticeContext) -> Tuple[object, object, object]:
    """Roots e1, e2, e3 of 4p^3 - g2 p - g3."""
    roots = mp.polyroots([4, 0, -ctx.g2, -ctx.g3], maxsteps=200, extraprec=2 * mp.prec)
    return tuple(roots)


def ode_residual(z, ctx: LatticeContext):
    """|p'^2 - (4p^3 - g2 p - g3)| relative to |p'^2|."""
    p = wp(z, ctx)
    dp = wp_prime(z, ctx)
    lhs = dp * dp
    return abs(lhs - (4 * p ** 3 - ctx.g2 * p - ctx.g3)) / max(mp.one, abs(lhs))


def inverse_wp(value, ctx: LatticeContext, tolerance: float = 1e-10, max_newton: int = 30):
    """
    Some z with p(z) = value (the other solution is -z).

    Carlson's R_F gives int_value^inf dp / sqrt(4 prod (p - e_i)); Newton
    on p(z) - value removes branch ambiguities of the complex R_F.

    Raises:
        NumericError: Newton does not reach tolerance
    """
    if value == mp.inf:
        return mp.mpc(0)
    value = mp.mpc(value)
    e1, e2, e3 = weierstrass_roots(ctx)
    seeds = [mp.elliprf(value - e1, value - e2, value - e3)]
    # Fallback seeds spread over the parallelogram
    for a in (mp.mpf(1) / 4, mp.mpf(1) / 2):
        for b in (mp.mpf(1) / 4, mp.mpf(1) / 2):
            seeds.append(a * ctx.real_period + b * ctx.omega1)

    scale = max(mp.one, abs(value))
    for z in seeds:
        try:
            for _ in range(max_newton):
                delta = (wp(z, ctx) - value) / wp_prime(z, ctx)
                z -= delta
                if abs(delta) < mp.eps * 16 * ctx.real_period:
                    break
            if abs(wp(z, ctx) - value) <= tolerance * scale:
                return lattice_reduce(z, ctx)
        except (PoleProximityError, ZeroDivisionError):
            continue
    raise NumericError("curve", f"inverse p did not converge for value {mp.nstr(value, 8)}")
