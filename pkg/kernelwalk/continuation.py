"""
Meromorphic continuation of r_x and r_y over the omega-plane.

On the base domain (curve points with |x| < 1 or |y| < 1, lifted once) the
functions come from the generating series:

    x-band: r_x = F1(x),                   r_y = -F1(x) + K00 Q00 - xy
    y-band: r_y = F2(y),                   r_x = -F2(y) + K00 Q00 - xy

Elsewhere they follow from omega1-periodicity and

    r_x(omega + omega3) = r_x(omega) + b_x(omega),  b_x = y(-omega)(x(omega) - x(omega + omega3))
    r_y(omega + omega3) = r_y(omega) + b_y(omega),  b_y = x(omega)(y(omega) - y(-omega))
"""

from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from mpmath import mp

from .config import ContinuationConfig, working_precision
from .curve import ProjectivePoint
from .errors import NumericError, PoleProximityError
from .series import SeriesTable, count_walks, origin_term, section_series
from .uniformization import CurveAnalytics
from .weierstrass import inverse_wp


@dataclass(frozen=True)
class BaseDomainSample:
    """A base-domain point: omega, its image and which band(s) it lies in."""
    omega: complex
    x: complex
    y: complex
    condition: str   # "x", "y" or "both"

    def to_dict(self) -> Dict[str, object]:
        return {
            "omega": [self.omega.real, self.omega.imag],
            "x": [self.x.real, self.x.imag],
            "y": [self.y.real, self.y.imag],
            "condition": self.condition,
        }


@dataclass(frozen=True)
class PoleCandidate:
    """Point of the pole superset; not every candidate is a genuine pole."""
    omega: complex
    source: str      # "x", "y", "b_x" or "b_y"
    label: str = "candidate"


def _affine(point: ProjectivePoint, what: str) -> complex:
    if point.is_infinite(1e-12):
        raise PoleProximityError("continuation", f"{what} has a pole here")
    return complex(mp.mpc(point.value))


class ContinuationEngine:
    """
    Evaluator for the continued r_x, r_y of one model.

    Curve quantities come from analytics; series sections are truncated at
    config.truncation and evaluated in double precision.
    """

    def __init__(self, analytics: CurveAnalytics, config: Optional[ContinuationConfig] = None,
                 table: Optional[SeriesTable] = None):
        self.analytics = analytics
        self.model = analytics.model
        self.config = config or analytics.config.continuation
        self.config.validate_for(self.model.t)
        self.table = table if table is not None else count_walks(self.model, self.config.truncation)
        self.F1 = section_series(self.table, self.model, "x")
        self.F2 = section_series(self.table, self.model, "y")
        self.origin = origin_term(self.table, self.model)

        with working_precision(analytics.precision_bits):
            omega1 = complex(mp.mpc(analytics.omega1))
            self.omega1 = omega1 if omega1.imag > 0 else -omega1
            self.omega2 = float(analytics.omega2)
            self.omega3 = float(analytics.omega3)
            self.y_center = self._y_band_center()
        self._pole_cache: Optional[List[complex]] = None

    # Curve maps ------------------------------------------------------------

    def x(self, omega: complex) -> complex:
        return _affine(self.analytics.x(omega), "x")

    def y(self, omega: complex) -> complex:
        return _affine(self.analytics.y(omega), "y")

    def reduce(self, omega: complex) -> complex:
        """Representative modulo omega1 with |Im| <= Im(omega1)/2."""
        omega = complex(omega)
        n = round(omega.imag / self.omega1.imag)
        return omega - n * self.omega1

    def _y_band_center(self) -> float:
        """
        Real part in [0, omega2) of the point where y = b1.

        y - b1 has a double zero at s + (a half-period), so the centre is
        read off the half-period whose image is closest to b1.
        """
        b1 = self.analytics.branch.b[0]
        shift = self.analytics.uniformization.y_shift
        w1, w2 = self.analytics.omega1, self.analytics.omega2
        best = None
        for u in (w2 / 2, w1 / 2, (w1 + w2) / 2, 0):
            omega = shift + u
            gap = self.analytics.y(omega).chordal_distance(b1)
            if best is None or gap < best[0]:
                best = (gap, omega)
        return float(mp.re(best[1])) % self.omega2

    # Base domain -----------------------------------------------------------

    def in_x_band(self, omega: complex) -> bool:
        if not 0 < omega.real < self.omega2:
            return False
        try:
            return abs(self.x(omega)) < 1 - self.config.base_margin
        except PoleProximityError:
            return False

    def in_y_band(self, omega: complex) -> bool:
        if not abs(omega.real - self.y_center) < self.omega2 / 2:
            return False
        try:
            return abs(self.y(omega)) < 1 - self.config.base_margin
        except PoleProximityError:
            return False

    def base_condition(self, omega: complex) -> Optional[str]:
        in_x = self.in_x_band(omega)
        in_y = self.in_y_band(omega)
        if in_x and in_y:
            return "both"
        if in_x:
            return "x"
        if in_y:
            return "y"
        return None

    def rx_base(self, omega: complex, reduce_period: bool = True) -> complex:
        """
        r_x on the base domain.

        With reduce_period False omega is used as given, not reduced mod omega1.

        Raises:
            NumericError: omega outside the base domain
        """
        if reduce_period:
            omega = self.reduce(omega)
        if self.in_x_band(omega):
            return self.F1(self.x(omega))[0]
        if self.in_y_band(omega):
            x, y = self.x(omega), self.y(omega)
            return -self.F2(y)[0] + self.origin - x * y
        raise NumericError("continuation", f"omega = {omega:.6g} is outside the base domain")

    def ry_base(self, omega: complex, reduce_period: bool = True) -> complex:
        """r_y on the base domain."""
        if reduce_period:
            omega = self.reduce(omega)
        if self.in_y_band(omega):
            return self.F2(self.y(omega))[0]
        if self.in_x_band(omega):
            x, y = self.x(omega), self.y(omega)
            return -self.F1(x)[0] + self.origin - x * y
        raise NumericError("continuation", f"omega = {omega:.6g} is outside the base domain")

    # Shift terms -----------------------------------------------------------

    def bx(self, omega: complex) -> complex:
        """b_x(omega) = y(-omega) (x(omega) - x(omega + omega3))."""
        return self.y(-omega) * (self.x(omega) - self.x(omega + self.omega3))

    def by(self, omega: complex) -> complex:
        """b_y(omega) = x(omega) (y(omega) - y(-omega))."""
        return self.x(omega) * (self.y(omega) - self.y(-omega))

    # Continuation ----------------------------------------------------------

    def _shift_order(self) -> Iterator[int]:
        yield 0
        for n in range(1, self.config.shift_budget + 1):
            yield n
            yield -n

    def find_shift(self, omega: complex, reduce_period: bool = True) -> int:
        """
        Smallest |n| with omega - n*omega3 in the base domain.

        Raises:
            NumericError: nothing within the shift budget
        """
        if reduce_period:
            omega = self.reduce(omega)
        for n in self._shift_order():
            candidate = omega - n * self.omega3
            if reduce_period:
                candidate = self.reduce(candidate)
            if self.base_condition(candidate) is not None:
                return n
        raise NumericError("continuation",
                           f"no base-domain representative within {self.config.shift_budget} shifts of omega3")

    def _telescope(self, omega: complex, n: int, base, step) -> complex:
        if n >= 0:
            value = base(omega - n * self.omega3)
            for m in range(1, n + 1):
                value += step(omega - m * self.omega3)
            return value
        value = base(omega - n * self.omega3)
        for m in range(0, -n):
            value -= step(omega + m * self.omega3)
        return value

    def rx_via_shift(self, omega: complex, n: int, reduce_period: bool = True) -> complex:
        """r_x(omega) through the explicit path omega - n*omega3 (which must be a base point)."""
        if reduce_period:
            omega = self.reduce(omega)
        return self._telescope(omega, n, lambda w: self.rx_base(w, reduce_period), self.bx)

    def ry_via_shift(self, omega: complex, n: int, reduce_period: bool = True) -> complex:
        if reduce_period:
            omega = self.reduce(omega)
        return self._telescope(omega, n, lambda w: self.ry_base(w, reduce_period), self.by)

    def _check_poles(self, omega: complex):
        for pole in self.pole_set():
            d = omega - pole
            m = round(d.real / self.omega3)
            for n in (m - 1, m, m + 1):
                if abs(n) > self.config.shift_budget:
                    continue
                if abs(self.reduce(d - n * self.omega3)) < self.config.pole_threshold:
                    raise PoleProximityError(
                        "continuation", f"omega = {omega:.6g} lies within {self.config.pole_threshold:g} of a predicted pole"
                    )

    def continue_rx(self, omega: complex, reduce_period: bool = True) -> complex:
        """
        r_x at any omega away from the predicted poles.

        With reduce_period False no argument on the path to the base domain
        is reduced modulo omega1.

        Raises:
            PoleProximityError: omega near a predicted pole
            NumericError: no base representative within the shift budget
        """
        omega = complex(omega)
        if reduce_period:
            omega = self.reduce(omega)
        self._check_poles(omega)
        return self.rx_via_shift(omega, self.find_shift(omega, reduce_period), reduce_period)

    def continue_ry(self, omega: complex, reduce_period: bool = True) -> complex:
        """r_y at any omega away from the predicted poles."""
        omega = complex(omega)
        if reduce_period:
            omega = self.reduce(omega)
        self._check_poles(omega)
        return self.ry_via_shift(omega, self.find_shift(omega, reduce_period), reduce_period)

    def identity_check(self, omega: complex) -> float:
        """|r_x + r_y - K(0,0)Q(0,0) + xy| at omega."""
        omega = self.reduce(complex(omega))
        value = self.continue_rx(omega) + self.continue_ry(omega) - self.origin + self.x(omega) * self.y(omega)
        return abs(value)

    def tail_bound(self) -> float:
        return self.config.tail_bound(self.model.t)

    # Poles -----------------------------------------------------------------

    def _roots_of_map(self, at_infinity: bool, constants) -> List[complex]:
        """omega (mod lattice, up to sign) where the x- or y-formula has a pole."""
        if at_infinity:
            return [0j]
        _, _, d2 = constants
        u = complex(mp.mpc(inverse_wp(d2 / 6, self.analytics.lattice)))
        return [u, -u]

    def base_poles(self) -> Tuple[List[complex], List[complex]]:
        """(x-poles in the y-band with |y| < 1, b_x poles mod lattice)."""
        data = self.analytics.uniformization
        shift = complex(mp.mpc(data.y_shift))
        with working_precision(self.analytics.precision_bits):
            x_poles = self._roots_of_map(data.x_at_infinity, data.x_constants)
            y_args = self._roots_of_map(data.y_at_infinity, data.y_constants)

        in_domain = []
        for u in x_poles:
            for k in (-1, 0, 1, 2):
                omega = self.reduce(u + k * self.omega2)
                if abs(omega.real - self.y_center) < self.omega2 / 2:
                    try:
                        if abs(self.y(omega)) < 1:
                            in_domain.append(omega)
                    except PoleProximityError:
                        pass

        y_poles = [shift + v for v in y_args]
        bx_poles = list(x_poles) + [u - self.omega3 for u in x_poles] + [-p for p in y_poles]
        return in_domain, bx_poles

    def pole_set(self) -> List[complex]:
        """Base pole representatives used for the proximity check."""
        if self._pole_cache is None:
            in_domain, bx_poles = self.base_poles()
            self._pole_cache = in_domain + [self.reduce(p) for p in bx_poles]
        return self._pole_cache

    def predicted_poles(self, window: Tuple[float, float, float, float],
                        include_bx: bool = True) -> List[PoleCandidate]:
        """
        Candidate poles of r_x inside window = (re_min, re_max, im_min, im_max).

        x-poles inside the base domain and b_x-poles are translated by
        n*omega3 (|n| <= shift budget) and by the lattice directions that
        leave them poles, then clipped to the window.
        """
        re_min, re_max, im_min, im_max = window
        in_domain, bx_poles = self.base_poles()
        w1 = self.omega1.imag
        found: List[PoleCandidate] = []

        def add(omega: complex, source: str):
            if re_min <= omega.real <= re_max and im_min <= omega.imag <= im_max:
                if all(abs(omega - c.omega) > 1e-9 for c in found):
                    found.append(PoleCandidate(omega, source))

        def vertical(omega: complex) -> Iterator[complex]:
            k_lo = int(np.ceil((im_min - omega.imag) / w1))
            k_hi = int(np.floor((im_max - omega.imag) / w1))
            for k in range(k_lo, k_hi + 1):
                yield omega + k * self.omega1

        budget = self.config.shift_budget
        for p in in_domain:
            for n in range(-budget, budget + 1):
                for omega in vertical(p + n * self.omega3):
                    add(omega, "x")
        if include_bx:
            for p in bx_poles:
                for n in range(-budget, budget + 1):
                    base = p + n * self.omega3
                    j_lo = int(np.ceil((re_min - base.real) / self.omega2))
                    j_hi = int(np.floor((re_max - base.real) / self.omega2))
                    for j in range(j_lo, j_hi + 1):
                        for omega in vertical(base + j * self.omega2):
                            add(omega, "b_x")
        return found

    # Sampling --------------------------------------------------------------

    def sample_base_domain(self, count: int, seed: int = 0, region: str = "both",
                           max_attempts: int = 20000) -> List[BaseDomainSample]:
        """
        Seeded base-domain points; region is "x", "y", "both" (overlap) or "any".

        Raises:
            NumericError: too few points found in max_attempts draws
        """
        rng = np.random.default_rng(seed)
        w1 = self.omega1.imag
        samples: List[BaseDomainSample] = []
        attempts = 0
        while len(samples) < count:
            attempts += 1
            if attempts > max_attempts:
                raise NumericError("continuation", f"found only {len(samples)} base points for region {region!r}")
            if region == "y":
                re = self.y_center + rng.uniform(-0.5, 0.5) * self.omega2
            else:
                re = rng.uniform(0.0, 1.0) * self.omega2
            omega = complex(re, rng.uniform(-0.5, 0.5) * w1)
            condition = self.base_condition(omega)
            if condition is None:
                continue
            if region == "both" and condition != "both":
                continue
            if region in ("x", "y") and condition not in (region, "both"):
                continue
            try:
                samples.append(BaseDomainSample(omega, self.x(omega), self.y(omega), condition))
            except PoleProximityError:
                continue
        return samples


def continuation_summary(engine: ContinuationEngine, samples: int = 50, seed: int = 0) -> Dict[str, object]:
    """
    Maximum residuals of the continuation checks at seeded overlap points.

    - identity: at the sample points and at their translates by omega3 and 2*omega2
    - omega1 periodicity of r_x and r_y, the translate evaluated without reduction
    - telescoping: r_x(w + omega3) - r_x(w) - b_x(w)
    """
    points = engine.sample_base_domain(samples, seed=seed, region="both")
    identity = periodicity = telescoping = 0.0
    skipped = 0
    for sample in points:
        w = sample.omega
        try:
            for probe in (w, w + engine.omega3, w + 2 * engine.omega2):
                identity = max(identity, engine.identity_check(probe))
            shifted = w + engine.omega1
            periodicity = max(periodicity,
                              abs(engine.continue_rx(shifted, reduce_period=False) - engine.continue_rx(w)),
                              abs(engine.continue_ry(shifted, reduce_period=False) - engine.continue_ry(w)))
            telescoping = max(telescoping,
                              abs(engine.continue_rx(w + engine.omega3) - engine.continue_rx(w) - engine.bx(w)))
        except PoleProximityError:
            skipped += 1
    return {
        "samples": len(points),
        "skipped_near_poles": skipped,
        "truncation": engine.config.truncation,
        "tail_bound": engine.tail_bound(),
        "identity_max": identity,
        "periodicity_max": periodicity,
        "telescoping_max": telescoping,
    }
