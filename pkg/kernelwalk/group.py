"""
Finiteness of the group of the walk at the model's t.

sigma acts on the uniformized curve as omega -> omega + omega3, so it has
finite order l exactly when l * omega3 lies in the lattice, i.e. when
omega3/omega2 = k/l. The ratio is reconstructed with continued fractions and
confirmed independently by iterating sigma on curve points.
"""

import sys
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np
from mpmath import mp

from .config import AnalysisConfig, working_precision
from .curve import CurvePoint, ProjectivePoint
from .errors import GroupInconsistencyError, NumericError
from .model import WeightedModel
from .uniformization import CurveAnalytics, analyze_curve, sigma

GROUP_CAVEAT = (
    "verdict concerns the group at this value of t; for a denumerable set of t "
    "it can be finite while the generic group is infinite"
)


class GroupVerdict(Enum):
    """Outcome of the finiteness test."""
    FINITE = "finite"
    INFINITE_PRESUMED = "infinite-presumed"


@dataclass(frozen=True)
class GroupReport:
    """
    Group verdict with the evidence behind it.

    For FINITE, k/l = omega3/omega2 in lowest terms, sigma has order l and
    the group generated by the two involutions has order 2l.
    """
    verdict: GroupVerdict
    ratio: float
    residual: float
    bound_checked: int
    probe_bound: int
    k: Optional[int] = None
    ell: Optional[int] = None
    first_return: Optional[int] = None
    precision_bits: Optional[int] = None   # set when the checks were rerun at higher precision
    caveat: str = GROUP_CAVEAT

    @property
    def is_finite(self) -> bool:
        return self.verdict == GroupVerdict.FINITE

    @property
    def order_sigma(self) -> Optional[int]:
        return self.ell

    @property
    def order_group(self) -> Optional[int]:
        return 2 * self.ell if self.ell is not None else None

    def to_dict(self) -> Dict[str, object]:
        return {
            "verdict": self.verdict.value,
            "k": self.k,
            "ell": self.ell,
            "order_sigma": self.order_sigma,
            "order_group": self.order_group,
            "ratio": self.ratio,
            "residual": self.residual,
            "bound_checked": self.bound_checked,
            "probe_bound": self.probe_bound,
            "first_return": self.first_return,
            "precision_bits": self.precision_bits,
            "caveat": self.caveat,
        }

    def __str__(self) -> str:
        if self.is_finite:
            return f"Finite(k={self.k}, l={self.ell}, order_group={self.order_group})"
        return f"InfinitePresumed(bound {self.bound_checked})"


def continued_fraction(value, terms: int) -> List[int]:
    """First partial quotients of a real number."""
    number = mp.mpf(value)
    seq: List[int] = []
    for _ in range(terms):
        a = mp.floor(number)
        seq.append(int(a))
        frac = number - a
        if mp.almosteq(frac, 0):
            break
        number = mp.fdiv(1, frac)
    return seq


def convergents(value, max_denominator: int) -> Iterator[Tuple[int, int]]:
    """Convergents h/k of value with k <= max_denominator, in order."""
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for a in continued_fraction(value, 4 * max_denominator.bit_length() + 8):
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if k > max_denominator:
            return
        yield h, k


def reconstruct_rational(ratio, max_denominator: int = 200,
                         tolerance: float = 1e-9) -> Optional[Tuple[int, int]]:
    """
    Simplest convergent k/l of ratio with l <= max_denominator and |ratio - k/l| < tolerance.

    Returns:
        (k, l) in lowest terms, or None
    """
    ratio = mp.mpf(ratio)
    if not 0 < ratio < 1:
        return None
    for h, k in convergents(ratio, max_denominator):
        if h > 0 and abs(ratio - mp.mpf(h) / k) < tolerance:
            return h, k
    return None


def _best_gap(ratio, max_denominator: int) -> float:
    gaps = [abs(ratio - mp.mpf(h) / k) for h, k in convergents(ratio, max_denominator) if k > 0]
    return float(min(gaps)) if gaps else float(ratio)


def sample_curve_points(analytics: CurveAnalytics, count: int, seed: int) -> List[CurvePoint]:
    """Lambda(omega) at seeded omega inside the fundamental parallelogram."""
    rng = np.random.default_rng(seed)
    points = []
    with working_precision(analytics.precision_bits):
        for a, b in rng.uniform(0.05, 0.95, size=(count, 2)):
            omega = mp.mpf(float(a)) * analytics.omega2 + mp.mpf(float(b)) * analytics.omega1
            points.append(analytics.point(omega))
    return points


def confirm_order(ell: int, analytics: CurveAnalytics, config: Optional[AnalysisConfig] = None,
                  k: Optional[int] = None) -> bool:
    """
    Check that sigma has order dividing l, two independent ways.

    The lattice check asks |l omega3 - k omega2| < tol * omega2; the orbit
    check asks sigma^l(P) = P for orbit_samples seeded curve points.

    Raises:
        GroupInconsistencyError: the two checks disagree
    """
    config = config or analytics.config
    with working_precision(analytics.precision_bits):
        w2, w3 = analytics.omega2, analytics.omega3
        if k is None:
            k = int(mp.nint(ell * w3 / w2))
        lattice_ok = abs(ell * w3 - k * w2) < config.reconstruction_tolerance * w2

        orbit_ok = True
        for start in sample_curve_points(analytics, config.orbit_samples, config.seed):
            point = start
            for _ in range(ell):
                point = sigma(point, analytics)
            if point.distance(start) >= config.orbit_tolerance:
                orbit_ok = False
                break

    if lattice_ok != orbit_ok:
        raise GroupInconsistencyError(
            "group", f"lattice check says {lattice_ok} but orbit check says {orbit_ok} for l={ell}"
        )
    return lattice_ok


def reproject(point: CurvePoint, analytics: CurveAnalytics) -> CurvePoint:
    """
    Nearest curve point with the same x: the y-root closest to point.y.

    Raises:
        NumericError: x has no finite quadratic over it
    """
    x = point.x.normalized()
    a, b, c = analytics.homogeneous.y_quadratic(x.p0, x.p1)
    root = mp.sqrt(b * b - 4 * a * c)
    if abs(a) >= abs(c):
        candidates = [ProjectivePoint(-b + root, 2 * a), ProjectivePoint(-b - root, 2 * a)]
    else:
        candidates = [ProjectivePoint(2 * c, -b - root), ProjectivePoint(2 * c, -b + root)]
    candidates = [p for p in candidates if p.norm > 0]
    if not candidates:
        raise NumericError("group", "re-projection failed: degenerate fibre")
    y = min(candidates, key=lambda p: p.chordal_distance(point.y))
    return CurvePoint(point.x, y)


def orbit_probe(point: CurvePoint, analytics: CurveAnalytics, bound: int,
                tolerance: float = 1e-8, drift_tolerance: float = 1e-6) -> Optional[int]:
    """
    Smallest n <= bound with sigma^n(point) within tolerance of point.

    Iterates that drift off the curve are re-projected onto it.

    Raises:
        NumericError: re-projection cannot bring an iterate back within drift_tolerance
    """
    if not 1 <= bound <= 10 ** 6:
        raise NumericError("group", f"probe bound {bound} outside [1, 1e6]")
    with working_precision(analytics.precision_bits):
        current = point
        for n in range(1, bound + 1):
            current = sigma(current, analytics, off_curve_tolerance=drift_tolerance)
            if analytics.residual(current) > tolerance / 100:
                current = reproject(current, analytics)
                if analytics.residual(current) > drift_tolerance:
                    raise NumericError("group", f"orbit drifted off the curve at step {n}")
            if current.distance(point) < tolerance:
                return n
    return None


def escalated_config(config: AnalysisConfig) -> AnalysisConfig:
    """Twice the bits, and never below the standard preset's bits or quadrature degree."""
    standard = AnalysisConfig.standard()
    return replace(config,
                   precision_bits=max(2 * config.precision_bits, standard.precision_bits),
                   quad_degree=max(config.quad_degree, standard.quad_degree))


def group_report(analytics: CurveAnalytics, config: Optional[AnalysisConfig] = None) -> GroupReport:
    """
    Reconstruction, lattice/orbit confirmation and a direct orbit probe.

    FINITE needs all three to agree; without a qualifying fraction the
    verdict is INFINITE_PRESUMED with the denominator bound explored.

    When the checks disagree the curve is recomputed once at
    escalated_config(config); a disagreement there is final.

    Raises:
        GroupInconsistencyError: the checks still disagree after escalation
    """
    config = config or analytics.config
    try:
        return _decide(analytics, config)
    except GroupInconsistencyError as e:
        retry = escalated_config(config)
        print(f"[GROUP] {e}; retrying at {retry.precision_bits} bits", file=sys.stderr)
    report = _decide(analyze_curve(analytics.model, retry), retry)
    return replace(report, precision_bits=retry.precision_bits)


def _decide(analytics: CurveAnalytics, config: AnalysisConfig) -> GroupReport:
    with working_precision(analytics.precision_bits):
        ratio = analytics.periods.ratio
        found = reconstruct_rational(ratio, config.max_denominator, config.reconstruction_tolerance)
        start = sample_curve_points(analytics, 1, config.seed + 1)[0]
        first = orbit_probe(start, analytics, config.probe_bound, config.orbit_tolerance)

        if found is not None:
            k, ell = found
            residual = float(abs(ell * analytics.omega3 - k * analytics.omega2) / analytics.omega2)
            if confirm_order(ell, analytics, config, k):
                if first != ell and not (first is None and config.probe_bound < ell):
                    raise GroupInconsistencyError(
                        "group", f"omega3/omega2 = {k}/{ell} but the orbit returns after {first} steps"
                    )
                return GroupReport(verdict=GroupVerdict.FINITE, ratio=float(ratio), residual=residual,
                                   bound_checked=config.max_denominator, probe_bound=config.probe_bound,
                                   k=k, ell=ell, first_return=first)

        if first is not None and first <= config.max_denominator:
            raise GroupInconsistencyError(
                "group", f"orbit returns after {first} steps but omega3/omega2 has no such denominator"
            )
        return GroupReport(verdict=GroupVerdict.INFINITE_PRESUMED, ratio=float(ratio),
                           residual=_best_gap(ratio, config.max_denominator),
                           bound_checked=config.max_denominator, probe_bound=config.probe_bound,
                           first_return=first)


@dataclass(frozen=True)
class StabilityReport:
    """Group verdicts at the configured and the doubled precision."""
    base: GroupReport
    doubled: GroupReport

    @property
    def stable(self) -> bool:
        if self.base.is_finite:
            return self.doubled.is_finite and (self.base.k, self.base.ell) == (self.doubled.k, self.doubled.ell)
        if self.doubled.is_finite:
            return self.doubled.ell > self.base.bound_checked
        return True

    def to_dict(self) -> Dict[str, object]:
        return {"stable": self.stable, "base": str(self.base), "doubled": str(self.doubled)}


def precision_stability(model: WeightedModel, config: Optional[AnalysisConfig] = None) -> StabilityReport:
    """Rerun the curve and group stages at twice the working precision."""
    config = config or AnalysisConfig()
    base = group_report(analyze_curve(model, config), config)
    doubled_config = config.with_precision(2 * config.precision_bits)
    doubled = group_report(analyze_curve(model, doubled_config), doubled_config)
    return StabilityReport(base=base, doubled=doubled)
