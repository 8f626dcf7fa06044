"""
Differential-algebraic nature of the generating series.

Decision tree:
    1. degenerate kernel                   -> algebraic
    2. genus 0, first family               -> differentially transcendental
       genus 0, families 2-4               -> algebraic
    3. elliptic, finite group              -> differentially algebraic
    4. elliptic, group presumed infinite   -> equivalent, undecided
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional

import sympy as sp

from .config import AnalysisConfig
from .group import GroupReport, group_report
from .kernel import HalfPlaneClass, classify_model_genus, degeneracy_test
from .model import WeightedModel, step_set
from .uniformization import CurveAnalytics, analyze_curve

T = sp.Symbol("t")

VARIABLES_NOTE = "x, y and t share one nature: the three derivations are equivalent here"

UNDECIDED_NOTE = (
    "deciding the shared nature for an infinite group needs the decoupling-function test, "
    "which this tool does not run"
)

_FAMILY_INDEX = {
    HalfPlaneClass.FAMILY1: 1,
    HalfPlaneClass.FAMILY2: 2,
    HalfPlaneClass.FAMILY3: 3,
    HalfPlaneClass.FAMILY4: 4,
}

# Steps that keep a walk started at the origin inside the quarter plane
_ORIGIN_EXITS = frozenset({(0, 1), (1, 0), (1, 1)})


class Verdict(Enum):
    """Nature verdicts, strongest first."""
    ALGEBRAIC = "algebraic"
    DIFFERENTIALLY_ALGEBRAIC = "differentially algebraic"
    DIFFERENTIALLY_TRANSCENDENTAL = "differentially transcendental"
    EQUIVALENT_UNDECIDED = "equivalent-undecided"


@dataclass(frozen=True)
class NatureReport:
    """Verdict plus the ordered evidence that produced it."""
    verdict: Verdict
    evidence: List[str]
    reason: str
    closed_form: Optional[sp.Expr] = None
    group: Optional[GroupReport] = None
    variables_note: str = VARIABLES_NOTE
    caveats: List[str] = field(default_factory=list)

    @property
    def differentially_algebraic(self) -> Optional[bool]:
        """Algebraic implies differentially algebraic; None when undecided."""
        if self.verdict == Verdict.EQUIVALENT_UNDECIDED:
            return None
        return self.verdict != Verdict.DIFFERENTIALLY_TRANSCENDENTAL

    def verdict_line(self) -> str:
        return f"{self.verdict.value} ({self.reason})"

    def to_dict(self) -> Dict[str, object]:
        return {
            "verdict": self.verdict.value,
            "reason": self.reason,
            "line": self.verdict_line(),
            "evidence": list(self.evidence),
            "closed_form": None if self.closed_form is None else str(self.closed_form),
            "variables_note": self.variables_note,
            "group": None if self.group is None else self.group.to_dict(),
            "caveats": list(self.caveats),
        }


def trivial_closed_form(model: WeightedModel) -> Optional[sp.Expr]:
    """
    1/(1 - d_{0,0} t) when no step can leave the origin, else None.

    A walk started at (0,0) can only move along (0,1), (1,0) or (1,1); with
    none of them in the support it loops at the origin forever.
    """
    if step_set(model).steps & _ORIGIN_EXITS:
        return None
    d00 = model.d(0, 0)
    return 1 / (1 - sp.Rational(d00.numerator, d00.denominator) * T)


def classify(model: WeightedModel, config: Optional[AnalysisConfig] = None,
             analytics: Optional[CurveAnalytics] = None) -> NatureReport:
    """
    Run the decision tree on a model.

    Args:
        model: Weighted model with its t
        config: Analysis configuration, used only for elliptic models
        analytics: Precomputed curve analytics to reuse

    Returns:
        NatureReport
    """
    config = config or AnalysisConfig()
    closed_form = trivial_closed_form(model)
    evidence: List[str] = []

    degeneracy = degeneracy_test(model)
    evidence.append(f"degeneracy: {degeneracy.matched_case.value}")
    if degeneracy.verdict:
        return NatureReport(Verdict.ALGEBRAIC, evidence,
                            reason=f"degenerate, {degeneracy.matched_case.value}",
                            closed_form=closed_form)

    genus = classify_model_genus(model)
    evidence.append(f"genus: {genus.classification.value}")
    if genus.classification in _FAMILY_INDEX:
        family = _FAMILY_INDEX[genus.classification]
        verdict = Verdict.DIFFERENTIALLY_TRANSCENDENTAL if family == 1 else Verdict.ALGEBRAIC
        return NatureReport(verdict, evidence, reason=f"genus 0, family {family}",
                            closed_form=closed_form)

    analytics = analytics or analyze_curve(model, config)
    group = group_report(analytics, config)
    evidence.append(f"group: {group}")
    caveats = [group.caveat]
    if group.is_finite:
        return NatureReport(Verdict.DIFFERENTIALLY_ALGEBRAIC, evidence,
                            reason=f"finite group, order {group.order_group}",
                            group=group, caveats=caveats)
    return NatureReport(Verdict.EQUIVALENT_UNDECIDED, evidence,
                        reason=f"group infinite-presumed, bound {group.bound_checked}",
                        group=group, caveats=caveats + [UNDECIDED_NOTE])
