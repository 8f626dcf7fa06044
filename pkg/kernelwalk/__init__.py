"""
kernelwalk
Weighted quarter-plane walks: exact series, kernel curve, group of the walk
and differential-algebraic nature of the generating function.
"""

from .errors import (
    KernelWalkError,
    ModelError,
    ConfigError,
    DegenerateModelError,
    NumericError,
    PoleProximityError,
    GroupInconsistencyError
)
from .config import AnalysisConfig, AnalysisPreset, ContinuationConfig, working_precision
from .model import (
    WeightedModel,
    StepSet,
    parse_model,
    parse_raw,
    normalize,
    serialize_model,
    step_set,
    reflect,
    apply_symmetry,
    describe,
    equal_weight_model
)
from .series import (
    SeriesTable,
    count_walks,
    enumerate_walks_oracle,
    eval_Q,
    eval_F1,
    eval_F2,
    check_functional_equation,
    export_table,
    parse_table
)
from .kernel import (
    KernelPolynomial,
    HomogeneousKernel,
    QuarticDiscriminant,
    Axis,
    DegeneracyCase,
    DegeneracyReport,
    HalfPlaneClass,
    GenusReport,
    build_kernel,
    homogenize,
    discriminant,
    degeneracy_test,
    degeneracy_oracle,
    genus_classify
)
from .curve import ProjectivePoint, CurvePoint, BranchPoints, Periods, branch_points, periods, omega3
from .weierstrass import LatticeContext, lattice_context, wp, wp_prime, inverse_wp
from .uniformization import CurveAnalytics, analyze_curve, uniformize, involution1, involution2, sigma
from .group import GroupVerdict, GroupReport, reconstruct_rational, confirm_order, orbit_probe, group_report
from .continuation import BaseDomainSample, PoleCandidate, ContinuationEngine, continuation_summary
from .classify import Verdict, NatureReport, classify, trivial_closed_form
from .event_logger import AnalysisEventLogger
from .report import ReportDocument, validate_report, save_report, load_report, TOOL_VERSION

__version__ = TOOL_VERSION

__all__ = [
    "KernelWalkError",
    "ModelError",
    "ConfigError",
    "DegenerateModelError",
    "NumericError",
    "PoleProximityError",
    "GroupInconsistencyError",
    "AnalysisConfig",
    "AnalysisPreset",
    "ContinuationConfig",
    "working_precision",
    "WeightedModel",
    "StepSet",
    "parse_model",
    "parse_raw",
    "normalize",
    "serialize_model",
    "step_set",
    "reflect",
    "apply_symmetry",
    "describe",
    "equal_weight_model",
    "SeriesTable",
    "count_walks",
    "enumerate_walks_oracle",
    "eval_Q",
    "eval_F1",
    "eval_F2",
    "check_functional_equation",
    "export_table",
    "parse_table",
    "KernelPolynomial",
    "HomogeneousKernel",
    "QuarticDiscriminant",
    "Axis",
    "DegeneracyCase",
    "DegeneracyReport",
    "HalfPlaneClass",
    "GenusReport",
    "build_kernel",
    "homogenize",
    "discriminant",
    "degeneracy_test",
    "degeneracy_oracle",
    "genus_classify",
    "ProjectivePoint",
    "CurvePoint",
    "BranchPoints",
    "Periods",
    "branch_points",
    "periods",
    "omega3",
    "LatticeContext",
    "lattice_context",
    "wp",
    "wp_prime",
    "inverse_wp",
    "CurveAnalytics",
    "analyze_curve",
    "uniformize",
    "involution1",
    "involution2",
    "sigma",
    "GroupVerdict",
    "GroupReport",
    "reconstruct_rational",
    "confirm_order",
    "orbit_probe",
    "group_report",
    "BaseDomainSample",
    "PoleCandidate",
    "ContinuationEngine",
    "continuation_summary",
    "Verdict",
    "NatureReport",
    "classify",
    "trivial_closed_form",
    "AnalysisEventLogger",
    "ReportDocument",
    "validate_report",
    "save_report",
    "load_report",
]
