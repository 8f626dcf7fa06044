"""
Command-line driver.

Usage:
    python -m kernelwalk series walks/simple.walk --max-steps 10 [--check-feq 10]
    python -m kernelwalk kernel walks/simple.walk
    python -m kernelwalk curve walks/simple.walk [--precision 128]
    python -m kernelwalk group walks/tandem.walk [--max-denominator 200] [--probe-bound 1000]
    python -m kernelwalk continue walks/simple.walk [--samples 50] [--truncation 40]
    python -m kernelwalk classify walks/simple.walk
    python -m kernelwalk analyze walks/simple.walk

Exit codes: 0 success, 1 input error, 2 numeric failure.
"""

import argparse
import sys
from fractions import Fraction
from typing import List, Optional

from .classify import NatureReport, classify
from .config import AnalysisConfig, AnalysisPreset, ContinuationConfig
from .continuation import ContinuationEngine, continuation_summary
from .errors import ConfigError, DegenerateModelError, KernelWalkError, NumericError
from .event_logger import AnalysisEventLogger
from .group import group_report
from .kernel import (Axis, build_kernel, classify_model_genus, degeneracy_test,
                     discriminant)
from .model import WeightedModel, model_to_dict, normalize, parse_model, parse_raw
from .report import ReportDocument, save_report, validate_report
from .series import check_functional_equation, count_walks
from .uniformization import CurveAnalytics, analyze_curve

# Residual ceiling for the continuation checks
CONTINUATION_TOLERANCE = 1e-6


def _fraction_str(value: Fraction) -> str:
    return str(value) if value.denominator != 1 else str(value.numerator)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("model_file", help="Path to a .walk model file")
    common.add_argument("--json", action="store_true", help="Emit the JSON report instead of text")
    common.add_argument("--seed", type=int, default=None, help="Seed for sampled checks (default: 0)")
    common.add_argument("--precision", type=int, default=None, help="Working precision in bits")
    common.add_argument("--preset", choices=[p.value for p in AnalysisPreset], default="standard",
                        help="Numeric preset (default: standard)")
    common.add_argument("--normalize", action="store_true",
                        help="Rescale weights to sum 1, absorbing the scale into t")
    common.add_argument("--verbose", action="store_true", help="Stage diagnostics on stderr")
    common.add_argument("--log-events", metavar="PATH", default=None, help="Append JSONL stage events to PATH")
    common.add_argument("--output", metavar="PATH", default=None, help="Also save the JSON report to PATH")

    parser = argparse.ArgumentParser(prog="kernelwalk",
                                     description="Weighted quarter-plane walks: series, kernel curve, group and nature")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("series", parents=[common], help="Count weighted walks")
    p.add_argument("--max-steps", type=int, required=True, help="Largest walk length K")
    p.add_argument("--check-feq", type=int, default=None, metavar="N",
                   help="Check the functional equation modulo t^(N+1)")

    sub.add_parser("kernel", parents=[common], help="Kernel, degeneracy and genus")
    sub.add_parser("curve", parents=[common], help="Branch points, periods and uniformization")

    p = sub.add_parser("group", parents=[common], help="Finiteness of the group of the walk")
    p.add_argument("--max-denominator", type=int, default=None, help="Denominator bound (default: 200)")
    p.add_argument("--probe-bound", type=int, default=None, help="Orbit probe bound, up to 1e6")

    p = sub.add_parser("continue", parents=[common], help="Continuation residuals of r_x, r_y")
    p.add_argument("--samples", type=int, default=50, help="Overlap points to test (default: 50)")
    p.add_argument("--truncation", type=int, default=None, help="Series truncation N")

    sub.add_parser("classify", parents=[common], help="Differential-algebraic nature verdict")

    p = sub.add_parser("analyze", parents=[common], help="Full pipeline")
    p.add_argument("--max-steps", type=int, default=10, help="Series length for the report (default: 10)")
    p.add_argument("--samples", type=int, default=50, help="Overlap points to test (default: 50)")
    return parser


def load_model(path: str, do_normalize: bool) -> WeightedModel:
    """
    Read a model file.

    Raises:
        OSError: unreadable file
        ModelError: invalid contents
    """
    with open(path, "r") as f:
        text = f.read()
    if not do_normalize:
        return parse_model(text)
    weights, t_raw = parse_raw(text)
    if t_raw is None:
        return parse_model(text)
    model, _ = normalize(weights, t_raw)
    return model


def config_from_args(args: argparse.Namespace) -> AnalysisConfig:
    """
    Raises:
        ConfigError: out-of-range flag or environment value
    """
    try:
        return AnalysisConfig.from_environment(
            AnalysisPreset(args.preset),
            precision_bits=args.precision,
            seed=args.seed,
            max_denominator=getattr(args, "max_denominator", None),
            orbit_probe_bound=getattr(args, "probe_bound", None),
        )
    except AssertionError as e:
        raise ConfigError(str(e))


class Pipeline:
    """Runs the requested stages and fills one report."""

    def __init__(self, model: WeightedModel, config: AnalysisConfig, report: ReportDocument,
                 events: AnalysisEventLogger):
        self.model = model
        self.config = config
        self.report = report
        self.events = events
        self._analytics: Optional[CurveAnalytics] = None

    def _stage(self, name: str, func):
        self.events.stage_started(name)
        try:
            result = func()
        except KernelWalkError as e:
            self.events.stage_failed(name, e)
            raise
        return result

    def series(self, max_steps: int, check_feq: Optional[int] = None):
        def work():
            table = count_walks(self.model, max_steps)
            section = {
                "max_steps": max_steps,
                "mass": [_fraction_str(table.mass(k)) for k in range(max_steps + 1)],
                "excursions": [_fraction_str(v) for v in table.excursions()],
                "nonzero_entries": len(table.entries()),
            }
            if check_feq is not None:
                section["functional_equation"] = {
                    "order": check_feq,
                    "holds": check_functional_equation(self.model, check_feq),
                }
            self.report.add_section("series", section)
            self.events.stage_completed("series", f"{len(table.entries())} nonzero coefficients up to k={max_steps}")
        self._stage("series", work)

    def kernel(self):
        def work():
            kernel = build_kernel(self.model)
            degeneracy = degeneracy_test(self.model)
            section = {
                "kernel": str(kernel),
                "degenerate": degeneracy.verdict,
                "case": degeneracy.matched_case.value,
            }
            if not degeneracy.verdict:
                for key, axis in (("delta_x", Axis.X), ("delta_y", Axis.Y)):
                    try:
                        section[key] = str(discriminant(kernel, axis).as_poly().as_expr())
                    except DegenerateModelError:
                        section[key] = "n/a (degree below 2)"
            self.report.add_section("kernel", section)
            genus = classify_model_genus(self.model)
            self.report.add_section("genus", {
                "classification": genus.classification.value,
                "normal": None if genus.normal is None else list(genus.normal),
            })
            self.events.stage_completed("kernel", f"degeneracy {degeneracy.matched_case.value}, "
                                                  f"genus {genus.classification.value}")
        self._stage("kernel", work)

    def curve(self) -> CurveAnalytics:
        if self._analytics is None:
            def work():
                analytics = analyze_curve(self.model, self.config)
                section = analytics.to_dict()
                self.report.add_section("curve", section)
                self.report.add_caveat(analytics.branch.contour_note)
                per = analytics.periods
                self.events.stage_completed(
                    "curve", f"periods omega1={complex(per.omega1):.10g} omega2={float(per.omega2):.10g} "
                             f"omega3={float(per.omega3):.10g}",
                    metadata=per.to_dict())
                self.events.numeric_check("curve", "lattice invariant mismatch",
                                          analytics.invariant_mismatch(), 1e-6)
                return analytics
            self._analytics = self._stage("curve", work)
        return self._analytics

    def group(self):
        analytics = self.curve()

        def work():
            report = group_report(analytics, self.config)
            self.report.add_section("group", report.to_dict())
            self.report.add_caveat(report.caveat)
            self.events.stage_completed("group", str(report))
            return report
        return self._stage("group", work)

    def continuation(self, samples: int, truncation: Optional[int] = None):
        analytics = self.curve()

        def work():
            if truncation is not None:
                cont = ContinuationConfig(truncation=truncation)
            else:
                minimal = ContinuationConfig.for_model(self.model.t).truncation
                cont = ContinuationConfig(truncation=max(self.config.continuation.truncation, minimal))
            engine = ContinuationEngine(analytics, cont)
            summary = continuation_summary(engine, samples=samples, seed=self.config.seed)
            self.report.add_section("continuation", summary)
            for key in ("identity_max", "periodicity_max", "telescoping_max"):
                self.events.numeric_check("continuation", key, summary[key], CONTINUATION_TOLERANCE)
                if not summary[key] < CONTINUATION_TOLERANCE:
                    raise NumericError("continuation",
                                       f"{key} = {summary[key]:.3e} exceeds {CONTINUATION_TOLERANCE:g}")
            self.events.stage_completed("continuation", f"{summary['samples']} overlap points checked")
        self._stage("continuation", work)

    def classify(self) -> NatureReport:
        def work():
            genus = classify_model_genus(self.model)
            analytics = self.curve() if genus.is_elliptic and not degeneracy_test(self.model).verdict else None
            nature = classify(self.model, self.config, analytics=analytics)
            if nature.group is not None and "group" not in self.report.sections:
                self.report.add_section("group", nature.group.to_dict())
            self.report.add_section("classification", nature.to_dict())
            for caveat in nature.caveats:
                self.report.add_caveat(caveat)
            self.report.verdict = nature.verdict_line()
            self.events.stage_completed("classify", nature.verdict_line())
            return nature
        return self._stage("classify", work)


def execute(args: argparse.Namespace, events: AnalysisEventLogger) -> ReportDocument:
    model = load_model(args.model_file, args.normalize)
    config = config_from_args(args)
    events.tag("config", str(config))
    report = ReportDocument(command=args.command, config=config.to_dict(), model=model_to_dict(model))
    pipeline = Pipeline(model, config, report, events)

    if args.command == "series":
        pipeline.series(args.max_steps, args.check_feq)
    elif args.command == "kernel":
        pipeline.kernel()
    elif args.command == "curve":
        pipeline.kernel()
        pipeline.curve()
    elif args.command == "group":
        pipeline.kernel()
        pipeline.group()
    elif args.command == "continue":
        pipeline.kernel()
        pipeline.continuation(args.samples, args.truncation)
    elif args.command == "classify":
        pipeline.kernel()
        pipeline.classify()
    elif args.command == "analyze":
        pipeline.series(args.max_steps, args.max_steps)
        pipeline.kernel()
        genus = classify_model_genus(model)
        if genus.is_elliptic and not degeneracy_test(model).verdict:
            pipeline.group()
            pipeline.continuation(args.samples)
        pipeline.classify()
    return report


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse argv, run the command and print its report.

    Returns:
        Exit code: 0 success, 1 input error, 2 numeric failure
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1

    events = AnalysisEventLogger(args.log_events, verbose=args.verbose)
    try:
        report = execute(args, events)
    except OSError as e:
        print(f"ERROR: cannot read {args.model_file}: {e.strerror or e}", file=sys.stderr)
        return 1
    except KernelWalkError as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return e.exit_code

    data = report.to_dict()
    validate_report(data)
    if args.output and not save_report(report, args.output):
        return 1
    print(report.to_json() if args.json else report.to_text())
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
