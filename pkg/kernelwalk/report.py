"""
Analysis reports: text and JSON rendering, schema validation, persistence.
"""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema

REPORT_VERSION = 1
TOOL_VERSION = "0.1.0"

SCHEMA_PATH = Path(__file__).with_name("report_schema.json")

# Section order in text output
SECTION_ORDER = ("series", "kernel", "genus", "curve", "group", "continuation", "classification")


def load_schema() -> Dict[str, Any]:
    with open(SCHEMA_PATH, "r") as f:
        return json.load(f)


@dataclass
class ReportDocument:
    """
    One analysis report.

    Deterministic for a fixed model, flags and tool version: nothing in it
    depends on wall-clock time.
    """
    command: str
    config: Dict[str, Any]
    model: Dict[str, Any]
    sections: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    caveats: List[str] = field(default_factory=list)
    verdict: Optional[str] = None
    report_version: int = REPORT_VERSION
    tool_version: str = TOOL_VERSION

    def add_section(self, name: str, data: Dict[str, Any]):
        if name not in SECTION_ORDER:
            raise ValueError(f"unknown report section: {name}")
        self.sections[name] = data

    def add_caveat(self, caveat: str):
        if caveat not in self.caveats:
            self.caveats.append(caveat)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "report_version": self.report_version,
            "tool_version": self.tool_version,
            "command": self.command,
            "config": self.config,
            "model": self.model,
            "sections": self.sections,
            "caveats": list(self.caveats),
            "verdict": self.verdict,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ReportDocument':
        return cls(
            command=data["command"],
            config=data["config"],
            model=data["model"],
            sections=data.get("sections", {}),
            caveats=data.get("caveats", []),
            verdict=data.get("verdict"),
            report_version=data.get("report_version", REPORT_VERSION),
            tool_version=data.get("tool_version", TOOL_VERSION),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_text(self) -> str:
        """Human-readable report; for classify/analyze the last line is 'verdict: ...'."""
        lines = [
            "=" * 80,
            f"kernelwalk {self.tool_version}: {self.command}",
            "=" * 80,
            f"model: {self.model.get('steps', '')} (t = {self.model.get('t', '')})",
        ]
        for key, value in sorted(self.model.get("weights", {}).items()):
            lines.append(f"  d {key.replace(',', ' ')} = {value}")

        for name in SECTION_ORDER:
            if name in self.sections:
                lines.append("")
                lines.append(f"[{name}]")
                lines.extend(_render(self.sections[name], indent=2))

        if self.caveats:
            lines.append("")
            lines.append("caveats:")
            lines.extend(f"  - {c}" for c in self.caveats)

        if self.verdict is not None:
            lines.append("")
            lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def _format_value(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    if isinstance(value, list) and len(value) == 2 and all(isinstance(v, float) for v in value):
        re, im = value
        return f"{re:.12g}{im:+.12g}i"
    return str(value)


def _render(data: Any, indent: int) -> List[str]:
    pad = " " * indent
    lines = []
    if isinstance(data, dict):
        for key, value in data.items():
            if isinstance(value, dict):
                lines.append(f"{pad}{key}:")
                lines.extend(_render(value, indent + 2))
            else:
                lines.append(f"{pad}{key}: {_format_value(value)}")
    else:
        lines.append(f"{pad}{_format_value(data)}")
    return lines


def validate_report(data: Dict[str, Any]):
    """
    Check a report dict against the shipped schema.

    Raises:
        jsonschema.ValidationError: the document does not match
    """
    jsonschema.validate(instance=data, schema=load_schema())


def save_report(report: ReportDocument, path: str) -> bool:
    """
    Save a report as versioned JSON.

    Returns:
        True if saved successfully
    """
    try:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        data = {
            "version": str(report.report_version),
            "report": report.to_dict(),
        }
        with open(target, "w") as f:
            json.dump(data, f, sort_keys=True, indent=2)
        return True
    except OSError as e:
        print(f"ERROR: Failed to save report: {e}")
        return False


def load_report(path: str) -> Optional[ReportDocument]:
    """
    Load a report saved with save_report.

    Returns:
        ReportDocument, or None if the file is missing or unreadable
    """
    target = Path(path)
    if not target.exists():
        return None
    try:
        with open(target, "r") as f:
            data = json.load(f)

        if data.get("version") != str(REPORT_VERSION):
            print(f"WARNING: Unknown report file version: {data.get('version')}")

        report_data = data.get("report")
        if not report_data:
            return None
        return ReportDocument.from_dict(report_data)

    except (OSError, json.JSONDecodeError, KeyError) as e:
        print(f"ERROR: Failed to load report: {e}")
        return None
