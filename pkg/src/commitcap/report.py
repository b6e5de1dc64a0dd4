"""Machine-readable reports and their plain-text rendering.

A report is a JSON object with ``metadata``, named ``sections`` (each a list
of flat rows) and ``checks`` (named pass/fail outcomes). The JSON form
round-trips exactly; the text form rounds floats to 6 significant digits.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

FORMAT = "commitcap-report/1"
TEXT_DIGITS = 6


def to_jsonable(obj: Any) -> Any:
    """Recursively convert numpy values, fractions and non-finite floats."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        if math.isnan(f):
            return "nan"
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        return f
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):  # enums
        return obj.value
    return obj


@dataclass
class Report:
    command: str
    metadata: dict = field(default_factory=dict)
    sections: dict[str, list[dict]] = field(default_factory=dict)
    checks: dict[str, bool] = field(default_factory=dict)

    def add_rows(self, section: str, rows: list[dict]) -> None:
        self.sections.setdefault(section, []).extend(to_jsonable(rows))

    def check(self, name: str, ok: bool) -> None:
        self.checks[name] = bool(ok)

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "format": FORMAT,
            "command": self.command,
            "metadata": to_jsonable(self.metadata),
            "sections": self.sections,
            "checks": self.checks,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        if d.get("format") != FORMAT:
            raise ValueError(f"not a {FORMAT} document")
        return cls(d["command"], d["metadata"], d["sections"], d["checks"])

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def render(self) -> str:
        return render_text(self)


def fmt(v: Any) -> str:
    if isinstance(v, bool) or v is None:
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.{TEXT_DIGITS}g}"
    if isinstance(v, list):
        return "[" + ", ".join(fmt(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {fmt(x)}" for k, x in v.items()) + "}"
    return str(v)


def _table(rows: list[dict]) -> list[str]:
    cols: list[str] = []
    for r in rows:
        cols += [k for k in r if k not in cols]
    cells = [[fmt(r.get(c, "")) for c in cols] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    line = "  ".join(c.ljust(w) for c, w in zip(cols, widths))
    out = [line, "  ".join("-" * w for w in widths)]
    out += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return out


def render_text(report: Report) -> str:
    lines = [f"# {report.command}"]
    for k in sorted(report.metadata):
        lines.append(f"{k}: {fmt(to_jsonable(report.metadata[k]))}")
    for name, rows in report.sections.items():
        lines += ["", f"## {name}"]
        lines += _table(rows) if rows else ["(empty)"]
    if report.checks:
        lines += ["", "## checks"]
        lines += [f"{'PASS' if ok else 'FAIL'}  {name}" for name, ok in report.checks.items()]
    lines.append("")
    lines.append(f"overall: {'PASS' if report.passed else 'FAIL'}")
    return "\n".join(lines) + "\n"
