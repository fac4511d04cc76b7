"""Deterministic text and JSON reports for CLI commands."""
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from svdyn.classify import PROPERTY_NAMES, PropertyReport
from svdyn.dynamics import Cycle
from svdyn.intervals import FissileSet, IntervalSet
from svdyn.rational import pq


def content_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def to_jsonable(value: Any) -> Any:
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, Fraction):
        return pq(value)
    if isinstance(value, (IntervalSet, FissileSet)):
        return value.to_json()
    if isinstance(value, Cycle):
        return [pq(x) for x in value.points]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    return value


def to_text(value: Any) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, dict):
        return ", ".join(f"{k}={to_text(v)}" for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(to_text(v) for v in value) + "]"
    return str(value)


@dataclass
class RunReport:
    """One command's output: input identity, ordered results, witnesses, optional timing."""

    path: Optional[str] = None
    sha256: Optional[str] = None
    results: dict[str, Any] = field(default_factory=dict)
    witnesses: dict[str, Any] = field(default_factory=dict)
    elapsed: Optional[float] = None

    @classmethod
    def for_input(cls, path: str, text: str) -> "RunReport":
        return cls(path=path, sha256=content_hash(text))

    def render_text(self) -> str:
        lines = []
        if self.path is not None:
            lines.append(f"file: {self.path}")
            lines.append(f"sha256: {self.sha256}")
        for key, value in self.results.items():
            lines.append(f"{key}: {to_text(value)}")
        for key, value in self.witnesses.items():
            lines.append(f"witness.{key}: {to_text(value)}")
        if self.elapsed is not None:
            lines.append(f"elapsed: {self.elapsed:.3f}")
        return "\n".join(lines)

    def render_json(self) -> str:
        payload: dict[str, Any] = {}
        if self.path is not None:
            payload["file"] = self.path
            payload["sha256"] = self.sha256
        payload["results"] = to_jsonable(self.results)
        payload["witnesses"] = to_jsonable(self.witnesses)
        if self.elapsed is not None:
            payload["elapsed"] = round(self.elapsed, 3)
        return json.dumps(payload, indent=2)


def add_properties(run: RunReport, report: PropertyReport) -> RunReport:
    for name in PROPERTY_NAMES:
        run.results[name] = report.value(name)
    run.results["fissile_xset"] = report.fissile_xset
    for name in PROPERTY_NAMES:
        if name in report.witnesses:
            run.witnesses[name] = report.witnesses[name]
    return run
