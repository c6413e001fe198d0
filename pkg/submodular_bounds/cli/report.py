"""Command reports: named results, asserted inequalities and input digests."""

import dataclasses
import hashlib
import json
import math
from collections.abc import Mapping
from fractions import Fraction
from pathlib import Path
from typing import Any, NamedTuple

import numpy as np

from ..config import Settings


def jsonable(value: Any) -> Any:
    """Exact rationals become "p/q" strings, non-finite floats become strings."""
    match value:
        case bool() | str() | None:
            return value
        case Fraction():
            return str(value)
        case int() | np.integer():
            return int(value)
        case float() | np.floating():
            value = float(value)
            return value if math.isfinite(value) else str(value)
        case Mapping():
            return {str(key): jsonable(item) for key, item in value.items()}
        case list() | tuple():
            return [jsonable(item) for item in value]
    return str(value)


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def file_digest(path: str | Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as file:
        for chunk in iter(lambda: file.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


class ResultEntry(NamedTuple):
    name: str
    value: Any
    provenance: Mapping[str, Any]


class AssertionEntry(NamedTuple):
    name: str
    holds: bool
    slack: float


@dataclasses.dataclass
class Report:
    command: str
    arguments: dict[str, Any]
    files: dict[str, str]
    tolerance: float
    log_base: str
    results: list[ResultEntry] = dataclasses.field(default_factory=list)
    assertions: list[AssertionEntry] = dataclasses.field(default_factory=list)

    @classmethod
    def start(
        cls,
        command: str,
        settings: Settings,
        arguments: Mapping[str, Any] | None = None,
        files: Mapping[str, str | Path | None] | None = None,
    ) -> "Report":
        digests = {role: file_digest(path) for role, path in (files or {}).items() if path}
        return cls(
            command=command,
            arguments=jsonable(dict(arguments or {})),
            files=digests,
            tolerance=settings.tolerance,
            log_base=settings.log_base,
        )

    def add_result(self, name: str, value: Any, **provenance: Any) -> None:
        self.results.append(ResultEntry(name, jsonable(value), jsonable(provenance)))

    def add_assertion(self, name: str, slack: Any, holds: bool | None = None) -> None:
        """Record lhs <= rhs as slack = rhs - lhs; it holds when slack >= -tolerance."""
        slack = float(slack)
        if holds is None:
            holds = slack >= -self.tolerance
        self.assertions.append(AssertionEntry(name, holds, slack))

    @property
    def passed(self) -> bool:
        return all(assertion.holds for assertion in self.assertions)

    @property
    def failed(self) -> list[str]:
        return [assertion.name for assertion in self.assertions if not assertion.holds]

    def as_dict(self) -> dict[str, Any]:
        inputs = {"arguments": self.arguments, "files": self.files}
        digest = hashlib.sha256(canonical_json(inputs).encode()).hexdigest()
        results = []
        for entry in self.results:
            result = {"name": entry.name, "value": entry.value}
            if entry.provenance:
                result["provenance"] = entry.provenance
            results.append(result)
        return {
            "command": self.command,
            "inputs": {**inputs, "digest": digest},
            "tolerance": self.tolerance,
            "log_base": self.log_base,
            "results": results,
            "assertions": [
                {"name": a.name, "holds": a.holds, "slack": jsonable(a.slack)}
                for a in self.assertions
            ],
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def to_table(self) -> str:
        lines = [f"{self.command} (tolerance {self.tolerance}, log base {self.log_base})"]
        width = max((len(entry.name) for entry in self.results), default=0)
        for entry in self.results:
            provenance = ", ".join(f"{key}={value}" for key, value in entry.provenance.items())
            suffix = f"  [{provenance}]" if provenance else ""
            lines.append(f"  {entry.name:<{width}}  {entry.value}{suffix}")
        if self.assertions:
            lines.append("assertions:")
            width = max(len(assertion.name) for assertion in self.assertions)
            for assertion in self.assertions:
                verdict = "ok" if assertion.holds else "FAIL"
                name = f"{assertion.name:<{width}}"
                lines.append(f"  {name}  {verdict:<4}  slack {assertion.slack:.3e}")
        return "\n".join(lines)
