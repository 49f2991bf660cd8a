"""Validation and verification reports shared by all checkers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Violation:
    rule: str
    witness: Any
    detail: str = ""

    def to_json(self) -> dict:
        return {"rule": self.rule, "witness": _jsonable(self.witness), "detail": self.detail}


@dataclass
class Report:
    name: str
    violations: list[Violation] = field(default_factory=list)
    stats: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, witness: Any, detail: str = "") -> None:
        self.violations.append(Violation(rule, witness, detail))

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "check": self.name,
            "ok": self.ok,
            "violations": [v.to_json() for v in self.violations],
            "stats": {k: _jsonable(v) for k, v in self.stats.items()},
        }


def _jsonable(x: Any) -> Any:
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    return str(x)
