from dataclasses import dataclass, field
from typing import Any, Optional

from kancalc.constants import REPORT_SCHEMA_VERSION


@dataclass(frozen=True)
class FilterReport:
    subject: Any
    exact_filtered: bool
    karoubi_terminal: bool
    level_checked: Optional[int]
    level_ok: Optional[bool]
    witness: Any

    @property
    def consistent(self) -> bool:
        if self.exact_filtered != self.karoubi_terminal:
            return False
        return not (self.exact_filtered and self.level_ok is False)


@dataclass(frozen=True)
class CompactWitness:
    shape: Any
    gamma: Any
    section: Any
    retraction: Any


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    instances: int
    passed: int
    counterexample: Any = None
    duration: float = 0.0
    data: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.instances == self.passed


@dataclass(frozen=True)
class Report:
    """What a CLI command prints: stable fields for --json, plus the exit status."""
    kind: str
    ok: bool
    witness: Any
    data: dict
    exit_code: int
    command: tuple = ()
    elapsed: Optional[float] = None

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA_VERSION,
            "kind": self.kind,
            "ok": self.ok,
            "witness": self.witness,
            "data": self.data,
        }
