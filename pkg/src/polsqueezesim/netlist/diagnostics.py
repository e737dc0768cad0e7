"""
Netlist diagnostics
"""
import enum
from dataclasses import dataclass
from typing import Dict, Iterable, List


class Severity(str, enum.Enum):
    ERROR = "error"
    WARNING = "warning"


CODES: Dict[str, str] = {
    "E001": "malformed statement",
    "E002": "unknown element",
    "E003": "unknown argument",
    "E004": "duplicate name",
    "E005": "forward reference",
    "E006": "malformed number",
    "E007": "missing argument",
    "E008": "undefined name",
    "E009": "invalid value",
    "E010": "more than one pbs_combine",
    "E011": "unterminated sweep block",
    "W001": "nothing to simulate",
}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    line: int
    column: int
    message: str
    hint: str = ""

    @property
    def severity(self) -> Severity:
        return Severity.WARNING if self.code.startswith("W") else Severity.ERROR

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def __str__(self) -> str:
        text = f"{self.line}:{self.column}: {self.severity.value} {self.code}: {self.message}"
        if self.hint:
            text += f" (hint: {self.hint})"
        return text

    def to_record(self) -> dict:
        return {
            "code": self.code,
            "severity": self.severity.value,
            "line": self.line,
            "column": self.column,
            "message": self.message,
            "hint": self.hint,
        }


class DiagnosticSink:
    """Collects diagnostics in source order; parsing never stops at the first one"""

    def __init__(self):
        self._items: List[Diagnostic] = []

    def add(self, code: str, line: int, column: int, message: str, hint: str = "") -> None:
        if code not in CODES:
            raise KeyError(f"unregistered diagnostic code {code}")
        self._items.append(Diagnostic(code, line, column, message, hint))

    def extend(self, diagnostics: Iterable[Diagnostic]) -> None:
        self._items.extend(diagnostics)

    @property
    def items(self) -> List[Diagnostic]:
        return sorted(self._items, key=lambda d: (d.line, d.column, d.code))

    @property
    def has_errors(self) -> bool:
        return any(d.is_error for d in self._items)
