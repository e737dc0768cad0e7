"""
Netlist parser

Grammar (see docs/netlist.ebnf): one statement per line,
    keyword [name] key=value ...   # optional comment
with ``sweep <axis> ... end`` as the only block. Numbers take the unit
suffixes rad, deg, Hz, kHz, MHz, GHz and dB; a bare angle is in radians and
a bare frequency in Hz. A dB ratio x stands for 10**(x/10).

Parsing never stops at the first problem: every line is checked and all
diagnostics are returned together with the document.
"""
import difflib
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import PurePath
from typing import Callable, Dict, List, Optional, Tuple

from src.polsqueezesim.exceptions import DomainError, NetlistError
from src.polsqueezesim.netlist.diagnostics import Diagnostic, DiagnosticSink
from src.polsqueezesim.netlist.document import (
    RESERVED_OUTPUTS,
    Argument,
    Blank,
    Comment,
    NetlistDocument,
    Statement,
    SweepBlock,
    written_files,
)

logger = logging.getLogger(__name__)

TOKEN = re.compile(r"(?P<key>[^\s=]+)\s*=\s*(?P<value>[^\s=]*)|(?P<word>\S+)")
NUMBER = re.compile(r"^(?P<number>[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)(?P<unit>[A-Za-z]*)$")
INTEGER = re.compile(r"^[+-]?\d+$")
NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")

UNITS: Dict[str, Dict[str, float]] = {
    "angle": {"": 1.0, "rad": 1.0, "deg": math.pi / 180.0},
    "frequency": {"": 1.0, "Hz": 1.0, "kHz": 1e3, "MHz": 1e6, "GHz": 1e9},
    "ratio": {"": 1.0, "dB": 1.0},
    "number": {"": 1.0},
}

SETUP_NAMES = ("S0", "S1", "S2", "S3")
TWO_PI = 2.0 * math.pi


class _ValueProblem(Exception):
    def __init__(self, code: str, message: str, hint: str = ""):
        super().__init__(message)
        self.code = code
        self.hint = hint


def parse_quantity(raw: str, kind: str) -> float:
    match = NUMBER.match(raw)
    if match is None:
        raise _ValueProblem("E006", f"malformed number '{raw}'")
    unit = match.group("unit")
    allowed = UNITS[kind]
    if unit not in allowed:
        units = ", ".join(u for u in allowed if u) or "none"
        raise _ValueProblem("E006", f"unit '{unit}' is not valid for a {kind} value", f"allowed units: {units}")
    value = float(match.group("number"))
    if not math.isfinite(value):
        raise _ValueProblem("E006", f"number '{raw}' is not finite")
    if kind == "ratio" and unit == "dB":
        return 10.0 ** (value / 10.0)
    return value * allowed[unit]


def read_quantity(raw: str, kind: str) -> float:
    """Unit-suffixed value from outside a netlist (command line flags)"""
    try:
        return parse_quantity(raw.strip(), kind)
    except _ValueProblem as e:
        raise DomainError(str(e)) from e


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise _ValueProblem("E009", message)


@dataclass(frozen=True)
class ArgSpec:
    kind: str
    required: bool = False
    choices: Tuple[str, ...] = ()
    check: Optional[Callable[[object], None]] = None

    def convert(self, raw: str):
        if self.kind in UNITS:
            value = parse_quantity(raw, self.kind)
        elif self.kind == "integer":
            if not INTEGER.match(raw):
                raise _ValueProblem("E006", f"expected an integer, got '{raw}'")
            value = int(raw)
        elif self.kind == "list":
            value = [parse_quantity(part, "number") for part in raw.split(",")]
        elif self.kind == "word":
            if raw not in self.choices:
                raise _ValueProblem("E009", f"'{raw}' is not one of {', '.join(self.choices)}")
            value = raw
        elif self.kind == "ref":
            if not NAME.match(raw):
                raise _ValueProblem("E001", f"'{raw}' is not a valid name")
            value = raw
        else:
            value = raw
        if self.check is not None:
            self.check(value)
        return value


def _non_negative(label):
    return lambda v: _require(v >= 0.0, f"{label} must be >= 0, got {v:g}")


def _positive(label):
    return lambda v: _require(v > 0.0, f"{label} must be > 0, got {v:g}")


def _unit_interval(label):
    return lambda v: _require(0.0 < v <= 1.0, f"{label} must lie in (0, 1], got {v:g}")


def _losses(values):
    for v in values:
        _require(0.0 <= v < 1.0, f"each loss must lie in [0, 1), got {v:g}")


def _correlation(v):
    _require(v in (1.0, -1.0), f"corr must be +1 or -1, got {v:g}")


def _output_file(raw):
    _require(PurePath(raw).name not in ("", ".", ".."), f"'{raw}' does not name a file")


def _at_least(label, minimum):
    return lambda v: _require(v >= minimum, f"{label} must be >= {minimum}, got {v}")


FREQUENCY = "frequency"
QUADRATURES = ("amplitude", "phase")


@dataclass(frozen=True)
class StatementSpec:
    args: Dict[str, ArgSpec]
    name: str = "optional"  # required | optional | forbidden | setup | axis


STATEMENTS: Dict[str, StatementSpec] = {
    "band": StatementSpec(
        {
            "start": ArgSpec(FREQUENCY, True, check=_non_negative("start")),
            "stop": ArgSpec(FREQUENCY, True, check=_positive("stop")),
            "step": ArgSpec(FREQUENCY, check=_positive("step")),
        },
        name="forbidden",
    ),
    "coherent": StatementSpec({"power": ArgSpec("number", True, check=_non_negative("power"))}, name="required"),
    "squeezer": StatementSpec(
        {
            "quad": ArgSpec("word", True, QUADRATURES),
            "v0": ArgSpec("ratio", True, check=_unit_interval("v0")),
            "corner": ArgSpec(FREQUENCY, check=_positive("corner")),
            "excess": ArgSpec("ratio", check=lambda v: _require(v >= 1.0, f"excess must be >= 1, got {v:g}")),
            "power": ArgSpec("number", True, check=_non_negative("power")),
        },
        name="required",
    ),
    "tabulated": StatementSpec(
        {
            "file": ArgSpec("path", True),
            "power": ArgSpec("number", True, check=_non_negative("power")),
        },
        name="required",
    ),
    "pbs_combine": StatementSpec(
        {"h": ArgSpec("ref", True), "v": ArgSpec("ref", True), "theta": ArgSpec("angle")}
    ),
    "loss": StatementSpec({"eta": ArgSpec("ratio", True, check=_unit_interval("eta"))}),
    "efficiency": StatementSpec({"losses": ArgSpec("list", True, check=_losses)}),
    "waveplate": StatementSpec(
        {"kind": ArgSpec("word", True, ("half", "quarter")), "angle": ArgSpec("angle", True)}
    ),
    "phase": StatementSpec({"theta": ArgSpec("angle", True)}),
    "correlated_noise": StatementSpec(
        {
            "quad": ArgSpec("word", True, QUADRATURES),
            "excess": ArgSpec("number", True, check=_non_negative("excess")),
            "corr": ArgSpec("number", True, check=_correlation),
        }
    ),
    "measure": StatementSpec(
        {"file": ArgSpec("path", True, check=_output_file), "efficiency": ArgSpec("ratio", check=_unit_interval("efficiency"))},
        name="setup",
    ),
    "ellipsoid": StatementSpec(
        {"at": ArgSpec(FREQUENCY, True, check=_non_negative("at")), "file": ArgSpec("path", True, check=_output_file)}
    ),
    "output": StatementSpec({"file": ArgSpec("path", True, check=_output_file)}, name="forbidden"),
}

SWEEP_SPECS: Dict[str, Dict[str, ArgSpec]] = {
    "theta": {
        "start": ArgSpec("angle", True),
        "stop": ArgSpec("angle", True),
        "points": ArgSpec("integer", True, check=_at_least("points", 1)),
        "at": ArgSpec(FREQUENCY, True, check=_non_negative("at")),
    },
    "frequency": {
        "start": ArgSpec(FREQUENCY, True, check=_non_negative("start")),
        "stop": ArgSpec(FREQUENCY, True, check=_positive("stop")),
        "points": ArgSpec("integer", True, check=_at_least("points", 2)),
    },
}

STATE_ELEMENTS = ("loss", "efficiency", "waveplate", "phase", "correlated_noise")
SOURCES = ("coherent", "squeezer", "tabulated")
NEEDS_COMBINE = STATE_ELEMENTS + ("measure", "ellipsoid")
KEYWORDS = tuple(STATEMENTS) + ("sweep", "end")


@dataclass
class ParseResult:
    document: NetlistDocument
    diagnostics: List[Diagnostic] = field(default_factory=list)

    @property
    def errors(self) -> List[Diagnostic]:
        return [d for d in self.diagnostics if d.is_error]

    @property
    def warnings(self) -> List[Diagnostic]:
        return [d for d in self.diagnostics if not d.is_error]

    @property
    def ok(self) -> bool:
        return not self.errors


def _hint(word: str, candidates) -> str:
    close = difflib.get_close_matches(word, list(candidates), n=1)
    return f"did you mean '{close[0]}'?" if close else ""


def split_comment(text: str) -> Tuple[str, Optional[str]]:
    index = text.find("#")
    if index < 0:
        return text, None
    return text[:index], text[index:].rstrip()


class _LineParser:
    def __init__(self, sink: DiagnosticSink):
        self.sink = sink

    def statement(self, code: str, comment: Optional[str], lineno: int) -> Statement:
        tokens = list(TOKEN.finditer(code))
        first = tokens[0]
        if first.group("word") is None:
            self.sink.add("E001", lineno, first.start() + 1, "a statement must start with a keyword")
            return Statement("", lineno, first.start() + 1, comment=comment, raw=code.strip())

        keyword = first.group("word")
        stmt = Statement(keyword, lineno, first.start() + 1, comment=comment)
        if keyword == "end":
            for extra in tokens[1:]:
                self.sink.add("E001", lineno, extra.start() + 1, "'end' takes no arguments")
                stmt.raw = code.strip()
            return stmt
        if keyword == "sweep":
            spec = None
        elif keyword in STATEMENTS:
            spec = STATEMENTS[keyword]
        else:
            self.sink.add("E002", lineno, stmt.column, f"unknown element '{keyword}'", _hint(keyword, KEYWORDS))
            stmt.raw = code.strip()
            return stmt

        rest = tokens[1:]
        if rest and rest[0].group("word") is not None:
            positional = rest.pop(0)
            word = positional.group("word")
            stmt.name = word
            self._check_name(stmt, spec, word, positional.start() + 1)
        elif spec is not None and spec.name in ("required", "setup"):
            what = "setup name (S0..S3)" if spec.name == "setup" else "name"
            self.sink.add("E007", lineno, stmt.column, f"'{keyword}' needs a {what}")
        elif keyword == "sweep":
            self.sink.add("E007", lineno, stmt.column, "sweep needs an axis", "theta or frequency")

        if keyword == "sweep":
            arg_specs = SWEEP_SPECS.get(stmt.name or "", {})
        else:
            arg_specs = spec.args

        for token in rest:
            column = token.start() + 1
            if token.group("word") is not None:
                self.sink.add("E001", lineno, column, f"expected key=value, got '{token.group('word')}'")
                stmt.raw = code.strip()
                continue
            key, raw = token.group("key"), token.group("value")
            if key in stmt.args:
                self.sink.add("E001", lineno, column, f"argument '{key}' given twice")
                stmt.raw = code.strip()
                continue
            arg_spec = arg_specs.get(key)
            if arg_spec is None:
                if keyword == "sweep" and not arg_specs:
                    continue
                self.sink.add("E003", lineno, column, f"unknown argument '{key}'", _hint(key, arg_specs))
                stmt.args[key] = Argument(key, raw, None, column)
                continue
            if raw == "":
                self.sink.add("E007", lineno, column, f"argument '{key}' has no value")
                stmt.args[key] = Argument(key, raw, None, column)
                continue
            try:
                value = arg_spec.convert(raw)
            except _ValueProblem as problem:
                self.sink.add(problem.code, lineno, column, f"{key}: {problem}", problem.hint)
                value = None
            stmt.args[key] = Argument(key, raw, value, column)

        for key, arg_spec in arg_specs.items():
            if arg_spec.required and key not in stmt.args:
                self.sink.add("E007", lineno, stmt.column, f"'{keyword}' is missing argument '{key}'")
        self._check_ranges(stmt)
        return stmt

    def _check_name(self, stmt: Statement, spec: Optional[StatementSpec], word: str, column: int) -> None:
        line = stmt.line
        if stmt.keyword == "sweep":
            if word not in SWEEP_SPECS:
                self.sink.add("E009", line, column, f"unknown sweep axis '{word}'", "theta or frequency")
        elif spec.name == "setup":
            if word not in SETUP_NAMES:
                self.sink.add("E009", line, column, f"unknown setup '{word}'", _hint(word, SETUP_NAMES) or "S0..S3")
        elif spec.name == "forbidden":
            self.sink.add("E001", line, column, f"'{stmt.keyword}' takes no name, got '{word}'")
        elif not NAME.match(word):
            self.sink.add("E001", line, column, f"'{word}' is not a valid name")

    def _check_ranges(self, stmt: Statement) -> None:
        start, stop = stmt.get("start"), stmt.get("stop")
        if start is not None and stop is not None and start >= stop:
            self.sink.add("E009", stmt.line, stmt.args["stop"].column, "stop must be greater than start")
        if stmt.keyword == "sweep" and stmt.name == "theta":
            for key in ("start", "stop"):
                value = stmt.get(key)
                if value is not None and not -1e-12 <= value <= TWO_PI + 1e-12:
                    self.sink.add("E009", stmt.line, stmt.args[key].column, f"theta {key} must lie in [0, 2pi]")
        if stmt.keyword == "pbs_combine" and stmt.get("h") is not None and stmt.get("h") == stmt.get("v"):
            self.sink.add("E009", stmt.line, stmt.args["v"].column, "a beam cannot be combined with itself")


def _collect(text: str, sink: DiagnosticSink) -> List:
    """Syntax pass: line items with sweep blocks grouped"""
    parser = _LineParser(sink)
    items: List = []
    open_sweep: Optional[SweepBlock] = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        code, comment = split_comment(line.rstrip("\r"))
        if not code.strip():
            item = Comment(comment.strip(), lineno) if comment else Blank(lineno)
            (open_sweep.body if open_sweep else items).append(item)
            continue
        stmt = parser.statement(code, comment, lineno)
        if stmt.keyword == "end":
            if open_sweep is None:
                sink.add("E001", lineno, stmt.column, "'end' without an open sweep")
                items.append(stmt)
            else:
                open_sweep.end_comment = comment
                open_sweep = None
            continue
        if open_sweep is not None:
            if stmt.keyword == "sweep":
                sink.add("E001", lineno, stmt.column, "sweeps cannot be nested")
            elif stmt.keyword != "output" and stmt.keyword in STATEMENTS:
                sink.add("E001", lineno, stmt.column, "only 'output' statements may appear inside a sweep")
            open_sweep.body.append(stmt)
            continue
        if stmt.keyword == "sweep":
            open_sweep = SweepBlock(stmt)
            items.append(open_sweep)
            continue
        if stmt.keyword == "output":
            sink.add("E001", lineno, stmt.column, "'output' only appears inside a sweep block")
        items.append(stmt)
    if open_sweep is not None:
        open_sweep.closed = False
        sink.add("E011", open_sweep.line, open_sweep.header.column, "sweep block is not closed with 'end'")
    return items


def _resolve(document: NetlistDocument, sink: DiagnosticSink) -> None:
    """Semantic pass: names, references and statement order"""
    statements = [i for i in document.items if isinstance(i, Statement)]
    declared: Dict[str, Statement] = {}
    for stmt in statements:
        if stmt.keyword in SOURCES + STATE_ELEMENTS + ("pbs_combine", "ellipsoid") and stmt.name:
            if stmt.name in declared:
                first = declared[stmt.name]
                sink.add("E004", stmt.line, stmt.column, f"duplicate name '{stmt.name}'", f"first declared on line {first.line}")
            else:
                declared[stmt.name] = stmt

    combines = [s for s in statements if s.keyword == "pbs_combine"]
    first_combine = combines[0] if combines else None
    for extra in combines[1:]:
        sink.add("E010", extra.line, extra.column, "only one pbs_combine may produce the measured beam",
                 f"first pbs_combine on line {first_combine.line}")

    def needs_combine(stmt: Statement) -> bool:
        if first_combine is None:
            sink.add("E009", stmt.line, stmt.column, f"'{stmt.keyword}' needs a pbs_combine to act on")
            return False
        if first_combine.line > stmt.line:
            sink.add("E005", stmt.line, stmt.column,
                     f"'{stmt.keyword}' refers to the combined beam declared later on line {first_combine.line}")
            return False
        return True

    # sidecars and format variants count, so two statements clash when any of their files do
    files: Dict[str, int] = {}

    def claim_file(stmt: Statement) -> None:
        arg = stmt.args.get("file")
        if arg is None or arg.value is None:
            return
        names = written_files(stmt.keyword, arg.value)
        if len(set(names)) < len(names):
            sink.add("E004", stmt.line, arg.column, f"output file '{names[0]}' is written twice",
                     "the table and its .json sidecar would share one name")
            return
        for name in names:
            if name in RESERVED_OUTPUTS:
                sink.add("E004", stmt.line, arg.column, f"output file '{name}' is written twice",
                         "that name is reserved for the run's own output")
            elif name in files:
                sink.add("E004", stmt.line, arg.column, f"output file '{name}' is written twice",
                         f"also written on line {files[name]}")
            else:
                continue
            return
        for name in names:
            files[name] = stmt.line

    for stmt in statements:
        keyword = stmt.keyword
        if keyword == "band":
            if document.band is not None:
                sink.add("E004", stmt.line, stmt.column, "band declared more than once",
                         f"first declared on line {document.band.line}")
            else:
                document.band = stmt
        elif keyword in SOURCES:
            if stmt.name and declared.get(stmt.name) is stmt:
                document.sources[stmt.name] = stmt
        elif keyword == "pbs_combine":
            if stmt is not first_combine:
                continue
            document.combine = stmt
            for key in ("h", "v"):
                arg = stmt.args.get(key)
                if arg is None or arg.value is None:
                    continue
                target = declared.get(arg.value)
                if target is None:
                    sink.add("E008", stmt.line, arg.column, f"undefined name '{arg.value}'",
                             _hint(arg.value, [n for n, s in declared.items() if s.keyword in SOURCES]))
                elif target.keyword not in SOURCES:
                    sink.add("E009", stmt.line, arg.column, f"'{arg.value}' is a {target.keyword}, not a beam source")
                elif target.line > stmt.line:
                    sink.add("E005", stmt.line, arg.column,
                             f"'{arg.value}' is used before its declaration on line {target.line}")
        elif keyword in NEEDS_COMBINE:
            if not needs_combine(stmt):
                continue
            if keyword in STATE_ELEMENTS:
                document.elements.append(stmt)
            elif keyword == "measure":
                claim_file(stmt)
                document.measurements.append(stmt)
            else:
                claim_file(stmt)
                document.ellipsoids.append(stmt)

    for block in (i for i in document.items if isinstance(i, SweepBlock)):
        if not needs_combine(block.header):
            continue
        outputs = block.outputs
        if not outputs and block.closed:
            sink.add("E007", block.line, block.header.column, "sweep block needs at least one 'output' statement")
        for out in outputs:
            claim_file(out)
        document.sweeps.append(block)


def parse(text: str) -> ParseResult:
    """Parse netlist text into a document plus every diagnostic found"""
    sink = DiagnosticSink()
    document = NetlistDocument(items=_collect(text, sink))
    _resolve(document, sink)
    if not document.has_work:
        sink.add("W001", 1, 1, "nothing to simulate", "add a measure, ellipsoid or sweep statement")
    result = ParseResult(document, sink.items)
    logger.debug("Parsed netlist: %d items, %d diagnostics", len(document.items), len(result.diagnostics))
    return result


def parse_or_raise(text: str) -> NetlistDocument:
    result = parse(text)
    if not result.ok:
        raise NetlistError(result.errors)
    return result.document
