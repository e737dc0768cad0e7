"""
Canonical netlist text

Statements are rewritten as ``keyword [name] key=value ...`` with single
spaces and the value text exactly as written; trailing comments follow two
spaces. Sweep bodies are indented by two spaces. Comment and blank lines
are kept, trailing blank lines dropped, and non-empty output ends with one
newline. Lines that did not parse are kept verbatim (stripped).
"""
from typing import List, Optional

from src.polsqueezesim.netlist.document import Blank, Comment, NetlistDocument, Statement, SweepBlock
from src.polsqueezesim.netlist.parser import parse

INDENT = "  "


def _with_comment(code: str, comment: Optional[str]) -> str:
    if comment is None:
        return code
    return f"{code}  {comment}" if code else comment


def format_statement(stmt: Statement) -> str:
    if stmt.raw is not None:
        return _with_comment(stmt.raw, stmt.comment)
    parts = [stmt.keyword]
    if stmt.name is not None:
        parts.append(stmt.name)
    parts.extend(f"{arg.key}={arg.raw}" for arg in stmt.args.values())
    return _with_comment(" ".join(parts), stmt.comment)


def _format_item(item, indent: str) -> List[str]:
    if isinstance(item, Blank):
        return [""]
    if isinstance(item, Comment):
        return [indent + item.text]
    if isinstance(item, SweepBlock):
        lines = [indent + format_statement(item.header)]
        for inner in item.body:
            lines.extend(_format_item(inner, indent + INDENT))
        if item.closed:
            lines.append(indent + _with_comment("end", item.end_comment))
        return lines
    return [indent + format_statement(item)]


def format_document(document: NetlistDocument) -> str:
    lines: List[str] = []
    for item in document.items:
        lines.extend(_format_item(item, ""))
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines) + "\n" if lines else ""


def format_text(text: str) -> str:
    """Parse and re-emit; idempotent, so format_text(format_text(x)) == format_text(x)"""
    return format_document(parse(text).document)
