import re

import pytest

from src.polsqueezesim.netlist.diagnostics import CODES
from src.polsqueezesim.netlist.formatter import format_text
from src.polsqueezesim.netlist.parser import parse
from tests.conftest import NETLISTS_DIR, SCENARIOS_DIR

VALID = sorted((NETLISTS_DIR / "valid").glob("*.nl"))
INVALID = sorted((NETLISTS_DIR / "invalid").glob("*.nl"))
SCENARIOS = sorted(SCENARIOS_DIR.glob("*.nl"))
EXPECT = re.compile(r"^# expect: (?P<code>[EW]\d{3})")


def expected_code(path):
    return EXPECT.match(path.read_text(encoding="utf-8")).group("code")


def test_corpus_sizes():
    assert len(VALID) >= 20
    assert len(INVALID) >= 20


@pytest.mark.parametrize("path", VALID + SCENARIOS, ids=lambda p: f"{p.parent.name}/{p.name}")
def test_valid_netlists_parse_cleanly(path):
    result = parse(path.read_text(encoding="utf-8"))
    assert result.diagnostics == []


@pytest.mark.parametrize("path", VALID + SCENARIOS, ids=lambda p: f"{p.parent.name}/{p.name}")
def test_valid_netlists_are_canonical(path):
    text = path.read_text(encoding="utf-8")
    assert format_text(text) == text


@pytest.mark.parametrize("path", INVALID, ids=lambda p: p.name)
def test_invalid_netlists_report_their_code(path):
    code = expected_code(path)
    result = parse(path.read_text(encoding="utf-8"))
    assert code in [d.code for d in result.diagnostics]
    if code.startswith("E"):
        assert not result.ok


@pytest.mark.parametrize("path", INVALID, ids=lambda p: p.name)
def test_invalid_netlists_survive_formatting(path):
    text = path.read_text(encoding="utf-8")
    once = format_text(text)
    assert format_text(once) == once
    assert expected_code(path) in [d.code for d in parse(once).diagnostics]


def test_every_code_is_exercised():
    assert {expected_code(p) for p in INVALID} == set(CODES)


def test_scenarios_match_the_corpus_copies():
    for scenario in SCENARIOS:
        copy = NETLISTS_DIR / "valid" / scenario.name
        assert copy.read_text(encoding="utf-8") == scenario.read_text(encoding="utf-8")
