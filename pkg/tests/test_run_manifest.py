import hashlib

import pytest

from src.polsqueezesim.monitoring.run_manifest import (
    OracleGateSummary,
    build_manifest,
    collect_versions,
    config_hash,
)


def test_config_hash_covers_text_and_options():
    base = config_hash("coherent a power=1\n", {"seed": 1})
    assert base == config_hash("coherent a power=1\n", {"seed": 1})
    assert base != config_hash("coherent a power=2\n", {"seed": 1})
    assert base != config_hash("coherent a power=1\n", {"seed": 2})
    assert config_hash("x", {"a": 1, "b": 2}) == config_hash("x", {"b": 2, "a": 1})


def test_versions_include_the_package():
    versions = collect_versions()
    assert versions["polsqueezesim"] == "0.1.0"
    assert set(versions) >= {"numpy", "scipy", "langgraph", "pydantic"}


def test_manifest_entries_are_relative_and_sorted(tmp_path):
    (tmp_path / "sub").mkdir()
    b = tmp_path / "b.csv"
    a = tmp_path / "sub" / "a.csv"
    b.write_text("b\n")
    a.write_text("a\n")
    manifest = build_manifest("text", {}, 7, [b, a], tmp_path)
    assert [entry.path for entry in manifest.artifacts] == ["b.csv", "sub/a.csv"]
    assert manifest.artifacts[0].sha256 == hashlib.sha256(b"b\n").hexdigest()
    assert manifest.seed == 7


def test_gate_summary():
    assert OracleGateSummary(sigma=5, samples=10_000, checked=4, failed=0).passed
    assert not OracleGateSummary(sigma=5, samples=10_000, checked=4, failed=1).passed
    with pytest.raises(ValueError):
        OracleGateSummary(sigma=5, samples=10_000, checked=-1, failed=0)
