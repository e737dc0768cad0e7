import numpy as np
import pytest

from src.polsqueezesim.exceptions import CircuitRunError, DomainError
from src.polsqueezesim.graph.graph_builder import GraphBuilder
from src.polsqueezesim.netlist.parser import parse, parse_or_raise
from src.polsqueezesim.stokes.engine import stokes_variances
from tests.conftest import NETLISTS_DIR, SCENARIOS_DIR, squeezed_pair

GRID = np.array([3e6, 5e6])


def invoke(graph, theta=None):
    return graph.invoke({"frequencies": GRID, "theta_override": theta, "applied": []})


def test_nodes_follow_the_netlist():
    document = parse_or_raise((SCENARIOS_DIR / "cigar.nl").read_text(encoding="utf-8"))
    graph = GraphBuilder(document).setup_graph("measure")
    nodes = set(graph.get_graph().nodes)
    assert {"source_opa1", "source_opa2", "pbs_combine", "element_00_efficiency", "detection"} <= nodes
    result = invoke(graph)
    assert result["applied"] == [
        "squeezer:opa1", "squeezer:opa2", "pbs_combine:line6", "efficiency:line9", "detection"
    ]
    assert sorted(result["measurements"]) == [11, 12, 13, 14]


def test_state_graph_stops_before_detection():
    document = parse_or_raise((SCENARIOS_DIR / "cigar.nl").read_text(encoding="utf-8"))
    result = invoke(GraphBuilder(document).setup_graph("state"))
    assert "measurements" not in result
    assert result["applied"][-1] == "efficiency:line9"


def test_graph_state_matches_a_hand_built_circuit():
    text = (
        "squeezer opa1 quad=amplitude v0=0.5 power=1e6\n"
        "squeezer opa2 quad=amplitude v0=0.5 power=1e6\n"
        "pbs_combine h=opa1 v=opa2 theta=90deg\n"
        "ellipsoid at=5MHz file=e.json\n"
    )
    state = invoke(GraphBuilder(parse_or_raise(text)).setup_graph("state"))["state"]
    expected = squeezed_pair("amplitude", 0.5, 1e6, GRID)
    np.testing.assert_allclose(stokes_variances(state), stokes_variances(expected), rtol=1e-12)


def test_theta_override_replaces_the_locked_phase():
    document = parse_or_raise((SCENARIOS_DIR / "cigar.nl").read_text(encoding="utf-8"))
    state = invoke(GraphBuilder(document).setup_graph("state"), theta=0.25)["state"]
    assert state.theta == pytest.approx(0.25)


def test_tabulated_source_reads_relative_to_base_dir():
    document = parse_or_raise((NETLISTS_DIR / "valid" / "tabulated_source.nl").read_text(encoding="utf-8"))
    graph = GraphBuilder(document, NETLISTS_DIR / "valid").setup_graph("state")
    assert invoke(graph)["state"].frequencies.tolist() == GRID.tolist()


def test_missing_table_is_tied_to_its_line(tmp_path):
    document = parse_or_raise((NETLISTS_DIR / "valid" / "tabulated_source.nl").read_text(encoding="utf-8"))
    graph = GraphBuilder(document, tmp_path).setup_graph("state")
    with pytest.raises(CircuitRunError) as excinfo:
        invoke(graph)
    assert excinfo.value.line == 2


def test_builder_needs_a_combine():
    document = parse("coherent a power=1\n").document
    with pytest.raises(DomainError):
        GraphBuilder(document)


def test_unknown_usecase():
    document = parse_or_raise((SCENARIOS_DIR / "coherent.nl").read_text(encoding="utf-8"))
    with pytest.raises(DomainError):
        GraphBuilder(document).setup_graph("chat")
