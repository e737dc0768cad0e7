import logging
from pathlib import Path

from langgraph.graph import END, START, StateGraph

from src.polsqueezesim.exceptions import DomainError
from src.polsqueezesim.netlist.document import NetlistDocument
from src.polsqueezesim.nodes.combine_node import CombineNode
from src.polsqueezesim.nodes.detection_node import DetectionNode
from src.polsqueezesim.nodes.element_node import ElementNode
from src.polsqueezesim.nodes.source_node import SourceNode
from src.polsqueezesim.state.state import CircuitState

logger = logging.getLogger(__name__)


class GraphBuilder:
    """Compiles a validated netlist into a linear LangGraph program"""

    def __init__(self, document: NetlistDocument, base_dir: Path = Path(".")):
        if document.combine is None:
            raise DomainError("netlist has no pbs_combine to compile")
        self.document = document
        self.base_dir = Path(base_dir)

    def _chain(self, graph_builder: StateGraph, with_detection: bool) -> StateGraph:
        nodes = []
        combine = self.document.combine
        for name in (combine.get("h"), combine.get("v")):
            nodes.append((f"source_{name}", SourceNode(self.document.sources[name], self.base_dir)))
        nodes.append(("pbs_combine", CombineNode(combine)))
        for index, stmt in enumerate(self.document.elements):
            nodes.append((f"element_{index:02d}_{stmt.keyword}", ElementNode(stmt)))
        if with_detection and self.document.measurements:
            nodes.append(("detection", DetectionNode(self.document.measurements)))

        previous = START
        for node_name, node in nodes:
            graph_builder.add_node(node_name, node.process)
            graph_builder.add_edge(previous, node_name)
            logger.debug("Compiled node %s (%s)", node_name, node.label)
            previous = node_name
        graph_builder.add_edge(previous, END)
        return graph_builder

    def state_build_graph(self) -> StateGraph:
        """Sources, combination and elements: ends with the beam at the detectors"""
        return self._chain(StateGraph(CircuitState), with_detection=False)

    def measure_build_graph(self) -> StateGraph:
        return self._chain(StateGraph(CircuitState), with_detection=True)

    def setup_graph(self, usecase: str):
        if usecase == "state":
            graph_builder = self.state_build_graph()
        elif usecase == "measure":
            graph_builder = self.measure_build_graph()
        else:
            raise DomainError(f"Unknown usecase: {usecase}")
        return graph_builder.compile()
