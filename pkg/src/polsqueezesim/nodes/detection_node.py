from typing import List

from src.polsqueezesim.apparatus.detection import canonical_setup, measure
from src.polsqueezesim.exceptions import CircuitRunError, SqueezeSimError
from src.polsqueezesim.netlist.document import Statement
from src.polsqueezesim.nodes.circuit_node import CircuitNode
from src.polsqueezesim.state.state import CircuitState


class DetectionNode(CircuitNode):
    """Runs every measure statement on the final beam; results keyed by netlist line"""

    def __init__(self, measurements: List[Statement]):
        super().__init__(Statement("detection", measurements[0].line if measurements else 0))
        self.measurements = measurements

    @property
    def label(self) -> str:
        return "detection"

    def apply(self, state: CircuitState) -> dict:
        results = {}
        for stmt in self.measurements:
            try:
                setup = canonical_setup(stmt.name, stmt.get("efficiency", 1.0))
                results[stmt.line] = measure(setup, state["state"])
            except SqueezeSimError as e:
                raise CircuitRunError(f"measure {stmt.name}: {e}", stmt.line) from e
        return {"measurements": results}
