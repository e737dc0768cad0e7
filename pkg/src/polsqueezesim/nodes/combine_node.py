from src.polsqueezesim.apparatus.detection import combine_on_pbs
from src.polsqueezesim.nodes.circuit_node import CircuitNode
from src.polsqueezesim.state.state import CircuitState


class CombineNode(CircuitNode):
    def apply(self, state: CircuitState) -> dict:
        theta = state.get("theta_override")
        if theta is None:
            theta = self.statement.get("theta", 0.0)
        beams = state["beams"]
        combined = combine_on_pbs(beams[self.statement.get("h")], beams[self.statement.get("v")], theta)
        return {"state": combined}
