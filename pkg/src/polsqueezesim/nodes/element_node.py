from src.polsqueezesim.apparatus.waveplates import WavePlate, WavePlateKind
from src.polsqueezesim.gaussian.elements import (
    SymplecticElement,
    add_correlated_classical_noise,
    apply_element,
    loss_element,
    phase_shift,
)
from src.polsqueezesim.gaussian.modes import lossy_efficiency_chain
from src.polsqueezesim.nodes.circuit_node import CircuitNode
from src.polsqueezesim.state.state import CircuitState


class ElementNode(CircuitNode):
    """One optical element acting on the combined two-mode beam"""

    def element(self) -> SymplecticElement:
        stmt = self.statement
        label = stmt.name or stmt.keyword
        if stmt.keyword == "loss":
            return loss_element(stmt.get("eta"), label)
        if stmt.keyword == "efficiency":
            return loss_element(lossy_efficiency_chain(stmt.get("losses")), label)
        if stmt.keyword == "phase":
            return phase_shift(stmt.get("theta"), label)
        if stmt.keyword == "waveplate":
            return WavePlate(WavePlateKind(stmt.get("kind")), stmt.get("angle")).element()
        raise ValueError(f"'{stmt.keyword}' is not a symplectic element")

    def apply(self, state: CircuitState) -> dict:
        stmt = self.statement
        if stmt.keyword == "correlated_noise":
            updated = add_correlated_classical_noise(
                state["state"], stmt.get("quad"), stmt.get("excess"), int(stmt.get("corr"))
            )
        else:
            updated = apply_element(state["state"], self.element())
        return {"state": updated}
