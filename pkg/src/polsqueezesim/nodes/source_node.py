import math
from pathlib import Path

from src.polsqueezesim.gaussian.modes import make_coherent, make_squeezed
from src.polsqueezesim.gaussian.sources import TabulatedSpectrum, squeezing_model
from src.polsqueezesim.netlist.document import Statement
from src.polsqueezesim.nodes.circuit_node import CircuitNode
from src.polsqueezesim.state.state import CircuitState


class SourceNode(CircuitNode):
    """Declares one named beam on the frequency grid of the run"""

    def __init__(self, statement: Statement, base_dir: Path = Path(".")):
        super().__init__(statement)
        self.base_dir = Path(base_dir)

    def build_beam(self, frequencies):
        stmt = self.statement
        amplitude = math.sqrt(stmt.get("power"))
        if stmt.keyword == "coherent":
            return make_coherent(amplitude, frequencies)
        if stmt.keyword == "squeezer":
            model = squeezing_model(stmt.get("v0"), stmt.get("corner"), stmt.get("excess", 1.0))
            return make_squeezed(amplitude, stmt.get("quad"), model, frequencies)
        table = TabulatedSpectrum.from_csv(self.base_dir / stmt.get("file"))
        return table.to_mode(amplitude, frequencies)

    def apply(self, state: CircuitState) -> dict:
        return {"beams": {self.statement.name: self.build_beam(state["frequencies"])}}
