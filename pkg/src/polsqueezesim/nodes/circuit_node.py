"""
Base class of every node in a compiled circuit graph
"""
import logging

from src.polsqueezesim.exceptions import CircuitRunError, SqueezeSimError
from src.polsqueezesim.netlist.document import Statement
from src.polsqueezesim.state.state import CircuitState

logger = logging.getLogger(__name__)


class CircuitNode:
    def __init__(self, statement: Statement):
        self.statement = statement

    @property
    def label(self) -> str:
        name = self.statement.name or f"line{self.statement.line}"
        return f"{self.statement.keyword}:{name}"

    def apply(self, state: CircuitState) -> dict:
        raise NotImplementedError

    def process(self, state: CircuitState) -> dict:
        """Run the node, tying any failure to the netlist line it came from"""
        try:
            update = self.apply(state)
        except CircuitRunError:
            raise
        except (SqueezeSimError, OSError) as e:
            raise CircuitRunError(f"{self.statement.keyword}: {e}", self.statement.line) from e
        logger.debug("Node %s done", self.label)
        update["applied"] = [self.label]
        return update
