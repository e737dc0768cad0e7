import operator
from typing import Annotated, Dict, List, Optional

import numpy as np
from typing_extensions import TypedDict

from src.polsqueezesim.apparatus.detection import PhotocurrentStats
from src.polsqueezesim.gaussian.modes import BeamMode
from src.polsqueezesim.gaussian.state import TwoModeState


class CircuitState(TypedDict, total=False):
    frequencies: np.ndarray
    theta_override: Optional[float]
    beams: Annotated[Dict[str, BeamMode], operator.or_]
    state: Optional[TwoModeState]
    applied: Annotated[List[str], operator.add]
    measurements: Annotated[Dict[int, PhotocurrentStats], operator.or_]
