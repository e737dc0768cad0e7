"""
Parsed netlist: line items for the formatter plus the semantic views the
runner compiles
"""
import os
from dataclasses import dataclass, field
from pathlib import PurePath
from typing import Dict, List, Optional, Union

ArgValue = Union[float, int, str, List[float]]

STOKES_CSV = "stokes.csv"
STOKES_JSON = "stokes.json"
RUN_MANIFEST = "run_manifest.json"
RESERVED_OUTPUTS = (STOKES_CSV, STOKES_JSON, RUN_MANIFEST)


@dataclass(frozen=True)
class Argument:
    key: str
    raw: str
    value: ArgValue
    column: int


@dataclass
class Statement:
    keyword: str
    line: int
    column: int = 1
    name: Optional[str] = None
    args: Dict[str, Argument] = field(default_factory=dict)
    comment: Optional[str] = None
    raw: Optional[str] = None

    def get(self, key: str, default=None):
        arg = self.args.get(key)
        return default if arg is None else arg.value

    def __contains__(self, key: str) -> bool:
        return key in self.args


@dataclass
class Comment:
    text: str
    line: int


@dataclass
class Blank:
    line: int


@dataclass
class SweepBlock:
    header: Statement
    body: List[Union[Statement, Comment, Blank]] = field(default_factory=list)
    end_comment: Optional[str] = None
    closed: bool = True

    @property
    def line(self) -> int:
        return self.header.line

    @property
    def axis(self) -> Optional[str]:
        return self.header.name

    @property
    def outputs(self) -> List[Statement]:
        return [item for item in self.body if isinstance(item, Statement) and item.keyword == "output"]


Item = Union[Statement, Comment, Blank, SweepBlock]


@dataclass
class NetlistDocument:
    items: List[Item] = field(default_factory=list)
    band: Optional[Statement] = None
    sources: Dict[str, Statement] = field(default_factory=dict)
    combine: Optional[Statement] = None
    elements: List[Statement] = field(default_factory=list)
    measurements: List[Statement] = field(default_factory=list)
    ellipsoids: List[Statement] = field(default_factory=list)
    sweeps: List[SweepBlock] = field(default_factory=list)

    @property
    def has_work(self) -> bool:
        return bool(self.measurements or self.ellipsoids or self.sweeps)

    def theta_sweeps(self) -> List[SweepBlock]:
        return [s for s in self.sweeps if s.axis == "theta"]

    def frequency_sweeps(self) -> List[SweepBlock]:
        return [s for s in self.sweeps if s.axis == "frequency"]


def written_files(keyword: str, file_name: str) -> List[str]:
    """
    Every file a ``measure``, ``ellipsoid`` or sweep ``output`` statement may
    write, in either output format, relative to the output directory.

    A measure writes its table plus a ``.json`` sidecar (or only the ``.json``
    record), an ellipsoid writes ``.json`` and a sweep output writes the named
    table (or a ``.json`` record). A measure whose table is already named
    ``*.json`` lists that name twice.
    """
    path = PurePath(os.path.normpath(file_name))
    record = path.with_suffix(".json").as_posix()
    if keyword == "ellipsoid":
        return [record]
    if keyword == "output" and path.as_posix() == record:
        return [record]
    return [path.as_posix(), record]
