"""
Run manifest: what produced a set of artifacts

The config hash covers the canonical netlist text and the run options, so a
manifest identifies a reproducible run. Artifact digests let two runs be
compared without opening the files.
"""
import hashlib
import json
import logging
from importlib import metadata
from pathlib import Path
from typing import Dict, List, Optional

from pydantic import BaseModel, Field

import src.polsqueezesim as package

logger = logging.getLogger(__name__)

TRACKED_DISTRIBUTIONS = ("numpy", "scipy", "langgraph", "pydantic")


class ArtifactEntry(BaseModel):
    path: str
    sha256: str


class OracleGateSummary(BaseModel):
    sigma: float
    samples: int
    checked: int = Field(ge=0)
    failed: int = Field(ge=0)

    @property
    def passed(self) -> bool:
        return self.failed == 0


class RunManifest(BaseModel):
    config_hash: str
    seed: int
    versions: Dict[str, str]
    artifacts: List[ArtifactEntry] = Field(default_factory=list)
    oracle: Optional[OracleGateSummary] = None


def config_hash(canonical_text: str, options: dict) -> str:
    payload = canonical_text + "\n" + json.dumps(options, sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def file_digest(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def collect_versions() -> Dict[str, str]:
    versions = {"polsqueezesim": package.__version__}
    for name in TRACKED_DISTRIBUTIONS:
        try:
            versions[name] = metadata.version(name)
        except metadata.PackageNotFoundError:
            versions[name] = "unknown"
    return versions


def build_manifest(
    canonical_text: str,
    options: dict,
    seed: int,
    artifacts: List[Path],
    out_dir: Path,
    oracle: Optional[OracleGateSummary] = None,
) -> RunManifest:
    entries = [
        ArtifactEntry(path=Path(p).relative_to(out_dir).as_posix(), sha256=file_digest(p))
        for p in sorted(artifacts, key=lambda p: Path(p).as_posix())
    ]
    return RunManifest(
        config_hash=config_hash(canonical_text, options),
        seed=seed,
        versions=collect_versions(),
        artifacts=entries,
        oracle=oracle,
    )
