"""
Execute a netlist: compile it, invoke the graph on the requested grids and
write spectra, ellipsoids, sweep tables and the run manifest.
"""
import csv
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np
from pydantic import BaseModel

from src.polsqueezesim.apparatus.detection import PhotocurrentStats
from src.polsqueezesim.exceptions import CircuitRunError, DomainError
from src.polsqueezesim.gaussian.elements import attenuate_state
from src.polsqueezesim.gaussian.state import TwoModeState
from src.polsqueezesim.graph.graph_builder import GraphBuilder
from src.polsqueezesim.monitoring.run_manifest import OracleGateSummary, build_manifest
from src.polsqueezesim.netlist.document import (
    RUN_MANIFEST,
    STOKES_CSV,
    STOKES_JSON,
    NetlistDocument,
    Statement,
    SweepBlock,
)
from src.polsqueezesim.netlist.formatter import format_document
from src.polsqueezesim.oracle.sampler import SampleConfig, oracle_gate, sample_stokes
from src.polsqueezesim.spectra.analyzer import analyzer_meta, normalize_to_shot
from src.polsqueezesim.spectra.artifacts import (
    EllipsoidRecord,
    sidecar_path,
    spectrum_sidecar,
    stokes_table_db,
    variance_column,
    write_json,
    write_measurement_csv,
    write_stokes_csv,
)
from src.polsqueezesim.spectra.spectrum import NoiseSpectrum
from src.polsqueezesim.stokes.ellipsoid import NoiseEllipsoid, classify_ellipsoid
from src.polsqueezesim.stokes.engine import STOKES_LABELS, StokesStats, stokes_spectra, stokes_stats, stokes_variances
from src.polsqueezesim.ui.uiconfigfile import sim_config

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
SWEEP_COLUMNS = ("s0", "s1", "s2", "s3", "v0", "v1", "v2", "v3")


@dataclass
class RunOptions:
    out_dir: Path = Path("out")
    seed: int = field(default_factory=sim_config.get_default_seed)
    output_format: str = "csv"
    oracle: bool = False
    oracle_samples: int = field(default_factory=sim_config.get_oracle_samples)
    base_dir: Path = Path(".")

    def __post_init__(self):
        if self.output_format not in sim_config.get_output_formats():
            raise DomainError(f"unknown output format '{self.output_format}'")
        self.out_dir = Path(self.out_dir)
        self.base_dir = Path(self.base_dir)

    def hashed(self) -> dict:
        """Options that change artifact contents"""
        return {
            "seed": self.seed,
            "format": self.output_format,
            "oracle": self.oracle,
            "oracle_samples": self.oracle_samples if self.oracle else None,
        }


@dataclass
class RunResult:
    artifacts: List[Path] = field(default_factory=list)
    spectra: Dict[str, NoiseSpectrum] = field(default_factory=dict)
    ellipsoids: List[NoiseEllipsoid] = field(default_factory=list)
    sweeps: Dict[str, List[StokesStats]] = field(default_factory=dict)
    oracle: Optional[OracleGateSummary] = None
    manifest: Optional[Path] = None


class SpectrumRecord(BaseModel):
    label: str
    freq_hz: List[float]
    values_db: List[float]
    oracle_db: Optional[List[float]] = None
    oracle_z: Optional[List[float]] = None
    meta: dict


class SweepRecord(BaseModel):
    axis: str
    columns: List[str]
    rows: List[List[float]]


def band_grid(document: NetlistDocument) -> np.ndarray:
    start, stop, step = sim_config.get_band()
    band = document.band
    if band is not None:
        start, stop = band.get("start", start), band.get("stop", stop)
        step = band.get("step", step)
    # stop is included when step divides the band, never exceeded otherwise
    count = math.floor((stop - start) / step + 1e-9) + 1
    return np.minimum(start + step * np.arange(count), stop)


def theta_grid(start: float, stop: float, points: int) -> np.ndarray:
    """``points`` equally spaced angles in [start, stop)"""
    return start + (stop - start) * np.arange(points) / points


def _out_path(options: RunOptions, file_name: str, suffix: Optional[str] = None) -> Path:
    path = options.out_dir / file_name
    return path.with_suffix(suffix) if suffix else path


class CircuitRunner:
    def __init__(self, document: NetlistDocument, options: RunOptions = None):
        self.document = document
        self.options = options or RunOptions()
        builder = GraphBuilder(document, self.options.base_dir)
        self.state_graph = builder.setup_graph("state")
        self.measure_graph = builder.setup_graph("measure")

    def final_state(self, frequencies: Sequence[float], theta: Optional[float] = None) -> TwoModeState:
        result = self.state_graph.invoke(
            {"frequencies": np.asarray(frequencies, dtype=float), "theta_override": theta, "applied": []}
        )
        return result["state"]

    def measure(self, frequencies: Sequence[float]) -> tuple:
        result = self.measure_graph.invoke(
            {"frequencies": np.asarray(frequencies, dtype=float), "theta_override": None, "applied": []}
        )
        logger.info("Circuit: %s", " -> ".join(result["applied"]))
        return result["state"], result.get("measurements", {})

    def sweep_theta(self, thetas: Sequence[float], frequency: float) -> List[StokesStats]:
        thetas = np.asarray(thetas, dtype=float)
        if np.any(thetas < 0.0) or np.any(thetas >= TWO_PI):
            raise DomainError("theta grid must lie within [0, 2pi)")
        return [stokes_stats(self.final_state([frequency], float(t)))[0] for t in thetas]

    def sweep_frequency(self, frequencies: Sequence[float]) -> List[StokesStats]:
        return stokes_stats(self.final_state(frequencies))

    def ellipsoid(self, frequency: float) -> NoiseEllipsoid:
        return classify_ellipsoid(stokes_stats(self.final_state([frequency]))[0])

    def oracle_columns(self, state: TwoModeState, stmt: Statement, index: int):
        """Sampled dB values and z-scores for one measured Stokes spectrum"""
        efficiency = stmt.get("efficiency", 1.0)
        detected = attenuate_state(state, efficiency) if efficiency < 1.0 else state
        analytic = stokes_variances(detected)
        shot = detected.photon_number
        j = STOKES_LABELS.index(stmt.name)
        db, z = [], []
        for k, frequency in enumerate(detected.frequencies):
            seed = int(np.random.SeedSequence([self.options.seed, index, k]).generate_state(1, dtype=np.uint64)[0])
            estimate = sample_stokes(detected, SampleConfig(self.options.oracle_samples, seed), float(frequency))
            gate = oracle_gate(analytic[k], estimate)
            db.append(10.0 * math.log10(estimate.variances[j] / shot))
            z.append(gate.z_scores[j])
        return np.array(db), np.array(z)

    def _write_measurements(self, state: TwoModeState, measurements: Dict[int, PhotocurrentStats], result: RunResult):
        options = self.options
        sigma = sim_config.get_oracle_gate_sigma()
        checked = failed = 0
        for index, stmt in enumerate(self.document.measurements):
            stats = measurements[stmt.line]
            spectrum = NoiseSpectrum(
                state.frequencies, stats.fluctuation_variance, stats.shot_noise, analyzer_meta(stmt.name, averages=1)
            )
            spectrum = normalize_to_shot(spectrum, stats.shot_noise)
            key = stmt.name if stmt.name not in result.spectra else f"{stmt.name}:{stmt.line}"
            result.spectra[key] = spectrum
            oracle_db = oracle_z = None
            oracle_meta = None
            if options.oracle:
                oracle_db, oracle_z = self.oracle_columns(state, stmt, index)
                checked += oracle_z.size
                failed += int(np.sum(oracle_z > sigma))
                oracle_meta = {"samples": options.oracle_samples, "sigma": sigma, "passed": bool(np.all(oracle_z <= sigma))}

            if options.output_format == "csv":
                path = write_measurement_csv(_out_path(options, stmt.get("file")), spectrum, oracle_db, oracle_z, sigma)
                columns = ["freq_hz", variance_column(stmt.name)]
                if options.oracle:
                    columns += ["oracle_db", "oracle_z", "oracle_pass"]
                sidecar = write_json(sidecar_path(path), spectrum_sidecar(spectrum, columns, oracle_meta))
                result.artifacts += [path, sidecar]
            else:
                record = SpectrumRecord(
                    label=stmt.name,
                    freq_hz=[float(f) for f in spectrum.frequencies],
                    values_db=[round(float(v), 3) for v in spectrum.values],
                    oracle_db=None if oracle_db is None else [round(float(v), 3) for v in oracle_db],
                    oracle_z=None if oracle_z is None else [round(float(v), 2) for v in oracle_z],
                    meta=spectrum_sidecar(spectrum, [], oracle_meta).model_dump(mode="json"),
                )
                result.artifacts.append(write_json(_out_path(options, stmt.get("file"), ".json"), record))
        if options.oracle:
            result.oracle = OracleGateSummary(
                sigma=sigma, samples=options.oracle_samples, checked=checked, failed=failed
            )

    def _write_stokes(self, state: TwoModeState, result: RunResult) -> None:
        spectra = stokes_spectra(state)
        if self.options.output_format == "csv":
            path = write_stokes_csv(_out_path(self.options, STOKES_CSV), state.frequencies, stokes_table_db(spectra))
        else:
            record = SweepRecord(
                axis="frequency",
                columns=["freq_hz", "v0_db", "v1_db", "v2_db", "v3_db"],
                rows=[[float(f)] + [round(float(v), 3) for v in row]
                      for f, row in zip(state.frequencies, stokes_table_db(spectra))],
            )
            path = write_json(_out_path(self.options, STOKES_JSON), record)
        result.artifacts.append(path)

    def write_sweep_table(self, file_name: str, axis: str, grid: Sequence[float], rows: List[StokesStats]) -> Path:
        """One row per grid point: axis value, Stokes means, shot-normalized variances"""
        axis_column = "theta_rad" if axis == "theta" else "freq_hz"
        columns = [axis_column, *SWEEP_COLUMNS]
        table = [
            [float(x)] + [float(v) for v in s.means] + [float(v) for v in s.normalized]
            for x, s in zip(grid, rows)
        ]
        if self.options.output_format == "json":
            return write_json(_out_path(self.options, file_name, ".json"),
                              SweepRecord(axis=axis, columns=columns, rows=table))
        path = _out_path(self.options, file_name)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(columns)
            for row in table:
                writer.writerow([f"{v:.9g}" for v in row])
        logger.info("Wrote %s", path)
        return path

    def _write_sweep(self, block: SweepBlock, result: RunResult) -> None:
        header = block.header
        if block.axis == "theta":
            grid = theta_grid(header.get("start"), header.get("stop"), header.get("points"))
            rows = self.sweep_theta(grid, header.get("at"))
        else:
            grid = np.linspace(header.get("start"), header.get("stop"), header.get("points"))
            rows = self.sweep_frequency(grid)
        result.sweeps[f"line{block.line}"] = rows
        for out in block.outputs:
            result.artifacts.append(self.write_sweep_table(out.get("file"), block.axis, grid, rows))

    def run(self) -> RunResult:
        result = RunResult()
        options = self.options
        options.out_dir.mkdir(parents=True, exist_ok=True)

        if self.document.measurements:
            state, measurements = self.measure(band_grid(self.document))
            self._write_measurements(state, measurements, result)
            self._write_stokes(state, result)

        for stmt in self.document.ellipsoids:
            try:
                ellipsoid = self.ellipsoid(stmt.get("at"))
            except DomainError as e:
                raise CircuitRunError(f"ellipsoid: {e}", stmt.line) from e
            result.ellipsoids.append(ellipsoid)
            record = EllipsoidRecord(**ellipsoid.to_record())
            result.artifacts.append(write_json(_out_path(options, stmt.get("file"), ".json"), record))

        for block in self.document.sweeps:
            try:
                self._write_sweep(block, result)
            except DomainError as e:
                raise CircuitRunError(f"sweep: {e}", block.line) from e

        manifest = build_manifest(
            format_document(self.document), options.hashed(), options.seed, result.artifacts, options.out_dir, result.oracle
        )
        result.manifest = options.out_dir / RUN_MANIFEST
        write_json(result.manifest, manifest)
        return result


def run(document: NetlistDocument, options: RunOptions = None) -> RunResult:
    """Write every artifact the netlist asks for; returns what was written"""
    return CircuitRunner(document, options).run()


def sweep_theta(document: NetlistDocument, thetas: Sequence[float], frequency: float, base_dir: Path = Path(".")) -> List[StokesStats]:
    return CircuitRunner(document, RunOptions(base_dir=base_dir)).sweep_theta(thetas, frequency)
