"""
CSV and JSON artifacts

Spectra are written as CSV with dB values to three decimals; metadata goes
to a JSON sidecar next to each CSV. Records carry no timestamps so that
identical runs produce identical bytes.
"""
import csv
import json
import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
from pydantic import BaseModel, Field

from src.polsqueezesim.spectra.spectrum import NoiseSpectrum
from src.polsqueezesim.stokes.engine import STOKES_LABELS

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
STOKES_CSV_HEADER = ("freq_hz", "v0_db", "v1_db", "v2_db", "v3_db")


class EllipsoidRecord(BaseModel):
    center: List[float] = Field(min_length=3, max_length=3)
    semi_axes: List[float] = Field(min_length=3, max_length=3)
    classification: str
    frequency_hz: float


class StandardErrors(BaseModel):
    means: List[float]
    variances: List[float]


class OracleReport(BaseModel):
    means: List[float] = Field(min_length=4, max_length=4)
    variances: List[float] = Field(min_length=4, max_length=4)
    std_errors: StandardErrors
    mode: str
    seed: int = Field(ge=0)
    n: int = Field(ge=1)
    frequency_hz: Optional[float] = None
    generator: str = "Philox"


class CalibrationRecord(BaseModel):
    reference: float
    mismatch: float
    computed_band_db: float
    quoted_band_db: float


class SpectrumSidecar(BaseModel):
    label: str
    columns: List[str]
    points: int
    start_hz: float
    stop_hz: float
    rbw_hz: Optional[float] = None
    vbw_hz: Optional[float] = None
    averages: int = 1
    darknoise_margin_db: Optional[float] = None
    calibration: Optional[CalibrationRecord] = None
    oracle: Optional[Dict[str, Union[int, float, bool, str]]] = None


def _db(value: float) -> str:
    return f"{value:.3f}"


def _freq(value: float) -> str:
    return f"{value:.1f}"


def variance_column(label: str) -> str:
    """'S2' -> 'v2_db'; other labels are used as they are"""
    if label in STOKES_LABELS:
        return f"v{label[1]}_db"
    return f"{label or 'v'}_db"


def write_json(path: PathLike, record: BaseModel) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    text = json.dumps(record.model_dump(mode="json"), indent=2, sort_keys=True) + "\n"
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", path)
    return path


def write_stokes_csv(path: PathLike, frequencies: Sequence[float], variances_db: np.ndarray) -> Path:
    """Rows ``freq_hz,v0_db,v1_db,v2_db,v3_db``; ``variances_db`` has shape (F, 4)"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    values = np.asarray(variances_db, dtype=float)
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(STOKES_CSV_HEADER)
        for freq, row in zip(frequencies, values):
            writer.writerow([_freq(freq)] + [_db(v) for v in row])
    logger.info("Wrote %s", path)
    return path


def read_stokes_csv(path: PathLike):
    with Path(path).open("r", newline="", encoding="utf-8") as f:
        reader = csv.reader(f)
        header = tuple(next(reader))
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.array(rows)
    return header, data[:, 0], data[:, 1:]


def write_measurement_csv(
    path: PathLike,
    spectrum: NoiseSpectrum,
    oracle_db: Optional[np.ndarray] = None,
    oracle_z: Optional[np.ndarray] = None,
    sigma: Optional[float] = None,
) -> Path:
    """
    One measured spectrum in dB relative to shot noise, with optional
    Monte-Carlo verification columns.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = ["freq_hz", variance_column(spectrum.meta.label)]
    with_oracle = oracle_db is not None
    if with_oracle:
        header += ["oracle_db", "oracle_z", "oracle_pass"]
    db = spectrum.db()
    with path.open("w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for i, freq in enumerate(spectrum.frequencies):
            row = [_freq(freq), _db(db[i])]
            if with_oracle:
                z = float(oracle_z[i])
                row += [_db(oracle_db[i]), f"{z:.2f}", "1" if z <= sigma else "0"]
            writer.writerow(row)
    logger.info("Wrote %s", path)
    return path


def spectrum_sidecar(spectrum: NoiseSpectrum, columns: Sequence[str], oracle: Optional[dict] = None) -> SpectrumSidecar:
    meta = spectrum.meta
    calibration = None
    if meta.calibration is not None:
        c = meta.calibration
        calibration = CalibrationRecord(
            reference=c.reference,
            mismatch=c.mismatch,
            computed_band_db=c.computed_band_db,
            quoted_band_db=c.quoted_band_db,
        )
    return SpectrumSidecar(
        label=meta.label,
        columns=list(columns),
        points=int(spectrum.frequencies.size),
        start_hz=float(spectrum.frequencies[0]),
        stop_hz=float(spectrum.frequencies[-1]),
        rbw_hz=meta.rbw_hz,
        vbw_hz=meta.vbw_hz,
        averages=meta.averages,
        darknoise_margin_db=meta.darknoise_margin_db,
        calibration=calibration,
        oracle=oracle,
    )


def sidecar_path(path: PathLike) -> Path:
    return Path(path).with_suffix(".json")


def stokes_table_db(spectra: Dict[str, NoiseSpectrum]) -> np.ndarray:
    """Stack per-Stokes spectra into an (F, 4) array of dB values"""
    return np.stack([spectra[label].db() for label in STOKES_LABELS], axis=-1)
