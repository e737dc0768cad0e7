import csv
import json
import math

import numpy as np
import pytest

from src.polsqueezesim.exceptions import CircuitRunError, DomainError
from src.polsqueezesim.graph.circuit_runner import (
    CircuitRunner,
    RunOptions,
    band_grid,
    run,
    sweep_theta,
    theta_grid,
)
from src.polsqueezesim.netlist.parser import parse_or_raise
from src.polsqueezesim.spectra.artifacts import read_stokes_csv
from src.polsqueezesim.stokes.ellipsoid import EllipsoidShape
from tests.conftest import NETLISTS_DIR, SCENARIOS_DIR

SMALL_CIGAR = (
    "band start=5MHz stop=5.2MHz step=100kHz\n"
    "squeezer opa1 quad=amplitude v0=-6.5dB power=1e6\n"
    "squeezer opa2 quad=amplitude v0=-6.5dB power=1e6\n"
    "pbs_combine h=opa1 v=opa2 theta=90deg\n"
    "efficiency losses=0.14,0.07,0.05,0.04\n"
    "measure S1 file=s1.csv\n"
    "measure S2 file=s2.csv\n"
)


def scenario(name):
    return parse_or_raise((SCENARIOS_DIR / name).read_text(encoding="utf-8"))


def read_rows(path):
    with path.open(newline="", encoding="utf-8") as f:
        return list(csv.reader(f))


def test_band_grid():
    grid = band_grid(scenario("cigar.nl"))
    assert grid.size == 71
    assert grid[0] == 3e6 and grid[-1] == pytest.approx(10e6)
    default = band_grid(scenario("single_squeezed.nl"))
    assert default[0] == 3e6 and default[1] - default[0] == pytest.approx(10e3)


def test_band_grid_never_passes_stop():
    document = parse_or_raise("band start=3MHz stop=10MHz step=4MHz\n")
    np.testing.assert_allclose(band_grid(document), [3e6, 7e6])
    exact = band_grid(parse_or_raise("band start=3MHz stop=10MHz step=10kHz\n"))
    assert exact.size == 701 and exact[-1] == 10e6


def test_tabulated_source_with_a_coarse_band(tmp_path):
    text = (NETLISTS_DIR / "valid" / "tabulated_source.nl").read_text(encoding="utf-8")
    text = text.replace("step=1MHz", "step=3.5MHz")
    result = run(parse_or_raise(text), RunOptions(out_dir=tmp_path, base_dir=NETLISTS_DIR / "valid"))
    np.testing.assert_allclose(result.spectra["S0"].frequencies, [1e6, 4.5e6, 8e6])


def test_theta_grid_is_half_open():
    grid = theta_grid(0.0, 2.0 * math.pi, 4)
    np.testing.assert_allclose(grid, [0.0, math.pi / 2.0, math.pi, 1.5 * math.pi])


def test_cigar_scenario(tmp_path):
    result = run(scenario("cigar.nl"), RunOptions(out_dir=tmp_path))
    for label in ("S0", "S1", "S3"):
        np.testing.assert_allclose(result.spectra[label].values, -3.63, atol=0.01)
    assert np.all(result.spectra["S2"].values > 3.0)
    assert [e.classification for e in result.ellipsoids] == [EllipsoidShape.CIGAR]

    rows = read_rows(tmp_path / "s1.csv")
    assert rows[0] == ["freq_hz", "v1_db"]
    assert len(rows) == 72
    assert rows[1] == ["3000000.0", "-3.626"]
    sidecar = json.loads((tmp_path / "s1.json").read_text(encoding="utf-8"))
    assert sidecar["label"] == "S1" and sidecar["points"] == 71
    assert sidecar["calibration"]["quoted_band_db"] == pytest.approx(0.04)

    header, frequencies, table = read_stokes_csv(tmp_path / "stokes.csv")
    assert header == ("freq_hz", "v0_db", "v1_db", "v2_db", "v3_db")
    assert frequencies.size == 71
    np.testing.assert_allclose(table[:, 1], -3.626, atol=1e-3)

    ellipsoid = json.loads((tmp_path / "ellipsoid_5MHz.json").read_text(encoding="utf-8"))
    assert ellipsoid["classification"] == "Cigar"
    assert ellipsoid["frequency_hz"] == 5e6


def test_pancake_scenario(tmp_path):
    result = run(scenario("pancake.nl"), RunOptions(out_dir=tmp_path))
    np.testing.assert_allclose(result.spectra["S2"].values, -2.80, atol=0.01)
    for label in ("S0", "S1", "S3"):
        assert np.all(result.spectra[label].values > 0.0)
    assert result.ellipsoids[0].classification is EllipsoidShape.PANCAKE


def test_coherent_scenario(tmp_path):
    result = run(scenario("coherent.nl"), RunOptions(out_dir=tmp_path))
    for spectrum in result.spectra.values():
        np.testing.assert_allclose(spectrum.values, 0.0, atol=1e-9)
    assert result.ellipsoids[0].classification is EllipsoidShape.SPHERE


def test_correlated_pump_noise_cancels_in_s1(tmp_path):
    result = run(scenario("correlated_pump_noise.nl"), RunOptions(out_dir=tmp_path))
    np.testing.assert_allclose(result.spectra["S1"].values, 10.0 * math.log10(10.0 ** -0.65), atol=1e-9)
    assert np.all(result.spectra["S0"].values > 0.0)
    assert set(result.spectra) == {"S0", "S1", "S3"}


def test_single_squeezed_sweep_stays_above_the_bound(tmp_path):
    result = run(scenario("single_squeezed.nl"), RunOptions(out_dir=tmp_path))
    rows = read_rows(tmp_path / "single_squeezed_theta.csv")
    assert rows[0] == ["theta_rad", "s0", "s1", "s2", "s3", "v0", "v1", "v2", "v3"]
    assert len(rows) == 257
    for row in rows[1:]:
        v1, v2, v3 = (float(x) for x in row[6:9])
        assert min(v1 + v2, v2 + v3, v3 + v1) >= 1.0 - 1e-6
    assert len(result.sweeps) == 1


def test_frequency_sweep_as_json(tmp_path):
    document = parse_or_raise((NETLISTS_DIR / "valid" / "frequency_sweep.nl").read_text(encoding="utf-8"))
    run(document, RunOptions(out_dir=tmp_path, output_format="json"))
    record = json.loads((tmp_path / "cigar_vs_frequency.json").read_text(encoding="utf-8"))
    assert record["axis"] == "frequency"
    assert record["columns"][0] == "freq_hz"
    assert len(record["rows"]) == 39
    # Lorentzian squeezing fades toward shot noise at high frequency
    assert record["rows"][0][6] < record["rows"][-1][6] < 1.0


def test_identical_runs_write_identical_bytes(tmp_path):
    first = run(scenario("cigar.nl"), RunOptions(out_dir=tmp_path / "a", seed=5))
    second = run(scenario("cigar.nl"), RunOptions(out_dir=tmp_path / "b", seed=5))
    for a, b in zip(sorted(first.artifacts), sorted(second.artifacts)):
        assert a.name == b.name
        assert a.read_bytes() == b.read_bytes()
    assert first.manifest.read_bytes() == second.manifest.read_bytes()


def test_manifest_lists_every_artifact(tmp_path):
    result = run(scenario("coherent.nl"), RunOptions(out_dir=tmp_path))
    manifest = json.loads(result.manifest.read_text(encoding="utf-8"))
    paths = [a["path"] for a in manifest["artifacts"]]
    assert paths == sorted(paths)
    assert {"s0.csv", "s0.json", "stokes.csv", "ellipsoid_5MHz.json"} <= set(paths)
    assert manifest["seed"] == 20020101
    assert manifest["oracle"] is None


def test_oracle_columns_on_a_small_band(tmp_path):
    options = RunOptions(out_dir=tmp_path, oracle=True, oracle_samples=20_000)
    result = run(parse_or_raise(SMALL_CIGAR), options)
    assert result.oracle.checked == 6
    assert result.oracle.passed
    rows = read_rows(tmp_path / "s1.csv")
    assert rows[0] == ["freq_hz", "v1_db", "oracle_db", "oracle_z", "oracle_pass"]
    for row in rows[1:]:
        assert abs(float(row[2]) - float(row[1])) < 0.25
        assert row[4] == "1"
    sidecar = json.loads((tmp_path / "s1.json").read_text(encoding="utf-8"))
    assert sidecar["oracle"]["samples"] == 20_000


def test_oracle_seed_changes_the_config_hash(tmp_path):
    document = parse_or_raise(SMALL_CIGAR)
    a = run(document, RunOptions(out_dir=tmp_path / "a", seed=1))
    b = run(document, RunOptions(out_dir=tmp_path / "b", seed=2))
    hash_a = json.loads(a.manifest.read_text(encoding="utf-8"))["config_hash"]
    hash_b = json.loads(b.manifest.read_text(encoding="utf-8"))["config_hash"]
    assert hash_a != hash_b


def test_repeated_setup_keeps_both_spectra(tmp_path):
    text = SMALL_CIGAR + "measure S1 file=s1_lossy.csv efficiency=0.5\n"
    result = run(parse_or_raise(text), RunOptions(out_dir=tmp_path))
    assert set(result.spectra) == {"S1", "S2", "S1:8"}
    assert np.all(result.spectra["S1:8"].values > result.spectra["S1"].values)


def test_sweep_theta_helper():
    rows = sweep_theta(scenario("cigar.nl"), theta_grid(0.0, 2.0 * math.pi, 8), 5e6)
    assert len(rows) == 8
    with pytest.raises(DomainError):
        CircuitRunner(scenario("cigar.nl")).sweep_theta([2.0 * math.pi], 5e6)


def test_dark_beams_fail_at_the_ellipsoid_line(tmp_path):
    text = "coherent a power=0\ncoherent b power=0\npbs_combine h=a v=b\nellipsoid at=5MHz file=e.json\n"
    with pytest.raises(CircuitRunError) as excinfo:
        run(parse_or_raise(text), RunOptions(out_dir=tmp_path))
    assert excinfo.value.line == 4


def test_unknown_output_format():
    with pytest.raises(DomainError):
        RunOptions(output_format="xlsx")
