import logging
import sys

from dotenv import load_dotenv

from src.polsqueezesim.exceptions import DomainError, NetlistError, SqueezeSimError
from src.polsqueezesim.graph.circuit_runner import CircuitRunner, RunOptions, theta_grid
from src.polsqueezesim.monitoring.logging_setup import configure_logging
from src.polsqueezesim.netlist.formatter import format_document
from src.polsqueezesim.netlist.parser import parse, read_quantity
from src.polsqueezesim.oracle.sampler import SampleConfig, SampleMode, oracle_gate, sample_stokes
from src.polsqueezesim.spectra.artifacts import EllipsoidRecord, OracleReport, write_json
from src.polsqueezesim.stokes.engine import stokes_variances
from src.polsqueezesim.ui.cli.display_result import DisplayResultCli
from src.polsqueezesim.ui.cli.loadcli import LoadCliUI
from src.polsqueezesim.ui.uiconfigfile import sim_config

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_RUNTIME = 2


def _read_netlist(path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise DomainError(f"{path} is not UTF-8 text: {e.reason}") from e


def _parse_command(user_input, text):
    path = user_input["netlist"]
    result = parse(text)
    canonical = None
    if user_input["canonical"] or user_input["write"]:
        canonical = format_document(result.document)
    if user_input["write"] and result.ok:
        path.write_text(canonical, encoding="utf-8")
        logger.info("Rewrote %s in canonical form", path)
        canonical = None
    DisplayResultCli("parse", {"path": path, "diagnostics": result.diagnostics, "canonical": canonical}).display_result_on_cli()
    return EXIT_OK if result.ok else EXIT_DIAGNOSTICS


def _execute(user_input, document):
    command = user_input["command"]
    options = RunOptions(
        out_dir=user_input["out_dir"],
        seed=user_input["seed"],
        output_format=user_input["output_format"],
        oracle=user_input.get("oracle", False),
        oracle_samples=user_input.get("oracle_samples") or user_input.get("samples") or sim_config.get_oracle_samples(),
        base_dir=user_input["netlist"].resolve().parent,
    )

    if command == "run" and not document.has_work:
        return {}

    runner = CircuitRunner(document, options)
    if command == "run":
        return {"outcome": runner.run()}

    frequency = read_quantity(user_input["at"], "frequency")
    if command == "sweep":
        grid = theta_grid(
            read_quantity(user_input["start"], "angle"), read_quantity(user_input["stop"], "angle"), user_input["points"]
        )
        rows = runner.sweep_theta(grid, frequency)
        path = runner.write_sweep_table("sweep_theta.csv", "theta", grid, rows)
        return {"rows": rows, "path": path}

    if command == "oracle":
        state = runner.final_state([frequency])
        config = SampleConfig(user_input["samples"], options.seed, SampleMode(user_input["mode"]))
        estimate = sample_stokes(state, config, frequency)
        gate = oracle_gate(stokes_variances(state)[0], estimate)
        path = write_json(options.out_dir / "oracle.json", OracleReport(**estimate.to_record()))
        return {"estimate": estimate, "gate": gate, "path": path}

    ellipsoid = runner.ellipsoid(frequency)
    path = write_json(options.out_dir / "ellipsoid.json", EllipsoidRecord(**ellipsoid.to_record()))
    return {"ellipsoid": ellipsoid, "path": path}


# Main function START
def load_polsqueezesim_app(argv=None) -> int:
    load_dotenv()
    ui = LoadCliUI()
    user_input = ui.load_cli_ui(argv)
    configure_logging(user_input["log_level"])
    command = user_input["command"]

    try:
        text = _read_netlist(user_input["netlist"])
        if command == "parse":
            return _parse_command(user_input, text)

        result = parse(text)
        for warning in result.warnings:
            logger.warning("%s: %s", user_input["netlist"], warning)
        if not result.ok:
            raise NetlistError(result.errors)

        outcome = _execute(user_input, result.document)
        if outcome:
            DisplayResultCli(command, outcome).display_result_on_cli()
        if command == "run" and outcome and outcome["outcome"].oracle is not None:
            if not outcome["outcome"].oracle.passed:
                logger.warning("Oracle gate failed; see the oracle columns of the measured spectra")
        return EXIT_OK
    except NetlistError as e:
        for diagnostic in e.diagnostics:
            print(f"{user_input['netlist']}:{diagnostic}", file=sys.stderr)
        return EXIT_DIAGNOSTICS
    except (SqueezeSimError, OSError) as e:
        logger.error("Error: %s", e)
        return EXIT_RUNTIME
