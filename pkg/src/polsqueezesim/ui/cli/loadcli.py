import argparse
from pathlib import Path

from src.polsqueezesim.oracle.sampler import SampleMode
from src.polsqueezesim.ui.uiconfigfile import Config

COMMANDS = ("parse", "run", "sweep", "oracle", "ellipsoid")


class LoadCliUI:
    def __init__(self, config: Config = None):
        self.config = config or Config()
        self.user_controls = {}

    def _common(self) -> argparse.ArgumentParser:
        common = argparse.ArgumentParser(add_help=False)
        common.add_argument("--seed", type=int, default=None, help="master seed for every sampled quantity")
        common.add_argument("--out-dir", type=Path, default=Path("out"), help="directory for written artifacts")
        common.add_argument("--format", dest="output_format", choices=self.config.get_output_formats(), default="csv")
        common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")
        return common

    def build_parser(self) -> argparse.ArgumentParser:
        common = self._common()
        parser = argparse.ArgumentParser(prog="sqz", description=self.config.get_page_title())
        commands = parser.add_subparsers(dest="command", required=True)

        parse_cmd = commands.add_parser("parse", parents=[common], help="check a netlist and print diagnostics")
        parse_cmd.add_argument("netlist", type=Path)
        parse_cmd.add_argument("--canonical", action="store_true", help="print the canonical formatting")
        parse_cmd.add_argument("--write", action="store_true", help="rewrite the file in canonical form")

        run_cmd = commands.add_parser("run", parents=[common], help="write every artifact the netlist requests")
        run_cmd.add_argument("netlist", type=Path)
        run_cmd.add_argument("--oracle", action="store_true", help="add Monte-Carlo columns and the 5 sigma gate")
        run_cmd.add_argument("--oracle-samples", type=int, default=self.config.get_oracle_samples())

        sweep_cmd = commands.add_parser("sweep", parents=[common], help="Stokes statistics against theta")
        sweep_cmd.add_argument("netlist", type=Path)
        sweep_cmd.add_argument("--at", required=True, help="analysis frequency, e.g. 5MHz")
        sweep_cmd.add_argument("--points", type=int, default=256)
        sweep_cmd.add_argument("--start", default="0rad")
        sweep_cmd.add_argument("--stop", default="360deg")

        oracle_cmd = commands.add_parser("oracle", parents=[common], help="Monte-Carlo Stokes report at one frequency")
        oracle_cmd.add_argument("netlist", type=Path)
        oracle_cmd.add_argument("--at", required=True)
        oracle_cmd.add_argument("--samples", type=int, default=self.config.get_oracle_samples())
        oracle_cmd.add_argument(
            "--mode", choices=[m.value for m in SampleMode], default=SampleMode.LINEARIZED.value
        )

        ellipsoid_cmd = commands.add_parser("ellipsoid", parents=[common], help="noise ellipsoid at one frequency")
        ellipsoid_cmd.add_argument("netlist", type=Path)
        ellipsoid_cmd.add_argument("--at", required=True)
        return parser

    def load_cli_ui(self, argv=None) -> dict:
        args = self.build_parser().parse_args(argv)
        self.user_controls = vars(args)
        if self.user_controls["seed"] is None:
            self.user_controls["seed"] = self.config.get_default_seed()
        return self.user_controls
