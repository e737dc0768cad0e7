import sys

from src.polsqueezesim.stokes.engine import STOKES_LABELS


class DisplayResultCli:
    def __init__(self, command, result, stream=None):
        self.command = command
        self.result = result
        self.stream = stream or sys.stdout

    def _write(self, text=""):
        print(text, file=self.stream)

    def display_result_on_cli(self):
        command = self.command
        result = self.result
        if command == "parse":
            for diagnostic in result["diagnostics"]:
                print(diagnostic, file=sys.stderr)
            if result.get("canonical") is not None:
                self.stream.write(result["canonical"])
            elif not result["diagnostics"]:
                self._write(f"{result['path']}: ok")

        elif command == "run":
            outcome = result["outcome"]
            for label, spectrum in outcome.spectra.items():
                values = spectrum.values
                self._write(f"{label}: {values.min():+.2f} .. {values.max():+.2f} dB over {values.size} points")
            for ellipsoid in outcome.ellipsoids:
                self._write(f"ellipsoid at {ellipsoid.frequency:.6g} Hz: {ellipsoid.classification.value}")
            if outcome.oracle is not None:
                verdict = "pass" if outcome.oracle.passed else "FAIL"
                self._write(
                    f"oracle {verdict}: {outcome.oracle.failed}/{outcome.oracle.checked} points "
                    f"beyond {outcome.oracle.sigma:g} sigma"
                )
            for path in outcome.artifacts:
                self._write(f"wrote {path}")
            self._write(f"wrote {outcome.manifest}")

        elif command == "sweep":
            rows = result["rows"]
            normalized = [s.normalized for s in rows]
            for j, label in enumerate(STOKES_LABELS):
                column = [v[j] for v in normalized]
                self._write(f"V{label[1]}: min {min(column):.4f}  max {max(column):.4f} (shot noise units)")
            self._write(f"wrote {result['path']}")

        elif command == "oracle":
            estimate, gate = result["estimate"], result["gate"]
            for j, label in enumerate(STOKES_LABELS):
                self._write(
                    f"{label}: mean {estimate.means[j]:.6g}  variance {estimate.variances[j]:.6g} "
                    f"+/- {estimate.variance_std_errors[j]:.3g}  z {gate.z_scores[j]:.2f}"
                )
            self._write(f"gate at {gate.sigma:g} sigma: {'pass' if gate.passed else 'FAIL'}")
            self._write(f"wrote {result['path']}")

        elif command == "ellipsoid":
            ellipsoid = result["ellipsoid"]
            axes = ", ".join(f"{a:.4f}" for a in ellipsoid.semi_axes)
            self._write(f"{ellipsoid.classification.value} at {ellipsoid.frequency:.6g} Hz, semi-axes {axes}")
            self._write(f"wrote {result['path']}")
