import os
from configparser import ConfigParser

_DEFAULT_CONFIG_FILE = os.path.join(os.path.dirname(__file__), "uiconfigfile.ini")


class Config:
    def __init__(self, config_file=None):
        self.config_file = config_file or os.getenv("SQZ_CONFIG_FILE", _DEFAULT_CONFIG_FILE)
        self.config = ConfigParser()
        self.config.read(self.config_file)

    def _float(self, key):
        return self.config["DEFAULT"].getfloat(key)

    def _int(self, key):
        return int(float(self.config["DEFAULT"].get(key)))

    def get_page_title(self):
        return self.config["DEFAULT"].get("PAGE_TITLE")

    def get_setup_options(self):
        return self.config["DEFAULT"].get("SETUP_OPTIONS").split(", ")

    def get_output_formats(self):
        return self.config["DEFAULT"].get("OUTPUT_FORMATS").split(", ")

    def get_ellipsoid_tolerance(self):
        return self._float("ELLIPSOID_TOLERANCE")

    def get_linearization_threshold(self):
        return self._float("LINEARIZATION_THRESHOLD")

    def get_psd_relative_tolerance(self):
        return self._float("PSD_RELATIVE_TOLERANCE")

    def get_admissibility_tolerance(self):
        return self._float("ADMISSIBILITY_TOLERANCE")

    def get_rbw_hz(self):
        return self._float("RBW_HZ")

    def get_vbw_hz(self):
        return self._float("VBW_HZ")

    def get_trace_averages(self):
        return self._int("TRACE_AVERAGES")

    def get_darknoise_margin_db(self):
        return self._float("DARKNOISE_MARGIN_DB")

    def get_band(self):
        """(start, stop, step) of the default analysis band in Hz"""
        return (
            self._float("BAND_START_HZ"),
            self._float("BAND_STOP_HZ"),
            self._float("BAND_STEP_HZ"),
        )

    def get_oracle_samples(self):
        return self._int("ORACLE_SAMPLES")

    def get_oracle_chunk(self):
        return self._int("ORACLE_CHUNK")

    def get_oracle_workers(self):
        return self._int("ORACLE_WORKERS")

    def get_oracle_gate_sigma(self):
        return self._float("ORACLE_GATE_SIGMA")

    def get_default_seed(self):
        seed = os.getenv("SQZ_SEED")
        if seed:
            return int(seed)
        return self._int("DEFAULT_SEED")

    def get_calibration_mismatch(self):
        return self._float("CALIBRATION_MISMATCH")

    def get_quoted_calibration_band_db(self):
        return self._float("QUOTED_CALIBRATION_BAND_DB")


# Global instance
sim_config = Config()
