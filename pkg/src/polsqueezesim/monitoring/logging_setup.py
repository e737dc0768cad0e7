"""
Logging configuration for the command line front end
"""
import logging
import os

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_configured = False


def configure_logging(level=None):
    """Configure the root logger once; later calls only adjust the level"""
    global _configured
    level = (level or os.getenv("SQZ_LOG_LEVEL", "INFO")).upper()
    if not _configured:
        logging.basicConfig(level=level, format=LOG_FORMAT)
        logging.captureWarnings(True)
        _configured = True
    logging.getLogger().setLevel(level)
    return logging.getLogger("polsqueezesim")
