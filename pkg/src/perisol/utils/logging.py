""" Perisol
    Default logging utilities
"""
import sys
import logging

from logging import StreamHandler, Formatter
from logging.handlers import RotatingFileHandler

LOGGER_NAME = "perisol"
LOG_FORMAT = "%(asctime)s - [%(levelname)s][%(module)s:%(lineno)d] :: %(message)s"


def get_perisol_logger(
    verbose: bool = False,
    stderr_log: bool = False,
    logger_name: str = "",
    log_file: str = "perisol.log",
):
    """Return a perisol logger with proper configuration for local logging

    A logger which already has handlers is returned as is, so that components can call this
    function freely without duplicating output. `log_file=None` disables the rotating file.
    """

    if not logger_name:
        logger = logging.getLogger(LOGGER_NAME)
    else:
        logger = logging.getLogger(logger_name)

    if logger.hasHandlers():
        # We can assume it has already been configured
        return logger

    if verbose:
        logger.setLevel(logging.DEBUG)
    else:
        logger.setLevel(logging.INFO)

    formatter = Formatter(LOG_FORMAT)

    if stderr_log:
        stream_hdl = StreamHandler(stream=sys.stderr)
        stream_hdl.setFormatter(formatter)
        logger.addHandler(stream_hdl)

    if log_file:
        rotating_file_hdl = RotatingFileHandler(
            log_file, maxBytes=5000000, encoding="utf-8", backupCount=4
        )
        rotating_file_hdl.setFormatter(formatter)
        logger.addHandler(rotating_file_hdl)

    if not logger.handlers:
        logger.addHandler(logging.NullHandler())

    return logger
