""" Set up the logger for the application. """

from logging import Formatter, StreamHandler, WARNING, getLogger
from logging.handlers import RotatingFileHandler
from os import path, makedirs

from filelock import FileLock

LOGGER_NAME = "tfkt"


def setup_logging(config) -> None:  # pylint: disable=C0116
    logger = getLogger(LOGGER_NAME)
    if getattr(logger, "_tfkt_configured", False):
        return
    log_file_path = config.LOGGING_PATH
    makedirs(path.dirname(log_file_path), exist_ok=True)
    lock_file_path = log_file_path + ".lock"
    with FileLock(lock_file_path):
        file_handler = RotatingFileHandler(log_file_path, maxBytes=100000, backupCount=3)
        file_handler.setLevel(config.LOGGING_LEVEL)
        file_handler.setFormatter(Formatter("%(asctime)s - %(levelname)s - %(message)s"))
        logger.addHandler(file_handler)
    if not getattr(config, "TESTING", False):
        console_handler = StreamHandler()
        console_handler.setLevel(WARNING)
        console_handler.setFormatter(Formatter("%(levelname)s - %(message)s"))
        logger.addHandler(console_handler)
    logger.setLevel(config.LOGGING_LEVEL)
    logger._tfkt_configured = True  # pylint: disable=protected-access
