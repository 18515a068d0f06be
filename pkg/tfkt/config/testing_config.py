"""Testing configuration."""

from os import path
from tempfile import gettempdir

from tfkt.config.base_config import BaseConfig


class TestingConfig(BaseConfig):  # pylint: disable=R0903
    """Testing configuration."""

    DEBUG = True
    TESTING = True
    LOGGING_PATH = path.join(gettempdir(), "tfkt-tests", "tfkt.log")
