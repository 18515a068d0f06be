"""Development configuration."""

from os import getenv

from tfkt.config.base_config import BaseConfig


class DevelopmentConfig(BaseConfig):  # pylint: disable=R0903
    """Development configuration: debug checks on, verbose log."""
    DEBUG = True
    LOGGING_LEVEL = getenv("FKT_LOGGING_LEVEL", "DEBUG")
