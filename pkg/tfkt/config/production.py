""" Production configuration. """

from os import getenv, getcwd, path

from tfkt.config.base_config import BaseConfig


class ProductionConfig(BaseConfig):  # pylint: disable=R0903
    """Production configuration."""
    DEBUG = False
    LOGGING_LEVEL = getenv("FKT_LOGGING_LEVEL", "WARNING")
    LOGGING_PATH = path.join(getenv("FKT_LOG_DIR", path.join(getcwd(), "logs")), "tfkt.log")
