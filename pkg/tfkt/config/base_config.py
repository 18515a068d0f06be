""" Base configuration for the application. """

from os import getenv, getcwd, path


class BaseConfig:  # pylint: disable=too-few-public-methods
    """Base configuration."""

    DEBUG = False

    LOGGING_LEVEL = getenv("FKT_LOGGING_LEVEL", "INFO")
    LOGGING_PATH = path.join(getcwd(), "logs", "tfkt.log")

    ALPHA = 0.2
    LAMBDA = 0.1
    LEARNING_RATE = 0.001
    PRETRAIN_LEARNING_RATE = 0.0001
    PRETRAIN_EPOCHS = 2000
    EPOCHS = 30
    MIX_COUNT = 5
    BETA_A = 2.0
    BETA_B = 2.0
    TEMPERATURE = 10.0
    PROTOTYPE_SPACE = "euclidean"

    EPISODE_P = 4
    EPISODE_Q = 4
    EPISODE_TARGET = 64

    GENERATOR_HIDDEN = 1024
    FEATURE_DIM = 512
    CLASSIFIER_HIDDEN = 512
