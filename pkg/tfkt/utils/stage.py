"""Provide a named scope around a pipeline stage so failures report where they happened."""

from contextlib import contextmanager
from logging import getLogger

from marshmallow import ValidationError

from tfkt.exceptions.general_exceptions import StageFailed
from tfkt.exceptions.tfkt_base_exception import TfktBaseException

logger = getLogger(__name__)


@contextmanager
def stage_scope(name: str):  # pylint: disable=C0116
    logger.info("Stage started: %s", name)
    try:
        yield
    except (ValidationError, StageFailed):
        raise
    except (TfktBaseException, OSError, ValueError) as e:
        raise StageFailed(name, e) from e
    logger.info("Stage finished: %s", name)
