"""Wraps the general, uncaught exceptions in the application."""

from tfkt.exceptions.general_exceptions import StageFailed
from tfkt.exceptions.tfkt_base_exception import TfktBaseException
from tfkt.utils.error_handlers.base_error_handler import handle_error


def handle_general_exception(error):
    """This function handles general exceptions."""
    return handle_error(
        error,
        1,
        "unexpected_error",
        f"An unexpected error occurred: {error}",
    )


def handle_stage_failed(error):
    """This function handles failures wrapped with the name of a pipeline stage."""
    if isinstance(error, StageFailed):
        return handle_error(
            error,
            1,
            f"{error.stage.replace(' ', '_')}_failed",
            f"{error.stage} failed: {getattr(error.cause, 'message', error.cause)}",
        )
    raise error


def handle_library_error(error):
    """This function handles errors raised by the tfkt library outside a stage."""
    if isinstance(error, TfktBaseException):
        return handle_error(error, 1, "runtime_error", error.message)
    raise error


def handle_os_error(error):
    """This function handles file system errors."""
    if isinstance(error, OSError):
        return handle_error(error, 1, "io_error", str(error))
    raise error
