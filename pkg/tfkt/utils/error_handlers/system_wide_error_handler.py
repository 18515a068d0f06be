"""System-wide error handlers."""

from typing import Callable

from marshmallow.exceptions import ValidationError

from tfkt.exceptions.general_exceptions import StageFailed
from tfkt.exceptions.tfkt_base_exception import TfktBaseException
from tfkt.utils.error_handlers.general_error_handler import (
    handle_general_exception, handle_library_error, handle_os_error, handle_stage_failed
)
from tfkt.utils.error_handlers.validation_error_handlers import handle_validation_errors


class ErrorHandlerRegistry:
    """Maps exception types to handlers returning an exit code; most specific type wins."""

    def __init__(self):
        self._handlers: dict[type, Callable[[Exception], int]] = {}

    def register_error_handler(self, exception_type: type, handler: Callable[[Exception], int]):
        """Register a handler for an exception type and its subclasses."""
        self._handlers[exception_type] = handler

    def dispatch(self, error: Exception) -> int:
        """Run the handler of the closest registered base class of the error."""
        for klass in type(error).__mro__:
            handler = self._handlers.get(klass)
            if handler is not None:
                return handler(error)
        raise error


def register_system_wide_error_handlers(registry: ErrorHandlerRegistry):
    """Register system-wide error handlers."""
    registry.register_error_handler(ValidationError, handle_validation_errors)
    registry.register_error_handler(StageFailed, handle_stage_failed)
    registry.register_error_handler(TfktBaseException, handle_library_error)
    registry.register_error_handler(OSError, handle_os_error)
    registry.register_error_handler(Exception, handle_general_exception)
