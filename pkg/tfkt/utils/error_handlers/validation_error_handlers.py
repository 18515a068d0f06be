"""This module contains the validation error handlers."""

from marshmallow import ValidationError

from tfkt.utils.error_handlers.base_error_handler import handle_error


def handle_validation_errors(error):
    """This function handles validation errors."""
    if isinstance(error, ValidationError):
        messages = error.messages if isinstance(error.messages, dict) else {"_": error.messages}
        errors = [
            f"Error on key {str(key).replace('_', '-')}: "
            f"{' '.join(str(part) for part in value) if isinstance(value, list) else value}"
            for key, value in messages.items()
        ]
        return handle_error(error, 2, "validation_error", errors)
    raise error
