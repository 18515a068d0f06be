""" Base error handler for the entire application. """

from logging import getLogger

import click

logger = getLogger(__name__)


def handle_error(error, exit_code: int, code: str, message) -> int:
    """Log the error, print `code: message` to stderr and return the exit code."""
    logger.error("Error: %s", error)
    if isinstance(message, (list, tuple)):
        message = "; ".join(str(part) for part in message)
    click.echo(f"{code}: {message}", err=True)
    return exit_code
