""" This module contains the factory function to create the command-line app instance. """

import click

from tfkt.commands import register_commands
from tfkt.config.development_config import DevelopmentConfig
from tfkt.utils.error_handlers.system_wide_error_handler import (
    ErrorHandlerRegistry, register_system_wide_error_handlers,
)
from tfkt.utils.logger import setup_logging


class TfktGroup(click.Group):
    """Click group that turns library errors into exit codes through the handler registry."""

    def __init__(self, *args, error_handlers: ErrorHandlerRegistry, **kwargs):
        super().__init__(*args, **kwargs)
        self.error_handlers = error_handlers

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (click.exceptions.ClickException, click.exceptions.Exit, click.exceptions.Abort):
            raise
        except Exception as error:  # pylint: disable=broad-exception-caught
            ctx.exit(self.error_handlers.dispatch(error))
        return None


def create_app(config_class=DevelopmentConfig) -> click.Group:
    """Factory function to create the click app instance."""
    error_handlers = ErrorHandlerRegistry()
    register_system_wide_error_handlers(error_handlers)

    @click.group(
        cls=TfktGroup, error_handlers=error_handlers,
        context_settings={"help_option_names": ["-h", "--help"]},
    )
    @click.pass_context
    def app(ctx):
        """Imbalanced domain adaptation over precomputed embeddings."""
        setup_logging(config_class)
        ctx.obj = config_class

    register_commands(app)
    return app
