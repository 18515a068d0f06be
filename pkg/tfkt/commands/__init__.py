"""Register all commands."""

import click

from tfkt.commands.augment import augment_cmd
from tfkt.commands.evaluate import eval_cmd
from tfkt.commands.features import features_cmd
from tfkt.commands.graph import graph_cmd
from tfkt.commands.sweep import sweep_cmd
from tfkt.commands.synth import synth_cmd
from tfkt.commands.train import train_cmd


def register_commands(app: click.Group):
    """Register all commands."""
    app.add_command(synth_cmd)
    app.add_command(train_cmd)
    app.add_command(eval_cmd)
    app.add_command(augment_cmd)
    app.add_command(sweep_cmd)
    app.add_command(features_cmd)
    app.add_command(graph_cmd)
