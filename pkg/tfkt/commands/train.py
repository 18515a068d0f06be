""" Wraps the training command. """

import click

from tfkt.services.dataset_service import DatasetService
from tfkt.services.evaluation_service import EvaluationService
from tfkt.services.network_service import NetworkService
from tfkt.services.trainer_service import TrainerService
from tfkt.utils.cli_options import config_options, resolve_run_config
from tfkt.utils.stage import stage_scope


def run_training(run_config):
    """Load both domains and train; returns (state, report, split)."""
    with stage_scope("dataset loading"):
        source = DatasetService.load_dataset(run_config.source)
        target = DatasetService.load_dataset(run_config.target)
        split = run_config.split_for(source.class_count)
    with stage_scope("training"):
        state, report = TrainerService.train(
            source, target, split, run_config.hyperparams, run_config.flags
        )
    return state, report, split


@click.command("train")
@config_options
@click.pass_obj
def train_cmd(config, config_file, **options):
    """Pretrain, then alternate Step A and Step B; writes report, metrics and checkpoint."""
    run_config = resolve_run_config(options, config_file, debug=config.DEBUG)
    state, report, _ = run_training(run_config)
    with stage_scope("writing outputs"):
        with open(run_config.report, "w", encoding="utf-8") as handle:
            handle.write(report.to_json_lines())
        NetworkService.save_checkpoint(state, run_config.checkpoint)
        metrics = report.final_metrics
        if metrics is not None:
            with open(run_config.metrics, "w", encoding="utf-8") as handle:
                handle.write(EvaluationService.format_tsv(
                    metrics, run_config.task, run_config.hyperparams.seed, report.final_epoch
                ))
    click.echo(f"trained {len(report.records)} epochs; report written to {run_config.report}")
