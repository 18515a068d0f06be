""" Wraps the evaluation command. """

import click

from tfkt.models.embedding_dataset import SplitSpec
from tfkt.services.dataset_service import DatasetService
from tfkt.services.evaluation_service import EvaluationService
from tfkt.services.network_service import NetworkService
from tfkt.utils.cli_options import parse_class_ids
from tfkt.utils.stage import stage_scope


@click.command("eval")
@click.option("--checkpoint", type=str, required=True, help="Checkpoint written by train.")
@click.option("--target", type=str, required=True, help="Labeled target embedding file.")
@click.option("--minority", type=str, default=None, callback=parse_class_ids,
              help="Minority class ids, comma separated.")
@click.option("--shots", type=int, default=1, show_default=True,
              help="Shot count of the split (kept for the record).")
@click.option("--deploy-mode", is_flag=True, help="Score every row with C_P, ignoring labels.")
@click.option("--class-wise", is_flag=True, help="A_o as the mean of per-class accuracies.")
@click.option("--breakdown", is_flag=True,
              help="Append C_N and C_P accuracies on the minority and majority subsets.")
@click.option("--task", type=str, default="task", show_default=True, help="Task column.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed column.")
@click.option("--epoch", type=int, default=0, show_default=True, help="Epoch column.")
@click.option("--output", type=str, default=None, help="TSV file; stdout when omitted.")
def eval_cmd(**options):
    """Score a checkpoint on a labeled target with the hybrid classifier."""
    with stage_scope("checkpoint loading"):
        state = NetworkService.load_checkpoint(options["checkpoint"])
    with stage_scope("dataset loading"):
        target = DatasetService.load_dataset(options["target"])
    with stage_scope("evaluation"):
        split = SplitSpec(options["minority"], options["shots"], target.class_count)
        report = EvaluationService.evaluate(
            state, target, split, options["deploy_mode"], options["class_wise"]
        )
    table = EvaluationService.format_tsv(report, options["task"], options["seed"],
                                         options["epoch"], breakdown=options["breakdown"])
    if options["output"] is None:
        click.echo(table, nl=False)
        return
    with stage_scope("writing outputs"):
        with open(options["output"], "w", encoding="utf-8") as handle:
            handle.write(table)
