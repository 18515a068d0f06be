""" Wraps the lambda / k sensitivity sweep command. """

import click

from tfkt.commands.train import run_training
from tfkt.utils.cli_options import config_options, resolve_run_config
from tfkt.utils.stage import stage_scope


def _cell(value) -> str:
    return "NA" if value is None else f"{value:.6f}"


def _values(text: str, cast):
    try:
        return [cast(part) for part in text.replace(" ", "").split(",") if part]
    except ValueError as e:
        raise click.BadParameter(f"cannot parse {text!r}") from e


@click.command("sweep")
@config_options
@click.option("--lambdas", type=str, default="0.1", show_default=True,
              help="Comma-separated lambda values.")
@click.option("--ks", type=str, default="5", show_default=True,
              help="Comma-separated MIX counts.")
@click.option("--output", type=str, required=True, help="TSV file, one row per setting.")
@click.pass_obj
def sweep_cmd(config, config_file, lambdas, ks, output, **options):
    """Train once per (lambda, k) pair and tabulate the final metrics."""
    rows = ["lambda\tk\tseed\ta_f\ta_m\ta_o"]
    for lambda_weight in _values(lambdas, float):
        for mix_count in _values(ks, int):
            run_config = resolve_run_config(
                dict(options), config_file, debug=config.DEBUG,
                **{"lambda": lambda_weight, "k": mix_count},
            )
            _, report, _ = run_training(run_config)
            metrics = report.final_metrics
            seed = run_config.hyperparams.seed
            cells = [metrics.a_f, metrics.a_m, metrics.a_o] if metrics else [None] * 3
            rows.append("\t".join(
                [repr(lambda_weight), str(mix_count), str(seed)] + [_cell(v) for v in cells]
            ))
            click.echo(rows[-1])
    with stage_scope("writing outputs"):
        with open(output, "w", encoding="utf-8") as handle:
            handle.write("\n".join(rows) + "\n")
