""" Wraps the synthetic task generation command. """

import click

from tfkt.schema.synthetic_task_schema import SyntheticTaskSchema
from tfkt.services.dataset_service import DatasetService
from tfkt.utils.cli_options import parse_class_ids
from tfkt.utils.stage import stage_scope


@click.command("synth")
@click.option("--classes", type=int, required=True, help="Number of classes C.")
@click.option("--dim", type=int, required=True, help="Embedding dimension d.")
@click.option("--per-class-source", type=int, required=True, help="Source rows per class.")
@click.option("--per-class-target", type=int, required=True, help="Target rows per class.")
@click.option("--source-out", type=str, required=True, help="Source embedding file to write.")
@click.option("--target-out", type=str, required=True, help="Target embedding file to write.")
@click.option("--minority", type=str, default=None, callback=parse_class_ids,
              help="Minority class ids; when given the source is written already split.")
@click.option("--shots", type=int, default=1, show_default=True,
              help="Rows kept per minority class.")
@click.option("--angle", type=float, default=0.0, show_default=True,
              help="Mixing angle of the target rotation, radians.")
@click.option("--translation", type=float, default=0.0, show_default=True,
              help="Length of the target translation.")
@click.option("--noise", type=float, default=0.0, show_default=True,
              help="Standard deviation of the target noise.")
@click.option("--separation", type=float, default=4.0, show_default=True,
              help="Distance of the class centers from the origin.")
@click.option("--seed", type=int, default=0, show_default=True, help="Generator seed.")
def synth_cmd(**options):
    """Write a seeded source/target pair with a covariate shift."""
    spec = SyntheticTaskSchema().load({
        "class_count": options["classes"],
        "dim": options["dim"],
        "per_class_source": options["per_class_source"],
        "per_class_target": options["per_class_target"],
        "minority_classes": list(options["minority"]),
        "shots": options["shots"],
        "mixing_angle": options["angle"],
        "translation": options["translation"],
        "noise_std": options["noise"],
        "separation": options["separation"],
        "seed": options["seed"],
    })
    with stage_scope("synthetic generation"):
        source, target = DatasetService.generate_synthetic(spec)
        if spec.minority_classes:
            source = DatasetService.subsample(
                source, DatasetService.apply_split(source, spec.split_spec(), spec.seed)
            )
    with stage_scope("writing outputs"):
        DatasetService.save_dataset(source, options["source_out"])
        DatasetService.save_dataset(target, options["target_out"])
    click.echo(f"wrote {source.size} source rows and {target.size} target rows")
