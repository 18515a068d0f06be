""" Wraps the augmentation dump command. """

import click

from tfkt.models.embedding_dataset import Domain, EmbeddingDataset
from tfkt.services.augment_service import AugmentService
from tfkt.services.dataset_service import DatasetService
from tfkt.utils.cli_options import config_options, resolve_run_config
from tfkt.utils.stage import stage_scope


@click.command("augment")
@config_options
@click.option("--output", type=str, required=True, help="Pool file with a provenance column.")
@click.pass_obj
def augment_cmd(config, config_file, output, **options):
    """Dump one augmented pool built from the raw embeddings."""
    run_config = resolve_run_config(options, config_file, debug=config.DEBUG)
    hp = run_config.hyperparams
    with stage_scope("dataset loading"):
        source = DatasetService.load_dataset(run_config.source)
        target = DatasetService.load_dataset(run_config.target)
        split = run_config.split_for(source.class_count)
        real = DatasetService.subsample(source, DatasetService.apply_split(source, split, hp.seed))
    with stage_scope("augmentation"):
        pool = AugmentService.pool_from_embeddings(real, target, split, hp, run_config.flags)
    with stage_scope("writing outputs"):
        dataset = EmbeddingDataset(Domain.SOURCE, pool.embeddings, pool.labels,
                                   source.class_count)
        DatasetService.save_dataset(dataset, output, pool.provenance_tags())
    click.echo(f"wrote {len(pool)} pool rows to {output}")
