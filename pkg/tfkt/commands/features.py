""" Wraps the learned-feature dump command. """

import click

from tfkt.models.embedding_dataset import Domain, EmbeddingDataset
from tfkt.services.augment_service import AugmentService
from tfkt.services.dataset_service import DatasetService
from tfkt.services.network_service import NetworkService
from tfkt.utils.cli_options import config_options, resolve_run_config
from tfkt.utils.stage import stage_scope


@click.command("features")
@config_options
@click.option("--output-prefix", type=str, required=True,
              help="Writes <prefix>.source.fkt and <prefix>.target.fkt.")
@click.pass_obj
def features_cmd(config, config_file, output_prefix, **options):
    """
    Dump F outputs of the augmented source pool (with provenance) and of the target,
    using the checkpoint named by the `checkpoint` key.
    """
    run_config = resolve_run_config(options, config_file, debug=config.DEBUG)
    hp = run_config.hyperparams
    with stage_scope("checkpoint loading"):
        state = NetworkService.load_checkpoint(run_config.checkpoint)
    with stage_scope("dataset loading"):
        source = DatasetService.load_dataset(run_config.source)
        target = DatasetService.load_dataset(run_config.target)
        split = run_config.split_for(source.class_count)
        real = DatasetService.subsample(source, DatasetService.apply_split(source, split, hp.seed))
    with stage_scope("feature extraction"):
        pool = AugmentService.pool_from_embeddings(real, target, split, hp, run_config.flags)
        source_features = NetworkService.forward_generator(state.generator, pool.embeddings)
        target_features = NetworkService.forward_generator(state.generator, target.embeddings)
    with stage_scope("writing outputs"):
        DatasetService.save_dataset(
            EmbeddingDataset(Domain.SOURCE, source_features, pool.labels, source.class_count),
            f"{output_prefix}.source.fkt", pool.provenance_tags(),
        )
        DatasetService.save_dataset(
            EmbeddingDataset(Domain.TARGET, target_features, target.labels, target.class_count),
            f"{output_prefix}.target.fkt",
        )
    click.echo(f"wrote features of {len(pool)} source and {target.size} target rows")
