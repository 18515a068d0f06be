""" Wraps the graph dump command. """

import click

from tfkt.config.base_config import BaseConfig
from tfkt.models.embedding_dataset import EmbeddingDatasetRepository
from tfkt.services.dataset_service import DatasetService
from tfkt.services.graph_service import GraphService
from tfkt.utils.stage import stage_scope


@click.command("graph")
@click.option("--input", "input_file", type=str, required=True, help="Embedding file.")
@click.option("--alpha", type=float, default=BaseConfig.ALPHA, show_default=True,
              help="Propagation alpha.")
@click.option("--sigma-mode", type=click.Choice(["squared", "distance"]), default="squared",
              show_default=True, help="Bandwidth statistic.")
@click.option("--output-prefix", type=str, required=True,
              help="Writes <prefix>.A.fkt, <prefix>.L.fkt and <prefix>.H.fkt.")
def graph_cmd(input_file, alpha, sigma_mode, output_prefix):
    """Dump the adjacency, Laplacian and propagator of an embedding file."""
    with stage_scope("dataset loading"):
        dataset = DatasetService.load_dataset(input_file)
    with stage_scope("graph construction"):
        graph = GraphService.build_graph(dataset.embeddings, alpha, sigma_mode)
    with stage_scope("writing outputs"):
        for suffix, matrix in (("A", graph.adjacency), ("L", graph.laplacian),
                               ("H", graph.propagator)):
            EmbeddingDatasetRepository.save_matrix(matrix, f"{output_prefix}.{suffix}.fkt")
    click.echo(f"sigma^2={graph.bandwidth!r} nodes={graph.size}")
