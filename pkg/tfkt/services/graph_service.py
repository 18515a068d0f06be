""" This module contains the logic for similarity graphs and embedding propagation. """

# pylint: disable=too-few-public-methods

import warnings
from logging import getLogger

import numpy as np
from scipy.linalg import LinAlgWarning, lu_factor, lu_solve
from scipy.spatial.distance import pdist, squareform

from tfkt.exceptions.general_exceptions import DimensionMismatch
from tfkt.exceptions.graph_exceptions import InvalidPropagationParameter, SingularPropagator
from tfkt.models.augmented_sample import Provenance, SampleSet
from tfkt.models.propagation_graph import PropagationGraph
from tfkt.utils.threads import ordered_map, thread_count

logger = getLogger(__name__)

DEGENERATE_VARIANCE = 1e-12


class GraphService:
    """Wraps the graph construction and propagation operations."""
    @staticmethod
    def build_adjacency(embeddings: np.ndarray, sigma_mode: str = "squared"):
        """Gaussian similarity matrix and its bandwidth."""
        return GraphBuilder.build_adjacency(embeddings, sigma_mode)

    @staticmethod
    def build_laplacian(adjacency: np.ndarray) -> np.ndarray:
        """Symmetric normalized adjacency D^-1/2 A D^-1/2."""
        return GraphBuilder.build_laplacian(adjacency)

    @staticmethod
    def build_propagator(laplacian: np.ndarray, alpha: float) -> np.ndarray:
        """H = (I - alpha L)^-1."""
        return GraphBuilder.build_propagator(laplacian, alpha)

    @staticmethod
    def build_graph(embeddings: np.ndarray, alpha: float, sigma_mode: str = "squared",
                    row_index=None) -> PropagationGraph:
        """A, L and H over the rows of `embeddings`."""
        return GraphBuilder.build_graph(embeddings, alpha, sigma_mode, row_index)

    @staticmethod
    def propagate_within_source(source_embeddings, source_labels, minority_rows, alpha: float,
                                row_normalize: bool = True, source_sum: str = "all",
                                sigma_mode: str = "squared"):
        """EP samples of the minority rows over a graph of the whole source domain."""
        return EmbeddingPropagation.propagate_within_source(
            source_embeddings, source_labels, minority_rows, alpha,
            row_normalize, source_sum, sigma_mode,
        )

    @staticmethod
    def propagate_cross_domain(minority_embeddings, minority_labels, seed_rows,
                               target_embeddings, alpha: float, row_normalize: bool = True,
                               sigma_mode: str = "squared"):
        """KP samples of the minority rows over a graph of minority source and target rows."""
        return EmbeddingPropagation.propagate_cross_domain(
            minority_embeddings, minority_labels, seed_rows, target_embeddings, alpha,
            row_normalize, sigma_mode,
        )


class GraphBuilder:
    """Wraps the dense A, L, H construction."""
    @staticmethod
    def build_adjacency(embeddings: np.ndarray, sigma_mode: str = "squared"):
        """
        A_ij = exp(-|z_i - z_j|^2 / sigma^2) off the diagonal, 0 on it.

        sigma^2 is the population variance of the squared distances over i < j pairs
        ("distance" mode uses the plain distances instead). A variance below 1e-12 falls
        back to the mean of the same statistic, then to 1.
        """
        embeddings = np.atleast_2d(np.asarray(embeddings, dtype=np.float64))
        squared = pdist(embeddings, metric="sqeuclidean") if embeddings.shape[0] > 1 \
            else np.empty(0)
        statistic = squared if sigma_mode == "squared" else np.sqrt(squared)
        bandwidth = GraphBuilder._bandwidth(statistic)
        adjacency = squareform(np.exp(-squared / bandwidth), checks=False) \
            if squared.size else np.zeros((embeddings.shape[0], embeddings.shape[0]))
        np.fill_diagonal(adjacency, 0.0)
        return adjacency, bandwidth

    @staticmethod
    def _bandwidth(statistic: np.ndarray) -> float:
        if statistic.size == 0:
            return 1.0
        variance = float(np.var(statistic))
        if variance >= DEGENERATE_VARIANCE:
            return variance
        mean = float(np.mean(statistic))
        if mean >= DEGENERATE_VARIANCE:
            logger.debug("Distance variance is degenerate; using the mean %g", mean)
            return mean
        logger.debug("All points coincide; bandwidth falls back to 1")
        return 1.0

    @staticmethod
    def build_laplacian(adjacency: np.ndarray) -> np.ndarray:
        """Zero-degree nodes keep a zero row and column."""
        degree = adjacency.sum(axis=1)
        scale = np.zeros_like(degree)
        connected = degree > 0.0
        scale[connected] = 1.0 / np.sqrt(degree[connected])
        laplacian = scale[:, None] * adjacency * scale[None, :]
        return 0.5 * (laplacian + laplacian.T)

    @staticmethod
    def build_propagator(laplacian: np.ndarray, alpha: float) -> np.ndarray:
        """
        Solve (I - alpha L) H = I with a pivoted LU factorization.

        Columns are solved in chunks across FKT_THREADS workers when that is above 1;
        every column is solved by the same factorization either way.
        """
        if not 0.0 < alpha < 1.0:
            raise InvalidPropagationParameter(f"alpha must lie in (0, 1), got {alpha}")
        size = laplacian.shape[0]
        system = np.eye(size) - alpha * laplacian
        with warnings.catch_warnings():
            warnings.simplefilter("error", LinAlgWarning)
            try:
                factors = lu_factor(system)
            except (LinAlgWarning, ValueError) as e:
                raise SingularPropagator(str(e)) from e
        pivots = np.abs(np.diag(factors[0]))
        if pivots.size and pivots.min() <= size * np.finfo(np.float64).eps * pivots.max():
            raise SingularPropagator("I - alpha L has a vanishing pivot")

        identity = np.eye(size)
        workers = thread_count()
        if workers <= 1 or size < 2:
            return lu_solve(factors, identity)
        chunks = np.array_split(np.arange(size), min(workers, size))
        solved = ordered_map(lambda columns: lu_solve(factors, identity[:, columns]), chunks)
        return np.hstack(solved)

    @staticmethod
    def build_graph(embeddings: np.ndarray, alpha: float, sigma_mode: str = "squared",
                    row_index=None) -> PropagationGraph:
        adjacency, bandwidth = GraphBuilder.build_adjacency(embeddings, sigma_mode)
        laplacian = GraphBuilder.build_laplacian(adjacency)
        propagator = GraphBuilder.build_propagator(laplacian, alpha)
        if row_index is None:
            row_index = tuple(("input", row) for row in range(adjacency.shape[0]))
        logger.debug("Built a %d-node graph, sigma^2=%g", adjacency.shape[0], bandwidth)
        return PropagationGraph(adjacency, laplacian, propagator, bandwidth, alpha,
                                tuple(row_index))


class EmbeddingPropagation:
    """Wraps the EP and KP refinements of the minority rows."""
    @staticmethod
    def propagate_within_source(source_embeddings, source_labels, minority_rows, alpha,
                                row_normalize=True, source_sum="all", sigma_mode="squared"):
        """
        z~_i = sum_j H_ij z_j over all source rows j (only minority rows with
        source_sum="minority"). Returns (samples, graph); the graph is None when there
        is nothing to propagate.
        """
        embeddings = np.asarray(source_embeddings, dtype=np.float64)
        labels = np.asarray(source_labels, dtype=np.int64)
        minority_rows = np.asarray(minority_rows, dtype=np.int64)
        if minority_rows.size == 0:
            return SampleSet.empty(embeddings.shape[1]), None
        graph = GraphBuilder.build_graph(
            embeddings, alpha, sigma_mode,
            tuple(("source", row) for row in range(embeddings.shape[0])),
        )
        columns = minority_rows if source_sum == "minority" else None
        weights = graph.propagation_weights(minority_rows, columns, row_normalize)
        neighbours = embeddings[minority_rows] if columns is not None else embeddings
        propagated = weights @ neighbours
        return SampleSet.build(propagated, labels[minority_rows], Provenance.EP_SOURCE,
                               minority_rows), graph

    @staticmethod
    def propagate_cross_domain(minority_embeddings, minority_labels, seed_rows,
                               target_embeddings, alpha, row_normalize=True,
                               sigma_mode="squared"):
        """
        Stack the minority rows first, then the target rows, and propagate each minority
        row over the joint graph. Returns (samples, graph).
        """
        minority = np.atleast_2d(np.asarray(minority_embeddings, dtype=np.float64))
        target = np.asarray(target_embeddings, dtype=np.float64)
        seed_rows = np.asarray(seed_rows, dtype=np.int64)
        if seed_rows.size == 0:
            return SampleSet.empty(minority.shape[1]), None
        if target.size == 0:
            target = np.empty((0, minority.shape[1]))
            logger.warning("Target set is empty; cross-domain propagation uses minority rows only")
        if target.shape[1] != minority.shape[1]:
            raise DimensionMismatch(
                f"source rows have dimension {minority.shape[1]}, target {target.shape[1]}"
            )
        stacked = np.vstack([minority, target])
        row_index = tuple(("source", int(row)) for row in seed_rows) + \
            tuple(("target", row) for row in range(target.shape[0]))
        graph = GraphBuilder.build_graph(stacked, alpha, sigma_mode, row_index)
        weights = graph.propagation_weights(np.arange(minority.shape[0]), None, row_normalize)
        return SampleSet.build(weights @ stacked, minority_labels, Provenance.KP_CROSS,
                               seed_rows), graph
