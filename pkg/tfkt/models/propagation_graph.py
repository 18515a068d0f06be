"""
    Represents a similarity graph with its normalized Laplacian and propagator.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class PropagationGraph:
    """
    Adjacency A, Laplacian L, propagator H = (I - alpha L)^-1 and bandwidth sigma^2.

    row_index maps each graph row to its origin as (dataset tag, row in that dataset).
    """
    adjacency: np.ndarray
    laplacian: np.ndarray
    propagator: np.ndarray
    bandwidth: float
    alpha: float
    row_index: tuple[tuple[str, int], ...]

    def __post_init__(self):
        for matrix in (self.adjacency, self.laplacian, self.propagator):
            matrix.setflags(write=False)

    @property
    def size(self) -> int:
        """Number of nodes."""
        return int(self.adjacency.shape[0])

    def propagation_weights(self, rows, columns=None, row_normalize: bool = True) -> np.ndarray:
        """
        Rows of H restricted to `columns` (all nodes by default).

        With row_normalize each row is divided by its sum, making every propagated
        embedding a convex combination of the inputs.
        """
        rows = np.asarray(rows, dtype=np.int64)
        weights = self.propagator[rows]
        if columns is not None:
            weights = weights[:, np.asarray(columns, dtype=np.int64)]
        if row_normalize and weights.size:
            weights = weights / weights.sum(axis=1, keepdims=True)
        return weights
