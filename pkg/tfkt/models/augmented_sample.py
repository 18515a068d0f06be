"""
    Represents real and synthetic training samples with their provenance.
"""

from dataclasses import dataclass
from enum import Enum as PyEnum
import numpy as np

from tfkt.exceptions.training_exceptions import InvalidHyperparameters

NO_SEED_ROW = -1


class Provenance(PyEnum):
    """Where a training sample came from."""
    REAL = "REAL"
    EP_SOURCE = "EP"
    KP_CROSS = "KP"
    MIX = "MIX"


PROVENANCE_CODES = {provenance: code for code, provenance in enumerate(Provenance)}
PROVENANCE_BY_CODE = dict(enumerate(Provenance))


@dataclass(frozen=True, eq=False)
class AugmentedSample:
    """
    One synthetic embedding. Its label is the label of seed_row; gamma is only
    meaningful for MIX samples (NaN otherwise).
    """
    embedding: np.ndarray
    label: int
    provenance: Provenance
    seed_row: int
    gamma: float = float("nan")


@dataclass(frozen=True)
class AugmentationConfig:
    """Beta(a, b) mixing distribution, k MIX samples per seed row, propagation mode."""
    beta_a: float = 2.0
    beta_b: float = 2.0
    mix_count: int = 5
    row_normalize: bool = True

    def __post_init__(self):
        if self.beta_a <= 0.0 or self.beta_b <= 0.0:
            raise InvalidHyperparameters("beta parameters must be positive")
        if self.mix_count < 0:
            raise InvalidHyperparameters("mix count must be nonnegative")


@dataclass(frozen=True, eq=False)
class SampleSet:
    """
    Column-oriented collection of labeled samples.

    seed_rows index the source dataset the samples were derived from (the row itself for
    REAL samples).
    """
    embeddings: np.ndarray
    labels: np.ndarray
    provenance: np.ndarray
    seed_rows: np.ndarray
    gammas: np.ndarray

    def __post_init__(self):
        sizes = {
            self.embeddings.shape[0], self.labels.shape[0], self.provenance.shape[0],
            self.seed_rows.shape[0], self.gammas.shape[0],
        }
        if len(sizes) != 1:
            raise ValueError("sample set columns must have equal length")

    def __len__(self) -> int:
        return int(self.labels.shape[0])

    @property
    def dim(self) -> int:
        """Embedding dimension."""
        return int(self.embeddings.shape[1])

    @classmethod
    def empty(cls, dim: int) -> "SampleSet":
        """A set without samples."""
        return cls(
            np.empty((0, dim), dtype=np.float64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.float64),
        )

    @classmethod
    def build(cls, embeddings, labels, provenance: Provenance, seed_rows, gammas=None):
        """A homogeneous set of one provenance."""
        embeddings = np.asarray(embeddings, dtype=np.float64)
        labels = np.asarray(labels, dtype=np.int64).reshape(-1)
        seed_rows = np.asarray(seed_rows, dtype=np.int64).reshape(-1)
        if gammas is None:
            gammas = np.full(labels.shape[0], np.nan)
        return cls(
            embeddings.reshape(labels.shape[0], -1) if labels.shape[0] else embeddings,
            labels,
            np.full(labels.shape[0], PROVENANCE_CODES[provenance], dtype=np.int64),
            seed_rows,
            np.asarray(gammas, dtype=np.float64).reshape(-1),
        )

    @classmethod
    def from_samples(cls, samples: list[AugmentedSample], dim: int) -> "SampleSet":
        """Columnar set from individual samples, in order."""
        if not samples:
            return cls.empty(dim)
        return cls(
            np.vstack([sample.embedding for sample in samples]),
            np.array([sample.label for sample in samples], dtype=np.int64),
            np.array([PROVENANCE_CODES[sample.provenance] for sample in samples], dtype=np.int64),
            np.array([sample.seed_row for sample in samples], dtype=np.int64),
            np.array([sample.gamma for sample in samples], dtype=np.float64),
        )

    @classmethod
    def concatenate(cls, parts: list["SampleSet"], dim: int) -> "SampleSet":
        """Stack sets in order."""
        parts = [part for part in parts if len(part)]
        if not parts:
            return cls.empty(dim)
        return cls(
            np.concatenate([part.embeddings for part in parts]),
            np.concatenate([part.labels for part in parts]),
            np.concatenate([part.provenance for part in parts]),
            np.concatenate([part.seed_rows for part in parts]),
            np.concatenate([part.gammas for part in parts]),
        )

    def mask(self, provenance: Provenance) -> np.ndarray:
        """Rows of the given provenance."""
        return self.provenance == PROVENANCE_CODES[provenance]

    def count(self, provenance: Provenance) -> int:
        """Number of rows of the given provenance."""
        return int(self.mask(provenance).sum())

    def select(self, rows: np.ndarray) -> "SampleSet":
        """Subset by boolean mask or index array."""
        return SampleSet(
            self.embeddings[rows], self.labels[rows], self.provenance[rows],
            self.seed_rows[rows], self.gammas[rows],
        )

    def provenance_tags(self) -> list[str]:
        """Text tag per row, as written in dumps."""
        return [PROVENANCE_BY_CODE[int(code)].value for code in self.provenance]
