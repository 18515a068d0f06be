"""
    Represents domain-tagged embedding datasets and their text file persistence.
"""

# pylint: disable=R0902

import re
from dataclasses import dataclass
from enum import Enum as PyEnum

import numpy as np
from marshmallow import ValidationError

from tfkt.exceptions.dataset_exceptions import InvalidEmbeddingDataset, MalformedEmbeddingFile
from tfkt.schema.embedding_header_schema import EmbeddingHeaderSchema
from tfkt.utils.numeric_format import format_row, parse_row

UNLABELED = -1


class Domain(PyEnum):
    """Enum class for the two adaptation domains."""
    SOURCE = "source"
    TARGET = "target"


@dataclass(frozen=True, eq=False)
class EmbeddingDataset:
    """
    A matrix of embedding rows tagged with a domain, with per-row labels.

    Unlabeled rows carry label -1. Source datasets must be fully labeled; target labels,
    when present, are only read by evaluation. Arrays are frozen after construction.
    """
    domain: Domain
    embeddings: np.ndarray
    labels: np.ndarray
    class_count: int

    def __post_init__(self):
        embeddings = np.array(self.embeddings, dtype=np.float64, copy=True)
        labels = np.array(self.labels, dtype=np.int64, copy=True).reshape(-1)
        if embeddings.ndim != 2 or embeddings.shape[0] < 1 or embeddings.shape[1] < 1:
            raise InvalidEmbeddingDataset("embeddings must be an n x d matrix with n, d >= 1")
        if labels.shape[0] != embeddings.shape[0]:
            raise InvalidEmbeddingDataset("one label per embedding row is required")
        if self.class_count < 2:
            raise InvalidEmbeddingDataset("class count must be at least 2")
        if not np.all(np.isfinite(embeddings)):
            raise InvalidEmbeddingDataset("embeddings must be finite")
        labeled = labels != UNLABELED
        if np.any(labels[labeled] < 0) or np.any(labels[labeled] >= self.class_count):
            raise InvalidEmbeddingDataset(f"labels must lie in [0, {self.class_count})")
        if self.domain is Domain.SOURCE and not np.all(labeled):
            raise InvalidEmbeddingDataset("source datasets must be fully labeled")
        embeddings.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "embeddings", embeddings)
        object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        """Number of rows n."""
        return int(self.embeddings.shape[0])

    @property
    def dim(self) -> int:
        """Embedding dimension d."""
        return int(self.embeddings.shape[1])

    @property
    def has_labels(self) -> bool:
        """True when at least one row is labeled."""
        return bool(np.any(self.labels != UNLABELED))

    @property
    def is_fully_labeled(self) -> bool:
        """True when every row is labeled."""
        return bool(np.all(self.labels != UNLABELED))

    def rows(self, indices: np.ndarray) -> "EmbeddingDataset":
        """Dataset restricted to the given row indices, in the given order."""
        indices = np.asarray(indices, dtype=np.int64)
        return EmbeddingDataset(
            self.domain, self.embeddings[indices], self.labels[indices], self.class_count
        )

    def class_rows(self, class_id: int) -> np.ndarray:
        """Row indices labeled with class_id."""
        return np.flatnonzero(self.labels == class_id)


@dataclass(frozen=True)
class SplitSpec:
    """P-way Q-shot split: minority class ids and the shot count Q."""
    minority_classes: tuple[int, ...]
    shots: int
    class_count: int

    def __post_init__(self):
        minority = tuple(int(c) for c in self.minority_classes)
        if len(set(minority)) != len(minority):
            raise InvalidEmbeddingDataset("minority classes must be distinct")
        if any(c < 0 or c >= self.class_count for c in minority):
            raise InvalidEmbeddingDataset(f"minority classes must lie in [0, {self.class_count})")
        if self.shots < 1:
            raise InvalidEmbeddingDataset("shots must be at least 1")
        object.__setattr__(self, "minority_classes", minority)

    @property
    def ways(self) -> int:
        """P = |Q^f|."""
        return len(self.minority_classes)

    @property
    def majority_classes(self) -> tuple[int, ...]:
        """Q^m, the complement of the minority set."""
        minority = set(self.minority_classes)
        return tuple(c for c in range(self.class_count) if c not in minority)

    def minority_mask(self, labels: np.ndarray) -> np.ndarray:
        """Boolean mask of rows whose label is a minority class."""
        return np.isin(labels, np.asarray(self.minority_classes, dtype=np.int64))


@dataclass(frozen=True, eq=False)
class SourceSplit:
    """Row indices chosen by a split; dropped rows are the unsampled minority rows."""
    majority_rows: np.ndarray
    minority_rows: np.ndarray
    dropped_rows: np.ndarray

    @property
    def kept_rows(self) -> np.ndarray:
        """Union of majority and minority rows in ascending (original) order."""
        return np.sort(np.concatenate([self.majority_rows, self.minority_rows]))


@dataclass(frozen=True)
class SyntheticTaskSpec:
    """Parameters of the synthetic covariate-shift generator."""
    class_count: int
    dim: int
    per_class_source: int
    per_class_target: int
    minority_classes: tuple[int, ...] = ()
    shots: int = 1
    mixing_angle: float = 0.0
    translation: float = 0.0
    noise_std: float = 0.0
    separation: float = 4.0
    seed: int = 0

    def split_spec(self) -> SplitSpec:
        """The minority split this task was generated for."""
        return SplitSpec(self.minority_classes, self.shots, self.class_count)


class EmbeddingDatasetRepository:
    """Reads and writes the `#fkt v1` embedding text format."""

    HEADER_PATTERN = re.compile(r"^#fkt\s+v1((?:\s+\w+=\S+)+)\s*$")
    PROVENANCE_TAGS = ("REAL", "EP", "KP", "MIX")

    @classmethod
    def load(cls, file_path: str) -> EmbeddingDataset:
        """Parse an embedding file; every format error names its line number."""
        with open(file_path, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
        if not lines or not lines[0].strip():
            raise MalformedEmbeddingFile("empty file", 1)
        header = cls.parse_header(lines[0])
        n, d, class_count = header["n"], header["d"], header["c"]
        body = lines[1:]
        while body and not body[-1].strip():
            body.pop()
        if len(body) != n:
            raise MalformedEmbeddingFile(
                f"header declares n={n} rows but file has {len(body)}", min(len(body), n) + 2
            )
        embeddings = np.empty((n, d), dtype=np.float64)
        labels = np.full(n, UNLABELED, dtype=np.int64)
        for row, line in enumerate(body):
            line_number = row + 2
            label, values = cls._parse_row(line, line_number, d, class_count)
            labels[row] = label
            embeddings[row] = values
        domain = Domain(header["domain"])
        try:
            return EmbeddingDataset(domain, embeddings, labels, class_count)
        except InvalidEmbeddingDataset as e:
            raise MalformedEmbeddingFile(e.message, 1) from e

    @classmethod
    def parse_header(cls, line: str) -> dict:
        """Validate the header line and return n, d, c and domain."""
        match = cls.HEADER_PATTERN.match(line.strip())
        if match is None:
            raise MalformedEmbeddingFile(
                "header must read '#fkt v1 n=<int> d=<int> c=<int> domain=<source|target>'", 1
            )
        raw = dict(token.split("=", 1) for token in match.group(1).split())
        try:
            return EmbeddingHeaderSchema().load(raw)
        except ValidationError as e:
            raise MalformedEmbeddingFile(f"invalid header: {e.messages}", 1) from e

    @classmethod
    def _parse_row(cls, line: str, line_number: int, dim: int, class_count: int):
        columns = line.split("\t")
        if len(columns) == 3 and columns[2].strip() in cls.PROVENANCE_TAGS:
            columns = columns[:2]
        if len(columns) != 2:
            raise MalformedEmbeddingFile("expected '<label|->\\t<values>'", line_number)
        label_text = columns[0].strip()
        if label_text == "-":
            label = UNLABELED
        else:
            try:
                label = int(label_text)
            except ValueError as e:
                raise MalformedEmbeddingFile(f"bad label {label_text!r}", line_number) from e
            if label < 0 or label >= class_count:
                raise MalformedEmbeddingFile(
                    f"label {label} outside [0, {class_count})", line_number
                )
        try:
            values = parse_row(columns[1])
        except ValueError as e:
            raise MalformedEmbeddingFile(f"bad value: {e}", line_number) from e
        if values.shape[0] != dim:
            raise MalformedEmbeddingFile(
                f"row has {values.shape[0]} values, expected d={dim}", line_number
            )
        if not np.all(np.isfinite(values)):
            raise MalformedEmbeddingFile("non-finite value", line_number)
        return label, values

    @staticmethod
    def format_header(size: int, dim: int, class_count: int, domain: Domain) -> str:
        """Header line for a dataset of the given shape."""
        return f"#fkt v1 n={size} d={dim} c={class_count} domain={domain.value}"

    @classmethod
    def save(cls, dataset: EmbeddingDataset, file_path: str, provenance=None) -> None:
        """Write a dataset; an optional provenance tag per row is appended as a column."""
        lines = [cls.format_header(dataset.size, dataset.dim, dataset.class_count, dataset.domain)]
        for row in range(dataset.size):
            label = int(dataset.labels[row])
            label_text = "-" if label == UNLABELED else str(label)
            line = f"{label_text}\t{format_row(dataset.embeddings[row])}"
            if provenance is not None:
                line += f"\t{provenance[row]}"
            lines.append(line)
        with open(file_path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")

    @classmethod
    def save_matrix(cls, matrix: np.ndarray, file_path: str, class_count: int = 2) -> None:
        """Write an arbitrary matrix (e.g. A, L or H) as an unlabeled target dataset."""
        matrix = np.atleast_2d(np.asarray(matrix, dtype=np.float64))
        dataset = EmbeddingDataset(
            Domain.TARGET, matrix, np.full(matrix.shape[0], UNLABELED), class_count
        )
        cls.save(dataset, file_path)
