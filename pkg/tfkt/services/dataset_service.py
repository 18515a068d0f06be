""" This module contains the logic for loading, splitting and synthesizing datasets. """

# pylint: disable=too-few-public-methods

from logging import getLogger

import numpy as np

from tfkt.exceptions.dataset_exceptions import (
    InvalidEmbeddingDataset, InvalidSyntheticTask, MissingMinorityClass
)
from tfkt.models.embedding_dataset import (
    Domain, EmbeddingDataset, EmbeddingDatasetRepository, SourceSplit, SplitSpec,
    SyntheticTaskSpec,
)
from tfkt.utils.rng import make_rng

logger = getLogger(__name__)


class DatasetService:
    """Wraps the dataset operations."""
    @staticmethod
    def load_dataset(file_path: str) -> EmbeddingDataset:
        """Load an embedding file."""
        return EmbeddingDatasetRepository.load(file_path)

    @staticmethod
    def save_dataset(dataset: EmbeddingDataset, file_path: str, provenance=None) -> None:
        """Write an embedding file."""
        EmbeddingDatasetRepository.save(dataset, file_path, provenance)

    @staticmethod
    def apply_split(dataset: EmbeddingDataset, split: SplitSpec, seed: int) -> SourceSplit:
        """Q-shot subsampling of the minority classes."""
        return SplitService.apply_split(dataset, split, seed)

    @staticmethod
    def subsample(dataset: EmbeddingDataset, source_split: SourceSplit) -> EmbeddingDataset:
        """The imbalanced source dataset kept by a split."""
        return dataset.rows(source_split.kept_rows)

    @staticmethod
    def generate_synthetic(spec: SyntheticTaskSpec):
        """Seeded source/target pair with a controllable covariate shift."""
        return SyntheticTaskService.generate_synthetic(spec)


class SplitService:
    """Wraps the P-way Q-shot split."""
    @staticmethod
    def apply_split(dataset: EmbeddingDataset, split: SplitSpec, seed: int) -> SourceSplit:
        """
        Keep every majority row and min(Q, available) uniformly chosen rows per minority class.

        Selection draws from a generator seeded only by `seed`, class by class in the order
        of `split.minority_classes`, so the same seed always selects the same rows.
        """
        if dataset.domain is not Domain.SOURCE:
            raise InvalidEmbeddingDataset("splits apply to source datasets only")
        if split.class_count != dataset.class_count:
            raise InvalidEmbeddingDataset("split and dataset disagree on the class count")
        rng = make_rng(seed, "split")
        minority_rows, dropped_rows = [], []
        for class_id in split.minority_classes:
            rows = dataset.class_rows(class_id)
            if rows.size == 0:
                raise MissingMinorityClass(f"minority class {class_id} has no source rows")
            keep = min(split.shots, rows.size)
            chosen = np.sort(rng.choice(rows, size=keep, replace=False))
            minority_rows.append(chosen)
            dropped_rows.append(np.setdiff1d(rows, chosen))
            if keep < split.shots:
                logger.info(
                    "Minority class %d has %d rows, fewer than %d shots; keeping all",
                    class_id, rows.size, split.shots,
                )
        minority = (np.sort(np.concatenate(minority_rows)) if minority_rows
                    else np.empty(0, np.int64))
        dropped = np.sort(np.concatenate(dropped_rows)) if dropped_rows else np.empty(0, np.int64)
        majority = np.flatnonzero(~split.minority_mask(dataset.labels))
        return SourceSplit(majority.astype(np.int64), minority.astype(np.int64),
                           dropped.astype(np.int64))


class SyntheticTaskService:
    """Wraps the synthetic covariate-shift generator."""
    @staticmethod
    def generate_synthetic(spec: SyntheticTaskSpec):
        """
        Gaussian class clusters for the source; the target pushes the same clusters through
        an orthogonal transform blended by the mixing angle, then translates and adds noise.

        Both datasets are labeled; target labels are kept for evaluation only.
        """
        SyntheticTaskService._validate(spec)
        rng = make_rng(spec.seed, "synthetic")
        c, d = spec.class_count, spec.dim

        directions = rng.standard_normal((c, d))
        directions /= np.linalg.norm(directions, axis=1, keepdims=True)
        centers = spec.separation * directions

        source_labels = np.repeat(np.arange(c), spec.per_class_source)
        source = centers[source_labels] + rng.standard_normal((source_labels.size, d))

        transform = SyntheticTaskService._blended_rotation(rng.standard_normal((d, d)),
                                                           spec.mixing_angle)
        shift_direction = rng.standard_normal(d)
        shift = spec.translation * shift_direction / np.linalg.norm(shift_direction)

        target_labels = np.repeat(np.arange(c), spec.per_class_target)
        latent = centers[target_labels] + rng.standard_normal((target_labels.size, d))
        noise = rng.standard_normal((target_labels.size, d))
        target = latent @ transform.T + shift + spec.noise_std * noise

        return (
            EmbeddingDataset(Domain.SOURCE, source, source_labels, c),
            EmbeddingDataset(Domain.TARGET, target, target_labels, c),
        )

    @staticmethod
    def _blended_rotation(gaussian: np.ndarray, angle: float) -> np.ndarray:
        """Orthogonal polar factor of cos(angle) I + sin(angle) Q for a random orthogonal Q."""
        if angle == 0.0:
            return np.eye(gaussian.shape[0])
        q, r = np.linalg.qr(gaussian)
        q = q * np.sign(np.diag(r))
        blend = np.cos(angle) * np.eye(gaussian.shape[0]) + np.sin(angle) * q
        u, _, vt = np.linalg.svd(blend)
        return u @ vt

    @staticmethod
    def _validate(spec: SyntheticTaskSpec) -> None:
        if spec.class_count < 2:
            raise InvalidSyntheticTask("class count must be at least 2")
        if spec.dim < 2:
            raise InvalidSyntheticTask("dimension must be at least 2")
        if spec.per_class_source < 1 or spec.per_class_target < 1:
            raise InvalidSyntheticTask("per-class counts must be positive")
        if spec.separation < 0 or spec.noise_std < 0 or spec.translation < 0:
            raise InvalidSyntheticTask("separation, noise and translation must be nonnegative")
