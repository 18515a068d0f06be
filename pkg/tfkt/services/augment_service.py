""" This module contains the logic for the mixup set and the augmented training pool. """

# pylint: disable=too-few-public-methods

from logging import getLogger

import numpy as np

from tfkt.exceptions.general_exceptions import DimensionMismatch, InvalidMixingCoefficient
from tfkt.models.augmented_sample import (
    AugmentationConfig, AugmentedSample, Provenance, SampleSet
)
from tfkt.models.embedding_dataset import EmbeddingDataset, SplitSpec
from tfkt.models.training import AblationFlags
from tfkt.services.graph_service import GraphService
from tfkt.utils.rng import make_rng

logger = getLogger(__name__)


class AugmentService:
    """Wraps the augmentation operations."""
    @staticmethod
    def sample_beta(a: float, b: float, rng: np.random.Generator) -> float:
        """One Beta(a, b) draw."""
        return MixupService.sample_beta(a, b, rng)

    @staticmethod
    def mix(propagated_source: np.ndarray, propagated_cross: np.ndarray, gamma: float):
        """(1 - gamma) z~_s + gamma z~_o."""
        return MixupService.mix(propagated_source, propagated_cross, gamma)

    @staticmethod
    def real_samples(embeddings: np.ndarray, labels: np.ndarray) -> SampleSet:
        """Tag real source rows as REAL samples seeded by themselves."""
        labels = np.asarray(labels, dtype=np.int64)
        return SampleSet.build(embeddings, labels, Provenance.REAL, np.arange(labels.shape[0]))

    @staticmethod
    def build_augmented_pool(real: SampleSet, propagated_source: SampleSet,
                             propagated_cross: SampleSet, config: AugmentationConfig,
                             rng: np.random.Generator, flags: AblationFlags | None = None):
        """real + EP + KP + MIX, filtered by the ablation flags."""
        return MixupService.build_augmented_pool(
            real, propagated_source, propagated_cross, config, rng, flags or AblationFlags()
        )

    @staticmethod
    def pool_from_embeddings(real: EmbeddingDataset, target: EmbeddingDataset, split: SplitSpec,
                             hp, flags: AblationFlags) -> SampleSet:
        """One pool over the raw embeddings, drawn from the run's augment stream."""
        minority_rows = np.flatnonzero(split.minority_mask(real.labels))
        within, _ = GraphService.propagate_within_source(
            real.embeddings, real.labels, minority_rows, hp.alpha, hp.row_normalize,
            hp.source_sum, hp.sigma_mode,
        )
        cross, _ = GraphService.propagate_cross_domain(
            real.embeddings[minority_rows], real.labels[minority_rows], minority_rows,
            target.embeddings, hp.alpha, hp.row_normalize, hp.sigma_mode,
        )
        return MixupService.build_augmented_pool(
            AugmentService.real_samples(real.embeddings, real.labels), within, cross,
            AugmentationConfig(hp.beta_a, hp.beta_b, hp.mix_count, hp.row_normalize),
            make_rng(hp.seed, "augment"), flags,
        )


class MixupService:
    """Wraps the Beta-weighted interpolation of EP and KP samples."""
    @staticmethod
    def sample_beta(a: float, b: float, rng: np.random.Generator) -> float:
        gamma = float(rng.beta(a, b))
        if not np.isfinite(gamma):
            # both underlying gammas underflowed
            return a / (a + b)
        return min(1.0, max(0.0, gamma))

    @staticmethod
    def mix(propagated_source, propagated_cross, gamma: float) -> np.ndarray:
        left = np.asarray(propagated_source, dtype=np.float64)
        right = np.asarray(propagated_cross, dtype=np.float64)
        if left.shape != right.shape:
            raise DimensionMismatch(f"cannot mix shapes {left.shape} and {right.shape}")
        if not 0.0 <= gamma <= 1.0:
            raise InvalidMixingCoefficient(f"gamma must lie in [0, 1], got {gamma}")
        return (1.0 - gamma) * left + gamma * right

    @staticmethod
    def mix_samples(propagated_source: SampleSet, propagated_cross: SampleSet,
                    config: AugmentationConfig, rng: np.random.Generator) -> SampleSet:
        """
        k MIX samples per seed row, pairing the EP and KP samples of the same row.

        Draws happen seed row by seed row, k at a time, so a fixed generator state gives
        the same set.
        """
        if len(propagated_source) != len(propagated_cross) or not np.array_equal(
                propagated_source.seed_rows, propagated_cross.seed_rows):
            raise DimensionMismatch("EP and KP samples must share their seed rows")
        dim = propagated_source.dim
        if config.mix_count == 0 or len(propagated_source) == 0:
            return SampleSet.empty(dim)
        samples = []
        for row in range(len(propagated_source)):
            for _ in range(config.mix_count):
                gamma = MixupService.sample_beta(config.beta_a, config.beta_b, rng)
                samples.append(AugmentedSample(
                    MixupService.mix(propagated_source.embeddings[row],
                                     propagated_cross.embeddings[row], gamma),
                    int(propagated_source.labels[row]), Provenance.MIX,
                    int(propagated_source.seed_rows[row]), gamma,
                ))
        return SampleSet.from_samples(samples, dim)

    @staticmethod
    def build_augmented_pool(real, propagated_source, propagated_cross, config, rng, flags):
        """
        The MIX set is always drawn from both parents so the generator advances the same
        way under every ablation; the flags only decide what enters the pool.
        """
        mixed = MixupService.mix_samples(propagated_source, propagated_cross, config, rng)
        parts = [real]
        if flags.use_cda_s:
            parts.append(propagated_source)
        if flags.use_cda_t:
            parts.append(propagated_cross)
        if flags.use_cda_mix:
            parts.append(mixed)
        pool = SampleSet.concatenate(parts, real.dim)
        logger.debug(
            "Augmented pool: %d real, %d EP, %d KP, %d MIX",
            pool.count(Provenance.REAL), pool.count(Provenance.EP_SOURCE),
            pool.count(Provenance.KP_CROSS), pool.count(Provenance.MIX),
        )
        return pool
