import numpy as np
import pytest

from tfkt.exceptions.general_exceptions import DimensionMismatch, InvalidMixingCoefficient
from tfkt.models.augmented_sample import (
    AugmentationConfig, AugmentedSample, Provenance, SampleSet
)
from tfkt.models.embedding_dataset import SplitSpec
from tfkt.models.training import AblationFlags
from tfkt.services.augment_service import AugmentService
from tfkt.services.dataset_service import DatasetService


def test_symmetric_beta_has_mean_one_half():
    rng = np.random.default_rng(0)
    draws = np.array([AugmentService.sample_beta(2.0, 2.0, rng) for _ in range(100_000)])
    assert abs(draws.mean() - 0.5) < 0.01
    assert np.all((draws >= 0.0) & (draws <= 1.0))


def test_skewed_beta_mean_follows_its_shapes():
    rng = np.random.default_rng(1)
    draws = np.array([AugmentService.sample_beta(0.5, 1.5, rng) for _ in range(50_000)])
    assert abs(draws.mean() - 0.25) < 0.01


def test_beta_draws_follow_the_generator_stream():
    draws = [AugmentService.sample_beta(2.0, 5.0, np.random.default_rng(9)) for _ in range(2)]
    assert draws[0] == draws[1] == float(np.random.default_rng(9).beta(2.0, 5.0))


def test_sample_set_from_individual_samples():
    samples = [
        AugmentedSample(np.array([1.0, 2.0]), 1, Provenance.MIX, 4, 0.25),
        AugmentedSample(np.array([3.0, 4.0]), 0, Provenance.EP_SOURCE, 7),
    ]
    collected = SampleSet.from_samples(samples, 2)
    assert collected.embeddings.tolist() == [[1.0, 2.0], [3.0, 4.0]]
    assert collected.provenance_tags() == ["MIX", "EP"]
    assert collected.seed_rows.tolist() == [4, 7]
    assert collected.gammas[0] == 0.25 and np.isnan(collected.gammas[1])
    assert len(SampleSet.from_samples([], 3)) == 0


def test_mix_endpoints_and_interior():
    left = np.array([1.0, 0.0])
    right = np.array([0.0, 1.0])
    assert np.array_equal(AugmentService.mix(left, right, 0.0), left)
    assert np.array_equal(AugmentService.mix(left, right, 1.0), right)
    assert np.allclose(AugmentService.mix(left, right, 0.25), [0.75, 0.25])


def test_mix_rejects_bad_inputs():
    with pytest.raises(InvalidMixingCoefficient):
        AugmentService.mix(np.zeros(2), np.zeros(2), 1.5)
    with pytest.raises(DimensionMismatch):
        AugmentService.mix(np.zeros(2), np.zeros(3), 0.5)


def _parents(rng, rows=3, dim=4):
    seeds = np.arange(10, 10 + rows)
    within = SampleSet.build(rng.standard_normal((rows, dim)), [2] * rows,
                             Provenance.EP_SOURCE, seeds)
    cross = SampleSet.build(rng.standard_normal((rows, dim)), [2] * rows,
                            Provenance.KP_CROSS, seeds)
    return within, cross


def _real(rng, rows=12, dim=4):
    return AugmentService.real_samples(rng.standard_normal((rows, dim)),
                                       np.arange(rows) % 3)


def test_full_pool_sizes(rng):
    within, cross = _parents(rng)
    real = _real(rng)
    pool = AugmentService.build_augmented_pool(real, within, cross, AugmentationConfig(mix_count=5),
                                               np.random.default_rng(3))
    assert pool.count(Provenance.REAL) == 12
    assert pool.count(Provenance.EP_SOURCE) == 3
    assert pool.count(Provenance.KP_CROSS) == 3
    assert pool.count(Provenance.MIX) == 15
    assert len(pool) == 12 + 3 * (2 + 5)


def test_mix_samples_stay_between_their_parents(rng):
    within, cross = _parents(rng)
    pool = AugmentService.build_augmented_pool(_real(rng), within, cross,
                                               AugmentationConfig(mix_count=4),
                                               np.random.default_rng(5))
    mixed = pool.select(pool.mask(Provenance.MIX))
    assert mixed.seed_rows.tolist() == [10] * 4 + [11] * 4 + [12] * 4
    for embedding, seed_row, gamma in zip(mixed.embeddings, mixed.seed_rows, mixed.gammas):
        row = seed_row - 10
        expected = (1 - gamma) * within.embeddings[row] + gamma * cross.embeddings[row]
        assert np.allclose(embedding, expected)
        assert 0.0 <= gamma <= 1.0
    assert mixed.labels.tolist() == [2] * 12


@pytest.mark.parametrize("flags, present", [
    (AblationFlags(use_cda_s=False), {Provenance.REAL, Provenance.KP_CROSS, Provenance.MIX}),
    (AblationFlags(use_cda_t=False), {Provenance.REAL, Provenance.EP_SOURCE, Provenance.MIX}),
    (AblationFlags(use_cda_mix=False),
     {Provenance.REAL, Provenance.EP_SOURCE, Provenance.KP_CROSS}),
    (AblationFlags(use_cda=False), {Provenance.REAL}),
])
def test_ablation_flags_filter_the_pool(rng, flags, present):
    within, cross = _parents(rng)
    pool = AugmentService.build_augmented_pool(_real(rng), within, cross, AugmentationConfig(),
                                               np.random.default_rng(0), flags)
    assert {provenance for provenance in Provenance if pool.count(provenance)} == present


def test_mix_draws_do_not_depend_on_flags(rng):
    within, cross = _parents(rng)
    real = _real(rng)
    full = AugmentService.build_augmented_pool(real, within, cross, AugmentationConfig(),
                                               np.random.default_rng(8))
    partial = AugmentService.build_augmented_pool(real, within, cross, AugmentationConfig(),
                                                  np.random.default_rng(8),
                                                  AblationFlags(use_cda_s=False))
    assert np.array_equal(full.select(full.mask(Provenance.MIX)).embeddings,
                          partial.select(partial.mask(Provenance.MIX)).embeddings)


def test_zero_mix_count_and_no_minority(rng):
    real = _real(rng)
    empty = SampleSet.empty(4)
    pool = AugmentService.build_augmented_pool(real, empty, empty, AugmentationConfig(),
                                               np.random.default_rng(0))
    assert len(pool) == len(real)
    within, cross = _parents(rng)
    pool = AugmentService.build_augmented_pool(real, within, cross,
                                               AugmentationConfig(mix_count=0),
                                               np.random.default_rng(0))
    assert pool.count(Provenance.MIX) == 0


def test_pool_from_embeddings_is_deterministic(small_domains, fast_hyperparams):
    source, target = small_domains
    split = SplitSpec((3,), 2, source.class_count)
    real = DatasetService.subsample(source, DatasetService.apply_split(source, split, 3))
    first = AugmentService.pool_from_embeddings(real, target, split, fast_hyperparams,
                                                AblationFlags())
    second = AugmentService.pool_from_embeddings(real, target, split, fast_hyperparams,
                                                 AblationFlags())
    assert np.array_equal(first.embeddings, second.embeddings)
    assert first.count(Provenance.MIX) == 2 * fast_hyperparams.mix_count
    assert first.provenance_tags()[-1] == "MIX"
