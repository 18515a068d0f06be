""" Seeded end-to-end checks on synthetic covariate-shift tasks; run with `-m acceptance`. """

import numpy as np
import pytest

from tfkt.models.embedding_dataset import SyntheticTaskSpec
from tfkt.models.training import AblationFlags, Hyperparams
from tfkt.services.dataset_service import DatasetService
from tfkt.services.trainer_service import TrainerService

pytestmark = pytest.mark.acceptance

SEEDS = (0, 1, 2, 3, 4)


def _task(seed: int, separation: float = 4.0) -> SyntheticTaskSpec:
    return SyntheticTaskSpec(
        class_count=8, dim=32, per_class_source=150, per_class_target=150,
        minority_classes=(5, 6, 7), shots=1, mixing_angle=0.3, translation=1.0,
        noise_std=0.3, separation=separation, seed=seed,
    )


def _hyperparams(seed: int) -> Hyperparams:
    return Hyperparams(
        pretrain_epochs=300, pretrain_learning_rate=1e-3, epochs=30, generator_hidden=64,
        feature_dim=32, classifier_hidden=32, seed=seed,
    )


def _mean_metrics(variant: str, separation: float = 4.0):
    minority, majority, overall = [], [], []
    for seed in SEEDS:
        task = _task(seed, separation)
        source, target = DatasetService.generate_synthetic(task)
        _, report = TrainerService.train(source, target, task.split_spec(), _hyperparams(seed),
                                         AblationFlags.variant(variant))
        metrics = report.final_metrics
        minority.append(metrics.a_f)
        majority.append(metrics.a_m)
        overall.append(metrics.a_o)
    return float(np.mean(minority)), float(np.mean(majority)), float(np.mean(overall))


@pytest.fixture(name="variant_metrics", scope="module")
def variant_metrics_fixture():
    return {name: _mean_metrics(name) for name in ("full", "w/o CPA", "w/o CDA", "Source Only")}


def test_full_method_beats_source_only_on_minority_classes(variant_metrics):
    full_minority, full_majority, _ = variant_metrics["full"]
    base_minority, base_majority, _ = variant_metrics["Source Only"]
    assert full_minority >= base_minority + 10.0
    assert full_majority >= base_majority - 3.0


def test_ablations_order_minority_accuracy(variant_metrics):
    tolerance = 1.0
    full = variant_metrics["full"][0]
    without_cda = variant_metrics["w/o CDA"][0]
    without_cpa = variant_metrics["w/o CPA"][0]
    source_only = variant_metrics["Source Only"][0]
    assert source_only <= without_cda + tolerance
    assert without_cda <= full + tolerance
    assert without_cpa <= full + tolerance


def test_coincident_classes_give_chance_accuracy():
    _, _, overall = _mean_metrics("Source Only", separation=0.0)
    assert abs(overall - 100.0 / 8) <= 5.0
