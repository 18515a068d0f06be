""" Shared fixtures: the click app, small synthetic tasks and fast hyperparameters. """

import numpy as np
import pytest
from click.testing import CliRunner

from tfkt import create_app
from tfkt.config.testing_config import TestingConfig
from tfkt.models.embedding_dataset import SyntheticTaskSpec
from tfkt.models.network_state import NetworkDims
from tfkt.models.training import Hyperparams
from tfkt.services.dataset_service import DatasetService
from tfkt.services.network_service import NetworkService


@pytest.fixture(name="app")
def app_fixture():
    return create_app(TestingConfig)


@pytest.fixture(name="runner")
def runner_fixture():
    return CliRunner(mix_stderr=False)


@pytest.fixture(name="small_task")
def small_task_fixture():
    return SyntheticTaskSpec(
        class_count=4, dim=6, per_class_source=20, per_class_target=15,
        minority_classes=(3,), shots=2, mixing_angle=0.3, translation=0.5,
        noise_std=0.1, seed=7,
    )


@pytest.fixture(name="small_domains")
def small_domains_fixture(small_task):
    return DatasetService.generate_synthetic(small_task)


@pytest.fixture(name="fast_hyperparams")
def fast_hyperparams_fixture():
    return Hyperparams(
        pretrain_epochs=20, epochs=3, mix_count=2, seed=3, generator_hidden=16,
        feature_dim=8, classifier_hidden=8, debug_checks=True,
    )


@pytest.fixture(name="small_network")
def small_network_fixture():
    dims = NetworkDims(input_dim=5, class_count=3, generator_hidden=7, feature_dim=4,
                       classifier_hidden=6)
    generator, classifier = NetworkService.init_params(dims, seed=11)
    return dims, generator, classifier


@pytest.fixture(name="rng")
def rng_fixture():
    return np.random.default_rng(1234)
