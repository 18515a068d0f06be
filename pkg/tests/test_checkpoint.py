import numpy as np
import pytest

from tfkt.exceptions.network_exceptions import MalformedCheckpoint
from tfkt.models.network_state import ModelState, OptimizerState, PrototypeTable
from tfkt.services.network_service import NetworkService


def _state(small_network, rng):
    dims, generator, classifier = small_network
    optimizer = OptimizerState(learning_rate=1e-3)
    blocks = {**generator.blocks(), **classifier.blocks()}
    grads = {name: rng.standard_normal(value.shape) for name, value in blocks.items()}
    NetworkService.adam_step(blocks, grads, optimizer)
    NetworkService.adam_step(blocks, {"generator.w1": grads["generator.w1"]}, optimizer)
    prototypes = PrototypeTable(rng.standard_normal((3, 4)) / 7.0, np.array([4, 0, 2]),
                                amended=True)
    return ModelState(dims, 11, generator, classifier, prototypes, optimizer, temperature=10.0)


def test_checkpoint_round_trip_is_exact(small_network, rng, tmp_path):
    state = _state(small_network, rng)
    path = str(tmp_path / "model.ckpt")
    NetworkService.save_checkpoint(state, path)
    loaded = NetworkService.load_checkpoint(path)
    assert loaded.dims == state.dims
    assert loaded.seed == 11
    assert loaded.temperature == 10.0
    for name, value in state.parameter_blocks().items():
        assert np.array_equal(loaded.parameter_blocks()[name], value), name
    assert np.array_equal(loaded.prototypes.vectors, state.prototypes.vectors)
    assert loaded.prototypes.counts.tolist() == [4, 0, 2]
    assert loaded.prototypes.amended
    assert loaded.optimizer.steps == state.optimizer.steps
    assert loaded.optimizer.learning_rate == 1e-3
    for name, value in state.optimizer.second_moments.items():
        assert np.array_equal(loaded.optimizer.second_moments[name], value)


def test_checkpoint_without_prototypes(small_network, tmp_path):
    dims, generator, classifier = small_network
    state = ModelState(dims, 0, generator, classifier, None, OptimizerState(1e-4))
    path = str(tmp_path / "bare.ckpt")
    NetworkService.save_checkpoint(state, path)
    loaded = NetworkService.load_checkpoint(path)
    assert loaded.prototypes is None
    assert loaded.optimizer.steps == {}


def test_bad_checkpoint_header(tmp_path):
    path = tmp_path / "bad.ckpt"
    path.write_text("#fkt-checkpoint v2 d=1\n", encoding="utf-8")
    with pytest.raises(MalformedCheckpoint) as error:
        NetworkService.load_checkpoint(str(path))
    assert error.value.line_number == 1


def test_truncated_block_names_its_line(small_network, tmp_path):
    dims, generator, classifier = small_network
    path = tmp_path / "cut.ckpt"
    NetworkService.save_checkpoint(
        ModelState(dims, 0, generator, classifier, None, OptimizerState(1e-4)), str(path)
    )
    lines = path.read_text(encoding="utf-8").splitlines()
    path.write_text("\n".join(lines[:3]) + "\n", encoding="utf-8")
    with pytest.raises(MalformedCheckpoint) as error:
        NetworkService.load_checkpoint(str(path))
    assert error.value.line_number == 4
