""" This module contains the forward passes, the supervised loss with its gradients and Adam. """

# pylint: disable=too-few-public-methods, too-many-locals

from dataclasses import dataclass, field
from logging import getLogger

import numpy as np

from tfkt.exceptions.evaluation_exceptions import UndefinedPrototype
from tfkt.exceptions.network_exceptions import (
    NonFiniteGradient, NonFiniteValue, ShapeMismatch, UndefinedCosine
)
from tfkt.models.network_state import (
    CheckpointRepository, ClassifierParams, GeneratorParams, ModelState, NetworkDims,
    OptimizerState, PrototypeTable,
)
from tfkt.utils.rng import make_rng

logger = getLogger(__name__)

LOG_CLAMP = 1e-12


@dataclass(frozen=True, eq=False)
class LayerCache:
    """Activations of a two-layer block, kept for the backward pass."""
    inputs: np.ndarray
    pre_activation: np.ndarray
    hidden: np.ndarray
    outputs: np.ndarray


@dataclass(frozen=True, eq=False)
class SupervisedLoss:
    """M_s with its gradients; feature_grad is dM_s/dF for every row."""
    value: float
    generator_grads: dict[str, np.ndarray] = field(repr=False)
    classifier_grads: dict[str, np.ndarray] = field(repr=False)
    feature_grad: np.ndarray = field(repr=False)
    features: np.ndarray = field(repr=False)
    generator_cache: LayerCache = field(repr=False)
    clamped: int = 0


class NetworkService:
    """Wraps the generator, both classifiers and the optimizer."""
    @staticmethod
    def init_params(dims: NetworkDims, seed: int):
        """Glorot-uniform weights and zero biases."""
        return NetworkInitializer.init_params(dims, seed)

    @staticmethod
    def forward_generator(params: GeneratorParams, embeddings: np.ndarray) -> np.ndarray:
        """F(z); a single d-vector maps to a single feature vector."""
        single = np.ndim(embeddings) == 1
        features, _ = TwoLayerNetwork.forward(params, embeddings)
        return features[0] if single else features

    @staticmethod
    def predict_neural(params: ClassifierParams, features: np.ndarray) -> np.ndarray:
        """C_N probabilities."""
        single = np.ndim(features) == 1
        logits, _ = TwoLayerNetwork.forward(params, features)
        probabilities = softmax(logits)
        return probabilities[0] if single else probabilities

    @staticmethod
    def predict_prototype(prototypes: PrototypeTable, features: np.ndarray,
                          temperature: float = 10.0) -> np.ndarray:
        """C_P probabilities softmax(tau * cos(f, mu^c))."""
        return PrototypeClassifier.predict(prototypes, features, temperature)

    @staticmethod
    def supervised_loss(embeddings: np.ndarray, labels: np.ndarray,
                        generator: GeneratorParams, classifier: ClassifierParams) -> SupervisedLoss:
        """Mean cross-entropy of C_N(F(z)) with gradients for F and C_N."""
        return SupervisedObjective.evaluate(embeddings, labels, generator, classifier)

    @staticmethod
    def generator_backward(params: GeneratorParams, cache: LayerCache,
                           feature_grad: np.ndarray) -> dict[str, np.ndarray]:
        """Backpropagate dL/dF into the generator blocks."""
        grads, _ = TwoLayerNetwork.backward(params, cache, feature_grad)
        return grads

    @staticmethod
    def adam_step(params: dict[str, np.ndarray], grads: dict[str, np.ndarray],
                  state: OptimizerState, learning_rate: float | None = None):
        """Bias-corrected Adam over the blocks named in grads."""
        return AdamOptimizer.step(params, grads, state, learning_rate)

    @staticmethod
    def save_checkpoint(state: ModelState, file_path: str) -> None:
        """Write the model state as a text checkpoint."""
        CheckpointRepository.save(state, file_path)

    @staticmethod
    def load_checkpoint(file_path: str) -> ModelState:
        """Read a checkpoint written by save_checkpoint."""
        return CheckpointRepository.load(file_path)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax with max subtraction."""
    shifted = logits - logits.max(axis=1, keepdims=True)
    exponentials = np.exp(shifted)
    return exponentials / exponentials.sum(axis=1, keepdims=True)


class TwoLayerNetwork:
    """x W1 + b1 -> relu -> W2 + b2, shared by F and C_N."""
    @staticmethod
    def forward(params: GeneratorParams, inputs: np.ndarray):
        inputs = np.atleast_2d(np.asarray(inputs, dtype=np.float64))
        if inputs.shape[1] != params.w1.shape[0]:
            raise ShapeMismatch(
                f"{params.PREFIX} expects width {params.w1.shape[0]}, got {inputs.shape[1]}"
            )
        pre_activation = inputs @ params.w1 + params.b1
        hidden = np.maximum(pre_activation, 0.0)
        outputs = hidden @ params.w2 + params.b2
        if not np.all(np.isfinite(outputs)):
            raise NonFiniteValue(f"{params.PREFIX} produced non-finite outputs")
        return outputs, LayerCache(inputs, pre_activation, hidden, outputs)

    @staticmethod
    def backward(params: GeneratorParams, cache: LayerCache, output_grad: np.ndarray):
        """Gradients of the blocks and of the inputs."""
        prefix = params.PREFIX
        hidden_grad = (output_grad @ params.w2.T) * (cache.pre_activation > 0.0)
        grads = {
            f"{prefix}.w1": cache.inputs.T @ hidden_grad,
            f"{prefix}.b1": hidden_grad.sum(axis=0),
            f"{prefix}.w2": cache.hidden.T @ output_grad,
            f"{prefix}.b2": output_grad.sum(axis=0),
        }
        return grads, hidden_grad @ params.w1.T


class PrototypeClassifier:
    """Cosine-similarity classifier over a prototype table; it has no trainable parameters."""
    @staticmethod
    def cosine(prototypes: PrototypeTable, features: np.ndarray) -> np.ndarray:
        if not prototypes.is_complete:
            missing = np.flatnonzero(~prototypes.defined).tolist()
            raise UndefinedPrototype(f"no prototype for classes {missing}")
        feature_norms = np.linalg.norm(features, axis=1, keepdims=True)
        prototype_norms = np.linalg.norm(prototypes.vectors, axis=1, keepdims=True)
        if np.any(feature_norms == 0.0):
            raise UndefinedCosine("cosine similarity of a zero feature vector")
        if np.any(prototype_norms == 0.0):
            raise UndefinedCosine("cosine similarity of a zero prototype")
        return (features / feature_norms) @ (prototypes.vectors / prototype_norms).T

    @staticmethod
    def predict(prototypes: PrototypeTable, features, temperature: float) -> np.ndarray:
        single = np.ndim(features) == 1
        features = np.atleast_2d(np.asarray(features, dtype=np.float64))
        if features.shape[1] != prototypes.vectors.shape[1]:
            raise ShapeMismatch("feature and prototype widths differ")
        probabilities = softmax(temperature * PrototypeClassifier.cosine(prototypes, features))
        return probabilities[0] if single else probabilities


class SupervisedObjective:
    """Cross-entropy through C_N and F."""
    @staticmethod
    def evaluate(embeddings, labels, generator, classifier) -> SupervisedLoss:
        labels = np.asarray(labels, dtype=np.int64)
        features, generator_cache = TwoLayerNetwork.forward(generator, embeddings)
        value, classifier_grads, feature_grad, clamped = SupervisedObjective.on_features(
            features, labels, classifier
        )
        generator_grads, _ = TwoLayerNetwork.backward(generator, generator_cache, feature_grad)
        return SupervisedLoss(value, generator_grads, classifier_grads, feature_grad, features,
                              generator_cache, clamped)

    @staticmethod
    def on_features(features: np.ndarray, labels: np.ndarray, classifier: ClassifierParams):
        """M_s for fixed features: (value, classifier grads, dM_s/dF, clamped rows)."""
        size = labels.shape[0]
        if size == 0:
            raise ShapeMismatch("supervised loss needs at least one sample")
        logits, classifier_cache = TwoLayerNetwork.forward(classifier, features)
        probabilities = softmax(logits)
        rows = np.arange(size)
        target_probability = probabilities[rows, labels]
        clamped = target_probability < LOG_CLAMP
        value = float(-np.mean(np.log(np.maximum(target_probability, LOG_CLAMP))))
        if not np.isfinite(value):
            raise NonFiniteValue("supervised loss is not finite")
        logit_grad = probabilities.copy()
        logit_grad[rows, labels] -= 1.0
        # the clamped log is flat, so its rows carry no gradient
        logit_grad[clamped] = 0.0
        logit_grad /= size
        if clamped.any():
            logger.warning("Clamped log(0) in the supervised loss for %d rows", int(clamped.sum()))
        classifier_grads, feature_grad = TwoLayerNetwork.backward(
            classifier, classifier_cache, logit_grad
        )
        return value, classifier_grads, feature_grad, int(clamped.sum())


class AdamOptimizer:
    """Adam with per-block step counters."""
    @staticmethod
    def step(params, grads, state: OptimizerState, learning_rate=None) -> dict[str, np.ndarray]:
        """
        Returns a new block dict. Blocks absent from grads are passed through as the same
        array objects; each updated block advances its own step counter.
        """
        rate = state.learning_rate if learning_rate is None else learning_rate
        for name, grad in grads.items():
            if name not in params:
                raise ShapeMismatch(f"gradient for unknown block {name}")
            if grad.shape != params[name].shape:
                raise ShapeMismatch(
                    f"block {name}: gradient {grad.shape} vs parameter {params[name].shape}"
                )
            if not np.all(np.isfinite(grad)):
                raise NonFiniteGradient(block=name)
        updated = dict(params)
        for name, grad in grads.items():
            first = state.first_moments.get(name)
            if first is None:
                first = np.zeros_like(params[name])
                state.second_moments[name] = np.zeros_like(params[name])
            second = state.second_moments[name]
            steps = state.steps.get(name, 0) + 1
            first = state.beta1 * first + (1.0 - state.beta1) * grad
            second = state.beta2 * second + (1.0 - state.beta2) * grad * grad
            first_hat = first / (1.0 - state.beta1 ** steps)
            second_hat = second / (1.0 - state.beta2 ** steps)
            updated[name] = params[name] - rate * first_hat / (np.sqrt(second_hat) + state.epsilon)
            state.first_moments[name] = first
            state.second_moments[name] = second
            state.steps[name] = steps
        return updated


class NetworkInitializer:
    """Wraps parameter initialization."""
    @staticmethod
    def init_params(dims: NetworkDims, seed: int):
        """Weights drawn in the order generator w1, w2, classifier w1, w2."""
        rng = make_rng(seed, "init")

        def glorot(fan_in: int, fan_out: int) -> np.ndarray:
            bound = np.sqrt(6.0 / (fan_in + fan_out))
            return rng.uniform(-bound, bound, size=(fan_in, fan_out))

        generator_w1 = glorot(dims.input_dim, dims.generator_hidden)
        generator_w2 = glorot(dims.generator_hidden, dims.feature_dim)
        classifier_w1 = glorot(dims.feature_dim, dims.classifier_hidden)
        classifier_w2 = glorot(dims.classifier_hidden, dims.class_count)
        generator = GeneratorParams(
            generator_w1, np.zeros(dims.generator_hidden),
            generator_w2, np.zeros(dims.feature_dim),
        )
        classifier = ClassifierParams(
            classifier_w1, np.zeros(dims.classifier_hidden),
            classifier_w2, np.zeros(dims.class_count),
        )
        return generator, classifier
