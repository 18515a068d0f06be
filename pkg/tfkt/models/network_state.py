"""
    Represents the trainable state: generator F, classifier C_N, prototype table of C_P,
    Adam moments, and their checkpoint file.
"""

# pylint: disable=R0902

import re
from dataclasses import dataclass, field, replace

import numpy as np
from marshmallow import ValidationError

from tfkt.exceptions.network_exceptions import MalformedCheckpoint, ShapeMismatch
from tfkt.schema.checkpoint_header_schema import CheckpointHeaderSchema
from tfkt.utils.numeric_format import format_float, format_row, parse_row


@dataclass(frozen=True)
class NetworkDims:
    """Layer widths: d -> generator_hidden -> feature_dim, feature_dim -> classifier_hidden -> C."""
    input_dim: int
    class_count: int
    generator_hidden: int = 1024
    feature_dim: int = 512
    classifier_hidden: int = 512

    def __post_init__(self):
        if min(self.input_dim, self.generator_hidden, self.feature_dim,
               self.classifier_hidden) < 1 or self.class_count < 2:
            raise ShapeMismatch("network dimensions must be positive and C >= 2")


@dataclass(frozen=True, eq=False)
class GeneratorParams:
    """F(z) = relu(z W1 + b1) W2 + b2."""
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    PREFIX = "generator"

    def blocks(self) -> dict[str, np.ndarray]:
        """Named parameter blocks in a fixed order."""
        return {
            f"{self.PREFIX}.w1": self.w1, f"{self.PREFIX}.b1": self.b1,
            f"{self.PREFIX}.w2": self.w2, f"{self.PREFIX}.b2": self.b2,
        }

    @classmethod
    def block_names(cls) -> list[str]:
        """Names of the blocks, in blocks() order."""
        return [f"{cls.PREFIX}.{name}" for name in ("w1", "b1", "w2", "b2")]

    @classmethod
    def from_blocks(cls, blocks: dict[str, np.ndarray]) -> "GeneratorParams":
        """Inverse of blocks()."""
        return cls(*(blocks[name] for name in cls.block_names()))


@dataclass(frozen=True, eq=False)
class ClassifierParams(GeneratorParams):
    """C_N logits psi(f) = relu(f W1 + b1) W2 + b2; probabilities are their softmax."""
    PREFIX = "classifier"


@dataclass(frozen=True, eq=False)
class PrototypeTable:
    """
    Per-class prototype vectors with the number of samples averaged into each.

    A class prototype is defined only when its count is positive.
    """
    vectors: np.ndarray
    counts: np.ndarray
    amended: bool = False

    @property
    def class_count(self) -> int:
        """Number of classes C."""
        return int(self.counts.shape[0])

    @property
    def defined(self) -> np.ndarray:
        """Boolean mask of classes with a prototype."""
        return self.counts > 0

    @property
    def is_complete(self) -> bool:
        """Every class has a prototype."""
        return bool(np.all(self.defined))


@dataclass
class OptimizerState:
    """Adam moments per parameter block, with a step counter per block."""
    learning_rate: float
    first_moments: dict[str, np.ndarray] = field(default_factory=dict)
    second_moments: dict[str, np.ndarray] = field(default_factory=dict)
    steps: dict[str, int] = field(default_factory=dict)
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    @classmethod
    def for_params(cls, blocks: dict[str, np.ndarray], learning_rate: float) -> "OptimizerState":
        """Zero moments shaped exactly like the given blocks."""
        return cls(
            learning_rate,
            {name: np.zeros_like(value) for name, value in blocks.items()},
            {name: np.zeros_like(value) for name, value in blocks.items()},
            {name: 0 for name in blocks},
        )

    @property
    def step(self) -> int:
        """Largest per-block step count."""
        return max(self.steps.values(), default=0)


@dataclass(eq=False)
class ModelState:
    """Everything a checkpoint holds; owned and mutated by a single trainer."""
    dims: NetworkDims
    seed: int
    generator: GeneratorParams
    classifier: ClassifierParams
    prototypes: PrototypeTable | None
    optimizer: OptimizerState
    temperature: float = 10.0

    def parameter_blocks(self) -> dict[str, np.ndarray]:
        """Generator blocks followed by classifier blocks."""
        return {**self.generator.blocks(), **self.classifier.blocks()}

    def copy(self) -> "ModelState":
        """Deep copy of arrays, so the copy can be mutated independently."""
        def clone(blocks):
            return {name: np.array(value, copy=True) for name, value in blocks.items()}
        optimizer = replace(
            self.optimizer,
            first_moments=clone(self.optimizer.first_moments),
            second_moments=clone(self.optimizer.second_moments),
            steps=dict(self.optimizer.steps),
        )
        prototypes = None
        if self.prototypes is not None:
            prototypes = PrototypeTable(
                self.prototypes.vectors.copy(), self.prototypes.counts.copy(),
                self.prototypes.amended,
            )
        return ModelState(
            self.dims, self.seed,
            GeneratorParams.from_blocks(clone(self.generator.blocks())),
            ClassifierParams.from_blocks(clone(self.classifier.blocks())),
            prototypes, optimizer, self.temperature,
        )


class CheckpointRepository:
    """Reads and writes `#fkt-checkpoint v1` text checkpoints."""

    HEADER_PATTERN = re.compile(r"^#fkt-checkpoint\s+v1((?:\s+\w+=\S+)+)\s*$")
    BLOCK_PATTERN = re.compile(r"^@block\s+(\S+)\s+rows=(\d+)\s+cols=(\d+)\s*$")

    @classmethod
    def save(cls, state: ModelState, file_path: str) -> None:
        """Write every block at full round-trip precision."""
        dims = state.dims
        lines = [
            f"#fkt-checkpoint v1 d={dims.input_dim} generator_hidden={dims.generator_hidden} "
            f"feature_dim={dims.feature_dim} classifier_hidden={dims.classifier_hidden} "
            f"c={dims.class_count} seed={state.seed} step={state.optimizer.step} "
            f"temperature={format_float(state.temperature)} "
            f"learning_rate={format_float(state.optimizer.learning_rate)}"
        ]
        blocks = dict(state.parameter_blocks())
        if state.prototypes is not None:
            blocks["prototypes.vectors"] = state.prototypes.vectors
            blocks["prototypes.counts"] = state.prototypes.counts.astype(np.float64)
            blocks["prototypes.amended"] = np.array([float(state.prototypes.amended)])
        for name, value in state.optimizer.first_moments.items():
            blocks[f"adam.m.{name}"] = value
        for name, value in state.optimizer.second_moments.items():
            blocks[f"adam.v.{name}"] = value
        step_names = [name for name in state.parameter_blocks() if name in state.optimizer.steps]
        if step_names:
            blocks["adam.steps"] = np.array(
                [float(state.optimizer.steps[name]) for name in step_names]
            )
        for name, value in blocks.items():
            matrix = np.atleast_2d(value)
            lines.append(f"@block {name} rows={matrix.shape[0]} cols={matrix.shape[1]}")
            lines.extend(format_row(row) for row in matrix)
        with open(file_path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")

    @classmethod
    def load(cls, file_path: str) -> ModelState:
        """Parse a checkpoint written by save()."""
        with open(file_path, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
        if not lines:
            raise MalformedCheckpoint("empty file", 1)
        header = cls._parse_header(lines[0])
        blocks = cls._parse_blocks(lines)
        dims = NetworkDims(
            header["d"], header["c"], header["generator_hidden"],
            header["feature_dim"], header["classifier_hidden"],
        )
        try:
            generator = GeneratorParams.from_blocks(
                {name: cls._shape_block(name, blocks[name])
                 for name in GeneratorParams.block_names()}
            )
            classifier = ClassifierParams.from_blocks(
                {name: cls._shape_block(name, blocks[name])
                 for name in ClassifierParams.block_names()}
            )
        except KeyError as e:
            raise MalformedCheckpoint(f"missing block {e}") from e
        cls._check_shapes(dims, generator, classifier)
        prototypes = None
        if "prototypes.vectors" in blocks:
            prototypes = PrototypeTable(
                blocks["prototypes.vectors"],
                blocks["prototypes.counts"].reshape(-1).astype(np.int64),
                bool(blocks["prototypes.amended"].reshape(-1)[0]),
            )
        param_names = list(generator.blocks()) + list(classifier.blocks())
        optimizer = OptimizerState(header["learning_rate"])
        step_values = blocks.get("adam.steps", np.empty((1, 0))).reshape(-1)
        stepped = [name for name in param_names if f"adam.m.{name}" in blocks]
        for position, name in enumerate(stepped):
            optimizer.first_moments[name] = cls._shape_block(name, blocks[f"adam.m.{name}"])
            optimizer.second_moments[name] = cls._shape_block(name, blocks[f"adam.v.{name}"])
            optimizer.steps[name] = int(step_values[position]) if position < step_values.size else 0
        return ModelState(
            dims, header["seed"], generator, classifier, prototypes, optimizer,
            header["temperature"],
        )

    @classmethod
    def _parse_header(cls, line: str) -> dict:
        match = cls.HEADER_PATTERN.match(line.strip())
        if match is None:
            raise MalformedCheckpoint("header must start with '#fkt-checkpoint v1'", 1)
        raw = dict(token.split("=", 1) for token in match.group(1).split())
        try:
            return CheckpointHeaderSchema().load(raw)
        except ValidationError as e:
            raise MalformedCheckpoint(f"invalid header: {e.messages}", 1) from e

    @classmethod
    def _parse_blocks(cls, lines: list[str]) -> dict[str, np.ndarray]:
        blocks: dict[str, np.ndarray] = {}
        index = 1
        while index < len(lines):
            line = lines[index]
            if not line.strip():
                index += 1
                continue
            match = cls.BLOCK_PATTERN.match(line.strip())
            if match is None:
                raise MalformedCheckpoint("expected '@block <name> rows=<r> cols=<c>'", index + 1)
            name, rows, cols = match.group(1), int(match.group(2)), int(match.group(3))
            matrix = np.empty((rows, cols), dtype=np.float64)
            for row in range(rows):
                line_number = index + 2 + row
                if line_number > len(lines):
                    raise MalformedCheckpoint(f"block {name} is truncated", line_number)
                try:
                    values = parse_row(lines[line_number - 1])
                except ValueError as e:
                    raise MalformedCheckpoint(f"bad value: {e}", line_number) from e
                if values.shape[0] != cols:
                    raise MalformedCheckpoint(
                        f"block {name} row has {values.shape[0]} values, expected {cols}",
                        line_number,
                    )
                matrix[row] = values
            blocks[name] = matrix
            index += rows + 1
        return blocks

    @staticmethod
    def _shape_block(name: str, matrix: np.ndarray) -> np.ndarray:
        # biases are stored as 1 x n rows
        if name.endswith(".b1") or name.endswith(".b2"):
            return matrix.reshape(-1).copy()
        return matrix

    @staticmethod
    def _check_shapes(dims: NetworkDims, generator: GeneratorParams,
                      classifier: ClassifierParams) -> None:
        expected = {
            "generator.w1": (dims.input_dim, dims.generator_hidden),
            "generator.w2": (dims.generator_hidden, dims.feature_dim),
            "classifier.w1": (dims.feature_dim, dims.classifier_hidden),
            "classifier.w2": (dims.classifier_hidden, dims.class_count),
        }
        blocks = {**generator.blocks(), **classifier.blocks()}
        for name, shape in expected.items():
            if blocks[name].shape != shape:
                raise MalformedCheckpoint(
                    f"block {name} has shape {blocks[name].shape}, header implies {shape}"
                )
