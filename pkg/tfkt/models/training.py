"""
    Training-run value objects: hyperparameters, episode sizes, ablation switches, reports.
"""

# pylint: disable=R0902

import json
from dataclasses import dataclass, field, replace
from enum import Enum as PyEnum

from tfkt.config.base_config import BaseConfig
from tfkt.exceptions.training_exceptions import InvalidHyperparameters
from tfkt.models.metrics import MetricsReport


class TrainingMode(PyEnum):
    """Whole-dataset batches or sampled episodes."""
    GLOBAL = "global"
    EPISODIC = "episodic"


class Alternation(PyEnum):
    """Granularity of the Step A / Step B alternation."""
    ITERATION = "iteration"
    EPOCH = "epoch"


@dataclass(frozen=True)
class Hyperparams:
    """All numeric knobs of a run; defaults follow BaseConfig."""
    alpha: float = BaseConfig.ALPHA
    lambda_weight: float = BaseConfig.LAMBDA
    learning_rate: float = BaseConfig.LEARNING_RATE
    pretrain_learning_rate: float = BaseConfig.PRETRAIN_LEARNING_RATE
    pretrain_epochs: int = BaseConfig.PRETRAIN_EPOCHS
    epochs: int = BaseConfig.EPOCHS
    report_epoch: int = 0
    iterations_per_epoch: int = 1
    mix_count: int = BaseConfig.MIX_COUNT
    beta_a: float = BaseConfig.BETA_A
    beta_b: float = BaseConfig.BETA_B
    temperature: float = BaseConfig.TEMPERATURE
    episode_p: int = BaseConfig.EPISODE_P
    episode_q: int = BaseConfig.EPISODE_Q
    episode_target: int = BaseConfig.EPISODE_TARGET
    episodes_per_epoch: int = 0
    mode: TrainingMode = TrainingMode.GLOBAL
    alternation: Alternation = Alternation.ITERATION
    seed: int = 0
    row_normalize: bool = True
    sigma_mode: str = "squared"
    source_sum: str = "all"
    prototype_space: str = BaseConfig.PROTOTYPE_SPACE
    pseudo_label_threshold: float = 0.0
    generator_hidden: int = BaseConfig.GENERATOR_HIDDEN
    feature_dim: int = BaseConfig.FEATURE_DIM
    classifier_hidden: int = BaseConfig.CLASSIFIER_HIDDEN
    report_wall_time: bool = False
    debug_checks: bool = False

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidHyperparameters("alpha must lie in (0, 1)")
        if self.lambda_weight < 0.0:
            raise InvalidHyperparameters("lambda must be nonnegative")
        if self.learning_rate <= 0.0 or self.pretrain_learning_rate <= 0.0:
            raise InvalidHyperparameters("learning rates must be positive")
        if self.beta_a <= 0.0 or self.beta_b <= 0.0:
            raise InvalidHyperparameters("beta parameters must be positive")
        if self.mix_count < 0 or self.epochs < 0 or self.pretrain_epochs < 0:
            raise InvalidHyperparameters("counts must be nonnegative")
        if self.iterations_per_epoch < 1:
            raise InvalidHyperparameters("iterations per epoch must be at least 1")
        if self.mode is TrainingMode.EPISODIC and (self.episode_p < 1 or self.episode_q < 1):
            raise InvalidHyperparameters("episode p and q must be at least 1")
        if self.sigma_mode not in ("squared", "distance"):
            raise InvalidHyperparameters("sigma mode must be 'squared' or 'distance'")
        if self.source_sum not in ("all", "minority"):
            raise InvalidHyperparameters("source sum must be 'all' or 'minority'")
        if self.prototype_space not in ("euclidean", "unit"):
            raise InvalidHyperparameters("prototype space must be 'euclidean' or 'unit'")

    @property
    def final_epoch(self) -> int:
        """Epoch whose metrics are reported as final (0 means the last epoch)."""
        if self.report_epoch <= 0 or self.report_epoch > self.epochs:
            return self.epochs
        return self.report_epoch

    def with_overrides(self, **overrides) -> "Hyperparams":
        """Copy with some fields replaced."""
        return replace(self, **overrides)


@dataclass(frozen=True)
class EpisodeSpec:
    """Per-episode sample counts; e_s = |Q^m| * p + |Q^f| * q."""
    p: int
    q: int
    target: int

    def source_size(self, majority_classes: int, minority_classes: int) -> int:
        """e_s for the given numbers of majority and minority classes."""
        return majority_classes * self.p + minority_classes * self.q


@dataclass(frozen=True)
class AblationFlags:
    """Component switches; a parent switch off forces its children off."""
    use_cpa: bool = True
    use_cpa_intra: bool = True
    use_cpa_inter: bool = True
    use_cda: bool = True
    use_cda_s: bool = True
    use_cda_t: bool = True
    use_cda_mix: bool = True

    VARIANTS = (
        "full", "w/o CPA", "w/o CPA_intra", "w/o CPA_inter",
        "w/o CDA", "w/o CDA_s", "w/o CDA_t", "w/o CDA_mix", "Source Only",
    )

    def __post_init__(self):
        if not self.use_cpa:
            object.__setattr__(self, "use_cpa_intra", False)
            object.__setattr__(self, "use_cpa_inter", False)
        if not self.use_cda:
            object.__setattr__(self, "use_cda_s", False)
            object.__setattr__(self, "use_cda_t", False)
            object.__setattr__(self, "use_cda_mix", False)

    @property
    def intra_enabled(self) -> bool:
        """M_c contributes to Step B."""
        return self.use_cpa and self.use_cpa_intra

    @property
    def inter_enabled(self) -> bool:
        """M_d contributes to Step B."""
        return self.use_cpa and self.use_cpa_inter

    @property
    def alignment_enabled(self) -> bool:
        """At least one alignment term is active."""
        return self.intra_enabled or self.inter_enabled

    @classmethod
    def variant(cls, name: str) -> "AblationFlags":
        """Flags of a named ablation variant."""
        variants = {
            "full": cls(),
            "w/o CPA": cls(use_cpa=False),
            "w/o CPA_intra": cls(use_cpa_intra=False),
            "w/o CPA_inter": cls(use_cpa_inter=False),
            "w/o CDA": cls(use_cda=False),
            "w/o CDA_s": cls(use_cda_s=False),
            "w/o CDA_t": cls(use_cda_t=False),
            "w/o CDA_mix": cls(use_cda_mix=False),
            "Source Only": cls(use_cpa=False, use_cda=False),
        }
        return variants[name]

    def to_dict(self) -> dict:
        """Returns the data representation of the flags."""
        return {
            "use_cpa": self.use_cpa,
            "use_cpa_intra": self.use_cpa_intra,
            "use_cpa_inter": self.use_cpa_inter,
            "use_cda": self.use_cda,
            "use_cda_s": self.use_cda_s,
            "use_cda_t": self.use_cda_t,
            "use_cda_mix": self.use_cda_mix,
        }


@dataclass(frozen=True)
class EpochRecord:
    """One line of the training report."""
    epoch: int
    m_s: float
    m_c: float
    m_d: float
    objective: float
    metrics: MetricsReport | None
    wall_ms: int = 0

    def to_dict(self) -> dict:
        """Returns the data representation of the record, in report key order."""
        metrics = self.metrics
        return {
            "epoch": self.epoch,
            "m_s": self.m_s,
            "m_c": self.m_c,
            "m_d": self.m_d,
            "objective": self.objective,
            "a_f": metrics.a_f if metrics else None,
            "a_m": metrics.a_m if metrics else None,
            "a_o": metrics.a_o if metrics else None,
            "wall_ms": self.wall_ms,
        }


@dataclass
class TrainReport:
    """Per-epoch losses and metrics plus run-level counters."""
    records: list[EpochRecord] = field(default_factory=list)
    graph_builds: int = 0
    final_epoch: int = 0

    @property
    def final_record(self) -> EpochRecord | None:
        """The record of the reported epoch, if it exists."""
        for record in self.records:
            if record.epoch == self.final_epoch:
                return record
        return self.records[-1] if self.records else None

    @property
    def final_metrics(self) -> MetricsReport | None:
        """Metrics of the reported epoch."""
        record = self.final_record
        return record.metrics if record else None

    def to_json_lines(self) -> str:
        """One compact JSON object per epoch, one per line."""
        return "".join(
            json.dumps(record.to_dict(), separators=(",", ":")) + "\n" for record in self.records
        )
