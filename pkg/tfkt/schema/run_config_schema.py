""" Validation schema for training runs: hyperparameters, split, ablations and paths. """

from dataclasses import dataclass

from marshmallow import (
    RAISE, Schema, ValidationError, fields, post_load, validate, validates_schema
)

from tfkt.config.base_config import BaseConfig
from tfkt.exceptions.training_exceptions import InvalidHyperparameters
from tfkt.models.embedding_dataset import SplitSpec
from tfkt.models.training import AblationFlags, Alternation, Hyperparams, TrainingMode

ABLATION_KEYS = (
    "use_cpa", "use_cpa_intra", "use_cpa_inter", "use_cda", "use_cda_s", "use_cda_t",
    "use_cda_mix",
)
PATH_KEYS = ("source", "target", "report", "metrics", "checkpoint")


class CommaSeparatedIntegers(fields.Field):
    """Accepts `0,3,5`, an empty string, or a list of integers."""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, (list, tuple)):
            parts = list(value)
        elif isinstance(value, str):
            parts = [part for part in value.replace(" ", "").split(",") if part]
        else:
            raise ValidationError("expected a comma-separated list of integers")
        try:
            return [int(part) for part in parts]
        except (TypeError, ValueError) as e:
            raise ValidationError("expected a comma-separated list of integers") from e

    def _serialize(self, value, attr, obj, **kwargs):
        return ",".join(str(part) for part in value or ())


@dataclass(frozen=True)
class RunConfig:
    """A validated training run: inputs, outputs, split, knobs and switches."""
    source: str
    target: str
    report: str
    metrics: str
    checkpoint: str
    task: str
    minority_classes: tuple[int, ...]
    shots: int
    hyperparams: Hyperparams
    flags: AblationFlags

    def split_for(self, class_count: int) -> SplitSpec:
        """The split once the class count of the data is known."""
        return SplitSpec(self.minority_classes, self.shots, class_count)


def _help(text: str):
    return {"help": text}


class RunConfigSchema(Schema):
    """
    Every key a run accepts, with its default. Keys are spelled as in config files;
    unknown keys are rejected.
    """
    class Meta:  # pylint: disable=too-few-public-methods
        """Reject keys the run does not know."""
        unknown = RAISE
        ordered = True

    source = fields.String(required=True, metadata=_help("Source embedding file."))
    target = fields.String(required=True, metadata=_help("Target embedding file."))
    report = fields.String(load_default="report.jsonl",
                           metadata=_help("JSON-lines training report output."))
    metrics = fields.String(load_default="metrics.tsv",
                            metadata=_help("Final-epoch metrics TSV output."))
    checkpoint = fields.String(load_default="model.ckpt", metadata=_help("Checkpoint output."))
    task = fields.String(load_default="task", metadata=_help("Task name in the metrics TSV."))

    minority = CommaSeparatedIntegers(load_default=list,
                                      metadata=_help("Minority class ids, comma separated."))
    shots = fields.Integer(load_default=1, validate=validate.Range(min=1),
                           metadata=_help("Labeled source rows kept per minority class."))

    alpha = fields.Float(load_default=BaseConfig.ALPHA, metadata=_help("Propagation alpha."))
    lambda_weight = fields.Float(data_key="lambda", load_default=BaseConfig.LAMBDA,
                                 validate=validate.Range(min=0),
                                 metadata=_help("Weight of M_c - M_d in Step B."))
    learning_rate = fields.Float(load_default=BaseConfig.LEARNING_RATE,
                                 metadata=_help("Adam learning rate after pretraining."))
    pretrain_learning_rate = fields.Float(load_default=BaseConfig.PRETRAIN_LEARNING_RATE,
                                          metadata=_help("Adam learning rate of pretraining."))
    pretrain_epochs = fields.Integer(load_default=BaseConfig.PRETRAIN_EPOCHS,
                                     validate=validate.Range(min=0),
                                     metadata=_help("Full-batch pretraining epochs."))
    epochs = fields.Integer(load_default=BaseConfig.EPOCHS, validate=validate.Range(min=0),
                            metadata=_help("Training epochs after pretraining."))
    report_epoch = fields.Integer(load_default=0, validate=validate.Range(min=0),
                                  metadata=_help("Epoch reported as final; 0 means the last."))
    iterations_per_epoch = fields.Integer(load_default=1, validate=validate.Range(min=1),
                                          metadata=_help("Step A/B rounds per epoch."))
    k = fields.Integer(attribute="mix_count", load_default=BaseConfig.MIX_COUNT,
                       validate=validate.Range(min=0),
                       metadata=_help("MIX samples per minority seed row."))
    beta_a = fields.Float(load_default=BaseConfig.BETA_A, metadata=_help("Beta(a, b) a."))
    beta_b = fields.Float(load_default=BaseConfig.BETA_B, metadata=_help("Beta(a, b) b."))
    temperature = fields.Float(load_default=BaseConfig.TEMPERATURE,
                               metadata=_help("Cosine temperature of C_P."))
    episode_p = fields.Integer(load_default=BaseConfig.EPISODE_P,
                               metadata=_help("Episode rows per majority class."))
    episode_q = fields.Integer(load_default=BaseConfig.EPISODE_Q,
                               metadata=_help("Episode rows per minority class."))
    episode_target = fields.Integer(load_default=BaseConfig.EPISODE_TARGET,
                                    metadata=_help("Target rows per episode."))
    episodes_per_epoch = fields.Integer(load_default=0, validate=validate.Range(min=0),
                                        metadata=_help("Episodes per epoch; 0 covers the source."))
    mode = fields.String(load_default="global",
                         validate=validate.OneOf([mode.value for mode in TrainingMode]),
                         metadata=_help("global or episodic."))
    alternation = fields.String(load_default="iteration",
                                validate=validate.OneOf([a.value for a in Alternation]),
                                metadata=_help("Step A/B alternation: iteration or epoch."))
    seed = fields.Integer(load_default=0, validate=validate.Range(min=0, max=2 ** 64 - 1),
                          metadata=_help("Seed of every random stream."))
    row_normalize = fields.Boolean(load_default=True,
                                   metadata=_help("Row-normalize propagation weights."))
    sigma_mode = fields.String(load_default="squared",
                               validate=validate.OneOf(["squared", "distance"]),
                               metadata=_help("Bandwidth from squared distances or distances."))
    source_sum = fields.String(load_default="all", validate=validate.OneOf(["all", "minority"]),
                               metadata=_help("Propagate over all source rows or minority rows."))
    prototype_space = fields.String(
        load_default=BaseConfig.PROTOTYPE_SPACE, validate=validate.OneOf(["euclidean", "unit"]),
        metadata=_help("Align raw class means or their unit-length directions."),
    )
    pseudo_label_threshold = fields.Float(
        load_default=0.0, validate=validate.Range(min=0, max=1),
        metadata=_help("Minimum C_P confidence of a pseudo-label."),
    )
    generator_hidden = fields.Integer(load_default=BaseConfig.GENERATOR_HIDDEN,
                                      validate=validate.Range(min=1),
                                      metadata=_help("Hidden width of F."))
    feature_dim = fields.Integer(load_default=BaseConfig.FEATURE_DIM,
                                 validate=validate.Range(min=1),
                                 metadata=_help("Feature width of F."))
    classifier_hidden = fields.Integer(load_default=BaseConfig.CLASSIFIER_HIDDEN,
                                       validate=validate.Range(min=1),
                                       metadata=_help("Hidden width of C_N."))
    report_wall_time = fields.Boolean(load_default=False,
                                      metadata=_help("Record epoch wall time in the report."))

    use_cpa = fields.Boolean(load_default=True, metadata={"cli": False})
    use_cpa_intra = fields.Boolean(load_default=True, metadata={"cli": False})
    use_cpa_inter = fields.Boolean(load_default=True, metadata={"cli": False})
    use_cda = fields.Boolean(load_default=True, metadata={"cli": False})
    use_cda_s = fields.Boolean(load_default=True, metadata={"cli": False})
    use_cda_t = fields.Boolean(load_default=True, metadata={"cli": False})
    use_cda_mix = fields.Boolean(load_default=True, metadata={"cli": False})

    @validates_schema
    def validate_ranges(self, data, **kwargs):  # pylint: disable=unused-argument
        """Cross-field checks that need more than one key."""
        if not 0.0 < data.get("alpha", BaseConfig.ALPHA) < 1.0:
            raise ValidationError("alpha must lie in (0, 1)", "alpha")
        if data.get("mode") == TrainingMode.EPISODIC.value and (
                data.get("episode_p", 1) < 1 or data.get("episode_q", 1) < 1):
            raise ValidationError("episode p and q must be at least 1 in episodic mode",
                                  "episode_p")
        minority = data.get("minority", [])
        if len(set(minority)) != len(minority) or any(c < 0 for c in minority):
            raise ValidationError("minority class ids must be distinct and nonnegative",
                                  "minority")
        for key in ("learning_rate", "pretrain_learning_rate", "beta_a", "beta_b",
                    "temperature"):
            if key in data and data[key] <= 0.0:
                raise ValidationError("must be positive", key)

    @post_load
    def make_run_config(self, data, **kwargs):  # pylint: disable=unused-argument
        """Split the flat keys into hyperparameters, flags and paths."""
        flags = AblationFlags(**{key: data.pop(key) for key in ABLATION_KEYS})
        paths = {key: data.pop(key) for key in PATH_KEYS}
        task = data.pop("task")
        minority = tuple(data.pop("minority"))
        shots = data.pop("shots")
        data["mode"] = TrainingMode(data["mode"])
        data["alternation"] = Alternation(data["alternation"])
        try:
            hyperparams = Hyperparams(debug_checks=self.context.get("debug", False), **data)
        except InvalidHyperparameters as e:
            raise ValidationError(e.message) from e
        return RunConfig(task=task, minority_classes=minority, shots=shots,
                         hyperparams=hyperparams, flags=flags, **paths)
