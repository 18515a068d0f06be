""" This module contains the two-step training loop with pretraining and episodes. """

# pylint: disable=too-few-public-methods, too-many-arguments, too-many-instance-attributes

from dataclasses import dataclass, replace
from logging import getLogger
from math import ceil
from time import perf_counter

import numpy as np

from tfkt.exceptions.training_exceptions import IncompatibleDomains, TrainingInvariantViolated
from tfkt.models.alignment import AlignmentTerms, PseudoLabels
from tfkt.models.augmented_sample import AugmentationConfig, Provenance, SampleSet
from tfkt.models.embedding_dataset import Domain, EmbeddingDataset, SplitSpec
from tfkt.models.network_state import (
    ClassifierParams, GeneratorParams, ModelState, NetworkDims, OptimizerState
)
from tfkt.models.training import (
    AblationFlags, Alternation, EpisodeSpec, EpochRecord, Hyperparams, TrainReport, TrainingMode
)
from tfkt.services.alignment_service import AlignmentService
from tfkt.services.augment_service import AugmentService
from tfkt.services.dataset_service import DatasetService
from tfkt.services.evaluation_service import EvaluationService
from tfkt.services.graph_service import GraphService
from tfkt.services.network_service import NetworkService, SupervisedObjective, TwoLayerNetwork
from tfkt.utils.rng import make_rng

logger = getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StepResult:
    """Loss values of one step, measured before its update."""
    m_s: float
    m_c: float = 0.0
    m_d: float = 0.0
    objective: float = 0.0
    terms: AlignmentTerms | None = None


@dataclass(frozen=True, eq=False)
class Batch:
    """A training pool with the target rows and pseudo-labels that go with it."""
    pool: SampleSet
    target_embeddings: np.ndarray
    pseudo_labels: PseudoLabels | None


class TrainerService:
    """Wraps the training operations."""
    @staticmethod
    def pretrain(state: ModelState, embeddings: np.ndarray, labels: np.ndarray,
                 hp: Hyperparams) -> ModelState:
        """Full-batch Adam on M_s over the real source rows."""
        return StepService.pretrain(state, embeddings, labels, hp)

    @staticmethod
    def step_a(state: ModelState, pool: SampleSet, debug_checks: bool = False) -> StepResult:
        """One Adam update of F and C_N on M_s."""
        return StepService.step_a(state, pool, debug_checks)

    @staticmethod
    def step_b(state: ModelState, batch: Batch, hp: Hyperparams, flags: AblationFlags,
               minority_classes) -> StepResult:
        """One Adam update of F alone on M_s + lambda (M_c - M_d)."""
        return StepService.step_b(state, batch, hp, flags, minority_classes)

    @staticmethod
    def step_b_gradients(state: ModelState, batch: Batch, hp: Hyperparams, flags: AblationFlags,
                         minority_classes):
        """Gradient of the Step B objective w.r.t. the F blocks, without updating."""
        return StepService.step_b_gradients(state, batch, hp, flags, minority_classes)

    @staticmethod
    def train(source: EmbeddingDataset, target: EmbeddingDataset, split: SplitSpec,
              hp: Hyperparams, flags: AblationFlags | None = None):
        """Full run; returns the state at the reported epoch and the report."""
        return TrainingRun(source, target, split, hp, flags or AblationFlags()).run()


class StepService:
    """Wraps the individual optimization steps."""
    @staticmethod
    def apply(state: ModelState, grads: dict[str, np.ndarray], optimizer: OptimizerState):
        """Adam on the blocks named in grads, written back into the state."""
        updated = NetworkService.adam_step(state.parameter_blocks(), grads, optimizer)
        state.generator = GeneratorParams.from_blocks(updated)
        state.classifier = ClassifierParams.from_blocks(updated)

    @staticmethod
    def pretrain(state, embeddings, labels, hp) -> ModelState:
        optimizer = OptimizerState.for_params(state.parameter_blocks(), hp.pretrain_learning_rate)
        for epoch in range(hp.pretrain_epochs):
            loss = NetworkService.supervised_loss(
                embeddings, labels, state.generator, state.classifier
            )
            StepService.apply(state, {**loss.generator_grads, **loss.classifier_grads}, optimizer)
            if (epoch + 1) % 500 == 0:
                logger.debug("Pretraining epoch %d: M_s=%.6f", epoch + 1, loss.value)
        state.optimizer = optimizer
        return state

    @staticmethod
    def step_a(state, pool, debug_checks=False) -> StepResult:
        prototypes_before = None
        if debug_checks and state.prototypes is not None:
            prototypes_before = state.prototypes.vectors.copy()
        loss = NetworkService.supervised_loss(
            pool.embeddings, pool.labels, state.generator, state.classifier
        )
        StepService.apply(state, {**loss.generator_grads, **loss.classifier_grads},
                          state.optimizer)
        if prototypes_before is not None and not np.array_equal(
                prototypes_before, state.prototypes.vectors):
            raise TrainingInvariantViolated("Step A modified the prototype table")
        return StepResult(loss.value, objective=loss.value)

    @staticmethod
    def step_b(state, batch, hp, flags, minority_classes) -> StepResult:
        classifier_before = None
        if hp.debug_checks:
            classifier_before = {k: v.copy() for k, v in state.classifier.blocks().items()}
        grads, result = StepService.step_b_gradients(state, batch, hp, flags, minority_classes)
        StepService.apply(state, grads, state.optimizer)
        if classifier_before is not None:
            for name, value in state.classifier.blocks().items():
                if not np.array_equal(value, classifier_before[name]):
                    raise TrainingInvariantViolated(f"Step B modified {name}")
        return result

    @staticmethod
    def step_b_gradients(state, batch, hp, flags, minority_classes):
        pool = batch.pool
        features, cache = TwoLayerNetwork.forward(state.generator, pool.embeddings)
        m_s, _, feature_grad, _ = SupervisedObjective.on_features(
            features, pool.labels, state.classifier
        )
        m_c = m_d = 0.0
        terms = None
        target_grads = None
        if flags.alignment_enabled and batch.pseudo_labels is not None:
            class_count = state.dims.class_count
            mask = AlignmentService.contribution_mask(pool.labels, pool.provenance,
                                                      minority_classes)
            source_table = AlignmentService.amended_prototypes(
                features, pool.labels, pool.provenance, class_count, minority_classes
            )
            target_features, target_cache = TwoLayerNetwork.forward(
                state.generator, batch.target_embeddings
            )
            pseudo = batch.pseudo_labels
            target_table = AlignmentService.target_prototypes(target_features, pseudo,
                                                              class_count)
            terms = AlignmentService.alignment_terms(
                source_table, target_table, flags.intra_enabled, flags.inter_enabled,
                unit_sphere=hp.prototype_space == "unit",
            )
            m_c = terms.m_c if flags.intra_enabled else 0.0
            m_d = terms.m_d if flags.inter_enabled else 0.0
            if hp.lambda_weight > 0.0:
                feature_grad = feature_grad + hp.lambda_weight * AlignmentService.feature_gradient(
                    terms.grad_source, pool.labels, mask, source_table.counts
                )
                target_feature_grad = hp.lambda_weight * AlignmentService.feature_gradient(
                    terms.grad_target, pseudo.classes, pseudo.assigned, target_table.counts
                )
                target_grads = NetworkService.generator_backward(
                    state.generator, target_cache, target_feature_grad
                )

        grads = NetworkService.generator_backward(state.generator, cache, feature_grad)
        if target_grads is not None:
            grads = {name: grads[name] + target_grads[name] for name in grads}
        objective = m_s + hp.lambda_weight * (m_c - m_d)
        return grads, StepResult(m_s, m_c, m_d, objective, terms)


class TrainingRun:
    """State of one seeded training run; owned by a single caller."""
    def __init__(self, source: EmbeddingDataset, target: EmbeddingDataset, split: SplitSpec,
                 hp: Hyperparams, flags: AblationFlags):
        if source.domain is not Domain.SOURCE or target.domain is not Domain.TARGET:
            raise IncompatibleDomains("expected a source and a target dataset")
        if source.dim != target.dim:
            raise IncompatibleDomains(f"source d={source.dim} differs from target d={target.dim}")
        if source.class_count != target.class_count or split.class_count != source.class_count:
            raise IncompatibleDomains("source, target and split disagree on the class count")
        self.hp = hp
        self.flags = flags
        self.split = split
        self.target = target
        self.real = DatasetService.subsample(
            source, DatasetService.apply_split(source, split, hp.seed)
        )
        self.real_set = AugmentService.real_samples(self.real.embeddings, self.real.labels)
        self.augmentation = AugmentationConfig(hp.beta_a, hp.beta_b, hp.mix_count,
                                               hp.row_normalize)
        self.augment_rng = make_rng(hp.seed, "augment")
        self.episode_rng = make_rng(hp.seed, "episode")
        self.report = TrainReport(final_epoch=hp.final_epoch)
        self.state: ModelState | None = None

    def run(self):
        """Pretrain, then alternate Step A and Step B for every epoch."""
        hp = self.hp
        dims = NetworkDims(self.real.dim, self.real.class_count, hp.generator_hidden,
                           hp.feature_dim, hp.classifier_hidden)
        generator, classifier = NetworkService.init_params(dims, hp.seed)
        self.state = ModelState(
            dims, hp.seed, generator, classifier, None,
            OptimizerState(hp.pretrain_learning_rate), hp.temperature,
        )
        logger.info(
            "Training on %d source rows (%d minority) and %d target rows, mode=%s",
            self.real.size, int(self.split.minority_mask(self.real.labels).sum()),
            self.target.size, hp.mode.value,
        )
        StepService.pretrain(self.state, self.real.embeddings, self.real.labels, hp)
        self.state.optimizer = OptimizerState.for_params(self.state.parameter_blocks(),
                                                         hp.learning_rate)

        fixed = None
        if hp.mode is TrainingMode.GLOBAL:
            minority_rows = np.flatnonzero(self.split.minority_mask(self.real.labels))
            fixed = self._propagate(self.real_set, minority_rows, self.target.embeddings)

        final_state = None
        for epoch in range(1, hp.epochs + 1):
            started = perf_counter()
            if fixed is not None:
                result = self._global_epoch(*fixed)
            else:
                result = self._episodic_epoch()
            metrics = self._evaluate()
            wall_ms = int(round((perf_counter() - started) * 1000)) if hp.report_wall_time else 0
            self.report.records.append(EpochRecord(
                epoch, result.m_s, result.m_c, result.m_d, result.objective, metrics, wall_ms
            ))
            logger.info(
                "Epoch %d: M_s=%.6f M_c=%.6f M_d=%.6f A_f=%s A_m=%s A_o=%s", epoch,
                result.m_s, result.m_c, result.m_d, metrics.a_f if metrics else None,
                metrics.a_m if metrics else None, metrics.a_o if metrics else None,
            )
            if epoch == hp.final_epoch:
                final_state = self.state.copy()

        if final_state is None:
            self._refresh_prototypes(self.real_set)
            final_state = self.state.copy()
        return final_state, self.report

    def _propagate(self, real: SampleSet, minority_positions: np.ndarray,
                   target_embeddings: np.ndarray):
        """EP and KP sets for the given rows; seed rows refer to the real source rows."""
        empty = SampleSet.empty(real.dim)
        flags = self.flags
        if not (flags.use_cda_s or flags.use_cda_t or flags.use_cda_mix):
            return empty, empty
        hp = self.hp
        within, within_graph = GraphService.propagate_within_source(
            real.embeddings, real.labels, minority_positions, hp.alpha,
            hp.row_normalize, hp.source_sum, hp.sigma_mode,
        )
        cross, cross_graph = GraphService.propagate_cross_domain(
            real.embeddings[minority_positions], real.labels[minority_positions],
            minority_positions, target_embeddings, hp.alpha, hp.row_normalize, hp.sigma_mode,
        )
        self.report.graph_builds += (within_graph is not None) + (cross_graph is not None)
        if hp.debug_checks and hp.mode is TrainingMode.GLOBAL and self.report.graph_builds > 2:
            raise TrainingInvariantViolated("global mode rebuilt its propagation graphs")
        origin = real.seed_rows
        return (replace(within, seed_rows=origin[within.seed_rows]),
                replace(cross, seed_rows=origin[cross.seed_rows]))

    def _global_epoch(self, within: SampleSet, cross: SampleSet) -> StepResult:
        pool = AugmentService.build_augmented_pool(
            self.real_set, within, cross, self.augmentation, self.augment_rng, self.flags
        )
        self._refresh_prototypes(pool)
        pseudo = self._pseudo_labels(self.target.embeddings)
        return self._alternate([Batch(pool, self.target.embeddings, pseudo)], pool)

    def _episodic_epoch(self) -> StepResult:
        hp = self.hp
        episode_size = EpisodeSpec(hp.episode_p, hp.episode_q, hp.episode_target).source_size(
            len(self.split.majority_classes), self.split.ways
        )
        count = hp.episodes_per_epoch or max(1, ceil(self.real.size / max(1, episode_size)))
        episodes = []
        for _ in range(count):
            source_rows, target_rows = self._sample_episode()
            real = self.real_set.select(source_rows)
            minority_positions = np.flatnonzero(self.split.minority_mask(real.labels))
            target_embeddings = self.target.embeddings[target_rows]
            within, cross = self._propagate(real, minority_positions, target_embeddings)
            pool = AugmentService.build_augmented_pool(
                real, within, cross, self.augmentation, self.augment_rng, self.flags
            )
            episodes.append((pool, target_rows))

        synthetic = [pool.select(~pool.mask(Provenance.REAL)) for pool, _ in episodes]
        union = SampleSet.concatenate([self.real_set, *synthetic], self.real_set.dim)
        self._refresh_prototypes(union)
        pseudo = self._pseudo_labels(self.target.embeddings)
        batches = [
            Batch(pool, self.target.embeddings[rows],
                  PseudoLabels(pseudo.classes[rows], pseudo.confidence[rows]) if pseudo else None)
            for pool, rows in episodes
        ]
        return self._alternate(batches, union)

    def _sample_episode(self):
        """p rows per majority class, q per minority class, e_t target rows."""
        hp, rng = self.hp, self.episode_rng
        chosen = []
        for class_id in self.split.majority_classes:
            available = self.real.class_rows(class_id)
            if available.size:
                chosen.append(rng.choice(available, size=min(hp.episode_p, available.size),
                                         replace=False))
        for class_id in self.split.minority_classes:
            available = self.real.class_rows(class_id)
            chosen.append(rng.choice(available, size=hp.episode_q,
                                     replace=hp.episode_q > available.size))
        target_rows = np.sort(rng.choice(
            self.target.size, size=min(hp.episode_target, self.target.size), replace=False
        ))
        return np.concatenate(chosen).astype(np.int64), target_rows

    def _alternate(self, batches: list[Batch], pool: SampleSet) -> StepResult:
        hp = self.hp
        minority = self.split.minority_classes
        last = None
        if hp.alternation is Alternation.ITERATION:
            for _ in range(hp.iterations_per_epoch):
                for batch in batches:
                    StepService.step_a(self.state, batch.pool, hp.debug_checks)
                    last = StepService.step_b(self.state, batch, hp, self.flags, minority)
        else:
            for _ in range(hp.iterations_per_epoch):
                for batch in batches:
                    StepService.step_a(self.state, batch.pool, hp.debug_checks)
            for _ in range(hp.iterations_per_epoch):
                for batch in batches:
                    last = StepService.step_b(self.state, batch, hp, self.flags, minority)
        # prototypes describe the features the epoch ends with
        self._refresh_prototypes(pool)
        return last

    def _refresh_prototypes(self, pool: SampleSet) -> None:
        features = NetworkService.forward_generator(self.state.generator, pool.embeddings)
        self.state.prototypes = AlignmentService.amended_prototypes(
            features, pool.labels, pool.provenance, self.state.dims.class_count,
            self.split.minority_classes,
        )

    def _pseudo_labels(self, target_embeddings: np.ndarray) -> PseudoLabels | None:
        if not self.flags.alignment_enabled:
            return None
        features = NetworkService.forward_generator(self.state.generator, target_embeddings)
        return AlignmentService.pseudo_label(
            features, self.state.prototypes, self.hp.temperature,
            self.hp.pseudo_label_threshold,
        )

    def _evaluate(self):
        if not self.target.is_fully_labeled:
            return None
        return EvaluationService.evaluate(self.state, self.target, self.split)
