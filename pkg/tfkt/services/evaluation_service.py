""" This module contains the hybrid-classifier evaluation protocol and its TSV report. """

# pylint: disable=too-few-public-methods,too-many-arguments,too-many-positional-arguments

from logging import getLogger

import numpy as np

from tfkt.exceptions.evaluation_exceptions import (
    InconsistentMetrics, MissingTargetLabels, UndefinedPrototype
)
from tfkt.exceptions.general_exceptions import DimensionMismatch
from tfkt.models.embedding_dataset import EmbeddingDataset, SplitSpec
from tfkt.models.metrics import MetricsReport
from tfkt.models.network_state import ModelState
from tfkt.services.network_service import NetworkService

logger = getLogger(__name__)

MISSING = "NA"
BREAKDOWN_COLUMNS = (
    ("c_n", "minority"), ("c_n", "majority"), ("c_p", "minority"), ("c_p", "majority"),
)


class EvaluationService:
    """Wraps the evaluation operations."""
    @staticmethod
    def evaluate(state: ModelState, target: EmbeddingDataset, split: SplitSpec,
                 deploy_mode: bool = False, class_wise: bool = False) -> MetricsReport:
        """A_f, A_m and A_o of the hybrid classifier on a labeled target."""
        return HybridEvaluation.evaluate(state, target, split, deploy_mode, class_wise)

    @staticmethod
    def format_tsv(report: MetricsReport, task: str, seed: int, epoch: int,
                   header: bool = True, breakdown: bool = False) -> str:
        """
        task, seed, epoch, a_f, a_m, a_o, then one accuracy per class; with breakdown,
        C_N and C_P accuracies on the minority and majority subsets follow.
        """
        return MetricsTable.format_tsv(report, task, seed, epoch, header, breakdown)


class HybridEvaluation:
    """Routes minority rows to C_P and majority rows to C_N by their true label."""
    @staticmethod
    def evaluate(state, target, split, deploy_mode=False, class_wise=False) -> MetricsReport:
        if not target.is_fully_labeled:
            raise MissingTargetLabels()
        if target.dim != state.dims.input_dim:
            raise DimensionMismatch(
                f"checkpoint expects d={state.dims.input_dim}, target has d={target.dim}"
            )
        if target.class_count != state.dims.class_count or split.class_count != target.class_count:
            raise DimensionMismatch(
                f"checkpoint has C={state.dims.class_count}, target has C={target.class_count}"
            )
        if state.prototypes is None or not state.prototypes.is_complete:
            raise UndefinedPrototype()

        features = NetworkService.forward_generator(state.generator, target.embeddings)
        neural = NetworkService.predict_neural(state.classifier, features).argmax(axis=1)
        prototype = NetworkService.predict_prototype(
            state.prototypes, features, state.temperature
        ).argmax(axis=1)
        labels = target.labels
        minority = split.minority_mask(labels)
        routed = prototype if deploy_mode else np.where(minority, prototype, neural)

        class_count = target.class_count
        correct = routed == labels
        per_class_correct = np.bincount(labels[correct], minlength=class_count)
        per_class_total = np.bincount(labels, minlength=class_count)
        breakdown = {
            "c_n": HybridEvaluation._subset_accuracy(neural == labels, minority),
            "c_p": HybridEvaluation._subset_accuracy(prototype == labels, minority),
        }
        report = MetricsReport(per_class_correct, per_class_total, split.minority_classes,
                               class_wise, breakdown)
        if report.correct_f + report.correct_m != report.correct_total:
            raise InconsistentMetrics("minority and majority counts do not add up")
        logger.info("Evaluation: A_f=%s A_m=%s A_o=%s", report.a_f, report.a_m, report.a_o)
        return report

    @staticmethod
    def _subset_accuracy(correct: np.ndarray, minority: np.ndarray) -> dict:
        def percent(mask):
            return 100.0 * float(correct[mask].mean()) if mask.any() else None
        return {"minority": percent(minority), "majority": percent(~minority)}


class MetricsTable:
    """Tab-separated metrics rows."""
    @staticmethod
    def format_tsv(report, task, seed, epoch, header=True, breakdown=False) -> str:
        class_count = report.per_class_total.shape[0]
        lines = []
        if header:
            columns = ["task", "seed", "epoch", "a_f", "a_m", "a_o"]
            columns += [f"acc_{class_id}" for class_id in range(class_count)]
            if breakdown:
                columns += [f"{head}_{subset}" for head, subset in BREAKDOWN_COLUMNS]
            lines.append("\t".join(columns))
        values = [report.a_f, report.a_m, report.a_o, *report.per_class_accuracy()]
        if breakdown:
            values += [report.breakdown.get(head, {}).get(subset)
                       for head, subset in BREAKDOWN_COLUMNS]
        lines.append("\t".join(
            [str(task), str(seed), str(epoch)] + [MetricsTable._cell(value) for value in values]
        ))
        return "\n".join(lines) + "\n"

    @staticmethod
    def _cell(value) -> str:
        return MISSING if value is None else f"{value:.6f}"
