import numpy as np
import pytest

from tfkt.exceptions.evaluation_exceptions import (
    InconsistentMetrics, MissingTargetLabels, UndefinedPrototype
)
from tfkt.models.embedding_dataset import UNLABELED, Domain, EmbeddingDataset, SplitSpec
from tfkt.models.metrics import MetricsReport
from tfkt.models.network_state import (
    ClassifierParams, GeneratorParams, ModelState, NetworkDims, OptimizerState, PrototypeTable
)
from tfkt.services.evaluation_service import EvaluationService


def test_count_oracle():
    report = MetricsReport(np.array([5, 3]), np.array([6, 4]), (1,))
    assert report.a_f == pytest.approx(75.0)
    assert report.a_m == pytest.approx(83.333333, abs=1e-6)
    assert report.a_o == pytest.approx(80.0)
    assert report.correct_f + report.correct_m == report.correct_total
    assert report.n_f + report.n_m == report.n_total


def test_class_wise_overall_accuracy():
    report = MetricsReport(np.array([5, 3]), np.array([6, 4]), (1,), class_wise=True)
    assert report.a_o == pytest.approx((500.0 / 6 + 75.0) / 2)


def test_empty_minority_set():
    report = MetricsReport(np.array([4, 2]), np.array([5, 5]), ())
    assert report.a_f is None
    assert report.a_o == report.a_m == pytest.approx(60.0)


def _identity_state(swap_neural: bool, prototypes=True):
    eye = np.eye(2)
    generator = GeneratorParams(eye, np.zeros(2), eye, np.zeros(2))
    neural_head = eye[::-1].copy() if swap_neural else eye
    classifier = ClassifierParams(eye, np.zeros(2), neural_head, np.zeros(2))
    table = PrototypeTable(eye.copy(), np.array([1, 1])) if prototypes else None
    return ModelState(NetworkDims(2, 2, 2, 2, 2), 0, generator, classifier, table,
                      OptimizerState(1e-3))


def _target():
    embeddings = np.array([[1.0, 0.1], [0.9, 0.2], [1.0, 0.0], [0.1, 1.0], [0.2, 0.8]])
    return EmbeddingDataset(Domain.TARGET, embeddings, [0, 0, 0, 1, 1], 2)


def test_perfect_classifiers_score_one_hundred():
    report = EvaluationService.evaluate(_identity_state(False), _target(), SplitSpec((1,), 1, 2))
    assert report.a_f == report.a_m == report.a_o == 100.0


def test_rows_are_routed_by_their_true_class():
    state = _identity_state(True)
    before = state.classifier.w2.copy()
    report = EvaluationService.evaluate(state, _target(), SplitSpec((1,), 1, 2))
    assert report.a_f == 100.0
    assert report.a_m == 0.0
    assert report.a_o == pytest.approx(40.0)
    assert report.breakdown["c_n"] == {"minority": 0.0, "majority": 0.0}
    assert report.breakdown["c_p"] == {"minority": 100.0, "majority": 100.0}
    assert np.array_equal(state.classifier.w2, before)

    deployed = EvaluationService.evaluate(state, _target(), SplitSpec((1,), 1, 2),
                                          deploy_mode=True)
    assert deployed.a_o == 100.0


def test_evaluation_needs_labels_and_prototypes():
    unlabeled = EmbeddingDataset(Domain.TARGET, np.ones((2, 2)), [0, UNLABELED], 2)
    with pytest.raises(MissingTargetLabels):
        EvaluationService.evaluate(_identity_state(False), unlabeled, SplitSpec((1,), 1, 2))
    with pytest.raises(UndefinedPrototype):
        EvaluationService.evaluate(_identity_state(False, prototypes=False), _target(),
                                   SplitSpec((1,), 1, 2))


def test_metrics_table_layout():
    report = MetricsReport(np.array([5, 3, 0]), np.array([6, 4, 0]), (1,))
    text = EvaluationService.format_tsv(report, "toy", 3, 30)
    header, row = text.splitlines()
    assert header.split("\t") == ["task", "seed", "epoch", "a_f", "a_m", "a_o",
                                  "acc_0", "acc_1", "acc_2"]
    assert row.split("\t") == ["toy", "3", "30", "75.000000", "83.333333", "80.000000",
                               "83.333333", "75.000000", "NA"]
    assert EvaluationService.format_tsv(report, "toy", 3, 30, header=False) == row + "\n"


def test_metrics_table_breakdown_columns():
    report = EvaluationService.evaluate(_identity_state(True), _target(), SplitSpec((1,), 1, 2))
    header, row = EvaluationService.format_tsv(report, "toy", 0, 1, breakdown=True).splitlines()
    assert header.split("\t")[-4:] == ["c_n_minority", "c_n_majority",
                                       "c_p_minority", "c_p_majority"]
    assert row.split("\t")[-4:] == ["0.000000", "0.000000", "100.000000", "100.000000"]
    assert len(EvaluationService.format_tsv(report, "toy", 0, 1).splitlines()[0].split("\t")) == 8


def test_breakdown_subset_without_rows_is_missing():
    report = MetricsReport(np.array([2, 1]), np.array([2, 2]), (),
                           breakdown={"c_n": {"minority": None, "majority": 75.0}})
    row = EvaluationService.format_tsv(report, "toy", 0, 1, header=False, breakdown=True)
    assert row.rstrip("\n").split("\t")[-4:] == ["NA", "75.000000", "NA", "NA"]


@pytest.mark.parametrize("correct, total, minority", [
    (np.array([3, 1]), np.array([2, 2]), (1,)),
    (np.array([-1, 1]), np.array([2, 2]), (1,)),
    (np.array([1, 1]), np.array([2, 2, 2]), (1,)),
    (np.array([1, 1]), np.array([2, 2]), (2,)),
])
def test_inconsistent_counts_are_rejected(correct, total, minority):
    with pytest.raises(InconsistentMetrics):
        MetricsReport(correct, total, minority)
