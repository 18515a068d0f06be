"""
    Represents the hybrid-classifier evaluation result on a labeled target domain.
"""

# pylint: disable=R0902

from dataclasses import dataclass, field

import numpy as np

from tfkt.exceptions.evaluation_exceptions import InconsistentMetrics


def _percent(correct: int, total: int) -> float | None:
    if total == 0:
        return None
    return 100.0 * correct / total


@dataclass(frozen=True, eq=False)
class MetricsReport:
    """
    Minority (A_f), majority (A_m) and overall (A_o) accuracies in percent.

    A subset without target rows has accuracy None. A_o is sample-weighted unless the
    report was built class-wise, in which case it averages the per-class accuracies.
    """
    per_class_correct: np.ndarray
    per_class_total: np.ndarray
    minority_classes: tuple[int, ...]
    class_wise: bool = False
    breakdown: dict = field(default_factory=dict)

    def __post_init__(self):
        correct = np.asarray(self.per_class_correct)
        total = np.asarray(self.per_class_total)
        if correct.shape != total.shape or correct.ndim != 1:
            raise InconsistentMetrics("correct and total counts must be per-class vectors")
        if np.any(correct < 0) or np.any(correct > total):
            raise InconsistentMetrics("correct counts must lie between 0 and the class total")
        if any(not 0 <= class_id < total.shape[0] for class_id in self.minority_classes):
            raise InconsistentMetrics("minority class id out of range")

    def _subset(self, minority: bool) -> np.ndarray:
        mask = np.zeros(self.per_class_total.shape[0], dtype=bool)
        mask[list(self.minority_classes)] = True
        return mask if minority else ~mask

    @property
    def correct_f(self) -> int:
        """Correct minority predictions."""
        return int(self.per_class_correct[self._subset(True)].sum())

    @property
    def correct_m(self) -> int:
        """Correct majority predictions."""
        return int(self.per_class_correct[self._subset(False)].sum())

    @property
    def correct_total(self) -> int:
        """All correct predictions."""
        return int(self.per_class_correct.sum())

    @property
    def n_f(self) -> int:
        """Target rows of minority classes."""
        return int(self.per_class_total[self._subset(True)].sum())

    @property
    def n_m(self) -> int:
        """Target rows of majority classes."""
        return int(self.per_class_total[self._subset(False)].sum())

    @property
    def n_total(self) -> int:
        """All scored target rows."""
        return int(self.per_class_total.sum())

    @property
    def a_f(self) -> float | None:
        """Minority-set accuracy."""
        return _percent(self.correct_f, self.n_f)

    @property
    def a_m(self) -> float | None:
        """Majority-set accuracy."""
        return _percent(self.correct_m, self.n_m)

    @property
    def a_o(self) -> float | None:
        """Overall accuracy."""
        if self.class_wise:
            accuracies = [a for a in self.per_class_accuracy() if a is not None]
            return float(np.mean(accuracies)) if accuracies else None
        return _percent(self.correct_total, self.n_total)

    def per_class_accuracy(self) -> list[float | None]:
        """Accuracy per class in percent; None for classes without target rows."""
        return [
            _percent(int(correct), int(total))
            for correct, total in zip(self.per_class_correct, self.per_class_total)
        ]
