"""
    Pseudo-labels of the target domain and the prototype alignment terms.
"""

from dataclasses import dataclass, field

import numpy as np

NOT_ASSIGNED = -1


@dataclass(frozen=True, eq=False)
class PseudoLabels:
    """Per-target-row class from the prototype classifier, with its probability."""
    classes: np.ndarray
    confidence: np.ndarray

    @property
    def assigned(self) -> np.ndarray:
        """Rows that passed the confidence threshold."""
        return self.classes != NOT_ASSIGNED


@dataclass(frozen=True, eq=False)
class AlignmentTerms:
    """
    Class-wise MMD M_c and inter-class divergence M_d with their gradients w.r.t. the
    source and target prototypes. Skipped classes are listed, never zero-filled.
    """
    m_c: float
    m_d: float
    active_classes: tuple[int, ...]
    skipped_classes: tuple[int, ...]
    m_c_present: bool
    m_d_present: bool
    grad_source: np.ndarray = field(repr=False)
    grad_target: np.ndarray = field(repr=False)

    @property
    def active_class_pairs(self) -> tuple[tuple[int, int], ...]:
        """Ordered (c, c') pairs summed in M_d."""
        if not self.m_d_present:
            return ()
        return tuple(
            (c, other) for c in self.active_classes for other in self.active_classes if c != other
        )
