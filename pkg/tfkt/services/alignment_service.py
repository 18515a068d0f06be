""" This module contains the cross-domain prototype alignment. """

# pylint: disable=too-few-public-methods

from dataclasses import replace
from logging import getLogger

import numpy as np

from tfkt.exceptions.alignment_exceptions import NoCommonlyDefinedClass
from tfkt.exceptions.general_exceptions import DimensionMismatch
from tfkt.exceptions.network_exceptions import UndefinedCosine
from tfkt.models.alignment import NOT_ASSIGNED, AlignmentTerms, PseudoLabels
from tfkt.models.augmented_sample import PROVENANCE_CODES, Provenance
from tfkt.models.network_state import PrototypeTable
from tfkt.services.network_service import PrototypeClassifier

logger = getLogger(__name__)


class AlignmentService:
    """Wraps the prototype and alignment operations."""
    @staticmethod
    def pseudo_label(features: np.ndarray, prototypes: PrototypeTable, temperature: float,
                     threshold: float = 0.0) -> PseudoLabels:
        """Argmax of C_P per target row; rows below the threshold stay unassigned."""
        return PrototypeAlignment.pseudo_label(features, prototypes, temperature, threshold)

    @staticmethod
    def contribution_mask(labels, provenance, minority_classes) -> np.ndarray:
        """Rows averaged into the amended prototypes."""
        return PrototypeAlignment.contribution_mask(labels, provenance, minority_classes)

    @staticmethod
    def amended_prototypes(features, labels, provenance, class_count: int,
                           minority_classes) -> PrototypeTable:
        """Minority classes average every provenance, majority classes their real rows."""
        mask = PrototypeAlignment.contribution_mask(labels, provenance, minority_classes)
        table = PrototypeAlignment.class_means(features, labels, mask, class_count)
        return PrototypeTable(table.vectors, table.counts, amended=True)

    @staticmethod
    def target_prototypes(features, pseudo_labels: PseudoLabels, class_count: int):
        """Means of the target features per pseudo-label."""
        return PrototypeAlignment.class_means(
            features, pseudo_labels.classes, pseudo_labels.assigned, class_count
        )

    @staticmethod
    def class_mmd(source: PrototypeTable, target: PrototypeTable):
        """(M_c, dM_c/d source vectors, dM_c/d target vectors)."""
        return PrototypeAlignment.class_mmd(source, target)

    @staticmethod
    def interclass_divergence(source: PrototypeTable, target: PrototypeTable):
        """(M_d, gradients); M_d is None below two commonly defined classes."""
        return PrototypeAlignment.interclass_divergence(source, target)

    @staticmethod
    def alignment_terms(source: PrototypeTable, target: PrototypeTable, use_intra: bool = True,
                        use_inter: bool = True, unit_sphere: bool = False) -> AlignmentTerms:
        """
        Both terms with the gradient of (M_c - M_d) restricted to the enabled terms.

        With unit_sphere the terms compare the unit-length prototype directions, so
        M_c and M_d lie in [0, 4]; gradients are still taken w.r.t. the raw means.
        """
        if unit_sphere:
            return PrototypeAlignment.unit_alignment_terms(source, target, use_intra, use_inter)
        return PrototypeAlignment.alignment_terms(source, target, use_intra, use_inter)

    @staticmethod
    def feature_gradient(prototype_grad: np.ndarray, labels, mask, counts) -> np.ndarray:
        """Chain a gradient w.r.t. class means down to the rows averaged into them."""
        return PrototypeAlignment.feature_gradient(prototype_grad, labels, mask, counts)


class PrototypeAlignment:
    """Class means, pseudo-labels and the M_c / M_d terms."""
    @staticmethod
    def pseudo_label(features, prototypes, temperature, threshold=0.0) -> PseudoLabels:
        features = np.atleast_2d(np.asarray(features, dtype=np.float64))
        probabilities = PrototypeClassifier.predict(prototypes, features, temperature)
        classes = probabilities.argmax(axis=1).astype(np.int64)
        confidence = probabilities.max(axis=1)
        if threshold > 0.0:
            classes = np.where(confidence >= threshold, classes, NOT_ASSIGNED)
        return PseudoLabels(classes, confidence)

    @staticmethod
    def contribution_mask(labels, provenance, minority_classes) -> np.ndarray:
        labels = np.asarray(labels, dtype=np.int64)
        minority = np.isin(labels, np.asarray(tuple(minority_classes), dtype=np.int64))
        real = np.asarray(provenance) == PROVENANCE_CODES[Provenance.REAL]
        return minority | real

    @staticmethod
    def class_means(features, labels, mask, class_count: int) -> PrototypeTable:
        """Undefined classes keep a zero vector and a zero count."""
        features = np.atleast_2d(np.asarray(features, dtype=np.float64))
        labels = np.asarray(labels, dtype=np.int64)
        mask = np.asarray(mask, dtype=bool)
        vectors = np.zeros((class_count, features.shape[1]))
        counts = np.zeros(class_count, dtype=np.int64)
        for class_id in range(class_count):
            rows = mask & (labels == class_id)
            counts[class_id] = int(rows.sum())
            if counts[class_id]:
                vectors[class_id] = features[rows].mean(axis=0)
        undefined = np.flatnonzero(counts == 0)
        if undefined.size:
            logger.info("Prototype undefined for classes %s", undefined.tolist())
        return PrototypeTable(vectors, counts)

    @staticmethod
    def _common(source: PrototypeTable, target: PrototypeTable) -> np.ndarray:
        if source.vectors.shape != target.vectors.shape:
            raise DimensionMismatch("prototype tables differ in shape")
        return np.flatnonzero(source.defined & target.defined)

    @staticmethod
    def class_mmd(source: PrototypeTable, target: PrototypeTable):
        active = PrototypeAlignment._common(source, target)
        if active.size == 0:
            raise NoCommonlyDefinedClass()
        difference = source.vectors[active] - target.vectors[active]
        value = float(np.sum(difference * difference) / active.size)
        grad_source = np.zeros_like(source.vectors)
        grad_source[active] = 2.0 * difference / active.size
        return value, grad_source, -grad_source

    @staticmethod
    def interclass_divergence(source: PrototypeTable, target: PrototypeTable):
        active = PrototypeAlignment._common(source, target)
        grad_source = np.zeros_like(source.vectors)
        grad_target = np.zeros_like(target.vectors)
        count = active.size
        if count < 2:
            return None, grad_source, grad_target
        means_source = source.vectors[active]
        means_target = target.vectors[active]
        pairs = means_source[:, None, :] - means_target[None, :, :]
        squared = np.sum(pairs * pairs, axis=2)
        scale = 1.0 / (count * (count - 1))
        value = float((squared.sum() - np.trace(squared)) * scale)
        total_source = means_source.sum(axis=0)
        total_target = means_target.sum(axis=0)
        grad_source[active] = 2.0 * scale * (
            (count - 1) * means_source - (total_target - means_target)
        )
        grad_target[active] = 2.0 * scale * (
            (count - 1) * means_target - (total_source - means_source)
        )
        return value, grad_source, grad_target

    @staticmethod
    def alignment_terms(source, target, use_intra=True, use_inter=True) -> AlignmentTerms:
        active = PrototypeAlignment._common(source, target)
        skipped = tuple(int(c) for c in np.flatnonzero(~(source.defined & target.defined)))
        if skipped:
            logger.info("Alignment skips classes %s without both prototypes", list(skipped))
        grad_source = np.zeros_like(source.vectors)
        grad_target = np.zeros_like(target.vectors)

        m_c, m_c_present = 0.0, False
        try:
            m_c, mmd_source, mmd_target = PrototypeAlignment.class_mmd(source, target)
            m_c_present = True
            if use_intra:
                grad_source += mmd_source
                grad_target += mmd_target
        except NoCommonlyDefinedClass:
            logger.warning("No class is defined in both domains; dropping M_c")

        m_d, divergence_source, divergence_target = PrototypeAlignment.interclass_divergence(
            source, target
        )
        m_d_present = m_d is not None
        if not m_d_present:
            logger.warning("Fewer than two commonly defined classes; M_d treated as 0")
            m_d = 0.0
        elif use_inter:
            grad_source -= divergence_source
            grad_target -= divergence_target

        return AlignmentTerms(
            m_c, m_d, tuple(int(c) for c in active), skipped, m_c_present, m_d_present,
            grad_source, grad_target,
        )

    @staticmethod
    def unit_alignment_terms(source, target, use_intra=True, use_inter=True) -> AlignmentTerms:
        source_unit, source_norms = PrototypeAlignment._unit_table(source)
        target_unit, target_norms = PrototypeAlignment._unit_table(target)
        terms = PrototypeAlignment.alignment_terms(source_unit, target_unit, use_intra, use_inter)
        return replace(
            terms,
            grad_source=PrototypeAlignment._through_norm(
                terms.grad_source, source_unit.vectors, source_norms
            ),
            grad_target=PrototypeAlignment._through_norm(
                terms.grad_target, target_unit.vectors, target_norms
            ),
        )

    @staticmethod
    def _unit_table(table: PrototypeTable):
        norms = np.ones(table.class_count)
        defined = table.defined
        norms[defined] = np.linalg.norm(table.vectors[defined], axis=1)
        if np.any(norms[defined] == 0.0):
            raise UndefinedCosine("a defined prototype has zero norm")
        unit = np.where(defined[:, None], table.vectors / norms[:, None], 0.0)
        return PrototypeTable(unit, table.counts, table.amended), norms

    @staticmethod
    def _through_norm(grad: np.ndarray, unit: np.ndarray, norms: np.ndarray) -> np.ndarray:
        """d/dmu of a function of mu / |mu|, given its gradient w.r.t. the unit vector."""
        radial = np.sum(unit * grad, axis=1, keepdims=True)
        return (grad - radial * unit) / norms[:, None]

    @staticmethod
    def feature_gradient(prototype_grad, labels, mask, counts) -> np.ndarray:
        """Row i of the result is prototype_grad[y_i] / count[y_i] for rows in mask, else 0."""
        labels = np.asarray(labels, dtype=np.int64)
        mask = np.asarray(mask, dtype=bool)
        result = np.zeros((labels.shape[0], prototype_grad.shape[1]))
        rows = np.flatnonzero(mask)
        if rows.size:
            classes = labels[rows]
            result[rows] = prototype_grad[classes] / counts[classes][:, None]
        return result
