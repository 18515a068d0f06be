import numpy as np
import pytest

from tfkt.exceptions.alignment_exceptions import NoCommonlyDefinedClass
from tfkt.exceptions.network_exceptions import UndefinedCosine
from tfkt.models.alignment import NOT_ASSIGNED, PseudoLabels
from tfkt.models.augmented_sample import PROVENANCE_CODES, Provenance
from tfkt.models.network_state import PrototypeTable
from tfkt.services.alignment_service import AlignmentService


def _table(vectors, counts=None):
    vectors = np.asarray(vectors, dtype=np.float64)
    counts = np.ones(vectors.shape[0], dtype=np.int64) if counts is None else np.asarray(counts)
    return PrototypeTable(vectors, counts)


def test_class_mmd_of_one_class():
    value, grad_source, grad_target = AlignmentService.class_mmd(
        _table([[0.0, 0.0]]), _table([[3.0, 4.0]])
    )
    assert value == pytest.approx(25.0)
    assert np.allclose(grad_source, [[-6.0, -8.0]])
    assert np.allclose(grad_target, -grad_source)


def test_interclass_divergence_of_two_classes():
    prototypes = [[0.0, 0.0], [1.0, 0.0]]
    value, _, _ = AlignmentService.interclass_divergence(_table(prototypes), _table(prototypes))
    assert value == pytest.approx(1.0)


def test_divergence_needs_two_classes():
    value, grad_source, _ = AlignmentService.interclass_divergence(
        _table([[1.0], [2.0]], [1, 0]), _table([[1.0], [2.0]], [1, 1])
    )
    assert value is None
    assert not np.any(grad_source)


def test_terms_skip_classes_missing_on_either_side():
    source = _table([[0.0, 0.0], [1.0, 0.0], [5.0, 5.0]])
    target = _table([[0.0, 1.0], [1.0, 1.0], [0.0, 0.0]], [2, 3, 0])
    terms = AlignmentService.alignment_terms(source, target)
    assert terms.active_classes == (0, 1)
    assert terms.skipped_classes == (2,)
    assert terms.m_c == pytest.approx(1.0)
    assert terms.active_class_pairs == ((0, 1), (1, 0))
    assert not np.any(terms.grad_source[2])


def test_terms_without_common_classes_are_absent():
    terms = AlignmentService.alignment_terms(_table([[1.0], [2.0]], [1, 0]),
                                             _table([[1.0], [2.0]], [0, 1]))
    assert not terms.m_c_present
    assert not terms.m_d_present
    assert terms.m_c == 0.0 and terms.m_d == 0.0
    with pytest.raises(NoCommonlyDefinedClass):
        AlignmentService.class_mmd(_table([[1.0], [2.0]], [1, 0]),
                                   _table([[1.0], [2.0]], [0, 1]))


def test_amended_prototypes_use_every_minority_provenance():
    labels = np.array([2] * 8 + [0] * 5)
    provenance = np.array(
        [PROVENANCE_CODES[p] for p in
         [Provenance.REAL] * 2 + [Provenance.EP_SOURCE] * 2 + [Provenance.KP_CROSS] * 2
         + [Provenance.MIX] * 2 + [Provenance.REAL] * 3 + [Provenance.MIX] * 2]
    )
    features = np.arange(13, dtype=np.float64)[:, None]
    table = AlignmentService.amended_prototypes(features, labels, provenance, 3, (2,))
    assert table.amended
    assert table.counts.tolist() == [3, 0, 8]
    assert table.vectors[2, 0] == pytest.approx(3.5)
    assert table.vectors[0, 0] == pytest.approx(9.0)


def test_pseudo_labels_respect_the_threshold():
    prototypes = _table([[1.0, 0.0], [0.0, 1.0]])
    features = np.array([[1.0, 0.05], [1.0, 1.0]])
    labels = AlignmentService.pseudo_label(features, prototypes, 10.0, threshold=0.9)
    assert labels.classes.tolist() == [0, NOT_ASSIGNED]
    assert labels.assigned.tolist() == [True, False]
    target = AlignmentService.target_prototypes(features, labels, 2)
    assert target.counts.tolist() == [1, 0]


def _objective(weight, source_features, source_labels, target_features, target_labels,
               unit_sphere=False):
    real = np.full(source_labels.shape[0], PROVENANCE_CODES[Provenance.REAL])
    source = AlignmentService.amended_prototypes(source_features, source_labels, real, 3, ())
    pseudo = PseudoLabels(target_labels, np.ones(target_labels.shape[0]))
    target = AlignmentService.target_prototypes(target_features, pseudo, 3)
    terms = AlignmentService.alignment_terms(source, target, unit_sphere=unit_sphere)
    return weight * (terms.m_c - terms.m_d), source, target, terms


@pytest.mark.parametrize("unit_sphere", [False, True])
def test_alignment_gradient_matches_finite_differences(rng, unit_sphere):
    weight = 0.7
    source_features = rng.standard_normal((9, 3))
    source_labels = np.array([0, 0, 0, 1, 1, 1, 2, 2, 2])
    target_features = rng.standard_normal((7, 3))
    target_labels = np.array([0, 0, 1, 1, 1, 2, 2])
    _, source, target, terms = _objective(weight, source_features, source_labels,
                                          target_features, target_labels, unit_sphere)
    analytic_source = weight * AlignmentService.feature_gradient(
        terms.grad_source, source_labels, np.ones(9, dtype=bool), source.counts
    )
    analytic_target = weight * AlignmentService.feature_gradient(
        terms.grad_target, target_labels, np.ones(7, dtype=bool), target.counts
    )
    step = 1e-5
    for features, analytic in ((source_features, analytic_source),
                               (target_features, analytic_target)):
        numeric = np.zeros_like(features)
        for index in np.ndindex(*features.shape):
            original = features[index]
            features[index] = original + step
            upper = _objective(weight, source_features, source_labels, target_features,
                               target_labels, unit_sphere)[0]
            features[index] = original - step
            lower = _objective(weight, source_features, source_labels, target_features,
                               target_labels, unit_sphere)[0]
            features[index] = original
            numeric[index] = (upper - lower) / (2 * step)
        assert np.allclose(analytic, numeric, rtol=1e-4, atol=1e-7)


def _unit(vectors):
    vectors = np.asarray(vectors, dtype=np.float64)
    return vectors / np.linalg.norm(vectors, axis=1, keepdims=True)


def test_unit_sphere_terms_compare_directions(rng):
    source = rng.standard_normal((3, 4)) * 1000.0
    target = rng.standard_normal((3, 4))
    terms = AlignmentService.alignment_terms(_table(source), _table(target), unit_sphere=True)
    direct = AlignmentService.alignment_terms(_table(_unit(source)), _table(_unit(target)))
    assert terms.m_c == pytest.approx(direct.m_c)
    assert terms.m_d == pytest.approx(direct.m_d)
    assert 0.0 <= terms.m_c <= 4.0 and 0.0 <= terms.m_d <= 4.0
    rescaled = AlignmentService.alignment_terms(_table(7.0 * source), _table(target),
                                                unit_sphere=True)
    assert rescaled.m_d == pytest.approx(terms.m_d)


def test_unit_sphere_gradient_is_tangent_to_each_prototype(rng):
    source = rng.standard_normal((3, 4))
    terms = AlignmentService.alignment_terms(_table(source), _table(rng.standard_normal((3, 4))),
                                             unit_sphere=True)
    assert np.allclose(np.sum(terms.grad_source * source, axis=1), 0.0, atol=1e-12)


def test_unit_sphere_skips_undefined_and_rejects_zero_prototypes():
    source = _table([[1.0, 0.0], [0.0, 0.0]], [1, 0])
    target = _table([[0.0, 2.0], [1.0, 1.0]])
    terms = AlignmentService.alignment_terms(source, target, unit_sphere=True)
    assert terms.m_c == pytest.approx(2.0)
    assert terms.skipped_classes == (1,)
    with pytest.raises(UndefinedCosine):
        AlignmentService.alignment_terms(_table([[0.0, 0.0], [1.0, 0.0]]), target,
                                         unit_sphere=True)
