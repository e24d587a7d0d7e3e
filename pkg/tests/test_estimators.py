import numpy as np
import pytest
from sklearn.base import clone

from attractorlab.affine import AffineMap, GeneratorSet
from attractorlab.estimators import (AttractorDetector, LeafClassifier,
                                     as_generator_set)
from attractorlab.suspension import (BaseDescriptor, build_representation,
                                     free_presentation, suspend)

HALVING_STACK = np.array([
    [[0.5, 0.0, 0.0], [0.0, 0.5, 0.0]],       # [A | a] with a = 0
    [[0.5, 0.0, 1.0], [0.0, 0.5, 0.0]],       # a = (1, 0)
])


def test_as_generator_set_accepts_stack():
    gens = as_generator_set(HALVING_STACK)
    assert gens.rank == 2 and gens.dim == 2
    assert np.allclose(gens.maps[1].translation, [1.0, 0.0])


def test_as_generator_set_accepts_maps_and_passthrough():
    maps = [AffineMap(0.5 * np.eye(2), np.zeros(2))]
    gens = as_generator_set(maps)
    assert gens.names == ("g1",)
    assert as_generator_set(gens) is gens


def test_as_generator_set_rejects_bad_shape():
    with pytest.raises(ValueError):
        as_generator_set(np.zeros((2, 2, 2)))


def test_detector_sklearn_contract():
    det = AttractorDetector(eps=0.1, seed=3)
    params = det.get_params()
    assert params["eps"] == 0.1 and params["seed"] == 3
    cloned = clone(det)
    assert cloned.get_params() == params
    det.set_params(eps=0.2)
    assert det.eps == 0.2


def test_detector_fit_predict_transform():
    det = AttractorDetector(net_window=((-2.0, 0.0), (0.0, 0.0)),
                            domain_box=((-5.0, 5.0), (-5.0, 5.0)))
    det.fit(HALVING_STACK)
    assert det.has_attractor_
    assert det.n_features_in_ == 2
    assert det.report_.subspace.dim == 1
    pred = det.predict([[3.0, 3.0], [-1.0, 2.0]])
    assert pred.dtype == bool
    assert pred.all()    # everything contracts onto the axis
    dist = det.transform([[3.0, 3.0]])
    assert dist.shape == (1, 1)
    assert dist[0, 0] <= det.eps


def test_detector_predict_requires_fit():
    det = AttractorDetector()
    with pytest.raises(Exception):
        det.predict([[0.0, 0.0]])


def test_detector_negative_model():
    saddle = np.array([[[0.5, 0.0, 0.0], [0.0, 2.0, 0.0]]])
    det = AttractorDetector(cert_max_len=6).fit(saddle)
    assert not det.has_attractor_
    assert det.attractor_points_ is None
    assert not det.predict([[1.0, 1.0]]).any()
    assert np.isinf(det.transform([[1.0, 1.0]])[0, 0])


def test_detector_feature_count_check():
    det = AttractorDetector().fit(HALVING_STACK)
    with pytest.raises(ValueError):
        det.predict([[1.0, 2.0, 3.0]])


def test_leaf_classifier():
    p = free_presentation(1)
    saddle = AffineMap(np.diag([0.5, 2.0]), np.zeros(2))
    fol = suspend(build_representation(p, {"g1": saddle}),
                  BaseDescriptor("free", 1))
    clf = LeafClassifier(max_len=20)
    assert clone(clf).get_params() == clf.get_params()
    clf.fit(fol)
    tags = clf.predict([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0]])
    assert list(tags) == ["periodic", "closed_discrete", "accumulating"]
    with pytest.raises(TypeError):
        LeafClassifier().fit([[1.0, 0.0]])
