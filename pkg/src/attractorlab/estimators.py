"""Scikit-learn style facade over the detection engine.

``AttractorDetector`` is fit on a stack of affine generators and then
predicts, for arbitrary transversal points, whether their orbits are
attracted to the detected set.  ``LeafClassifier`` labels points by the
leaf class of the suspended foliation through them.  Both follow the
sklearn estimator contract (get_params/set_params/clone-compatible,
fitted attributes with trailing underscores).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .affine import AffineMap, GeneratorSet
from .dynamics import (DetectionParams, detect_attractor, orbit_reaches)
from .suspension import SuspendedFoliation, classify_leaf


def as_generator_set(X) -> GeneratorSet:
    """Coerce input to a GeneratorSet.

    Accepts a GeneratorSet, a list of AffineMap, or an array of shape
    (m, q, q+1) whose blocks are [A | a].
    """
    if isinstance(X, GeneratorSet):
        return X
    if isinstance(X, (list, tuple)) and X and isinstance(X[0], AffineMap):
        return GeneratorSet(tuple(f"g{i + 1}" for i in range(len(X))),
                            tuple(X))
    arr = check_array(X, allow_nd=True, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != arr.shape[1] + 1:
        raise ValueError(
            "expected generators of shape (m, q, q+1) with [A | a] blocks, "
            f"got {arr.shape}")
    maps = tuple(AffineMap(block[:, :-1], block[:, -1]) for block in arr)
    return GeneratorSet(tuple(f"g{i + 1}" for i in range(len(maps))), maps)


class AttractorDetector(TransformerMixin, BaseEstimator):
    """Detect an attractor of the group generated by the fitted maps.

    Parameters mirror DetectionParams.  After ``fit``:

    - ``has_attractor_``: whether detection produced a verified report
    - ``report_``: the full AttractorReport (or None)
    - ``attractor_points_``: the sampled attractor cloud

    ``predict(P)`` returns a boolean array: does each point's orbit reach
    the attractor within ``eps`` at the word budget.  ``transform(P)``
    returns the achieved distance as a single feature column.
    """

    def __init__(self, dedup_eps=1e-4, tol_cert=1e-6, eps=0.05,
                 cert_max_len=12, orbit_max_len=60, n_basin_samples=20,
                 neighborhood_radius=1.0, domain_box=None, net_window=None,
                 seed=0):
        self.dedup_eps = dedup_eps
        self.tol_cert = tol_cert
        self.eps = eps
        self.cert_max_len = cert_max_len
        self.orbit_max_len = orbit_max_len
        self.n_basin_samples = n_basin_samples
        self.neighborhood_radius = neighborhood_radius
        self.domain_box = domain_box
        self.net_window = net_window
        self.seed = seed

    def _params(self) -> DetectionParams:
        return DetectionParams(
            dedup_eps=self.dedup_eps, tol_cert=self.tol_cert, eps=self.eps,
            cert_max_len=self.cert_max_len, orbit_max_len=self.orbit_max_len,
            n_basin_samples=self.n_basin_samples,
            neighborhood_radius=self.neighborhood_radius,
            domain_box=self.domain_box, net_window=self.net_window,
            seed=self.seed)

    def fit(self, X, y=None):
        gens = as_generator_set(X)
        self.generators_ = gens
        self.n_features_in_ = gens.dim
        self.report_ = detect_attractor(gens, self._params())
        self.has_attractor_ = self.report_ is not None
        if self.report_ is not None:
            self.attractor_points_ = self.report_.points
            self.certificate_ = self.report_.certificate
        else:
            self.attractor_points_ = None
            self.certificate_ = None
        return self

    def _reach_distances(self, P: np.ndarray) -> np.ndarray:
        report = self.report_
        if report is None:
            return np.full(len(P), np.inf)
        if report.certificate is not None:
            target = report.certificate.fixed_point
        else:
            target = report.points[0]
        out = np.empty(len(P))
        for i, p in enumerate(P):
            r = orbit_reaches(self.generators_, p, target, tol=self.eps,
                              max_len=self.orbit_max_len)
            out[i] = r.min_distance
        return out

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "report_")
        P = check_array(X, dtype=np.float64)
        if P.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, "
                             f"got {P.shape[1]}")
        return self._reach_distances(P) <= self.eps

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "report_")
        P = check_array(X, dtype=np.float64)
        if P.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, "
                             f"got {P.shape[1]}")
        return self._reach_distances(P).reshape(-1, 1)


class LeafClassifier(BaseEstimator):
    """Classify leaves of a suspended foliation by transversal point."""

    def __init__(self, max_len=30, dedup_eps=1e-4):
        self.max_len = max_len
        self.dedup_eps = dedup_eps

    def fit(self, X, y=None):
        if not isinstance(X, SuspendedFoliation):
            raise TypeError("LeafClassifier.fit expects a SuspendedFoliation")
        self.foliation_ = X
        self.n_features_in_ = X.transversal_dim
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "foliation_")
        P = check_array(X, dtype=np.float64)
        tags = [classify_leaf(self.foliation_, p, max_len=self.max_len,
                              dedup_eps=self.dedup_eps).tag
                for p in P]
        return np.array(tags, dtype=object)
