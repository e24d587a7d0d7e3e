import numpy as np
import pytest

from attractorlab.affine import AffineMap, GeneratorSet
from attractorlab.dynamics import (DetectionParams, adaptive_sample_len,
                                   contraction_certificate, detect_attractor,
                                   detect_local_limit_point, global_check,
                                   minimality_check, orbit, orbit_reaches,
                                   verify_attractor)
from attractorlab.errors import BudgetExceeded, EmptySet


def gset(*entries):
    names = tuple(f"g{i + 1}" for i in range(len(entries)))
    return GeneratorSet(names, tuple(AffineMap(np.asarray(A, dtype=float),
                                               np.asarray(a, dtype=float))
                                     for A, a in entries))


SADDLE = gset(([[0.5, 0.0], [0.0, 2.0]], [0.0, 0.0]))
DOUBLING_1D = gset(([[2.0]], [0.0]))
TWO_CONTRACTIONS = gset(([[0.5, 0.0], [0.0, 0.5]], [0.0, 0.0]),
                        ([[0.5, 0.0], [0.0, 0.5]], [1.0, 0.0]))


def test_orbit_of_fixed_point_is_singleton():
    sample = orbit([0.0, 0.0], SADDLE, max_len=10, dedup_eps=1e-6)
    assert len(sample) == 1
    assert sample.exhausted
    assert sample.words == ((),)


def test_orbit_words_reproduce_points():
    from attractorlab.affine import apply, evaluate_word
    sample = orbit([1.0, 1.0], TWO_CONTRACTIONS, max_len=4, dedup_eps=1e-9)
    for p, w in zip(sample.points, sample.words):
        assert np.allclose(apply(evaluate_word(w, TWO_CONTRACTIONS),
                                 sample.base), p, atol=1e-9)


def test_orbit_deduplicates():
    # both generators halve distances to distinct fixed points; many words
    # collide on the dyadic lattice
    sample = orbit([0.0, 0.0], TWO_CONTRACTIONS, max_len=4, dedup_eps=1e-9)
    d = np.linalg.norm(sample.points[:, None, :] - sample.points[None, :, :],
                       axis=2)
    np.fill_diagonal(d, np.inf)
    assert d.min() >= 1e-9


def test_orbit_escape_pruning():
    sample = orbit([1.0, 1.0], SADDLE, max_len=120, dedup_eps=1e-6,
                   escape_norm=1e6)
    assert sample.escapes > 0
    assert np.linalg.norm(sample.points, axis=1).max() <= 1e6


def test_orbit_point_cap():
    with pytest.raises(BudgetExceeded):
        orbit([0.1, 0.2], TWO_CONTRACTIONS, max_len=12, dedup_eps=1e-9,
              point_cap=50)
    sample = orbit([0.1, 0.2], TWO_CONTRACTIONS, max_len=12, dedup_eps=1e-9,
                   point_cap=50, truncate_at_cap=True)
    assert len(sample) <= 50


def test_orbit_dimension_check():
    with pytest.raises(ValueError):
        orbit([1.0], SADDLE, max_len=3, dedup_eps=1e-6)


def test_orbit_is_deterministic():
    a = orbit([0.3, 0.4], TWO_CONTRACTIONS, max_len=6, dedup_eps=1e-6)
    b = orbit([0.3, 0.4], TWO_CONTRACTIONS, max_len=6, dedup_eps=1e-6)
    assert np.array_equal(a.points, b.points)
    assert a.words == b.words


def test_orbit_reaches_contracting_target():
    r = orbit_reaches(TWO_CONTRACTIONS, [5.0, 5.0], [0.0, 0.0], tol=1e-6,
                      max_len=60)
    assert r.reached
    assert r.min_distance <= 1e-6
    assert r.word_length <= 60


def test_orbit_reaches_definitive_negative():
    # the saddle orbit of (1,1) never approaches the origin
    r = orbit_reaches(SADDLE, [1.0, 1.0], [0.0, 0.0], tol=1e-3, max_len=40)
    assert not r.reached
    assert r.exhausted
    assert r.min_distance >= np.sqrt(2.0) - 1e-9


def test_certificate_found_for_contraction():
    cert = contraction_certificate(TWO_CONTRACTIONS, max_len=3)
    assert cert is not None
    assert cert.word.letters == ((0, 1),)
    assert cert.kind == "operator_norm"
    assert cert.value == pytest.approx(0.5)
    assert np.allclose(cert.fixed_point, [0.0, 0.0], atol=1e-12)


def test_certificate_absent_for_saddle():
    assert contraction_certificate(SADDLE, max_len=12) is None


def test_certificate_spectral_radius_route():
    # rotation composed with mild shear: operator norm > 1 but complex
    # eigenvalues of modulus 0.9
    th = 0.7
    R = 0.9 * np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
    S = np.array([[1.0, 0.5], [0.0, 1.0]])
    gens = gset((S @ R, [0.0, 0.0]))
    cert = contraction_certificate(gens, max_len=4)
    assert cert is not None
    assert cert.word.letters == ((0, 1),)
    assert cert.kind == "spectral_radius"
    assert cert.value == pytest.approx(0.9, abs=1e-9)


def test_certificate_shortest_then_lex():
    # neither the saddle g1 nor its inverse contracts, so the first
    # qualifying word in length-lex order is the length-1 word g2
    gens = gset(([[0.5, 0.0], [0.0, 2.0]], [0.0, 0.0]),
                ([[0.25, 0.0], [0.0, 0.25]], [0.0, 0.0]))
    cert = contraction_certificate(gens, max_len=3)
    assert cert.word.letters == ((1, 1),)


def test_local_limit_point_positive_for_global_contraction():
    ev = detect_local_limit_point(DOUBLING_1D, [0.0], radius=2.0,
                                  n_samples=12, max_len=40, delta=1e-3,
                                  seed=0)
    assert ev.verdict == "positive"
    assert ev.samples_attracted == ev.samples_tested >= 10


def test_local_limit_point_negative_for_saddle():
    ev = detect_local_limit_point(SADDLE, [0.0, 0.0], radius=2.0,
                                  n_samples=12, max_len=40, delta=1e-3,
                                  seed=0, extra_samples=[(1.0, 1.0)])
    assert ev.verdict == "negative"
    rec = ev.samples[-1]
    assert rec.point == (1.0, 1.0)
    assert not rec.attracted
    assert rec.definite


def test_local_limit_point_is_seeded():
    a = detect_local_limit_point(DOUBLING_1D, [0.0], 2.0, 8, 40, 1e-3, seed=3)
    b = detect_local_limit_point(DOUBLING_1D, [0.0], 2.0, 8, 40, 1e-3, seed=3)
    assert a == b


def test_verify_attractor_positive():
    K = np.array([[0.0]])
    ev = verify_attractor(K, DOUBLING_1D, neighborhood_radius=5.0,
                          n_samples=10, max_len=40, eps=0.05, seed=0)
    assert ev.all_attracted
    assert ev.coverage_gap == 0.0
    assert all(s.min_gap <= 0.05 for s in ev.samples)


def test_verify_attractor_negative_for_saddle_fixed_point():
    # the saddle fixes the origin but generic nearby orbits never return
    K = np.array([[0.0, 0.0]])
    ev = verify_attractor(K, SADDLE, neighborhood_radius=2.0, n_samples=8,
                          max_len=40, eps=0.05, seed=0)
    assert not ev.all_attracted


def test_verify_attractor_rejects_empty():
    with pytest.raises(EmptySet):
        verify_attractor(np.zeros((0, 1)), DOUBLING_1D, 1.0, 4, 10, 0.05, 0)


def test_minimality_negative_for_disconnected_candidate():
    # a single contraction fixing the origin: the orbit of (0,0) never
    # approaches (1,0), so {(0,0), (1,0)} is not minimal
    gens = gset(([[0.5, 0.0], [0.0, 0.5]], [0.0, 0.0]))
    K = np.array([[0.0, 0.0], [1.0, 0.0]])
    ev = minimality_check(K, gens, eps=0.05, max_len=40)
    assert not ev.minimal
    bad = [r for r in ev.results if not r.covered]
    assert bad and bad[0].worst_gap > 0.05


def test_minimality_positive_for_fixed_point():
    ev = minimality_check(np.array([[0.0]]), DOUBLING_1D, eps=0.05,
                          max_len=40)
    assert ev.minimal


def test_global_check_domain_shape():
    with pytest.raises(ValueError):
        global_check(np.array([[0.0]]), DOUBLING_1D, [[0, 1], [0, 1]], 4,
                     0.05, 20, 0)


def test_global_check_positive():
    ev = global_check(np.array([[0.0]]), DOUBLING_1D, [[-10.0, 10.0]],
                      n_samples=10, eps=0.05, max_len=40, seed=0)
    assert ev.all_attracted


def test_adaptive_sample_len():
    assert adaptive_sample_len(1, 100, 60) == 49     # 2L+1 <= 100
    assert adaptive_sample_len(2, 200_000, 60) == 10
    assert adaptive_sample_len(3, 200_000, 60) == 7
    assert adaptive_sample_len(2, 200_000, 5) == 5   # capped by max_len


def test_detect_attractor_fixed_point_model():
    report = detect_attractor(DOUBLING_1D, DetectionParams(
        domain_box=((-10.0, 10.0),), neighborhood_radius=10.0))
    assert report is not None
    assert report.subspace.dim == 0
    assert report.minimal and report.is_global
    assert report.certificate.word.letters == ((0, -1),)
    assert len(report.points) == 1


def test_detect_attractor_none_for_saddle():
    report = detect_attractor(SADDLE, DetectionParams(cert_max_len=6,
                                                      orbit_max_len=40))
    assert report is None


def test_detect_attractor_line_model():
    report = detect_attractor(TWO_CONTRACTIONS, DetectionParams(
        net_window=((-2.0, 0.0), (0.0, 0.0)),
        domain_box=((-5.0, 5.0), (-5.0, 5.0))))
    assert report is not None
    assert report.subspace.dim == 1
    assert abs(report.subspace.basis[0][1]) < 1e-9   # the line is y = 0
    assert report.minimal and report.is_global


def test_detect_attractor_deterministic():
    a = detect_attractor(DOUBLING_1D, DetectionParams(seed=5))
    b = detect_attractor(DOUBLING_1D, DetectionParams(seed=5))
    assert np.array_equal(a.points, b.points)
    assert a.basin.samples == b.basin.samples
    assert a.minimal == b.minimal and a.is_global == b.is_global
