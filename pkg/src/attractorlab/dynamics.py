"""Orbit computation, limit points, attractor detection and certification
for finitely generated affine group actions.

Everything is deterministic: orbits are expanded in length-then-lex word
order, sampling is seeded with per-sample independent streams, and ties
are broken shortest-then-lexicographic throughout.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .affine import (GeneratorSet, apply, evaluate_word, fixed_point,
                     operator_norm, spectral_radius, word_linear_part)
from .errors import (BudgetExceeded, Degenerate, EmptySet, NoFixedPoint,
                     NonUnique)
from .words import Letter, Word, ball_size, enumerate_reduced_words  # noqa: F401
from .words import alphabet, iter_reduced_words

DEFAULT_POINT_CAP = 10**6
DEFAULT_ESCAPE_NORM = 1e9

CERT_OPERATOR_NORM = "operator_norm"
CERT_SPECTRAL_RADIUS = "spectral_radius"

VERDICT_POSITIVE = "positive"
VERDICT_NEGATIVE = "negative"
VERDICT_INCONCLUSIVE = "inconclusive"


# ---------------------------------------------------------------------------
# spatial hashing

class _SpatialHash:
    """Grid hash at cell size eps; a point is 'new' only if no stored point
    in its cell or the 3^q neighbouring cells is within eps."""

    def __init__(self, dim: int, eps: float):
        if eps <= 0:
            raise ValueError("dedup eps must be positive")
        self.eps = eps
        self.cells: dict[tuple, list[np.ndarray]] = {}
        self.offsets = list(itertools.product((-1, 0, 1), repeat=dim))

    def _cell(self, p: np.ndarray) -> tuple:
        return tuple(np.floor(p / self.eps).astype(np.int64).tolist())

    def has_near(self, p: np.ndarray) -> bool:
        base = self._cell(p)
        for off in self.offsets:
            bucket = self.cells.get(tuple(b + o for b, o in zip(base, off)))
            if bucket:
                for s in bucket:
                    if float(np.abs(s - p).max()) < self.eps * 2 and \
                            float(np.linalg.norm(s - p)) < self.eps:
                        return True
        return False

    def insert(self, p: np.ndarray) -> None:
        self.cells.setdefault(self._cell(p), []).append(p)


# ---------------------------------------------------------------------------
# orbits

@dataclass(frozen=True, eq=False)
class OrbitSample:
    """A deduplicated sample of a group orbit with word provenance."""

    base: np.ndarray
    points: np.ndarray                  # (n, q)
    words: tuple[tuple[Letter, ...], ...]
    dedup_eps: float
    max_len: int
    escapes: int
    exhausted: bool                     # frontier emptied before max_len

    def __len__(self) -> int:
        return len(self.points)


def orbit(base, gens: GeneratorSet, max_len: int, dedup_eps: float,
          point_cap: int = DEFAULT_POINT_CAP,
          escape_norm: float = DEFAULT_ESCAPE_NORM,
          truncate_at_cap: bool = False) -> OrbitSample:
    """Breadth-first closure of {base} under generators and inverses up to
    word length max_len, deduplicated by spatial hashing.

    Points with norm > escape_norm are counted as escapes and pruned from
    further expansion.  Deterministic for fixed inputs.  Hitting the point
    cap raises BudgetExceeded unless ``truncate_at_cap`` is set, in which
    case the partial sample is returned.
    """
    base = np.asarray(base, dtype=np.float64).reshape(-1)
    if base.shape[0] != gens.dim:
        raise ValueError(f"base dim {base.shape[0]} != generator dim {gens.dim}")
    if dedup_eps <= 0:
        raise ValueError("dedup_eps must be positive")

    hash_ = _SpatialHash(gens.dim, dedup_eps)
    points: list[np.ndarray] = [base]
    words: list[tuple[Letter, ...]] = [()]
    hash_.insert(base)
    escapes = 0

    letters = alphabet(gens.rank)
    letter_arrays = [(l, gens.map_for(*l).linear.T.copy(),
                      gens.map_for(*l).translation) for l in letters]

    # frontier entries reference indices into points/words
    frontier = [0]
    exhausted = False
    for _ in range(max_len):
        if not frontier:
            exhausted = True
            break
        fpts = np.array([points[i] for i in frontier])
        candidates: list[tuple[np.ndarray, tuple[Letter, ...]]] = []
        # children sorted by word key: a child word is letter-prepended, so
        # letter-major iteration over a sorted frontier keeps lex order
        for letter, AT, t in letter_arrays:
            images = fpts @ AT + t
            inv = (letter[0], -letter[1])
            for j, fi in enumerate(frontier):
                w = words[fi]
                if w and w[0] == inv:
                    continue        # would cancel; already seen earlier
                candidates.append((images[j], (letter,) + w))
        nxt: list[int] = []
        capped = False
        for p, w in candidates:
            if float(np.linalg.norm(p)) > escape_norm:
                escapes += 1
                continue
            if hash_.has_near(p):
                continue
            if len(points) >= point_cap:
                if truncate_at_cap:
                    capped = True
                    break
                raise BudgetExceeded(
                    f"orbit point cap {point_cap} exceeded at word length "
                    f"{len(w)}")
            hash_.insert(p)
            points.append(p)
            words.append(w)
            nxt.append(len(points) - 1)
        if capped:
            frontier = []
            break
        frontier = nxt
    else:
        exhausted = not frontier

    return OrbitSample(base=base, points=np.array(points),
                       words=tuple(words), dedup_eps=dedup_eps,
                       max_len=max_len, escapes=escapes, exhausted=exhausted)


# ---------------------------------------------------------------------------
# reachability (best-first orbit search toward a target)

@dataclass(frozen=True)
class ReachResult:
    reached: bool
    min_distance: float
    word_length: int        # length of the best word found
    exhausted: bool         # the whole budgeted orbit was explored
    word: tuple[Letter, ...]


def orbit_reaches(gens: GeneratorSet, start, target, tol: float,
                  max_len: int, node_cap: int = 100_000,
                  dedup_eps: float | None = None,
                  escape_norm: float = DEFAULT_ESCAPE_NORM) -> ReachResult:
    """Best-first search over the orbit of ``start`` for a point within
    ``tol`` of ``target``, using words of length <= max_len.

    ``exhausted`` is True when the deduplicated budgeted orbit was fully
    explored, so a negative answer is definitive at this budget.
    """
    start = np.asarray(start, dtype=np.float64).reshape(-1)
    target = np.asarray(target, dtype=np.float64).reshape(-1)
    if dedup_eps is None:
        dedup_eps = max(tol * 1e-2, 1e-12)
    hash_ = _SpatialHash(gens.dim, dedup_eps)
    hash_.insert(start)
    letters = alphabet(gens.rank)
    maps = [(l, gens.map_for(*l)) for l in letters]

    counter = itertools.count()
    d0 = float(np.linalg.norm(start - target))
    heap = [(d0, 0, next(counter), start, ())]
    best = d0
    best_len = 0
    best_word: tuple[Letter, ...] = ()
    popped = 0
    while heap:
        dist, length, _, p, w = heapq.heappop(heap)
        if dist < best:
            best, best_len, best_word = dist, length, w
        if dist <= tol:
            return ReachResult(True, dist, length, False, w)
        popped += 1
        if popped > node_cap:
            return ReachResult(False, best, best_len, False, best_word)
        if length >= max_len:
            continue
        for letter, m in maps:
            if w and w[0] == (letter[0], -letter[1]):
                continue
            child = apply(m, p)
            if float(np.linalg.norm(child)) > escape_norm:
                continue
            if hash_.has_near(child):
                continue
            hash_.insert(child)
            heapq.heappush(heap, (float(np.linalg.norm(child - target)),
                                  length + 1, next(counter), child,
                                  (letter,) + w))
    return ReachResult(best <= tol, best, best_len, True, best_word)


# ---------------------------------------------------------------------------
# local limit points

@dataclass(frozen=True)
class SampleRecord:
    point: tuple[float, ...]
    attracted: bool
    definite: bool          # non-attraction backed by exhaustive search
    min_distance: float
    word_length: int


@dataclass(frozen=True)
class LimitPointEvidence:
    candidate: tuple[float, ...]
    neighborhood_radius: float
    samples_tested: int
    samples_attracted: int
    approach_tolerance: float
    verdict: str
    seed: int
    samples: tuple[SampleRecord, ...]


def _sample_rng(seed: int, stream: int, index: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) & (2**63 - 1), stream, index])


def _uniform_in_ball(rng: np.random.Generator, center: np.ndarray,
                     radius: float, accept: Callable[[np.ndarray], bool],
                     max_attempts: int = 10_000) -> np.ndarray | None:
    for _ in range(max_attempts):
        y = center + rng.uniform(-radius, radius, size=center.shape)
        if float(np.linalg.norm(y - center)) <= radius and accept(y):
            return y
    return None


def detect_local_limit_point(gens: GeneratorSet, candidate, radius: float,
                             n_samples: int, max_len: int, delta: float,
                             seed: int, min_count: int = 10,
                             node_cap: int = 100_000,
                             extra_samples: Sequence | None = None
                             ) -> LimitPointEvidence:
    """Empirical test that every nearby orbit closure contains ``candidate``.

    Samples seeded points in the radius-ball around the candidate (excluding
    points within delta of the candidate's own orbit) and checks whether
    each sample's orbit enters the delta-ball of the candidate.
    """
    if not radius > delta > 0:
        raise ValueError("need radius > delta > 0")
    candidate = np.asarray(candidate, dtype=np.float64).reshape(-1)

    own = orbit(candidate, gens, max_len=min(max_len, 6),
                dedup_eps=max(delta * 1e-2, 1e-9), point_cap=20_000,
                truncate_at_cap=True)
    own_pts = own.points

    def acceptable(y: np.ndarray) -> bool:
        return float(np.linalg.norm(own_pts - y, axis=1).min()) > delta

    records: list[SampleRecord] = []
    tested = []
    for i in range(n_samples):
        rng = _sample_rng(seed, 11, i)
        y = _uniform_in_ball(rng, candidate, radius, acceptable)
        if y is not None:
            tested.append(y)
    if extra_samples is not None:
        tested.extend(np.asarray(p, dtype=np.float64).reshape(-1)
                      for p in extra_samples)

    attracted = 0
    for y in tested:
        r = orbit_reaches(gens, y, candidate, tol=delta, max_len=max_len,
                          node_cap=node_cap)
        if r.reached:
            attracted += 1
        records.append(SampleRecord(tuple(y.tolist()), r.reached,
                                    (not r.reached) and r.exhausted,
                                    r.min_distance, r.word_length))

    n = len(records)
    if n >= max(min_count, 1) and attracted == n:
        verdict = VERDICT_POSITIVE
    elif any(rec.definite for rec in records):
        verdict = VERDICT_NEGATIVE
    else:
        verdict = VERDICT_INCONCLUSIVE
    return LimitPointEvidence(tuple(candidate.tolist()), radius, n, attracted,
                              delta, verdict, seed, tuple(records))


# ---------------------------------------------------------------------------
# contraction certificates

@dataclass(frozen=True, eq=False)
class Certificate:
    """A group word whose linear part contracts, plus its fixed point.

    kind 'operator_norm': value is the norm of the word's linear part, so
    each iteration of the word contracts distances to the fixed point by
    value.  kind 'spectral_radius': some power of the word contracts.
    """

    word: Word
    kind: str
    value: float
    fixed_point: np.ndarray


def contraction_certificate(gens: GeneratorSet, max_len: int,
                            tol_cert: float = 1e-6,
                            cap: int = 10**7) -> Optional[Certificate]:
    """Shortest word (ties lexicographic) whose linear part has operator
    norm < 1 - tol_cert, or failing that spectral radius < 1 - tol_cert.

    Returns None when no word in the ball qualifies.
    """
    if max_len < 1:
        raise ValueError("max_len must be >= 1")
    threshold = 1.0 - tol_cert
    seen = 0
    for letters in iter_reduced_words(gens.rank, max_len):
        seen += 1
        if seen > cap:
            raise BudgetExceeded(f"certificate search cap {cap} exceeded")
        if not letters:
            continue
        L = word_linear_part(letters, gens)
        norm = operator_norm(L)
        if norm < threshold:
            kind, value = CERT_OPERATOR_NORM, norm
        else:
            radius = spectral_radius(L)
            if radius < threshold:
                kind, value = CERT_SPECTRAL_RADIUS, radius
            else:
                continue
        word = Word(letters)
        fp = fixed_point(evaluate_word(word, gens))
        return Certificate(word, kind, value, fp)
    return None


# ---------------------------------------------------------------------------
# geometry helpers

def hausdorff_distance(set_a, set_b) -> float:
    """Max of directed sup-min distances between two finite point sets."""
    A = np.atleast_2d(np.asarray(set_a, dtype=np.float64))
    B = np.atleast_2d(np.asarray(set_b, dtype=np.float64))
    if A.size == 0 or B.size == 0:
        raise EmptySet("hausdorff_distance requires nonempty sets")
    d = np.linalg.norm(A[:, None, :] - B[None, :, :], axis=2)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


@dataclass(frozen=True, eq=False)
class AffineSubspaceFit:
    dim: int
    base: np.ndarray
    basis: np.ndarray       # (dim, q), orthonormal rows
    residual: float


def fit_affine_subspace(points, residual_tol: float) -> AffineSubspaceFit:
    """Least-squares best affine subspace of minimal dimension whose max
    point-to-subspace distance is <= residual_tol."""
    P = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if P.shape[0] < 2:
        raise Degenerate("need at least 2 points")
    center = P.mean(axis=0)
    X = P - center
    if float(np.abs(X).max()) == 0.0:
        raise Degenerate("all points identical")
    q = P.shape[1]
    # full_matrices only when there are fewer points than coordinates,
    # so Vt always has q rows without materializing a giant U
    _, _, Vt = np.linalg.svd(X, full_matrices=X.shape[0] < q)
    for d in range(q + 1):
        if d == q:
            return AffineSubspaceFit(q, center, Vt, 0.0)
        rest = X @ Vt[d:].T
        residual = float(np.linalg.norm(rest, axis=1).max())
        if residual <= residual_tol:
            return AffineSubspaceFit(d, center, Vt[:d].copy(), residual)
    raise AssertionError("unreachable")


def epsilon_net(points: np.ndarray, eps: float) -> np.ndarray:
    """Greedy eps-net: every input point is within eps of a kept point."""
    kept: list[np.ndarray] = []
    for p in points:
        if not kept or float(
                np.linalg.norm(np.array(kept) - p, axis=1).min()) >= eps:
            kept.append(p)
    return np.array(kept)


def _min_dist(points: np.ndarray, p: np.ndarray) -> float:
    return float(np.linalg.norm(points - p, axis=1).min())


# ---------------------------------------------------------------------------
# attractor verification

@dataclass(frozen=True)
class BasinSample:
    point: tuple[float, ...]
    attracted: bool
    min_gap: float          # claimed worst gap to the attractor net
    word_length: int


@dataclass(frozen=True, eq=False)
class BasinEvidence:
    """Sampling evidence that orbits near (or across a domain) approach
    every point of an eps-net of the candidate attractor.

    The sampled region is a metric neighborhood / box, not a saturated
    invariant neighborhood; ``neighborhood_kind`` records that gap.
    """

    net: np.ndarray
    eps: float
    region: str
    neighborhood_kind: str
    coverage_gap: float
    coverage_word_norm: float
    samples: tuple[BasinSample, ...]
    all_attracted: bool
    seed: int


def _coverage_cloud(gens: GeneratorSet, p0: np.ndarray, K_words,
                    K_points: np.ndarray, eps: float, max_len: int
                    ) -> tuple[np.ndarray, list]:
    """Point cloud of the orbit of p0 with word provenance.

    When the caller supplies K with provenance (K_points are orbit points
    of p0), reuse it; otherwise compute a budgeted orbit of p0.
    """
    if K_words is not None:
        return K_points, list(K_words)
    budget = adaptive_sample_len(gens.rank, 200_000, max_len)
    sample = orbit(p0, gens, max_len=budget,
                   dedup_eps=max(eps * 1e-3, 1e-9), point_cap=300_000,
                   truncate_at_cap=True)
    return sample.points, list(sample.words)


def _coverage(cloud: np.ndarray, cloud_words, net: np.ndarray,
              gens: GeneratorSet) -> tuple[float, float, int]:
    """Gap of the reference orbit cloud against the net, plus the largest
    linear-part norm and word length among the words achieving each net
    point."""
    gap = 0.0
    max_norm = 1.0
    max_len_used = 0
    for z in net:
        d = np.linalg.norm(cloud - z, axis=1)
        j = int(d.argmin())
        gap = max(gap, float(d[j]))
        w = cloud_words[j]
        max_norm = max(max_norm, operator_norm(word_linear_part(w, gens)))
        max_len_used = max(max_len_used, len(w))
    return gap, max_norm, max_len_used


def _reach_reference(gens: GeneratorSet, y: np.ndarray, p0: np.ndarray,
                     eta: float, max_len: int,
                     certificate: Optional[Certificate]) -> ReachResult:
    """Drive y toward p0: iterate the certificate word when available
    (geometric contraction), otherwise best-first search."""
    if certificate is not None and certificate.kind == CERT_OPERATOR_NORM \
            and np.allclose(p0, certificate.fixed_point, atol=1e-9):
        m = evaluate_word(certificate.word, gens)
        step = len(certificate.word)
        x = np.asarray(y, dtype=np.float64)
        length = 0
        best = float(np.linalg.norm(x - p0))
        word: tuple[Letter, ...] = ()
        while length + step <= max_len:
            x = apply(m, x)
            length += step
            word = certificate.word.letters + word
            d = float(np.linalg.norm(x - p0))
            if d < best:
                best = d
            if d <= eta:
                return ReachResult(True, d, length, False, word)
        return ReachResult(best <= eta, best, length, False, word)
    return orbit_reaches(gens, y, p0, tol=eta, max_len=max_len)


def _basin_samples(gens: GeneratorSet, K_points: np.ndarray,
                   K_words, net: np.ndarray, eps: float, max_len: int,
                   sample_points: Iterable[np.ndarray],
                   certificate: Optional[Certificate],
                   p0: np.ndarray) -> tuple[list[BasinSample], float, float]:
    """Per-sample attraction evidence.

    A sample y is attracted when its orbit reaches within eta of the
    reference point p0; the reference orbit's coverage words w then place
    w(orbit point of y) within gap + |L_w| * eta of every net point.
    """
    cloud, cloud_words = _coverage_cloud(gens, p0, K_words, K_points, eps,
                                         max_len)
    gap, M, cov_len = _coverage(cloud, cloud_words, net, gens)
    headroom = max(eps - gap, 0.0)
    eta = max(min(0.5 * headroom / M, 0.5 * eps), 1e-9)
    out: list[BasinSample] = []
    for y in sample_points:
        if headroom <= 0.0:
            out.append(BasinSample(tuple(y.tolist()), False, gap, 0))
            continue
        r = _reach_reference(gens, y, p0, eta, max_len, certificate)
        claimed = gap + M * r.min_distance
        out.append(BasinSample(tuple(y.tolist()), r.reached and claimed <= eps,
                               claimed, r.word_length + cov_len))
    return out, gap, M


def verify_attractor(K_points, gens: GeneratorSet, neighborhood_radius: float,
                     n_samples: int, max_len: int, eps: float, seed: int,
                     certificate: Optional[Certificate] = None,
                     K_words=None, reference_point=None,
                     extra_samples: Sequence | None = None) -> BasinEvidence:
    """Basin evidence: sampled points in the radius-neighborhood of K
    (excluding its eps-thickening) must have orbits coming eps-close to
    every point of a finite eps-net of K."""
    K = np.atleast_2d(np.asarray(K_points, dtype=np.float64))
    if K.size == 0:
        raise EmptySet("candidate attractor is empty")
    net = epsilon_net(K, eps)
    if reference_point is not None:
        p0 = np.asarray(reference_point, dtype=np.float64).reshape(-1)
    else:
        p0 = certificate.fixed_point if certificate is not None else K[0]

    lo, hi = K.min(axis=0) - neighborhood_radius, K.max(axis=0) + neighborhood_radius
    center, half = (lo + hi) / 2, (hi - lo) / 2

    def acceptable(y: np.ndarray) -> bool:
        return _min_dist(K, y) > eps

    pts = []
    for i in range(n_samples):
        rng = _sample_rng(seed, 21, i)
        for _ in range(10_000):
            y = center + rng.uniform(-1, 1, size=center.shape) * half
            if _min_dist(K, y) <= neighborhood_radius and acceptable(y):
                pts.append(y)
                break
    if extra_samples is not None:
        pts.extend(np.asarray(p, dtype=np.float64).reshape(-1)
                   for p in extra_samples)

    samples, gap, M = _basin_samples(gens, K, K_words, net, eps, max_len,
                                     pts, certificate, p0)
    return BasinEvidence(net, eps, f"neighborhood(radius={neighborhood_radius})",
                         "metric", gap, M, tuple(samples),
                         all(s.attracted for s in samples), seed)


def global_check(K_points, gens: GeneratorSet, domain, n_samples: int,
                 eps: float, max_len: int, seed: int,
                 certificate: Optional[Certificate] = None,
                 K_words=None, reference_point=None) -> BasinEvidence:
    """verify_attractor semantics with samples drawn from a whole domain box."""
    K = np.atleast_2d(np.asarray(K_points, dtype=np.float64))
    if K.size == 0:
        raise EmptySet("candidate attractor is empty")
    box = np.asarray(domain, dtype=np.float64)   # (q, 2) rows [lo, hi]
    if box.shape != (gens.dim, 2):
        raise ValueError(f"domain box must have shape ({gens.dim}, 2)")
    net = epsilon_net(K, eps)
    if reference_point is not None:
        p0 = np.asarray(reference_point, dtype=np.float64).reshape(-1)
    else:
        p0 = certificate.fixed_point if certificate is not None else K[0]

    pts = []
    for i in range(n_samples):
        rng = _sample_rng(seed, 31, i)
        for _ in range(10_000):
            y = rng.uniform(box[:, 0], box[:, 1])
            if _min_dist(K, y) > eps:
                pts.append(y)
                break

    samples, gap, M = _basin_samples(gens, K, K_words, net, eps, max_len,
                                     pts, certificate, p0)
    return BasinEvidence(net, eps, f"box({box.tolist()})", "metric", gap, M,
                         tuple(samples), all(s.attracted for s in samples),
                         seed)


@dataclass(frozen=True)
class MinimalityResult:
    point: tuple[float, ...]
    covered: bool
    worst_gap: float


@dataclass(frozen=True, eq=False)
class MinimalityEvidence:
    net: np.ndarray
    eps: float
    results: tuple[MinimalityResult, ...]
    minimal: bool


def minimality_check(K_points, gens: GeneratorSet, eps: float, max_len: int,
                     certificate: Optional[Certificate] = None,
                     K_words=None, reference_point=None,
                     direct_len: int = 8) -> MinimalityEvidence:
    """Each net point's orbit must come eps-close to every other net point
    (orbit closure contains K)."""
    K = np.atleast_2d(np.asarray(K_points, dtype=np.float64))
    if K.size == 0:
        raise EmptySet("candidate attractor is empty")
    net = epsilon_net(K, eps)
    if reference_point is not None:
        p0 = np.asarray(reference_point, dtype=np.float64).reshape(-1)
    else:
        p0 = certificate.fixed_point if certificate is not None else K[0]
    cloud, cloud_words = _coverage_cloud(gens, p0, K_words, K, eps, max_len)
    gap, M, _ = _coverage(cloud, cloud_words, net, gens)
    headroom = max(eps - gap, 0.0)
    eta = max(min(0.5 * headroom / M, 0.5 * eps), 1e-9)

    results: list[MinimalityResult] = []
    for z in net:
        worst = 0.0
        covered = True
        reach = None
        if headroom > 0.0:
            reach = _reach_reference(gens, z, p0, eta, max_len, certificate)
        if reach is not None and reach.reached:
            worst = gap + M * reach.min_distance
            covered = worst <= eps
        else:
            # fall back to a direct budgeted orbit of z
            try:
                direct = orbit(z, gens, max_len=min(max_len, direct_len),
                               dedup_eps=max(eps * 1e-2, 1e-9),
                               point_cap=200_000)
                for w in net:
                    d = _min_dist(direct.points, w)
                    worst = max(worst, d)
                    if d > eps:
                        covered = False
            except BudgetExceeded:
                covered = False
                worst = math.inf
        results.append(MinimalityResult(tuple(z.tolist()), covered, worst))
    return MinimalityEvidence(net, eps, tuple(results),
                              all(r.covered for r in results))


# ---------------------------------------------------------------------------
# detection pipeline

@dataclass(frozen=True)
class DetectionParams:
    dedup_eps: float = 1e-4
    tol_cert: float = 1e-6
    eps: float = 0.05
    cert_max_len: int = 12
    orbit_max_len: int = 60
    sample_len: int | None = None       # None: adaptive from sample_word_cap
    sample_word_cap: int = 200_000
    point_cap: int = DEFAULT_POINT_CAP
    n_basin_samples: int = 20
    neighborhood_radius: float = 1.0
    domain_box: tuple | None = None     # ((lo, hi), ...) per axis
    net_window: tuple | None = None     # restrict the attractor net
    subspace_tol: float = 1e-6
    fallback_word_len: int = 3
    limit_point_radius: float = 2.0
    limit_point_delta: float = 1e-3
    seed: int = 0
    escape_norm: float = DEFAULT_ESCAPE_NORM


def adaptive_sample_len(rank: int, cap: int, max_len: int) -> int:
    length = 1
    while length < max_len and ball_size(rank, length + 1) <= cap:
        length += 1
    return length


@dataclass(frozen=True, eq=False)
class AttractorReport:
    """Candidate attractor with its evidence trail."""

    points: np.ndarray
    words: tuple[tuple[Letter, ...], ...]
    subspace: Optional[AffineSubspaceFit]
    certificate: Optional[Certificate]
    basin: BasinEvidence
    minimality: MinimalityEvidence
    global_evidence: BasinEvidence
    minimal: bool
    is_global: bool
    dedup_eps: float
    generator_fingerprint: str
    seed: int
    params: DetectionParams
    limit_point: Optional[LimitPointEvidence] = None


def _window_mask(points: np.ndarray, window) -> np.ndarray:
    box = np.asarray(window, dtype=np.float64)
    return np.all((points >= box[:, 0] - 1e-12) &
                  (points <= box[:, 1] + 1e-12), axis=1)


def _default_window(dim: int) -> np.ndarray:
    return np.array([[-2.5, 2.5]] * dim)


def _candidate_report(gens: GeneratorSet, params: DetectionParams,
                      cert: Optional[Certificate], p0: np.ndarray,
                      limit_evidence: Optional[LimitPointEvidence]
                      ) -> Optional[AttractorReport]:
    sample_len = params.sample_len or adaptive_sample_len(
        gens.rank, params.sample_word_cap, params.orbit_max_len)
    K = orbit(p0, gens, max_len=sample_len, dedup_eps=params.dedup_eps,
              point_cap=params.point_cap, escape_norm=params.escape_norm)

    window = params.net_window if params.net_window is not None \
        else _default_window(gens.dim)
    mask = _window_mask(K.points, window)
    net_source = K.points[mask] if mask.any() else K.points
    net_words = [K.words[i] for i in np.flatnonzero(mask)] if mask.any() \
        else list(K.words)

    try:
        subspace = fit_affine_subspace(K.points, params.subspace_tol)
    except Degenerate:
        subspace = AffineSubspaceFit(0, K.points[0].copy(),
                                     np.zeros((0, gens.dim)), 0.0)

    basin = verify_attractor(net_source, gens, params.neighborhood_radius,
                             params.n_basin_samples, params.orbit_max_len,
                             params.eps, params.seed, certificate=cert,
                             K_words=net_words, reference_point=p0)
    if not basin.all_attracted:
        return None
    minimality = minimality_check(net_source, gens, params.eps,
                                  params.orbit_max_len, certificate=cert,
                                  K_words=net_words, reference_point=p0)
    domain = params.domain_box if params.domain_box is not None \
        else tuple((float(lo), float(hi)) for lo, hi in _default_window(gens.dim))
    glob = global_check(net_source, gens, domain, params.n_basin_samples,
                        params.eps, params.orbit_max_len, params.seed,
                        certificate=cert, K_words=net_words,
                        reference_point=p0)
    return AttractorReport(points=K.points, words=K.words, subspace=subspace,
                           certificate=cert, basin=basin,
                           minimality=minimality, global_evidence=glob,
                           minimal=minimality.minimal,
                           is_global=glob.all_attracted,
                           dedup_eps=params.dedup_eps,
                           generator_fingerprint=gens.fingerprint(),
                           seed=params.seed, params=params,
                           limit_point=limit_evidence)


def _short_word_fixed_points(gens: GeneratorSet, max_len: int,
                             dedup_eps: float) -> list[np.ndarray]:
    found: list[np.ndarray] = []
    for letters in iter_reduced_words(gens.rank, max_len):
        if not letters:
            continue
        try:
            fp = fixed_point(evaluate_word(letters, gens))
        except (NonUnique, NoFixedPoint):
            continue
        if not any(float(np.linalg.norm(fp - p)) < dedup_eps for p in found):
            found.append(fp)
    return found


def detect_attractor(gens: GeneratorSet,
                     params: DetectionParams = DetectionParams()
                     ) -> Optional[AttractorReport]:
    """Certificate-first attractor detection.

    Pipeline: find a contraction certificate; sample the orbit closure of
    its fixed point as the candidate attractor; verify the basin, check
    minimality, check globality.  Without a certificate, fall back to a
    local-limit-point test at fixed points of short words.  Returns None
    when every candidate fails verification (this is absence of evidence,
    not a proof of nonexistence).
    """
    cert = contraction_certificate(gens, params.cert_max_len, params.tol_cert)
    if cert is not None:
        report = _candidate_report(gens, params, cert, cert.fixed_point, None)
        if report is not None:
            return report
    for candidate in _short_word_fixed_points(gens, params.fallback_word_len,
                                              params.dedup_eps):
        evidence = detect_local_limit_point(
            gens, candidate, params.limit_point_radius,
            params.n_basin_samples, params.orbit_max_len,
            params.limit_point_delta, params.seed)
        if evidence.verdict == VERDICT_POSITIVE:
            report = _candidate_report(gens, params, None, candidate, evidence)
            if report is not None:
                return report
    return None
