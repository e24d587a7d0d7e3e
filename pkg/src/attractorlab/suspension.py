"""Suspension foliations over surface and free-group bases.

A suspension is modeled symbolically: a presentation of the base's
fundamental group, an affine representation of it, and the transversal
dimension.  All computable content lives in the transversal dynamics of
the represented group (the global holonomy group); leaves are classified
by orbit behavior, and group-level attractor reports lift verbatim with
their minimal/global flags.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .affine import AffineMap, GeneratorSet, evaluate_word
from .dynamics import AttractorReport, orbit
from .errors import (BudgetExceeded, DimensionMismatch, MismatchedGroup,
                     RelatorViolated)
from .words import Word

RELATOR_TOL = 1e-9

LEAF_PERIODIC = "periodic"
LEAF_CLOSED_DISCRETE = "closed_discrete"
LEAF_ACCUMULATING = "accumulating"


@dataclass(frozen=True, eq=False)
class Presentation:
    """Finite presentation <generators | relators> of the base group."""

    names: tuple[str, ...]
    relators: tuple[Word, ...]

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        for rel in self.relators:
            if len(rel) == 0:
                raise ValueError("relators must be nonempty reduced words")
            for idx, _ in rel:
                if not 0 <= idx < len(names):
                    raise ValueError(f"relator letter index {idx} out of range")
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "relators", tuple(self.relators))

    @property
    def rank(self) -> int:
        return len(self.names)


def surface_presentation(m: int) -> Presentation:
    """Genus-m orientable surface group: generators a0,b0,...,a_{m-1},b_{m-1}
    with the single product-of-commutators relator; m = 0 is trivial."""
    if m < 0:
        raise ValueError("genus must be >= 0")
    names = []
    for j in range(m):
        names.extend((f"a{j}", f"b{j}"))
    if m == 0:
        return Presentation((), ())
    letters = []
    for j in range(m):
        a, b = 2 * j, 2 * j + 1
        letters.extend([(a, 1), (b, 1), (a, -1), (b, -1)])
    return Presentation(tuple(names), (Word(tuple(letters)),))


def free_presentation(rank: int) -> Presentation:
    """Free group of the given rank, generators g1..g_rank, no relators."""
    if rank < 1:
        raise ValueError("free rank must be >= 1")
    return Presentation(tuple(f"g{i + 1}" for i in range(rank)), ())


@dataclass(frozen=True, eq=False)
class Representation:
    """An affine representation of a presentation; relators must map to the
    identity within RELATOR_TOL."""

    presentation: Presentation
    assignment: tuple[AffineMap, ...]    # one map per presentation generator

    @property
    def dim(self) -> int:
        return self.assignment[0].dim

    def as_generator_set(self) -> GeneratorSet:
        return GeneratorSet(self.presentation.names, self.assignment)

    def holonomy_group(self) -> GeneratorSet:
        """Global holonomy group: the image of the representation, with
        identity and duplicate generators dropped (same generated group)."""
        names, maps = [], []
        seen: list[AffineMap] = []
        for name, m in zip(self.presentation.names, self.assignment):
            if m.is_identity(1e-12):
                continue
            if any(np.array_equal(m.linear, s.linear)
                   and np.array_equal(m.translation, s.translation)
                   for s in seen):
                continue
            seen.append(m)
            names.append(name)
            maps.append(m)
        if not self.assignment:
            raise ValueError("representation has no generators")
        if not maps:
            # the trivial representation still acts; keep one identity map
            return GeneratorSet((self.presentation.names[0],),
                                (self.assignment[0],))
        return GeneratorSet(tuple(names), tuple(maps))


def relator_residual(rel: Word, maps: tuple[AffineMap, ...],
                     names: tuple[str, ...]) -> float:
    gens = GeneratorSet(names, maps)
    image = evaluate_word(rel, gens)
    q = image.dim
    return float(max(np.abs(image.linear - np.eye(q)).max(),
                     np.abs(image.translation).max()))


def build_representation(p: Presentation,
                         assignment: Mapping[str, AffineMap]) -> Representation:
    """Validate and build a representation from a name -> map table."""
    missing = [n for n in p.names if n not in assignment]
    if missing:
        raise ValueError(f"assignment missing generators: {missing}")
    maps = tuple(assignment[n] for n in p.names)
    dims = {m.dim for m in maps}
    if len(dims) > 1:
        raise DimensionMismatch(f"assignment maps have mixed dims {sorted(dims)}")
    for rel in p.relators:
        residual = relator_residual(rel, maps, p.names)
        if residual > RELATOR_TOL:
            raise RelatorViolated(rel.render(p.names), residual)
    return Representation(p, maps)


@dataclass(frozen=True, eq=False)
class BaseDescriptor:
    kind: str          # "surface" or "free"
    size: int          # genus m, or free rank

    def __post_init__(self):
        if self.kind not in ("surface", "free"):
            raise ValueError(f"unknown base kind {self.kind!r}")

    def label(self) -> str:
        if self.kind == "surface":
            return f"S^2_{self.size}"
        return f"#_{self.size}(S^1 x S^2)" if self.size > 1 else "S^1"


@dataclass(frozen=True, eq=False)
class SuspendedFoliation:
    """A suspension foliation record: base descriptor plus the representation
    whose image is the global holonomy group on the transversal R^q."""

    representation: Representation
    base: BaseDescriptor
    transversal_dim: int
    codimension: int

    def holonomy_group(self) -> GeneratorSet:
        return self.representation.holonomy_group()


def suspend(rep: Representation, base: BaseDescriptor) -> SuspendedFoliation:
    """Build the suspension record; the base must match the presentation."""
    p = rep.presentation
    if base.kind == "surface":
        if p.rank != 2 * base.size or len(p.relators) != (1 if base.size else 0):
            raise ValueError(
                f"surface base of genus {base.size} needs {2 * base.size} "
                f"generators and one relator, presentation has {p.rank} "
                f"generators and {len(p.relators)} relators")
    else:
        if p.rank != base.size or p.relators:
            raise ValueError(
                f"free base of rank {base.size} needs {base.size} generators "
                f"and no relators")
    q = rep.dim
    return SuspendedFoliation(rep, base, transversal_dim=q, codimension=q)


@dataclass(frozen=True, eq=False)
class LeafClass:
    tag: str
    orbit_size: Optional[int] = None           # periodic leaves only
    non_proper: Optional[bool] = None          # accumulating leaves only
    witnesses: tuple[tuple[float, ...], ...] = ()
    inconclusive: bool = False


def _accumulation_witnesses(points: np.ndarray, radius: float,
                            max_witnesses: int = 64) -> list[np.ndarray]:
    """Points near which >= 3 other orbit points cluster.

    Grid-bucketed so large orbit samples stay linear; stops after
    ``max_witnesses`` hits since any single witness settles the class.
    """
    dim = points.shape[1]
    buckets: dict[tuple, list[int]] = {}
    cells = np.floor(points / radius).astype(np.int64)
    for i, c in enumerate(map(tuple, cells.tolist())):
        buckets.setdefault(c, []).append(i)
    offsets = list(itertools.product((-1, 0, 1), repeat=dim))
    out = []
    for i, s in enumerate(points):
        base = tuple(cells[i].tolist())
        near = 0
        for off in offsets:
            idx = buckets.get(tuple(b + o for b, o in zip(base, off)))
            if not idx:
                continue
            d = np.linalg.norm(points[idx] - s, axis=1)
            near += int(((d > 0) & (d <= radius)).sum())
            if near >= 3:
                break
        if near >= 3:
            out.append(s)
            if len(out) >= max_witnesses:
                break
    return out


def classify_leaf(fol: SuspendedFoliation, t, max_len: int = 30,
                  dedup_eps: float = 1e-4) -> LeafClass:
    """Classify the leaf through transversal point t by the orbit behavior
    of t under the global holonomy group.

    Periodic: the orbit is finite (within dedup_eps).  ClosedDiscrete: the
    orbit is infinite with pairwise separation and no accumulation witness
    within budget.  Accumulating: otherwise; the non-proper marker is set
    when t itself is approached by distinct orbit points.
    """
    t = np.asarray(t, dtype=np.float64).reshape(-1)
    if t.shape[0] != fol.transversal_dim:
        raise DimensionMismatch(
            f"point dim {t.shape[0]} != transversal dim {fol.transversal_dim}")
    gens = fol.holonomy_group()
    truncated = False
    try:
        sample = orbit(t, gens, max_len=max_len, dedup_eps=dedup_eps,
                       point_cap=200_000)
    except BudgetExceeded:
        sample = orbit(t, gens, max_len=max_len, dedup_eps=dedup_eps,
                       point_cap=200_000, truncate_at_cap=True)
        truncated = True

    radius = dedup_eps * 10
    witnesses = _accumulation_witnesses(sample.points, radius)
    finite = sample.exhausted and sample.escapes == 0 and not truncated

    if finite and not witnesses:
        return LeafClass(LEAF_PERIODIC, orbit_size=len(sample))
    if witnesses:
        d_to_t = np.linalg.norm(sample.points - t, axis=1)
        non_proper = int(((d_to_t > 0) & (d_to_t <= radius)).sum()) >= 3
        return LeafClass(LEAF_ACCUMULATING, non_proper=non_proper,
                         witnesses=tuple(tuple(w.tolist())
                                         for w in witnesses[:16]),
                         inconclusive=truncated)
    return LeafClass(LEAF_CLOSED_DISCRETE, inconclusive=truncated)


@dataclass(frozen=True, eq=False)
class FoliationAttractor:
    """A group attractor lifted to the suspension: the saturation of the
    transversal set, carrying the same minimal/global verdicts."""

    transversal: AttractorReport
    base: BaseDescriptor
    codimension: int
    minimal: bool
    is_global: bool


def lift_attractor(fol: SuspendedFoliation,
                   report: AttractorReport) -> FoliationAttractor:
    """Wrap a group-level attractor report as a foliation attractor.

    The report must have been produced from this foliation's global
    holonomy group; minimal/global flags transfer unchanged.
    """
    expected = fol.holonomy_group().fingerprint()
    if report.generator_fingerprint != expected:
        raise MismatchedGroup(
            "report was computed from a different generator set than this "
            "foliation's global holonomy group")
    return FoliationAttractor(transversal=report, base=fol.base,
                              codimension=fol.codimension,
                              minimal=report.minimal,
                              is_global=report.is_global)
