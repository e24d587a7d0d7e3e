"""Independent brute-force references.

These deliberately avoid the engine's spatial hashing and word machinery:
composition is reconstructed from pointwise evaluation, orbit closures are
naive cell-marking sweeps, and density is checked grid point by grid point.
They exist to mint fixtures and to cross-check the main engine, so
simplicity beats speed throughout.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .affine import AffineMap
from .errors import BudgetExceeded, DegenerateTestSet

FIXTURES_ENV = "ATTRACTORLAB_FIXTURES"


def pointwise_compose_oracle(f: AffineMap, g: AffineMap, test_points
                             ) -> tuple[np.ndarray, np.ndarray]:
    """Reconstruct the affine map x -> f(g(x)) from evaluations only.

    Solves the interpolation system [x 1] [A^T; a^T] = f(g(x)) over the
    test points, which must contain q+1 affinely independent points.
    """
    pts = np.atleast_2d(np.asarray(test_points, dtype=np.float64))
    q = f.dim
    if pts.shape[0] < q + 1 or pts.shape[1] != q:
        raise DegenerateTestSet(
            f"need at least {q + 1} points of dim {q}, got shape {pts.shape}")
    X = np.hstack([pts, np.ones((pts.shape[0], 1))])
    if np.linalg.matrix_rank(X, tol=1e-9 * max(1.0, float(np.abs(X).max()))) \
            < q + 1:
        raise DegenerateTestSet("test points are not affinely independent")
    # evaluate without using the composition law
    images = np.array([f.linear @ (g.linear @ x + g.translation)
                       + f.translation for x in pts])
    coeff, *_ = np.linalg.lstsq(X, images, rcond=None)
    A = coeff[:q].T
    a = coeff[q]
    return A, a


@dataclass(frozen=True, eq=False)
class GridClosure:
    """Cell-marking closure of an orbit inside a box."""

    box: np.ndarray             # (q, 2) rows [lo, hi]
    resolution: float
    occupied: frozenset         # cell index tuples
    representatives: np.ndarray  # one true orbit point per occupied cell
    applications: int           # generator applications consumed
    depth: int                  # BFS rounds until fixpoint
    reached_fixpoint: bool


def grid_orbit_closure(maps: list[AffineMap], seed_point, box,
                       resolution: float, budget: int = 10**6,
                       include_inverses: bool = True) -> GridClosure:
    """Naive breadth-first cell marking: apply every generator (and inverse)
    to one representative per occupied cell until fixpoint or budget."""
    if resolution <= 0:
        raise ValueError("resolution must be positive")
    box = np.asarray(box, dtype=np.float64)
    lo, hi = box[:, 0], box[:, 1]
    seed = np.asarray(seed_point, dtype=np.float64).reshape(-1)

    all_maps = list(maps)
    if include_inverses:
        for m in maps:
            B = np.linalg.inv(m.linear)
            all_maps.append(AffineMap(B, -B @ m.translation))

    def cell_of(p: np.ndarray):
        return tuple(np.floor((p - lo) / resolution + 1e-12
                              ).astype(np.int64).tolist())

    def in_box(p: np.ndarray) -> bool:
        return bool(np.all(p >= lo - 1e-12) and np.all(p <= hi + 1e-12))

    occupied: dict[tuple, np.ndarray] = {}
    if in_box(seed):
        occupied[cell_of(seed)] = seed
    frontier = list(occupied.keys())
    applications = 0
    depth = 0
    while frontier:
        nxt: list[tuple] = []
        for cell in frontier:
            rep = occupied[cell]
            for m in all_maps:
                if applications >= budget:
                    raise BudgetExceeded(
                        f"grid closure budget {budget} exhausted after "
                        f"{depth} rounds")
                applications += 1
                img = m.linear @ rep + m.translation
                if not in_box(img):
                    continue
                c = cell_of(img)
                if c not in occupied:
                    occupied[c] = img
                    nxt.append(c)
        if nxt:
            depth += 1
        frontier = nxt
    reps = (np.array(list(occupied.values()))
            if occupied else np.zeros((0, len(lo))))
    return GridClosure(box=box, resolution=resolution,
                       occupied=frozenset(occupied.keys()),
                       representatives=reps, applications=applications,
                       depth=depth, reached_fixpoint=True)


def box_cell_count(box, resolution: float) -> int:
    box = np.asarray(box, dtype=np.float64)
    counts = np.maximum(
        np.ceil((box[:, 1] - box[:, 0]) / resolution - 1e-9), 1)
    return int(np.prod(counts))


def density_check(points, box, eps: float) -> bool:
    """True iff every point of the eps-grid of the box is within eps of
    some input point."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    if pts.size == 0:
        return False
    box = np.asarray(box, dtype=np.float64)
    axes = []
    for lo, hi in box:
        n = max(int(np.floor((hi - lo) / eps + 1e-9)), 0)
        axes.append(lo + eps * np.arange(n + 1))
    grid = np.stack(np.meshgrid(*axes, indexing="ij"),
                    axis=-1).reshape(-1, len(axes))
    for chunk in np.array_split(grid, max(len(grid) // 2048, 1)):
        d = np.linalg.norm(chunk[:, None, :] - pts[None, :, :], axis=2)
        if (d.min(axis=1) > eps).any():
            return False
    return True


# ---------------------------------------------------------------------------
# fixture records

FIXTURE_SCHEMA_VERSION = 1


def fixtures_dir() -> Path:
    override = os.environ.get(FIXTURES_ENV)
    if override:
        return Path(override)
    return Path(__file__).parent / "data" / "fixtures"


def load_fixture(name: str) -> dict:
    path = fixtures_dir() / f"{name}.json"
    with open(path, "r", encoding="utf-8") as fh:
        record = json.load(fh)
    if record.get("schema_version") != FIXTURE_SCHEMA_VERSION:
        raise ValueError(f"fixture {name} has unsupported schema version "
                         f"{record.get('schema_version')}")
    return record


def save_fixture(name: str, record: dict, directory: Path | None = None) -> Path:
    directory = directory or fixtures_dir()
    directory.mkdir(parents=True, exist_ok=True)
    record = {"schema_version": FIXTURE_SCHEMA_VERSION, "name": name, **record}
    path = directory / f"{name}.json"
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(record, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
