"""Regenerate the shipped scenario corpus and oracle fixtures.

Usage: python tools/make_corpus.py [--fixtures]
Scenario files land in src/attractorlab/data/, fixtures in
src/attractorlab/data/fixtures/.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from attractorlab import scenarios  # noqa: E402
from attractorlab.affine import AffineMap, commutator_h_n, compose, inverse  # noqa: E402
from attractorlab.oracle import density_check, grid_orbit_closure, save_fixture  # noqa: E402

DATA = ROOT / "src" / "attractorlab" / "data"


def example1() -> dict:
    return {
        "schema_version": 1,
        "id": "example1",
        "dim": 2,
        "generators": [
            {"name": "g1", "matrix": [[0.5, 0.0], [0.0, 2.0]],
             "translation": [0.0, 0.0]},
        ],
        "suspension": {"base": {"kind": "free", "size": 1},
                       "assignment": {"g1": "g1"}},
        "params": {
            "seed": 0,
            "cert_max_len": 12,
            "orbit_max_len": 40,
            "n_basin_samples": 20,
            "limit_point_radius": 2.0,
            "limit_point_delta": 0.001,
            "domain_box": [[-5.0, 5.0], [-5.0, 5.0]],
        },
        "expected": "no-attractor",
    }


def example2() -> dict:
    return {
        "schema_version": 1,
        "id": "example2",
        "dim": 2,
        "generators": [
            {"name": "a0", "matrix": [[0.5, 0.0], [0.0, 0.5]],
             "translation": [0.0, 0.0]},
            {"name": "a1", "matrix": [[0.5, 0.0], [0.0, 0.5]],
             "translation": [0.5, 0.0]},
            {"name": "a2", "matrix": [[0.5, 0.0], [0.0, 0.5]],
             "translation": [0.0, 0.5]},
        ],
        "suspension": {"base": {"kind": "surface", "size": 3},
                       "assignment": {"a0": "a0", "b0": "id",
                                      "a1": "a1", "b1": "id",
                                      "a2": "a2", "b2": "id"}},
        "params": {
            "seed": 0,
            "eps": 0.05,
            "orbit_max_len": 60,
            "n_basin_samples": 20,
            "neighborhood_radius": 1.0,
            "domain_box": [[-2.0, 2.0], [-2.0, 2.0]],
            "net_window": [[0.0, 1.0], [0.0, 1.0]],
        },
        "expected": "attractor-plane-global-minimal",
    }


def example3() -> dict:
    return {
        "schema_version": 1,
        "id": "example3",
        "dim": 1,
        "generators": [
            {"name": "g1", "matrix": [[2.0]], "translation": [0.0]},
        ],
        "params": {
            "seed": 0,
            "eps": 0.05,
            "orbit_max_len": 40,
            "n_basin_samples": 20,
            "neighborhood_radius": 10.0,
            "domain_box": [[-10.0, 10.0]],
        },
        "expected": "attractor-point-global-minimal",
    }


def example4() -> dict:
    return {
        "schema_version": 1,
        "id": "example4",
        "dim": 2,
        "generators": [
            {"name": "g1", "matrix": [[0.5, 0.0], [0.0, 0.5]],
             "translation": [0.0, 0.0]},
            {"name": "g2", "matrix": [[0.5, 0.0], [0.0, 0.5]],
             "translation": [1.0, 0.0]},
        ],
        "suspension": {"base": {"kind": "free", "size": 2},
                       "assignment": {"g1": "g1", "g2": "g2"}},
        "params": {
            "seed": 0,
            "eps": 0.05,
            "orbit_max_len": 60,
            "n_basin_samples": 20,
            "neighborhood_radius": 1.0,
            "domain_box": [[-5.0, 5.0], [-5.0, 5.0]],
            "net_window": [[-2.0, 0.0], [0.0, 0.0]],
        },
        "expected": "attractor-line-global-minimal",
    }


def write_scenarios() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    for build in (example1, example2, example3, example4):
        doc = build()
        scenario = scenarios.parse_scenario(scenarios.dumps(doc))
        path = DATA / f"{doc['id']}.json"
        path.write_text(scenario.serialize(), encoding="utf-8")
        print(f"wrote {path}")


def mint_example2_density() -> dict:
    maps = [
        AffineMap(np.diag([0.5, 0.5]), [0.0, 0.0]),
        AffineMap(np.diag([0.5, 0.5]), [0.5, 0.0]),
        AffineMap(np.diag([0.5, 0.5]), [0.0, 0.5]),
    ]
    box = [[0.0, 1.0], [0.0, 1.0]]
    resolution = 0.05
    # the orbit has to leave the unit square and contract back in, and one
    # representative per coarse cell loses exactly those returns, so the
    # sweep runs on a padded box at finer working resolution and occupancy
    # is projected onto the 0.05 grid of the unit square
    sweep_box = [[-1.0, 2.0], [-1.0, 2.0]]
    work_resolution = 0.025
    closure = grid_orbit_closure(maps, [0.3, 0.7], sweep_box, work_resolution,
                                 budget=2_000_000)
    reps = closure.representatives
    inside = reps[np.all((reps >= -1e-12) & (reps <= 1 + 1e-12), axis=1)]
    cells = set(map(tuple, np.floor(inside / resolution).astype(int)
                    .clip(0, 19).tolist()))
    n_cells = 20 * 20
    all_occupied = len(cells) == n_cells
    return {
        "scenario": "example2",
        "seed_point": [0.3, 0.7],
        "box": box,
        "resolution": resolution,
        "sweep_box": sweep_box,
        "work_resolution": work_resolution,
        "budget": 2_000_000,
        "applications": closure.applications,
        "depth": closure.depth,
        "n_cells": n_cells,
        "occupied": len(cells),
        "all_occupied": all_occupied,
        "engine_orbit_max_len": 8,
        "density_eps": 0.05,
    }


def mint_example4_axis_density() -> dict:
    psi1 = AffineMap(np.diag([0.5, 0.5]), [0.0, 0.0])
    psi2 = AffineMap(np.diag([0.5, 0.5]), [1.0, 0.0])
    h1 = commutator_h_n(psi1, psi2, 1)
    h2 = commutator_h_n(psi1, psi2, 2)
    h3 = commutator_h_n(psi1, psi2, 3)
    delta1 = compose(h2, inverse(h1))
    delta2 = compose(h3, inverse(h2))
    box = [[-1.9, -0.1], [0.0, 0.0]]
    sweep_box = [[-12.0, 12.0], [0.0, 0.0]]
    eps = 0.05
    # find the smallest delta-alphabet word budget that makes the orbit of
    # the origin eps-dense in the target box
    from attractorlab.affine import GeneratorSet
    from attractorlab.dynamics import orbit
    gens = GeneratorSet(("d1", "d2"), (delta1, delta2))
    budget = None
    for max_len in range(4, 40):
        sample = orbit([0.0, 0.0], gens, max_len=max_len, dedup_eps=1e-6)
        inside = sample.points[
            (sample.points[:, 0] >= -12.0) & (sample.points[:, 0] <= 12.0)]
        if density_check(inside, box, eps):
            budget = max_len
            break
    assert budget is not None, "no delta-word budget achieved density"
    closure = grid_orbit_closure([delta1, delta2], [0.0, 0.0], sweep_box,
                                 0.01, budget=2_000_000)
    reps = closure.representatives
    oracle_dense = density_check(reps, box, eps)
    return {
        "scenario": "example4",
        "delta1": [float(v) for v in delta1.translation],
        "delta2": [float(v) for v in delta2.translation],
        "box": box,
        "density_eps": eps,
        "word_budget": budget,
        "lattice_step": 1.0 / 32.0,
        "oracle_dense": bool(oracle_dense),
        "oracle_sweep_box": sweep_box,
        "oracle_resolution": 0.01,
    }


def write_fixtures() -> None:
    fixtures_dir = DATA / "fixtures"
    for name, record in (
        ("example2_density", mint_example2_density()),
        ("example4_axis_density", mint_example4_axis_density()),
    ):
        path = save_fixture(name, record, fixtures_dir)
        print(f"wrote {path}")
        print(f"  {record}")


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--fixtures", action="store_true",
                    help="also re-mint oracle fixtures")
    args = ap.parse_args()
    write_scenarios()
    if args.fixtures:
        write_fixtures()
