import json

import numpy as np
import pytest

from attractorlab.affine import AffineMap, compose
from attractorlab.errors import BudgetExceeded, DegenerateTestSet
from attractorlab.oracle import (box_cell_count, density_check, fixtures_dir,
                                 grid_orbit_closure, load_fixture,
                                 pointwise_compose_oracle, save_fixture)


def test_pointwise_compose_oracle_matches_compose():
    rng = np.random.default_rng(0)
    f = AffineMap(rng.normal(size=(2, 2)) + 2 * np.eye(2), rng.normal(size=2))
    g = AffineMap(rng.normal(size=(2, 2)) + 2 * np.eye(2), rng.normal(size=2))
    pts = rng.normal(size=(6, 2))
    A, a = pointwise_compose_oracle(f, g, pts)
    direct = compose(f, g)
    assert np.allclose(A, direct.linear, atol=1e-9)
    assert np.allclose(a, direct.translation, atol=1e-9)


def test_pointwise_compose_oracle_rejects_degenerate_points():
    f = AffineMap(np.eye(2), np.zeros(2))
    with pytest.raises(DegenerateTestSet):
        pointwise_compose_oracle(f, f, [[0.0, 0.0], [1.0, 1.0]])
    # collinear points are affinely dependent
    with pytest.raises(DegenerateTestSet):
        pointwise_compose_oracle(f, f, [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])


def test_grid_orbit_closure_contraction_pair():
    maps = [AffineMap(0.5 * np.eye(1), np.array([0.0])),
            AffineMap(0.5 * np.eye(1), np.array([0.5]))]
    c = grid_orbit_closure(maps, [0.3], [[0.0, 1.0]], 0.1, budget=100_000)
    assert len(c.occupied) == 10    # dyadics fill [0, 1]
    assert c.reached_fixpoint
    assert c.applications <= 100_000
    assert len(c.representatives) == len(c.occupied)


def test_grid_orbit_closure_budget():
    maps = [AffineMap(0.5 * np.eye(2), np.zeros(2)),
            AffineMap(0.5 * np.eye(2), np.array([0.5, 0.0])),
            AffineMap(0.5 * np.eye(2), np.array([0.0, 0.5]))]
    with pytest.raises(BudgetExceeded):
        grid_orbit_closure(maps, [0.3, 0.7], [[-1, 2], [-1, 2]], 0.01,
                           budget=500)


def test_grid_orbit_closure_seed_outside_box():
    maps = [AffineMap(0.5 * np.eye(1), np.array([0.0]))]
    c = grid_orbit_closure(maps, [50.0], [[0.0, 1.0]], 0.1)
    assert len(c.occupied) == 0


def test_box_cell_count():
    assert box_cell_count([[0.0, 1.0], [0.0, 1.0]], 0.05) == 400
    assert box_cell_count([[0.0, 1.0], [0.0, 0.0]], 0.05) == 20


def test_density_check_positive_and_negative():
    xs = np.arange(0.0, 1.0001, 0.02)
    pts = np.stack([xs, np.zeros_like(xs)], axis=1)
    assert density_check(pts, [[0.0, 1.0], [0.0, 0.0]], 0.05)
    sparse = pts[::20]
    assert not density_check(sparse, [[0.0, 1.0], [0.0, 0.0]], 0.05)
    assert not density_check(np.zeros((0, 2)), [[0.0, 1.0], [0.0, 0.0]], 0.05)
    with pytest.raises(ValueError):
        density_check(pts, [[0.0, 1.0], [0.0, 0.0]], 0.0)


def test_fixture_round_trip(tmp_path, monkeypatch):
    monkeypatch.setenv("ATTRACTORLAB_FIXTURES", str(tmp_path))
    assert fixtures_dir() == tmp_path
    save_fixture("sample", {"value": [1, 2, 3]})
    record = load_fixture("sample")
    assert record["value"] == [1, 2, 3]
    assert record["name"] == "sample"
    assert record["schema_version"] == 1


def test_fixture_rejects_unknown_schema(tmp_path, monkeypatch):
    monkeypatch.setenv("ATTRACTORLAB_FIXTURES", str(tmp_path))
    with open(tmp_path / "bad.json", "w", encoding="utf-8") as fh:
        json.dump({"schema_version": 99}, fh)
    with pytest.raises(ValueError):
        load_fixture("bad")


def test_shipped_fixtures_load(monkeypatch):
    monkeypatch.delenv("ATTRACTORLAB_FIXTURES", raising=False)
    ex2 = load_fixture("example2_density")
    assert ex2["all_occupied"] is True
    assert ex2["occupied"] == ex2["n_cells"] == 400
    ex4 = load_fixture("example4_axis_density")
    assert ex4["oracle_dense"] is True
    assert ex4["delta1"] == [-0.625, 0.0]
    assert ex4["delta2"] == [-0.40625, 0.0]
