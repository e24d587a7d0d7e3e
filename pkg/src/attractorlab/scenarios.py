"""Scenario files and run reports.

A scenario is a single JSON document: named affine generators, an optional
suspension block, run parameters, and an optional expected-outcome tag.
Serialization is canonical (sorted keys, 17-significant-digit floats) so
that serialize(parse(serialize(x))) is byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields
from importlib import resources
from typing import Any, Optional

import numpy as np

from .affine import AffineMap, GeneratorSet
from .dynamics import DetectionParams
from .errors import ScenarioError
from .suspension import (BaseDescriptor, Representation, SuspendedFoliation,
                         build_representation, free_presentation,
                         surface_presentation, suspend)

SCENARIO_SCHEMA_VERSION = 1
ENGINE_VERSION = "0.1.0"

EXAMPLE_IDS = (1, 2, 3, 4)


# ---------------------------------------------------------------------------
# canonical JSON

def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError("non-finite float in canonical JSON")
    if x == int(x) and abs(x) < 1e16:
        return f"{x:.1f}"
    return format(x, ".17g")


def canonical_json(obj: Any, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, fixed float formatting."""
    pad = "  " * indent
    pad_in = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = list(obj.tolist()) if isinstance(obj, np.ndarray) else list(obj)
        if not items:
            return "[]"
        inner = ",\n".join(pad_in + canonical_json(v, indent + 1)
                           for v in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        inner = ",\n".join(
            pad_in + json.dumps(str(k)) + ": " + canonical_json(obj[k],
                                                                indent + 1)
            for k in sorted(obj, key=str))
        return "{\n" + inner + "\n" + pad + "}"
    raise TypeError(f"cannot canonicalize {type(obj)!r}")


def dumps(obj: Any) -> str:
    return canonical_json(obj) + "\n"


# ---------------------------------------------------------------------------
# scenarios

@dataclass(frozen=True, eq=False)
class SuspensionSpec:
    kind: str                   # "surface" | "free"
    size: int
    assignment: dict            # presentation generator -> scenario name | "id"


@dataclass(frozen=True, eq=False)
class Scenario:
    id: str
    dim: int
    generators: GeneratorSet
    suspension: Optional[SuspensionSpec]
    params: dict
    expected: Optional[str]

    def detection_params(self, seed: int | None = None) -> DetectionParams:
        known = {f.name for f in fields(DetectionParams)}
        kwargs = {}
        for key, value in self.params.items():
            if key in known:
                if key in ("domain_box", "net_window") and value is not None:
                    value = tuple(tuple(float(v) for v in row) for row in value)
                kwargs[key] = value
        if seed is not None:
            kwargs["seed"] = int(seed)
        return DetectionParams(**kwargs)

    def foliation(self) -> Optional[SuspendedFoliation]:
        if self.suspension is None:
            return None
        spec = self.suspension
        if spec.kind == "surface":
            pres = surface_presentation(spec.size)
        else:
            pres = free_presentation(spec.size)
        table = {}
        for name in pres.names:
            ref = spec.assignment.get(name)
            if ref is None:
                raise ScenarioError(f"no assignment for presentation "
                                    f"generator {name!r}",
                                    key="suspension.assignment")
            if ref == "id":
                table[name] = AffineMap.identity(self.dim)
            else:
                try:
                    idx = self.generators.names.index(ref)
                except ValueError:
                    raise ScenarioError(
                        f"assignment references unknown generator {ref!r}",
                        key="suspension.assignment") from None
                table[name] = self.generators.maps[idx]
        rep = build_representation(pres, table)
        return suspend(rep, BaseDescriptor(spec.kind, spec.size))

    def holonomy_group(self) -> GeneratorSet:
        fol = self.foliation()
        if fol is not None:
            return fol.holonomy_group()
        return self.generators

    def to_dict(self) -> dict:
        d: dict = {
            "schema_version": SCENARIO_SCHEMA_VERSION,
            "id": self.id,
            "dim": self.dim,
            "generators": [
                {"name": n,
                 "matrix": [[float(v) for v in row] for row in m.linear],
                 "translation": [float(v) for v in m.translation]}
                for n, m in zip(self.generators.names, self.generators.maps)
            ],
            "params": self.params,
        }
        if self.suspension is not None:
            d["suspension"] = {
                "base": {"kind": self.suspension.kind,
                         "size": self.suspension.size},
                "assignment": self.suspension.assignment,
            }
        if self.expected is not None:
            d["expected"] = self.expected
        return d

    def serialize(self) -> str:
        return dumps(self.to_dict())


def _require(d: dict, key: str, types, context: str = ""):
    label = f"{context}.{key}" if context else key
    if key not in d:
        raise ScenarioError("missing required key", key=label)
    value = d[key]
    if not isinstance(value, types):
        raise ScenarioError(
            f"expected {types}, got {type(value).__name__}", key=label)
    return value


def parse_scenario(text: str) -> Scenario:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError("scenario must be a JSON object")
    version = _require(raw, "schema_version", int)
    if version != SCENARIO_SCHEMA_VERSION:
        raise ScenarioError(f"unsupported version {version}",
                            key="schema_version")
    sid = _require(raw, "id", str)
    dim = _require(raw, "dim", int)
    if dim < 1:
        raise ScenarioError("dim must be >= 1", key="dim")
    gen_entries = _require(raw, "generators", list)
    if not gen_entries:
        raise ScenarioError("at least one generator required", key="generators")
    names, maps = [], []
    for i, entry in enumerate(gen_entries):
        ctx = f"generators[{i}]"
        if not isinstance(entry, dict):
            raise ScenarioError("generator must be an object", key=ctx)
        name = _require(entry, "name", str, ctx)
        matrix = _require(entry, "matrix", list, ctx)
        translation = _require(entry, "translation", list, ctx)
        try:
            m = AffineMap(np.array(matrix, dtype=np.float64),
                          np.array(translation, dtype=np.float64))
        except Exception as exc:
            raise ScenarioError(str(exc), key=ctx) from exc
        if m.dim != dim:
            raise ScenarioError(f"generator dim {m.dim} != scenario dim {dim}",
                                key=ctx)
        names.append(name)
        maps.append(m)
    try:
        gens = GeneratorSet(tuple(names), tuple(maps))
    except Exception as exc:
        raise ScenarioError(str(exc), key="generators") from exc

    suspension = None
    if "suspension" in raw:
        s = _require(raw, "suspension", dict)
        base = _require(s, "base", dict, "suspension")
        kind = _require(base, "kind", str, "suspension.base")
        if kind not in ("surface", "free"):
            raise ScenarioError(f"unknown base kind {kind!r}",
                                key="suspension.base.kind")
        size = _require(base, "size", int, "suspension.base")
        assignment = _require(s, "assignment", dict, "suspension")
        suspension = SuspensionSpec(kind, size, dict(assignment))

    params = raw.get("params", {})
    if not isinstance(params, dict):
        raise ScenarioError("params must be an object", key="params")
    expected = raw.get("expected")
    if expected is not None and not isinstance(expected, str):
        raise ScenarioError("expected must be a string", key="expected")

    scenario = Scenario(sid, dim, gens, suspension, dict(params), expected)
    try:
        scenario.foliation()     # validate the suspension block eagerly
    except ScenarioError:
        raise
    except Exception as exc:
        raise ScenarioError(str(exc), key="suspension") from exc
    return scenario


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_scenario(fh.read())


def load_example(n: int) -> Scenario:
    if n not in EXAMPLE_IDS:
        raise ScenarioError(f"example id must be one of {EXAMPLE_IDS}")
    text = resources.files("attractorlab").joinpath(
        f"data/example{n}.json").read_text(encoding="utf-8")
    return parse_scenario(text)


# ---------------------------------------------------------------------------
# outcome tags and run reports

TAG_NO_ATTRACTOR = "no-attractor"
_SUBSPACE_NAMES = {0: "point", 1: "line", 2: "plane", 3: "space"}


def outcome_tag(report) -> str:
    """Stable outcome tag derived from a detection report (or None)."""
    if report is None:
        return TAG_NO_ATTRACTOR
    dim = report.subspace.dim if report.subspace is not None else 0
    name = _SUBSPACE_NAMES.get(dim, f"dim{dim}")
    tag = f"attractor-{name}"
    if report.is_global:
        tag += "-global"
    if report.minimal:
        tag += "-minimal"
    return tag


def certificate_dict(cert, names=None) -> Optional[dict]:
    if cert is None:
        return None
    return {
        "word": cert.word.render(names),
        "kind": cert.kind,
        "value": float(cert.value),
        "fixed_point": [float(v) for v in cert.fixed_point],
    }


def report_dict(report, gens: GeneratorSet) -> Optional[dict]:
    if report is None:
        return None
    cert = report.certificate
    d = {
        "n_points": int(len(report.points)),
        "certificate": None,
        "subspace": None,
        "minimal": bool(report.minimal),
        "global": bool(report.is_global),
        "basin": {
            "n_samples": len(report.basin.samples),
            "all_attracted": bool(report.basin.all_attracted),
            "coverage_gap": float(report.basin.coverage_gap),
            "worst_claimed_gap": max(
                (float(s.min_gap) for s in report.basin.samples), default=0.0),
        },
        "generator_fingerprint": report.generator_fingerprint,
        "dedup_eps": float(report.dedup_eps),
        "seed": int(report.seed),
    }
    if cert is not None:
        d["certificate"] = certificate_dict(cert, gens.names)
    if report.subspace is not None:
        sub = report.subspace
        d["subspace"] = {
            "dim": int(sub.dim),
            "base": [float(v) for v in sub.base],
            "basis": [[float(v) for v in row] for row in sub.basis],
            "residual": float(sub.residual),
        }
    return d


def run_report(command: str, scenario: Scenario, seed: int,
               attractor: Optional[dict] = None,
               certificate: Optional[dict] = None,
               leaf_classes: Optional[list] = None,
               outcome: Optional[str] = None,
               timing_seconds: Optional[float] = None) -> dict:
    return {
        "schema_version": 1,
        "engine_version": ENGINE_VERSION,
        "command": command,
        "scenario_id": scenario.id,
        "seed": int(seed),
        "outcome": outcome,
        "attractor": attractor,
        "certificate": certificate,
        "leaf_classes": leaf_classes,
        "timing_seconds": timing_seconds,
    }
