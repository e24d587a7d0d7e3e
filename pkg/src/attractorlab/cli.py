"""Scenario-driven command-line surface.

Commands: orbit, certify, detect, classify, example, plot.  Exit codes:
0 success, 1 negative outcome (no certificate / expectation mismatch),
2 parse error, 3 budget exceeded.
"""

from __future__ import annotations

import csv
import functools
import io
import sys
import time

import click
import numpy as np

from . import dynamics, scenarios
from .errors import AttractorLabError, BudgetExceeded, ScenarioError
from .suspension import classify_leaf
from .svgplot import scatter_svg
from .words import Word

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ScenarioError as exc:
            _fail(EXIT_PARSE, str(exc))
        except BudgetExceeded as exc:
            _fail(EXIT_BUDGET, str(exc))
        except (OSError, AttractorLabError) as exc:
            _fail(EXIT_PARSE, str(exc))
    return wrapper


def _load(path: str) -> scenarios.Scenario:
    try:
        return scenarios.load_scenario(path)
    except FileNotFoundError:
        raise ScenarioError(f"scenario file not found: {path}")


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _seed(scenario: scenarios.Scenario, override: int | None) -> int:
    if override is not None:
        return int(override)
    return int(scenario.params.get("seed", 0))


scenario_option = click.option("--scenario", "scenario_path", required=True,
                               type=click.Path(), help="Scenario JSON file.")
out_option = click.option("--out", "out_path", default=None,
                          type=click.Path(), help="Output file (default stdout).")
seed_option = click.option("--seed", default=None, type=int,
                           help="Override the scenario seed.")
threads_option = click.option("--threads", default=1, type=int,
                              help="Worker threads; must not change output.")
timing_option = click.option("--timing", is_flag=True, default=False,
                             help="Include wall-clock timing in the report "
                                  "(breaks byte-determinism).")


@click.group()
def main():
    """Attractors of finitely generated affine group actions."""


@main.command("orbit")
@scenario_option
@out_option
@click.option("--base", required=True,
              help="Comma-separated base point, e.g. '1,1'.")
@click.option("--max-len", default=6, type=int, help="Word length budget.")
@click.option("--dedup-eps", default=1e-4, type=float)
@threads_option
@handle_errors
def cmd_orbit(scenario_path, out_path, base, max_len, dedup_eps, threads):
    """Dump a deduplicated orbit sample as CSV (x1..xq, word, len)."""
    scenario = _load(scenario_path)
    try:
        point = [float(v) for v in base.split(",")]
    except ValueError:
        raise ScenarioError(f"invalid base point {base!r}", key="--base")
    if len(point) != scenario.dim:
        raise ScenarioError(f"base point has dim {len(point)}, scenario dim "
                            f"is {scenario.dim}", key="--base")
    gens = scenario.holonomy_group()
    sample = dynamics.orbit(point, gens, max_len=max_len,
                            dedup_eps=dedup_eps)
    rows = sorted(
        ((p, w) for p, w in zip(sample.points, sample.words)),
        key=lambda pw: (len(pw[1]), tuple((i, 0 if s == 1 else 1)
                                          for i, s in pw[1])))
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([f"x{i + 1}" for i in range(scenario.dim)]
                    + ["word", "len"])
    for p, w in rows:
        writer.writerow([scenarios._fmt_float(float(v)) for v in p]
                        + [Word(w).render(gens.names), len(w)])
    _emit(buf.getvalue(), out_path)


@main.command("certify")
@scenario_option
@out_option
@seed_option
@threads_option
@timing_option
@handle_errors
def cmd_certify(scenario_path, out_path, seed, threads, timing):
    """Search the word ball for a contraction certificate."""
    scenario = _load(scenario_path)
    seed_val = _seed(scenario, seed)
    params = scenario.detection_params(seed_val)
    gens = scenario.holonomy_group()
    start = time.perf_counter()
    cert = dynamics.contraction_certificate(gens, params.cert_max_len,
                                            params.tol_cert)
    elapsed = time.perf_counter() - start
    report = scenarios.run_report(
        "certify", scenario, seed_val,
        certificate=scenarios.certificate_dict(cert, gens.names),
        outcome="certificate" if cert is not None else "no-certificate",
        timing_seconds=elapsed if timing else None)
    _emit(scenarios.dumps(report), out_path)
    sys.exit(EXIT_OK if cert is not None else EXIT_NEGATIVE)


@main.command("detect")
@scenario_option
@out_option
@seed_option
@threads_option
@timing_option
@handle_errors
def cmd_detect(scenario_path, out_path, seed, threads, timing):
    """Run the full attractor detection pipeline."""
    scenario = _load(scenario_path)
    seed_val = _seed(scenario, seed)
    gens = scenario.holonomy_group()
    start = time.perf_counter()
    report = dynamics.detect_attractor(gens,
                                       scenario.detection_params(seed_val))
    elapsed = time.perf_counter() - start
    doc = scenarios.run_report(
        "detect", scenario, seed_val,
        attractor=scenarios.report_dict(report, gens),
        certificate=scenarios.certificate_dict(
            report.certificate if report else None, gens.names),
        outcome=scenarios.outcome_tag(report),
        timing_seconds=elapsed if timing else None)
    _emit(scenarios.dumps(doc), out_path)


@main.command("classify")
@scenario_option
@out_option
@seed_option
@click.option("--points", "points_path", required=True, type=click.Path(),
              help="CSV of transversal points (one row per point).")
@click.option("--max-len", default=30, type=int)
@threads_option
@timing_option
@handle_errors
def cmd_classify(scenario_path, out_path, seed, points_path, max_len,
                 threads, timing):
    """Classify the leaves through the given transversal points."""
    scenario = _load(scenario_path)
    fol = scenario.foliation()
    if fol is None:
        raise ScenarioError("scenario has no suspension block",
                            key="suspension")
    seed_val = _seed(scenario, seed)
    try:
        pts = np.loadtxt(points_path, delimiter=",", ndmin=2)
    except (OSError, ValueError) as exc:
        raise ScenarioError(f"cannot read points file: {exc}", key="--points")
    start = time.perf_counter()
    table = []
    for p in pts:
        cls = classify_leaf(fol, p, max_len=max_len)
        table.append({
            "point": [float(v) for v in p],
            "class": cls.tag,
            "orbit_size": cls.orbit_size,
            "non_proper": cls.non_proper,
            "inconclusive": cls.inconclusive,
        })
    elapsed = time.perf_counter() - start
    doc = scenarios.run_report("classify", scenario, seed_val,
                               leaf_classes=table, outcome="classified",
                               timing_seconds=elapsed if timing else None)
    _emit(scenarios.dumps(doc), out_path)


@main.command("example")
@click.argument("n", type=int)
@out_option
@seed_option
@threads_option
@timing_option
@handle_errors
def cmd_example(n, out_path, seed, threads, timing):
    """Run a shipped scenario (1-4) and check its expected outcome."""
    scenario = scenarios.load_example(n)
    seed_val = _seed(scenario, seed)
    gens = scenario.holonomy_group()
    start = time.perf_counter()
    report = dynamics.detect_attractor(gens,
                                       scenario.detection_params(seed_val))
    elapsed = time.perf_counter() - start
    tag = scenarios.outcome_tag(report)
    doc = scenarios.run_report(
        "example", scenario, seed_val,
        attractor=scenarios.report_dict(report, gens),
        certificate=scenarios.certificate_dict(
            report.certificate if report else None, gens.names),
        outcome=tag,
        timing_seconds=elapsed if timing else None)
    doc["expected"] = scenario.expected
    doc["matches_expected"] = tag == scenario.expected
    _emit(scenarios.dumps(doc), out_path)
    sys.exit(EXIT_OK if tag == scenario.expected else EXIT_NEGATIVE)


@main.command("plot")
@click.argument("csv_in", type=click.Path())
@click.argument("svg_out", type=click.Path())
@threads_option
@handle_errors
def cmd_plot(csv_in, svg_out, threads):
    """Render an orbit CSV (q = 2 only) as a static SVG scatter plot."""
    try:
        with open(csv_in, "r", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None:
                points = []
            else:
                coord_cols = [h for h in header if h.startswith("x")]
                if len(coord_cols) != 2:
                    raise ScenarioError(
                        f"plot requires q = 2, CSV has {len(coord_cols)} "
                        "coordinate columns", key=csv_in)
                points = [(float(row[0]), float(row[1]))
                          for row in reader if row]
    except (OSError, ValueError) as exc:
        raise ScenarioError(f"cannot read orbit CSV: {exc}", key=csv_in)
    with open(svg_out, "w", encoding="utf-8") as fh:
        fh.write(scatter_svg(points))


if __name__ == "__main__":
    main()
