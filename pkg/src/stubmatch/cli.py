"""Command-line surface: sampling, matching, analysis, experiments, drawing.

Exit codes: 0 success, 2 usage error (bad flags), 3 runtime failure.
Every file write is atomic (temp file + rename), so failed runs leave no
partial outputs. A JSON config file (--config) can supply any flag by its
long name; explicit flags win.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import os
import tempfile

import click
import numpy as np
from click.core import ParameterSource

from . import analysis, montecarlo
from .degrees import MarkedConfig, assign_directions, parse_degree_spec
from .drawing import arc_diagram
from .matching import (
    Matching,
    core_match,
    iterated_stable_match,
    opposite_stub_match,
    random_direction_match,
    seed_group_match,
    stable_multimatch,
)
from .pointsets import (
    PointConfig,
    Topology,
    gen_perturbed_lattice,
    load_points,
    points_text,
    sample_poisson_interval,
    sample_uniform_cycle,
)
from .validation import as_generator

SCHEMES = {
    "stable": stable_multimatch,
    "random_direction": random_direction_match,
    "core": core_match,
    "iterated": iterated_stable_match,
    "opposite_stub": opposite_stub_match,
    "seed_group": seed_group_match,
}


class _Failure(click.ClickException):
    exit_code = 3


def _runtime_errors(f):
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except click.ClickException:
            raise
        except (ValueError, RuntimeError, OSError, KeyError) as exc:
            raise _Failure(str(exc)) from exc

    return wrapper


def _apply_config(ctx: click.Context, kwargs: dict) -> dict:
    """Fill flag values from the --config JSON; explicit flags win."""
    path = kwargs.pop("config_path", None)
    if not path:
        return kwargs
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise _Failure(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise _Failure(f"config {path} must contain a JSON object")
    for key, value in data.items():
        name = key.replace("-", "_")
        if name not in kwargs:
            raise click.UsageError(f"unknown config key {key!r} for this command")
        if ctx.get_parameter_source(name) == ParameterSource.DEFAULT:
            kwargs[name] = value
    return kwargs


def _write_text(path, text: str) -> None:
    path = os.fspath(path)
    directory = os.path.dirname(path) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".partial-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text: str, out) -> None:
    if out:
        _write_text(out, text)
    else:
        click.echo(text, nl=False)


def _emit_report(report, out, fmt, no_meta) -> None:
    if fmt == "csv":
        _emit(report.replica_csv(), out)
    else:
        _emit(report.to_json(include_meta=not no_meta), out)


def _jobs(value) -> int:
    return int(value) if value else (os.cpu_count() or 1)


def _config_option(f):
    return click.option(
        "--config", "config_path", type=click.Path(exists=True, dir_okay=False),
        help="JSON file supplying flags by long name; explicit flags win.",
    )(f)


def _report_options(f):
    for deco in (
        click.option("--seed", type=click.IntRange(0), default=0, show_default=True),
        click.option("--jobs", type=click.IntRange(1), default=None,
                     help="Replica worker processes [default: all cores]."),
        click.option("--out", type=click.Path(dir_okay=False, writable=True)),
        click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json",
                     show_default=True),
        click.option("--no-meta", is_flag=True, help="Omit runtime metadata (deterministic output)."),
        _config_option,
    ):
        f = deco(f)
    return f


@click.group()
@click.version_option(package_name="artifact", prog_name="stubmatch")
def main():
    """Stable stub matchings of 1-d point processes: simulate and analyze."""


# ---------------------------------------------------------------------------
# pipeline one-shots


@main.command()
@click.option("--kind", type=click.Choice(["poisson", "cycle", "lattice"]), default="poisson",
              show_default=True)
@click.option("--length", type=float, default=100.0, show_default=True,
              help="Interval length (poisson) / circumference override (cycle).")
@click.option("--n", type=click.IntRange(1), default=None, help="Point count (cycle).")
@click.option("--cells", type=click.IntRange(2), default=None, help="Lattice cells (lattice).")
@click.option("--copies", type=click.Choice(["1", "3"]), default="1", show_default=True,
              help="Points per lattice cell (lattice).")
@click.option("--seed", type=click.IntRange(0), default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True))
@_config_option
@click.pass_context
@_runtime_errors
def sample(ctx, **kwargs):
    """Sample a point configuration and write a point file."""
    p = _apply_config(ctx, kwargs)
    rng, _ = as_generator(p["seed"])
    if p["kind"] == "poisson":
        cfg = sample_poisson_interval(p["length"], rng)
    elif p["kind"] == "cycle":
        if p["n"] is None:
            raise click.UsageError("--kind cycle requires --n")
        circumference = p["length"] if ctx.get_parameter_source("length") != ParameterSource.DEFAULT else p["n"]
        cfg = sample_uniform_cycle(p["n"], circumference, rng)
    else:
        if p["cells"] is None:
            raise click.UsageError("--kind lattice requires --cells")
        cfg = gen_perturbed_lattice(p["cells"], int(p["copies"]), rng)
    _emit(points_text(cfg), p["out"])


def _edges_csv(matching: Matching, config: PointConfig) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "j", "length"])
    lengths = matching.edge_lengths(config)
    for (i, j), ell in zip(matching.edges.tolist(), lengths.tolist()):
        writer.writerow([i, j, repr(ell)])
    return buf.getvalue()


@main.command("match")
@click.option("--in", "in_path", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--degrees", default="2", show_default=True,
              help='Degree spec: "2", "e=2.1", or "2:0.9,3:0.1".')
@click.option("--scheme", type=click.Choice(sorted(SCHEMES)), default="stable", show_default=True)
@click.option("--method", type=click.Choice(["auto", "fast", "general"]), default="auto",
              show_default=True, help="Core algorithm selection (core scheme only).")
@click.option("--seed", type=click.IntRange(0), default=0, show_default=True,
              help="Drives degree/direction sampling.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True),
              help="Edge CSV destination (default: stdout).")
@click.option("--summary", "summary_path", type=click.Path(dir_okay=False, writable=True),
              help="Also write the JSON summary here (default: stdout when --out is set).")
@_config_option
@click.pass_context
@_runtime_errors
def cmd_match(ctx, **kwargs):
    """Match a point file under a scheme; write edge CSV plus a JSON summary."""
    p = _apply_config(ctx, kwargs)
    if p["in_path"] is None:
        raise click.UsageError("missing required flag --in")
    cfg = load_points(p["in_path"])
    rng, _ = as_generator(p["seed"])
    degs = parse_degree_spec(p["degrees"]).sample(rng, cfg.n)
    marked = MarkedConfig(cfg, degs)
    scheme = p["scheme"]
    if scheme == "random_direction":
        matching = random_direction_match(assign_directions(marked, rng))
    elif scheme == "core":
        matching = core_match(marked, method=p["method"])
    else:
        matching = SCHEMES[scheme](marked)
    summary = {
        "scheme": matching.scheme,
        "n": matching.n,
        "edges": matching.m,
        "leftovers": int(matching.leftover.sum()),
        "rounds": matching.rounds,
    }
    text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    _emit(_edges_csv(matching, cfg), p["out"])
    if p["summary_path"]:
        _write_text(p["summary_path"], text)
    elif p["out"]:
        click.echo(text, nl=False)


def _read_edges(path, n: int) -> np.ndarray:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0][:2] != ["i", "j"]:
        raise _Failure(f"{path}: expected an edge CSV with header i,j,length")
    try:
        edges = np.asarray([[int(r[0]), int(r[1])] for r in rows[1:] if r], dtype=np.int64)
    except (ValueError, IndexError) as exc:
        raise _Failure(f"{path}: malformed edge row ({exc})") from exc
    edges = edges.reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise _Failure(f"{path}: edge index out of range for {n} points")
    return edges


def _parse_interval(text: str):
    try:
        a, b = (float(part) for part in text.split(":"))
    except ValueError:
        raise click.UsageError(f"expected an interval like 0:100, got {text!r}") from None
    return a, b


@main.command()
@click.option("--edges", "edges_path", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--points", "points_path", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--good", "good_interval", default=None,
              help="Interval a:b for the goodness/spanning-path check.")
@click.option("--per-point", "per_point", type=click.Path(dir_okay=False, writable=True),
              help="Write per-point CSV index,pos,degree,M,X,class here.")
@click.option("--out", type=click.Path(dir_okay=False, writable=True))
@_config_option
@click.pass_context
@_runtime_errors
def analyze(ctx, **kwargs):
    """Analyze an edge CSV over its point file; emit a JSON summary."""
    p = _apply_config(ctx, kwargs)
    if p["edges_path"] is None or p["points_path"] is None:
        raise click.UsageError("analyze requires --edges and --points")
    cfg = load_points(p["points_path"])
    edges = _read_edges(p["edges_path"], cfg.n)
    deg = np.zeros(cfg.n, dtype=np.int64)
    if edges.size:
        np.add.at(deg, edges.ravel(), 1)
    matching = Matching("file", cfg.n, edges, np.zeros(cfg.n, dtype=np.int64), 0)
    summary = analysis.components(matching)
    sizes = np.sort(summary.sizes)[::-1]
    out = {
        "n": cfg.n,
        "edges": matching.m,
        "components": {
            "count": summary.n_components,
            "largest_fraction": summary.largest_fraction,
            "sizes_top": sizes[:10].tolist(),
        },
        "crossings": analysis.crossing_count(matching),
    }
    if p["good_interval"] is not None:
        interval = _parse_interval(p["good_interval"])
        out["good"] = analysis.is_good(matching, cfg, interval)
        path = analysis.spanning_path(matching, cfg, interval)
        out["spanning_path"] = None if path is None else path.tolist()
    _emit(json.dumps(out, indent=2, sort_keys=True) + "\n", p["out"])
    if p["per_point"]:
        stats_m, stats_x = analysis._incident_max_mean(matching, cfg)
        classes = analysis.classify_beaks(matching)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["index", "pos", "degree", "M", "X", "class"])
        for i in range(cfg.n):
            writer.writerow(
                [i, repr(float(cfg.positions[i])), int(deg[i]),
                 repr(float(stats_m[i])), repr(float(stats_x[i])), classes[i]]
            )
        _write_text(p["per_point"], buf.getvalue())


# ---------------------------------------------------------------------------
# experiments


@main.command()
@click.option("--length", type=float, default=13000.0, show_default=True)
@click.option("--replicas", type=click.IntRange(1), default=1000, show_default=True)
@_report_options
@click.pass_context
@_runtime_errors
def goodness(ctx, **kwargs):
    """Estimate P(window good) under the degree-2 core matching; exact test."""
    p = _apply_config(ctx, kwargs)
    report = montecarlo.run_goodness(p["length"], p["replicas"], p["seed"], jobs=_jobs(p["jobs"]))
    _emit_report(report, p["out"], p["fmt"], p["no_meta"])
    if p["out"]:
        click.echo(
            f"good {report.aggregates['good']}/{report.aggregates['replicas']}"
            f" verdict={report.verdicts['verdict']}"
        )


@main.command()
@click.option("--sizes", default="1024,16384", show_default=True,
              help="Comma-separated cycle sizes.")
@click.option("--degrees", default="2", show_default=True)
@click.option("--replicas", type=click.IntRange(1), default=10, show_default=True)
@_report_options
@click.pass_context
@_runtime_errors
def table1(ctx, **kwargs):
    """Largest-component fraction (mean +/- sd) per cycle size."""
    p = _apply_config(ctx, kwargs)
    sizes = [int(s) for s in str(p["sizes"]).split(",") if s.strip()]
    report = montecarlo.run_table1(sizes, p["degrees"], p["replicas"], p["seed"], jobs=_jobs(p["jobs"]))
    _emit_report(report, p["out"], p["fmt"], p["no_meta"])
    if p["out"]:
        for row in report.aggregates["per_size"]:
            sd = "-" if row["sd"] is None else f"{row['sd']:.3f}"
            click.echo(f"n={row['n']}: {row['mean']:.3f} +/- {sd}")


@main.command()
@click.option("--scheme", type=click.Choice(["stable", "random_direction"]), default="stable",
              show_default=True)
@click.option("--degrees", default="2", show_default=True)
@click.option("--n", type=click.IntRange(16), default=65536, show_default=True)
@click.option("--replicas", type=click.IntRange(1), default=8, show_default=True)
@click.option("--clt-replicas", type=click.IntRange(1), default=512, show_default=True)
@_report_options
@click.pass_context
@_runtime_errors
def tails(ctx, **kwargs):
    """Tail statistics over a geometric t-grid, plus the marks-level check."""
    p = _apply_config(ctx, kwargs)
    report = montecarlo.tail_suite(
        p["scheme"], p["degrees"], p["n"], p["replicas"], p["seed"],
        jobs=_jobs(p["jobs"]), clt_replicas=p["clt_replicas"],
    )
    _emit_report(report, p["out"], p["fmt"], p["no_meta"])


@main.command()
@click.option("--p0", type=float, default=0.968, show_default=True)
@click.option("--kmax", type=click.IntRange(1), default=50, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--no-meta", is_flag=True)
@_config_option
@click.pass_context
@_runtime_errors
def renorm(ctx, **kwargs):
    """Iterate the renormalization map and report the fixed-point threshold."""
    p = _apply_config(ctx, kwargs)
    result = montecarlo.renorm_iterate(p["p0"], p["kmax"])
    threshold = montecarlo.renorm_threshold()
    report = montecarlo.ExperimentReport(
        kind="renorm",
        spec={"p0": float(p["p0"]), "kmax": int(p["kmax"])},
        replicas=[{"k": k, "p": val} for k, val in enumerate(result["sequence"])],
        aggregates={
            "converged": result["converged"],
            "gap_sum": result["gap_sum"],
            "threshold": threshold,
        },
        verdicts={"p0_above_threshold": bool(p["p0"] > threshold)},
        meta={},
    )
    _emit_report(report, p["out"], p["fmt"], p["no_meta"])


@main.command()
@click.option("--x", type=float, default=500.0, show_default=True, help="Block length.")
@click.option("--replicas", type=click.IntRange(1), default=200, show_default=True)
@_report_options
@click.pass_context
@_runtime_errors
def blocks(ctx, **kwargs):
    """Check that >=8 good ninth-blocks imply a good whole window."""
    p = _apply_config(ctx, kwargs)
    report = montecarlo.block_combination_check(p["x"], p["replicas"], p["seed"], jobs=_jobs(p["jobs"]))
    _emit_report(report, p["out"], p["fmt"], p["no_meta"])
    if p["out"]:
        click.echo(f"violations: {report.aggregates['violations']}")


@main.command()
@click.option("--points", "points_path", type=click.Path(exists=True, dir_okay=False), required=False)
@click.option("--edges", "edges_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--style", type=click.Choice(["plain", "directed"]), default="plain", show_default=True)
@click.option("--width", type=click.FloatRange(100.0), default=800.0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, writable=True))
@click.option("--no-meta", is_flag=True)
@_config_option
@click.pass_context
@_runtime_errors
def draw(ctx, **kwargs):
    """Render a point file (and optional edge CSV) as an SVG arc diagram."""
    p = _apply_config(ctx, kwargs)
    if p["points_path"] is None:
        raise click.UsageError("draw requires --points")
    cfg = load_points(p["points_path"])
    matching = None
    if p["edges_path"]:
        edges = _read_edges(p["edges_path"], cfg.n)
        matching = Matching("file", cfg.n, edges, np.zeros(cfg.n, dtype=np.int64), 0)
    svg = arc_diagram(cfg, matching, width=p["width"], style=p["style"], no_meta=p["no_meta"])
    _emit(svg, p["out"])
