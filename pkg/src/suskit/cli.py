"""Command-line front end: score, analyze, enumerate, simulate, serve."""

from __future__ import annotations

import dataclasses
import json
import os
import sys
from pathlib import Path

import click

from .bayes import PriorSpec
from .csvio import CsvValidationError, InputFile, ingest_csv
from .decision import builtin_scales, load_scales, select_interval
from .distributions import TruncatedNormalParams
from .intervals import SCORE_BOUNDS, BootstrapConfig, Method
from .plots import svg_interval_over_scales, svg_posterior_marginal, svg_score_frequency
from .report import build_payload
from .scoring import feasible_mean_counts, study_summary, sus_score
from . import simulation as sim

CONFIG_ENV_VAR = "SUSKIT_CONFIG"

EXIT_VALIDATION = 1

METHOD_CHOICES = ["auto", "t", "adjusted-t", "percentile", "bca", "expanded-bca", "bayes"]


def _defaults_from_env() -> dict:
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise click.ClickException(f"cannot read config {path}: {err}")
    if not isinstance(cfg, dict):
        raise click.ClickException(f"config {path} must hold a JSON object")
    return cfg


class _ValidationFailure(click.ClickException):
    exit_code = EXIT_VALIDATION


def _fail(message: str, as_json: bool, **details):
    if as_json:
        click.echo(json.dumps({"error": {"message": message, **details}}))
        sys.exit(EXIT_VALIDATION)
    raise _ValidationFailure(message)


@click.group()
@click.version_option(package_name="suskit")
def main():
    """Score SUS studies and report defensible small-sample uncertainty."""


def _scores_from_input(data: InputFile, clamp: bool) -> list[float]:
    if data.mode == "scores":
        return list(data.scores)
    return [sus_score(sheet, clamp=clamp) for sheet in data.sheets]


def _echo_text_report(payload: dict, scale_name: str):
    study = payload["study"]
    sd = "n/a" if study["sd"] is None else f"{study['sd']:.4g}"
    skew = "n/a" if study["skewness"] is None else f"{study['skewness']:.4g}"
    click.echo(f"n={study['n']}  mean={study['mean']:.4g}  sd={sd}  skewness={skew}")
    click.echo(f"decision rule: {payload['plan']['rule_fired']}  "
               f"recommended: {', '.join(payload['plan']['recommended'])}")
    click.echo("")
    click.echo(f"{'method':<14} {'interval':<24} {'width':<10} flags")
    for entry in payload["intervals"]:
        marks = []
        if entry["selected"]:
            marks.append("selected")
        if entry["recommended"]:
            marks.append("recommended")
        diag = entry["diagnostics"]
        if diag["violates_lower"] or diag["violates_upper"]:
            marks.append("violates [0,100]")
        span = f"({entry['lower']:.2f}, {entry['upper']:.2f})"
        click.echo(f"{entry['method']:<14} {span:<24} {diag['width']:<10.3f} {', '.join(marks)}")
    click.echo("")
    kind = payload["interval_kind"]
    span = payload["labels"].get(scale_name)
    if span is not None:
        if span["kind"] == "bands":
            labels = ", ".join(span["bands_touched"])
            click.echo(f"selected {kind} interval on the {scale_name} scale: {labels}")
        else:
            click.echo(
                f"selected {kind} interval spans percentiles "
                f"{span['lower_percentile']:.1f} to {span['upper_percentile']:.1f}"
            )
    for warning in payload["warnings"]:
        click.echo(f"warning: {warning}")


def _write_plots(payload: dict, plot_dir: str):
    out = Path(plot_dir)
    out.mkdir(parents=True, exist_ok=True)
    plots = payload["plots"]
    jobs = [
        ("score_frequency", plots["score_frequency"], svg_score_frequency),
        ("interval_bands", plots["interval_bands"], svg_interval_over_scales),
    ]
    if plots["posterior_marginal"] is not None:
        selected = next(e for e in payload["intervals"] if e["selected"])
        interval = {"lower": selected["lower"], "upper": selected["upper"]}
        jobs.append(("posterior_marginal", plots["posterior_marginal"],
                     lambda s: svg_posterior_marginal(s, interval)))
    for name, series, render in jobs:
        (out / f"{name}.json").write_text(json.dumps(series, indent=2) + "\n", encoding="utf-8")
        (out / f"{name}.svg").write_text(render(series) + "\n", encoding="utf-8")


@main.command()
@click.argument("file", type=click.Path())
@click.option("--level", type=float, default=None, help="Confidence/credibility level (default 0.95).")
@click.option("--method", type=click.Choice(METHOD_CHOICES), default="auto", show_default=True)
@click.option("--scale", "scale_name", default=None, help="Label scale highlighted in text output.")
@click.option("--scales-file", type=click.Path(), default=None,
              help="JSON file overriding the built-in label scales.")
@click.option("--bootstrap-samples", type=int, default=None, help="Bootstrap resample count (default 10000).")
@click.option("--seed", type=int, default=None, help="Seed for resampling (default 0).")
@click.option("--prior-mean", type=float, default=None, help="Historical prior mean (default 70).")
@click.option("--prior-sd", type=float, default=None, help="Historical prior sd (default 12).")
@click.option("--sigma-upper", type=float, default=None, help="Upper bound of the sd prior (default 30).")
@click.option("--mu-steps", type=int, default=None, help="Posterior grid steps for the mean (default 1001).")
@click.option("--sigma-steps", type=int, default=None, help="Posterior grid steps for the sd (default 600).")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
@click.option("--mode", type=click.Choice(["auto", "responses", "scores"]), default="auto", show_default=True,
              help="Input interpretation; auto infers from the column count.")
@click.option("--columns", default=None, help="Comma-separated item order of the CSV columns, e.g. Q2,Q1,...")
@click.option("--omitted-item", type=int, default=None, help="Omitted question for headerless 9-column files.")
@click.option("--clamp-nine-item", is_flag=True, help="Clamp nine-item scores at 100 (raw max is 100.08).")
@click.option("--plot", "plot_dir", type=click.Path(), default=None,
              help="Directory for plot JSON + SVG exports.")
def analyze(file, level, method, scale_name, scales_file, bootstrap_samples, seed,
            prior_mean, prior_sd, sigma_upper, mu_steps, sigma_steps, fmt, mode,
            columns, omitted_item, clamp_nine_item, plot_dir):
    """Apply the sample-size decision rules to FILE and report intervals."""
    as_json = fmt == "json"
    env = _defaults_from_env()
    level = level if level is not None else float(env.get("level", 0.95))
    bootstrap_samples = bootstrap_samples if bootstrap_samples is not None \
        else int(env.get("bootstrap_samples", 10_000))
    seed = seed if seed is not None else int(env.get("seed", 0))
    prior_mean = prior_mean if prior_mean is not None else float(env.get("prior_mean", 70.0))
    prior_sd = prior_sd if prior_sd is not None else float(env.get("prior_sd", 12.0))
    sigma_upper = sigma_upper if sigma_upper is not None else float(env.get("sigma_upper", 30.0))
    mu_steps = mu_steps if mu_steps is not None else int(env.get("mu_steps", 1001))
    sigma_steps = sigma_steps if sigma_steps is not None else int(env.get("sigma_steps", 600))
    scale_name = scale_name or env.get("scale", "acceptability")

    try:
        data = ingest_csv(file, mode=mode, columns=columns.split(",") if columns else None,
                          omitted_item=omitted_item)
        scores = _scores_from_input(data, clamp_nine_item)
        study = study_summary(scores)
        scales = load_scales(scales_file) if scales_file else builtin_scales()
        if not any(s.name == scale_name for s in scales):
            raise CsvValidationError(
                f"unknown scale {scale_name!r}; available: {', '.join(s.name for s in scales)}"
            )
        prior = PriorSpec(TruncatedNormalParams(prior_mean, prior_sd, *SCORE_BOUNDS), sigma_upper)
        cfg = BootstrapConfig(bootstrap_samples, seed)
        result = select_interval(study, level, cfg, prior, scales,
                                 mu_steps=mu_steps, sigma_steps=sigma_steps)
        reported = None if method == "auto" else Method(method)
        payload = build_payload(result, seed, level, scales, reported_method=reported)
    except (CsvValidationError, ValueError) as err:
        _fail(str(err), as_json,
              **({"row": err.row, "column": err.column} if isinstance(err, CsvValidationError) else {}))
        return

    if plot_dir:
        _write_plots(payload, plot_dir)
    if as_json:
        click.echo(json.dumps(payload))
    else:
        _echo_text_report(payload, scale_name)


@main.command()
@click.argument("file", type=click.Path())
@click.option("--mode", type=click.Choice(["auto", "responses", "scores"]), default="auto", show_default=True)
@click.option("--columns", default=None)
@click.option("--omitted-item", type=int, default=None)
@click.option("--clamp-nine-item", is_flag=True)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def score(file, mode, columns, omitted_item, clamp_nine_item, fmt):
    """Score FILE and print per-respondent SUS scores plus the study summary."""
    as_json = fmt == "json"
    try:
        data = ingest_csv(file, mode=mode, columns=columns.split(",") if columns else None,
                          omitted_item=omitted_item)
        scores = _scores_from_input(data, clamp_nine_item)
        study = study_summary(scores)
    except (CsvValidationError, ValueError) as err:
        _fail(str(err), as_json)
        return
    if as_json:
        click.echo(json.dumps({
            "scores": [float(s) for s in scores],
            "n": study.n,
            "mean": study.mean,
            "sd": study.sd,
            "skewness": study.skewness,
        }))
        return
    for i, value in enumerate(scores, start=1):
        click.echo(f"respondent {i}: {value:g}")
    sd = "n/a" if study.sd is None else f"{study.sd:.4g}"
    skew = "n/a" if study.skewness is None else f"{study.skewness:.4g}"
    click.echo(f"n={study.n}  mean={study.mean:.4g}  sd={sd}  skewness={skew}")


@main.command("enumerate")
@click.option("--n", "n", type=int, required=True, help="Number of respondents.")
def enumerate_cmd(n):
    """Count score combinations and distinct feasible means for n respondents."""
    try:
        counts = feasible_mean_counts(n)
    except ValueError as err:
        raise _ValidationFailure(str(err))
    click.echo(f"combinations={counts.combinations} distinct_means={counts.distinct_means}")


def _cell_rows(results) -> list[dict]:
    rows = []
    for cell in results:
        for method, stats in (("t", cell.t), ("expanded-bca", cell.expanded_bca)):
            rows.append({
                "n": cell.n, "skew": cell.skew, "method": method,
                "true_mean": cell.true_mean,
                "coverage": stats.coverage, "coverage_se": stats.coverage_se,
                "mean_width": stats.mean_width,
                "violation_rate": stats.violation_rate, "violation_se": stats.violation_se,
                "width_ratio_bca_over_t": cell.width_ratio_bca_over_t,
            })
    return rows


def _write_csv(path: Path, rows: list[dict]):
    import csv as _csv

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = _csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


@main.command()
@click.argument("config", type=click.Path())
@click.option("--out", "out_dir", type=click.Path(), default="simulation-out", show_default=True)
def simulate(config, out_dir):
    """Run the experiment described by the CONFIG JSON file.

    The config holds an "experiment" key (coverage | rule3 | upper_bound |
    sample_mean) plus SimConfig fields; see the README for the schema.
    """
    try:
        with open(config, encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as err:
        raise _ValidationFailure(f"cannot read config {config}: {err}")
    if not isinstance(raw, dict) or "experiment" not in raw:
        raise _ValidationFailure('config must be a JSON object with an "experiment" key')
    kind = raw.pop("experiment")
    extras = {k: raw.pop(k) for k in ("threshold", "n", "skew", "bins") if k in raw}
    try:
        cfg = sim.SimConfig.from_dict(raw)
    except (TypeError, ValueError) as err:
        raise _ValidationFailure(f"bad simulation config: {err}")

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary: dict = {"experiment": kind, "config": cfg.to_dict(), **extras}
    try:
        if kind == "coverage":
            results = sim.run_coverage_experiment(cfg)
            _write_csv(out / "cells.csv", _cell_rows(results))
            ratios = [c.width_ratio_bca_over_t for c in results]
            summary["cells"] = len(results)
            summary["max_bca_violation_rate"] = max(c.expanded_bca.violation_rate for c in results)
            summary["mean_width_ratio"] = sum(ratios) / len(ratios)
        elif kind == "rule3":
            r = sim.run_rule3_validation(cfg)
            _write_csv(out / "cells.csv", [dataclasses.asdict(c) for c in r.cells])
            summary.update(min_coverage=r.min_coverage, mean_coverage=r.mean_coverage,
                           max_coverage=r.max_coverage)
        elif kind == "upper_bound":
            r = sim.run_upper_bound_experiment(cfg, threshold=float(extras.get("threshold", 70.0)))
            _write_csv(out / "cells.csv", [dataclasses.asdict(c) for c in r.cells])
            summary.update(threshold=r.threshold, t_contains=r.t_contains,
                           bca_contains=r.bca_contains,
                           bca_fewer_errors_fraction=r.bca_fewer_errors_fraction)
        elif kind == "sample_mean":
            r = sim.sample_mean_distribution(cfg, n=int(extras.get("n", 5)),
                                             skew=float(extras.get("skew", cfg.skew_grid[0])),
                                             bins=int(extras.get("bins", 120)))
            summary.update(skewness_of_means=r.skewness_of_means, mean_of_means=r.mean_of_means)
            summary["histogram"] = {"bin_edges": [float(e) for e in r.bin_edges],
                                    "density": [float(d) for d in r.density]}
        else:
            raise _ValidationFailure(f"unknown experiment {kind!r}")
    except ValueError as err:
        raise _ValidationFailure(str(err))
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    click.echo(f"wrote {out / 'summary.json'}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--ui-dir", type=click.Path(), default=None,
              help="Directory with the built web UI to serve at /.")
def serve(host, port, ui_dir):
    """Start the HTTP JSON API (and the web UI when a bundle is available)."""
    import uvicorn

    if ui_dir:
        os.environ["SUSKIT_UI_DIR"] = ui_dir
    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
