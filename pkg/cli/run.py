"""
Batch front end: read a run configuration, execute it and write the report.

uv run python -m cli.run --config cli/data/bound_sphere.json
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
from pydantic import ValidationError

from bounds.errors import HypothesisError
from bounds.theorem import theorem1_bound
from geometry.curvature import curvature_summary
from transverse.solve import lambda1

from .checks import iter_checks
from .report import render_csv, render_report, write_text
from .types import RunConfig

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_HYPOTHESIS = 2
EXIT_NUMERICAL = 3


def load_config(path: str) -> RunConfig:
    with open(path, 'r', encoding='utf-8') as f:
        return RunConfig.model_validate_json(f.read())


def _progress(verbose: bool, message: str) -> None:
    if verbose:
        print(message, file=sys.stderr)


def _sweep_rows(config: RunConfig, verbose: bool) -> List[Dict[str, Any]]:
    sweep = config.sweep
    rows = []
    for value in np.linspace(sweep.start, sweep.stop, sweep.steps):
        value = float(value)
        pair, a = config.pair, config.a
        if sweep.axis == "a":
            a = value
        else:
            pair = pair.model_copy(update={sweep.axis: value})
        result = lambda1(pair, a, config.solver_options())
        flags = [] if result.converged else [result.convergence]
        if any(result.free_endpoints):
            flags.append("free-endpoint")
        rows.append({
            "param": value,
            "lambda1": result.lambda1,
            "error_estimate": result.error_estimate,
            "flags": flags,
        })
        _progress(verbose, f"{sweep.axis}={value:.6g}: lambda1={result.lambda1:.12g} {' '.join(flags)}")
    return rows


def execute(config: RunConfig, verbose: bool = False) -> Dict[str, Any]:
    """The report of one run, as an ordered dict ready for rendering."""
    if config.mode == "bound":
        surface = config.surface.build()
        _progress(verbose, f"Sampling curvatures of {surface.name} at resolution {config.resolution}...")
        summary = curvature_summary(surface, config.resolution)
        _progress(verbose, f"Curvature box k1 in [{summary.k1_minus:.6g}, {summary.k1_plus:.6g}], "
                           f"k2 in [{summary.k2_minus:.6g}, {summary.k2_plus:.6g}]")
        report = theorem1_bound(summary, config.a, config.solver_options())
        _progress(verbose, f"Lower bound {report.lower_bound:.12g} on branch {report.branch}")
        return {"mode": "bound", "summary": summary, "report": report}

    if config.mode == "lambda1":
        result = lambda1(config.pair, config.a, config.solver_options())
        _progress(verbose, f"lambda1({config.pair.kappa1}, {config.pair.kappa2}) = {result.lambda1:.12g} ({result.convergence})")
        return {
            "mode": "lambda1",
            "a": config.a,
            "pair": config.pair,
            "result": result.model_dump(exclude={"eigenvector", "nodes"}),
        }

    if config.mode == "sweep":
        return {
            "mode": "sweep",
            "a": config.a,
            "pair": config.pair,
            "sweep": config.sweep.model_dump(by_alias=True),
            "rows": _sweep_rows(config, verbose),
        }

    checks = []
    for check in iter_checks(config):
        _progress(verbose, f"[{'PASS' if check.passed else 'FAIL'}] {check.name} {check.detail}".rstrip())
        checks.append(check)
    return {"mode": "verify", "a": config.a, "seed": config.seed, "checks": checks,
            "passed": all(c.passed for c in checks)}


def run(config: RunConfig, verbose: bool = False) -> int:
    """Execute a validated config, write its outputs and return the exit code."""
    try:
        data = execute(config, verbose)
    except HypothesisError as e:
        print(f"Hypothesis failure: {e}", file=sys.stderr)
        if e.diagnostic is not None:
            print(render_report(e.diagnostic), end="", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except RuntimeError as e:
        print(f"Numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, OSError) as e:
        print(f"Config error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    text = render_report(data)
    if config.out:
        write_text(config.out, text)
        _progress(verbose, f"Saved report to {config.out}")
    else:
        sys.stdout.write(text)
    if config.mode == "sweep" and config.csv:
        write_text(config.csv, render_csv(data["rows"]))
        _progress(verbose, f"Saved sweep table to {config.csv}")

    if config.mode == "verify" and not data["passed"]:
        failed = [c.name for c in data["checks"] if not c.passed]
        print(f"Failed checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="Lower bounds for the spectral threshold of quantum layers")
    parser.add_argument("--config", type=str, required=True, help="Run configuration (JSON)")
    parser.add_argument("--out", type=str, help="Report path (default stdout)")
    parser.add_argument("--csv", type=str, help="Sweep table path")
    parser.add_argument("--resolution", type=int, help="Curvature samples per chart axis")
    parser.add_argument("--seed", type=int, help="Seed of the randomized verify draws")
    parser.add_argument("--verbose", action="store_true", help="Progress on stderr")

    args = parser.parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        config = load_config(args.config)
        updates = {k: v for k, v in vars(args).items() if k in ("out", "csv", "resolution", "seed") and v is not None}
        if updates:
            config = RunConfig.model_validate({**config.model_dump(by_alias=True), **updates})
    except (OSError, ValidationError, ValueError) as e:
        print(f"Config error in {Path(args.config)}: {e}", file=sys.stderr)
        return EXIT_CONFIG

    _progress(args.verbose, f"Running {config.mode} at a={config.a}...")
    return run(config, args.verbose)


if __name__ == "__main__":
    sys.exit(main())
