"""Command line entry point: ``dunkl-approx run`` and ``dunkl-approx table``."""

from __future__ import annotations

import argparse
import sys

from .errors import ConfigError
from .experiment import (
    convergence_csv,
    convergence_table,
    default_config_text,
    load_config,
    render,
    run,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="dunkl-approx",
                                 description="Dunkl-Gamma operator experiments.")
    sub = ap.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="evaluate all checks over a parameter grid")
    r.add_argument("--config", required=True, help="flat key = value config file")
    r.add_argument("--out", help="output file (default: config output_path, else stdout)")
    r.add_argument("--format", choices=("csv", "json"), help="output format")
    r.add_argument("--jobs", type=int, default=1, help="worker processes")
    r.add_argument("--seed-grid", choices=("default",),
                   help="fill keys missing from the config with the shipped defaults")

    t = sub.add_parser("table", help="sup-error convergence table along n_values")
    t.add_argument("--config", required=True)
    t.add_argument("--function", required=True, help="preset name, e.g. sin")
    t.add_argument("--seed-grid", choices=("default",))
    t.add_argument("--out")

    sub.add_parser("show-default", help="print the shipped default config")
    return ap


def _write(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "show-default":
        sys.stdout.write(default_config_text())
        return EXIT_OK
    try:
        config = load_config(args.config, seed_default=args.seed_grid == "default")
        if args.command == "table":
            rows = convergence_table(config, args.function)
            _write(convergence_csv(rows), args.out)
            return EXIT_OK if all(r.monotone_ok and r.bound_ok for r in rows) else EXIT_VIOLATION
        if args.jobs < 1:
            raise ConfigError("--jobs must be >= 1")
        fmt = args.format or config.output_format
        text_report = run(config, jobs=args.jobs)
        _write(render(text_report, fmt), args.out or config.output_path)
    except ConfigError as exc:
        print(f"dunkl-approx: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KeyError as exc:
        print(f"dunkl-approx: config error: {exc.args[0]}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"dunkl-approx: io error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    bad = text_report.violations
    if bad:
        print(f"dunkl-approx: {len(bad)} of {len(text_report.rows)} rows failed",
              file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

