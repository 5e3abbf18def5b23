"""Command-line interface: evolve, scan and validate."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import TYPE_CHECKING

from mpemba_relax import __version__
from mpemba_relax.config import (
    LOG_LEVELS,
    MAX_PRECISION,
    MIN_PRECISION,
    EngineSettings,
    OutputFormat,
    load_config,
)
from mpemba_relax.errors import ConfigError, MpembaError
from mpemba_relax.output import render
from mpemba_relax.runs import run_evolve, run_scan
from mpemba_relax.validation import run_validate

if TYPE_CHECKING:
    from mpemba_relax.config import ExperimentConfig
    from mpemba_relax.models import ScanResult

log = logging.getLogger(__name__)

LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpemba-relax",
        description="Relaxation dynamics and Mpemba crossings of open quantum systems.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="Output file (default: stdout).")
    common.add_argument(
        "--format", choices=[f.value for f in OutputFormat], help="Output format (default: csv)."
    )
    common.add_argument(
        "--precision",
        type=int,
        help=f"Significant digits, {MIN_PRECISION}..{MAX_PRECISION} (default: 12).",
    )
    common.add_argument("--threads", type=int, help="Worker threads for scan nodes (default: 1).")
    common.add_argument("--log-level", choices=LOG_LEVELS, help="Logging level on stderr.")

    evolve = sub.add_parser("evolve", parents=[common], help="Evolve the configured states.")
    evolve.add_argument("--config", type=Path, required=True, help="Experiment YAML file.")

    scan = sub.add_parser("scan", parents=[common], help="Run the configured parameter scan.")
    scan.add_argument("--config", type=Path, required=True, help="Experiment YAML file.")
    scan.add_argument(
        "--progress", action="store_true", help="Print a [scan] k/N counter on stderr."
    )

    validate = sub.add_parser("validate", parents=[common], help="Run the invariant suite.")
    validate.add_argument("--config", type=Path, help="Optional experiment YAML file.")
    return parser


def _pick(*values: int | None, default: int) -> int:
    return next((v for v in values if v is not None), default)


def _resolve_settings(
    args: argparse.Namespace, config: ExperimentConfig | None, env: EngineSettings
) -> EngineSettings:
    """Flags override the config file, which overrides the environment."""
    scan_threads = config.scan.threads if config is not None and config.scan is not None else None
    file_precision = config.output.precision if config is not None else None
    return EngineSettings(
        threads=_pick(args.threads, scan_threads, default=env.threads),
        log_level=env.log_level if args.log_level is None else args.log_level,
        precision=_pick(args.precision, file_precision, default=env.precision),
    )


def _print_progress(done: int, total: int) -> None:
    print(f"[scan] {done}/{total}", file=sys.stderr, flush=True)


def _write(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with out.open("w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    except OSError as e:
        msg = f"cannot write output: {e.strerror}"
        raise ConfigError(msg, field=str(out)) from e
    log.info("wrote %s", out)


def _execute(args: argparse.Namespace, config: ExperimentConfig | None, threads: int) -> ScanResult:
    if args.command == "validate":
        return run_validate(config).as_result()
    if config is None:
        msg = f"'{args.command}' needs --config"
        raise ConfigError(msg, field="config")
    if args.command == "evolve":
        return run_evolve(config)
    progress = _print_progress if args.progress else None
    return run_scan(config, threads, progress)


def run(args: argparse.Namespace) -> int:
    """Execute one subcommand; returns the process exit status."""
    env = EngineSettings.from_env()
    config = load_config(args.config) if args.config is not None else None
    settings = _resolve_settings(args, config, env)
    logging.basicConfig(level=settings.log_level, format=LOG_FORMAT, stream=sys.stderr, force=True)

    result = _execute(args, config, settings.threads)
    fmt = args.format or (config.output.format if config is not None else OutputFormat.CSV)
    out = args.out
    if out is None and config is not None and config.output.path is not None:
        out = Path(config.output.path)
    echo = config.model_dump(mode="json") if config is not None else None
    _write(render(result, str(fmt), settings.precision, echo), out)
    passed = result.summary.get("passed", True)
    return 0 if passed else 1


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return run(args)
    except MpembaError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
