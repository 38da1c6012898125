#!/usr/bin/env python3

"""
BD-RIS Channel Estimation Simulator
===================================
Command-line entry point.

    bdris-sim                                # default sweep, writes mse_sweep.csv
    bdris-sim --config sweep.env --workers 4
    bdris-sim --powers 0:30:10 --arch 16x2 --strategy dft --trials 200
    bdris-sim --arch 16x2 --strategy dft --export-codebook dft_16x2.csv
    bdris-sim --validate dft_16x2.csv        # exit 1 if any constraint is violated
    bdris-sim --overhead

Exit codes: 0 success, 1 validation failure, 2 configuration error.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

from ..channel import draw_channels, dump_channels
from ..codebook import (
    BINARY_TOL,
    CodebookFormatError,
    CodebookValidator,
    ValidationResult,
    read_codebook,
    write_codebook,
)
from ..estimator import as_seed_sequence, child_generator
from ..linalg import DEFAULT_TOL
from .config import (
    ConfigError,
    ExperimentConfig,
    load_config,
    parse_architecture,
    parse_powers,
    parse_strategy,
)
from .sweep import overhead_table, prepare_codebook, run_sweep, write_csv

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2

LOG_LEVEL_ENV = 'BDRIS_LOG_LEVEL'
_CHANNEL_STREAM = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='bdris-sim',
        description="LS channel estimation for group-connected BD-RIS: MSE sweeps and codebook tools",
    )
    parser.add_argument("--config", metavar="PATH", help="Flat key=value configuration file")
    parser.add_argument("--seed", type=int, help="Master seed (64-bit)")
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per power point")
    parser.add_argument("--out", metavar="PATH", help="CSV output path")
    parser.add_argument("--powers", metavar="START:STOP:STEP", help="Transmit power sweep in dBm")
    parser.add_argument("--arch", action="append", metavar="GxM_BAR",
                        help="Architecture, e.g. 16x2 (repeatable)")
    parser.add_argument("--strategy", action="append", metavar="KIND",
                        help="dft, hadamard or random (repeatable)")
    parser.add_argument("--workers", type=int, help="Threads used to run sweep cells")
    parser.add_argument("--export-codebook", metavar="PATH",
                        help="Write the codebook of the first architecture/strategy (.csv or .bin)")
    parser.add_argument("--validate", nargs="?", const="", metavar="PATH",
                        help="Validate a codebook file, or every configured codebook if no PATH")
    parser.add_argument("--dump-channel", metavar="PATH",
                        help="Write one channel realization of the first architecture")
    parser.add_argument("--overhead", action="store_true",
                        help="Print training overhead and MSE multiplier for every grouping of M")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help=f"Logging level (default: ${LOG_LEVEL_ENV} or INFO)")
    return parser


def setup_logging(level: Optional[str]) -> None:
    level = (level or os.getenv(LOG_LEVEL_ENV) or 'INFO').upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
        force=True,
    )


def resolve_config(args: argparse.Namespace) -> ExperimentConfig:
    """Defaults, then the config file, then command-line flags."""
    cfg = load_config(args.config) if args.config else ExperimentConfig()
    return cfg.with_overrides(
        master_seed=args.seed,
        n_trials=args.trials,
        output=Path(args.out) if args.out else None,
        power_sweep_dbm=parse_powers(args.powers) if args.powers else None,
        architectures=[parse_architecture(a) for a in args.arch] if args.arch else None,
        strategies=[parse_strategy(s) for s in args.strategy] if args.strategy else None,
        workers=args.workers,
    )


def validate_codebook_cmd(args: argparse.Namespace, cfg: ExperimentConfig) -> int:
    """
    Validate a codebook file, or every configured codebook.

    Prints one report per codebook with the max-abs violation of each
    constraint.

    Returns:
        EXIT_OK if every enforced check passes, else EXIT_VALIDATION
    """
    results: List[ValidationResult] = []
    if args.validate:
        path = Path(args.validate)
        try:
            cb = read_codebook(path, n_bs=cfg.n_bs)
        except (OSError, CodebookFormatError) as exc:
            logger.error(f"Cannot read codebook {path}: {exc}")
            return EXIT_VALIDATION
        tol = BINARY_TOL if path.suffix.lower() == '.bin' else DEFAULT_TOL
        results.append(CodebookValidator(tol=tol, mse_tol=tol).validate(cb))
    else:
        master = as_seed_sequence(cfg.master_seed)
        validator = CodebookValidator()
        for a_idx, top in enumerate(cfg.topologies()):
            for s_idx, kind in enumerate(cfg.strategies):
                prepared = prepare_codebook(top, kind, master, a_idx, s_idx)
                results.append(validator.validate(prepared.codebook))

    for result in results:
        print(result.format_report())
        print()
    failed = [r for r in results if r.failed_checks]
    if failed:
        logger.error(f"{len(failed)} of {len(results)} codebooks failed validation")
        return EXIT_VALIDATION
    return EXIT_OK


def export_codebook_cmd(path: str, cfg: ExperimentConfig) -> int:
    top = cfg.topologies()[0]
    kind = cfg.strategies[0]
    prepared = prepare_codebook(top, kind, as_seed_sequence(cfg.master_seed), 0, 0)
    written = write_codebook(prepared.codebook, path)
    print(f"Exported {prepared.codebook.identifier} to {written}")
    return EXIT_OK


def dump_channel_cmd(path: str, cfg: ExperimentConfig) -> int:
    top = cfg.topologies()[0]
    rng = child_generator(as_seed_sequence(cfg.master_seed), _CHANNEL_STREAM)
    written = dump_channels(draw_channels(top, cfg.link_budget, rng), path)
    print(f"Wrote channel realization for {top.label} to {written}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main function"""
    load_dotenv()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_CONFIG
    setup_logging(args.log_level)

    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        logger.error(f"Invalid configuration: {exc}")
        return EXIT_CONFIG

    if args.overhead:
        print(overhead_table(cfg.m, cfg.n_bs).to_string(index=False))
        return EXIT_OK
    if args.validate is not None:
        return validate_codebook_cmd(args, cfg)
    if args.export_codebook:
        return export_codebook_cmd(args.export_codebook, cfg)
    if args.dump_channel:
        return dump_channel_cmd(args.dump_channel, cfg)

    records = run_sweep(cfg)
    write_csv(records, cfg.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
