"""
Commands

Command execution for the mobile-gossip CLI. Exit codes: 0 on success,
1 on invalid arguments or configuration, 2 on runtime failures and 130
when interrupted.
"""

import argparse
import logging
import sys
from typing import List, Optional

import pandas as pd

from ..config.config_loader import ConfigLoader, ExperimentConfig, ModelEntry
from ..core.errors import ConfigError, InvalidParameterError
from ..core.mobility_config import MobilityKind
from ..engine.theory import table1_phi, velocity_prediction
from ..harness.experiment_runner import run_experiment
from ..harness.result_writer import write_csv, write_manifest
from ..utils.file_operations import write_table
from ..utils.logger_setup import log_level_from_string, setup_logger
from .argument_parser import parse_args

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2

# Flag destinations that land in the experiment section
EXPERIMENT_FLAGS = (
    'n_values', 'epsilon', 'rounds', 'sources', 'seed', 'mode', 'max_slots',
    'samples', 'cuts', 'sampling', 'trials', 'bins', 'node_samples', 'informed_sets',
)

MODEL_FLAGS = ('k', 'v_max', 'n_v', 'n_h', 'r_c')

THEORY_COLUMNS = ['model', 'n', 'r', 'param', 'phi', 'kind']


def _flag(args: argparse.Namespace, name: str):
    return getattr(args, name, None)


def apply_overrides(config: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    """
    Overlay the given command-line flags on a loaded configuration.

    Raises:
        ConfigError: if model parameters are given without --model
    """
    if args.command != 'theory':
        config.experiment.kind = args.command

    for name in EXPERIMENT_FLAGS:
        value = _flag(args, name)
        if value is not None:
            setattr(config.experiment, name, value)

    if args.r is not None:
        config.world.r = args.r
    if args.boundary is not None:
        config.world.boundary = args.boundary

    params = {name: _flag(args, name) for name in MODEL_FLAGS if _flag(args, name) is not None}
    if args.model is not None:
        config.models = [ModelEntry(kind=args.model, **params)]
    elif params:
        flags = ', '.join(sorted(params))
        raise ConfigError(f"model parameters ({flags}) need --model", field='models')

    if args.workers is not None:
        config.runtime.workers = args.workers
    if args.output is not None:
        config.runtime.output = args.output
    if _flag(args, 'dump_trajectories') is not None:
        config.runtime.dump_trajectories = args.dump_trajectories
    if _flag(args, 'dump_estimates') is not None:
        config.runtime.dump_estimates = args.dump_estimates

    if args.verbose:
        config.logging.level = 'DEBUG'
    elif args.log_level is not None:
        config.logging.level = args.log_level
    if args.log_file is not None:
        config.logging.file = args.log_file
    return config


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """
    Load the configuration file (if any), apply flags and validate.

    Raises:
        ConfigError: on any invalid value
    """
    loader = ConfigLoader(args.config)
    loader.config = apply_overrides(loader.load(), args)
    loader.validate()
    return loader.config


def theory_frame(config: ExperimentConfig) -> pd.DataFrame:
    """Predicted conductance of every (model, n) pair of the configuration."""
    records = []
    for entry in config.models:
        for n in config.experiment.n_values:
            r = config.radius_for(n)
            spec = entry.resolve(n, r)
            if spec.kind is MobilityKind.VELOCITY_CONSTRAINED:
                prediction = velocity_prediction(spec.v_max, r, n)
            else:
                prediction = table1_phi(spec, n, r)
            records.append((
                prediction.model, prediction.n, prediction.r,
                prediction.param, prediction.phi, prediction.kind.value,
            ))
    return pd.DataFrame.from_records(records, columns=THEORY_COLUMNS)


def execute_theory_command(config: ExperimentConfig) -> int:
    write_table(theory_frame(config), config.output_path)
    return EXIT_OK


def execute_experiment_command(config: ExperimentConfig) -> int:
    """
    Run an experiment and write its results and manifest.

    Args:
        config: Validated configuration

    Returns:
        Exit code
    """
    rows = run_experiment(config)
    write_csv(rows, config.output_path)
    if config.runtime.manifest:
        write_manifest(config, rows, config.output_path)
    logger.info(f"{config.experiment.kind} finished with {len(rows)} result row(s)")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the CLI.

    Args:
        argv: Command line arguments (default: sys.argv[1:])

    Returns:
        Exit code
    """
    try:
        args = parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    setup_logger(level=logging.DEBUG if args.verbose else log_level_from_string(args.log_level or 'INFO'))

    try:
        config = build_config(args)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_USAGE

    setup_logger(
        level=log_level_from_string(config.logging.level),
        log_file=config.logging.file,
        log_format=config.logging.format,
    )

    if args.emit_config is not None:
        try:
            loader = ConfigLoader()
            loader.config = config
            loader.save(args.emit_config)
        except ConfigError as e:
            logger.error(str(e))
            return EXIT_RUNTIME
        return EXIT_OK

    try:
        if args.command == 'theory':
            return execute_theory_command(config)
        return execute_experiment_command(config)
    except (ConfigError, InvalidParameterError) as e:
        logger.error(f"Invalid parameters: {e}")
        return EXIT_USAGE
    except KeyboardInterrupt:
        logger.warning("Interrupted by user")
        return 130
    except Exception as e:
        logger.exception(f"Run failed: {e}")
        return EXIT_RUNTIME


if __name__ == '__main__':
    sys.exit(main())
