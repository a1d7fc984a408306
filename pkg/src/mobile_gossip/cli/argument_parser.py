"""
Argument Parser

This module provides command-line argument parsing for the simulator.
Every flag mirrors a configuration key and defaults to None, so a flag
only overrides the configuration file when it is given.
"""

import argparse
from typing import List, Optional

from ..core.mobility_config import MobilityKind

# Valid model names
VALID_MODELS = [kind.value for kind in MobilityKind]

VALID_BOUNDARIES = ["square", "torus"]

VALID_MODES = ["pushpull", "push", "pull"]

VALID_CUTS = ["sweep", "bisect", "random", "exhaustive"]

VALID_SAMPLING = ["stationary", "conditioned"]

VALID_LOG_LEVELS = ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']

RESULT_SCHEMA = (
    "Output CSV columns:\n"
    "  experiment,model,n,r,param,metric,value,std_error,rounds,seed\n"
    "std_error is empty when it is not defined (a single round)."
)

SUBCOMMAND_HELP = {
    'spread': "Measure spreading time from sampled sources",
    'sweep': "Spreading time over a grid of n and models",
    'conductance': "Estimate mobile conductance over a cut family",
    'density': "Post-move mixing profile around a bisection",
    'theory': "Print closed-form conductance predictions",
    'increment': "Check the expected one-slot growth against its conductance bound",
    'connectivity': "Empirical connectivity frequency of the initial graph",
}


def positive_int(arg_value: str) -> int:
    """
    Parse a strictly positive integer.

    Raises:
        ArgumentTypeError: If the value is not a positive integer
    """
    try:
        value = int(arg_value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid integer: {arg_value}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"Value must be at least 1: {arg_value}")
    return value


def add_common_arguments(parser: argparse.ArgumentParser):
    """Flags shared by every subcommand."""
    parser.add_argument(
        '--config',
        dest='config',
        help='YAML configuration file; flags override its values'
    )
    parser.add_argument(
        '--emit-config',
        dest='emit_config',
        nargs='?',
        const='-',
        help='Write the effective configuration as YAML (to PATH or standard output) and exit'
    )

    world = parser.add_argument_group('world')
    world.add_argument(
        '--n',
        dest='n_values',
        nargs='+',
        type=positive_int,
        help='Node count(s) (default: 1000)'
    )
    world.add_argument(
        '--r',
        dest='r',
        type=float,
        help='Transmission radius (default: sqrt(8 log n / (pi n)))'
    )
    world.add_argument(
        '--boundary',
        dest='boundary',
        choices=VALID_BOUNDARIES,
        help='Distance semantics (default: square)'
    )
    world.add_argument(
        '--seed',
        dest='seed',
        type=int,
        help='Master seed (default: 0)'
    )

    model = parser.add_argument_group('mobility model')
    model.add_argument(
        '--model',
        dest='model',
        choices=VALID_MODELS,
        help='Mobility model (default: fully-random):\n'
             '  static           - nodes never move\n'
             '  fully-random     - uniform and i.i.d. every slot\n'
             '  partially-random - k nodes fully random, the rest static (--k)\n'
             '  velocity         - uniform in a disk of radius v_max (--vmax)\n'
             '  area-1d          - n_v vertical and n_h horizontal line movers (--nv, --nh)\n'
             '  area-2d          - uniform in a disk of radius r_c around a home point (--rc)'
    )
    model.add_argument('--vmax', dest='v_max', type=float, help='Speed bound of the velocity model')
    model.add_argument('--k', dest='k', type=int, help='Mobile node count of the partially random model')
    model.add_argument('--nv', dest='n_v', type=int, help='Vertical node count of the area-1d model')
    model.add_argument('--nh', dest='n_h', type=int, help='Horizontal node count (default: n - nv)')
    model.add_argument('--rc', dest='r_c', type=float, help='Roaming radius of the area-2d model')

    runtime = parser.add_argument_group('runtime')
    runtime.add_argument(
        '--workers',
        dest='workers',
        type=positive_int,
        help='Worker threads (default: machine parallelism)'
    )
    runtime.add_argument(
        '--out',
        dest='output',
        help="Output CSV path; '-' or omitted writes to standard output"
    )
    runtime.add_argument(
        '-v', '--verbose',
        dest='verbose',
        action='store_true',
        help='Debug logging'
    )
    runtime.add_argument(
        '--log-level',
        dest='log_level',
        choices=VALID_LOG_LEVELS,
        help='Logging level (default: INFO)'
    )
    runtime.add_argument(
        '--log-file',
        dest='log_file',
        help='Also write logs to this file'
    )


def add_spread_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group('spreading')
    group.add_argument('--epsilon', dest='epsilon', type=float, help='Failure probability (default: 0.05)')
    group.add_argument('--rounds', dest='rounds', type=positive_int, help='Runs per grid point (default: 1000)')
    group.add_argument('--sources', dest='sources', type=positive_int, help='Sampled sources (default: 10)')
    group.add_argument('--mode', dest='mode', choices=VALID_MODES, help='Gossip mode (default: pushpull)')
    group.add_argument(
        '--max-slots',
        dest='max_slots',
        type=positive_int,
        help='Slot cap per run (default: min(200 (log n + log 1/eps) / phi, 50 n))'
    )
    group.add_argument(
        '--dump-trajectories',
        dest='dump_trajectories',
        help='Also write per-slot sizes: run_id,source,seed,slot,informed_count'
    )


def add_conductance_arguments(parser: argparse.ArgumentParser):
    group = parser.add_argument_group('conductance')
    group.add_argument('--samples', dest='samples', type=positive_int, help='Monte-Carlo samples (default: 200)')
    group.add_argument(
        '--cuts',
        dest='cuts',
        nargs='+',
        choices=VALID_CUTS,
        help='Cut generators (default: bisect sweep); exhaustive needs n <= 14'
    )
    group.add_argument(
        '--sampling',
        dest='sampling',
        choices=VALID_SAMPLING,
        help='stationary: redraw the layout per sample; conditioned: fix one layout (default: stationary)'
    )
    group.add_argument(
        '--dump-estimates',
        dest='dump_estimates',
        help='Also write every cut estimate: model,n,r,param,cut_id,quotient_kind,mean,std_error,samples'
    )


def create_base_parser() -> argparse.ArgumentParser:
    """
    Create the top-level parser with one subparser per subcommand.

    Returns:
        Configured ArgumentParser
    """
    parser = argparse.ArgumentParser(
        prog='mobile-gossip',
        description='Move-and-gossip simulator for mobile random geometric networks',
        formatter_class=argparse.RawTextHelpFormatter
    )
    subparsers = parser.add_subparsers(dest='command', metavar='COMMAND')
    subparsers.required = True

    def add(name: str, epilog: str = RESULT_SCHEMA) -> argparse.ArgumentParser:
        sub = subparsers.add_parser(
            name,
            help=SUBCOMMAND_HELP[name],
            description=SUBCOMMAND_HELP[name],
            epilog=epilog,
            formatter_class=argparse.RawTextHelpFormatter
        )
        add_common_arguments(sub)
        return sub

    add_spread_arguments(add('spread'))
    add_spread_arguments(add('sweep'))

    conductance = add('conductance')
    add_conductance_arguments(conductance)

    density = add('density')
    group = density.add_argument_group('density')
    group.add_argument('--bins', dest='bins', type=positive_int, help='Offset bins (default: 20)')
    group.add_argument(
        '--samples',
        dest='node_samples',
        type=positive_int,
        help='Node samples (default: 100000)'
    )

    add('theory', epilog="Output CSV columns:\n  model,n,r,param,phi,kind")

    increment = add('increment')
    group = increment.add_argument_group('increment')
    group.add_argument('--samples', dest='samples', type=positive_int, help='Samples per informed set (default: 200)')
    group.add_argument(
        '--informed-sets',
        dest='informed_sets',
        type=positive_int,
        help='Random informed sets per size (default: 20)'
    )
    group.add_argument('--mode', dest='mode', choices=VALID_MODES, help='Gossip mode (default: pushpull)')

    connectivity = add('connectivity')
    group = connectivity.add_argument_group('connectivity')
    group.add_argument('--trials', dest='trials', type=positive_int, help='Independent layouts (default: 100)')

    return parser


def parse_args(args: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Parse command-line arguments.

    Args:
        args: Arguments to parse (default: sys.argv[1:])

    Returns:
        Parsed arguments namespace
    """
    return create_base_parser().parse_args(args)
