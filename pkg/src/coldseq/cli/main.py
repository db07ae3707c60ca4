"""Command-line entry point.

Exit codes: 0 success, 1 usage or parameter error, 2 infeasible demand,
3 I/O or parse error. Log verbosity comes from --log-level or COLDSEQ_LOG;
logs go to stderr so stdout stays machine-readable.
"""

import argparse
import json
import logging
import os
import sys
from typing import Any, Callable, Dict, List, Optional

from ..core.config import DECISION_MODES, LOG_LEVELS, STAGE_POLICIES, ColdSeqConfig
from ..core.errors import ColdSeqError, InfeasibleDemandError, ProfileParseError
from . import commands

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_IO = 3

Handler = Callable[[argparse.Namespace, ColdSeqConfig], commands.CommandResult]


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--fleet', default='butterball',
                        help="fleet JSON file or bundled fleet name (default: butterball)")
    common.add_argument('--out', help="write output to this file instead of stdout")
    common.add_argument('--format', choices=('json', 'csv'), default='json', help="output format")
    common.add_argument('--log-level', type=str.upper, choices=LOG_LEVELS,
                        help="logging level (default: $COLDSEQ_LOG or WARNING)")
    return common


def _profile_parser() -> argparse.ArgumentParser:
    profile = argparse.ArgumentParser(add_help=False)
    profile.add_argument('--profile', required=True,
                         help=f"load profile CSV, or '{commands.DEMO_PROFILE}' for the bundled demo")
    profile.add_argument('--step-minutes', type=float, default=1.0,
                         help="sampling step of stage-indexed CSVs (default: 1)")
    profile.add_argument('--filter-window', type=float,
                         help="smooth the profile with a centered moving average of this many minutes")
    profile.add_argument('--filter', action='store_true',
                         help="smooth the profile with the configured window (default: 20 min)")
    profile.add_argument('--surplus-step', type=float, help="surplus grid step of the load-shifting DP")
    profile.add_argument('--surplus-cap-hours', type=float, help="cap on banked surplus, hours of capacity")
    profile.add_argument('--stage-policy', choices=STAGE_POLICIES, help="per-stage dispatch of the DP")
    profile.add_argument('--decision-mode', choices=DECISION_MODES, help="DP candidate loads")
    profile.add_argument('--mean', type=float, help="mean load override for the online policy")
    return profile


def _sweep_parser() -> argparse.ArgumentParser:
    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument('--q-lo', type=float, help="lowest demand (default: smallest q_min)")
    sweep.add_argument('--q-hi', type=float, help="highest demand (default: total capacity)")
    sweep.add_argument('--step', type=float, default=1.0, help="demand step (default: 1)")
    return sweep


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per analysis."""
    parser = argparse.ArgumentParser(
        prog='coldseq',
        description="Compressor sequencing and load shifting for industrial refrigeration",
    )
    sub = parser.add_subparsers(dest='command', required=True)
    common, profile, sweep = _common_parser(), _profile_parser(), _sweep_parser()

    p = sub.add_parser('compare', parents=[common, profile], help="compare all five methods")
    p.add_argument('--plans-dir', help="also write each method's plan CSV into this directory")
    p.set_defaults(func=commands.cmd_compare)

    p = sub.add_parser('sequence', parents=[common], help="dispatch one demand level")
    p.add_argument('q_in', type=float, help="demand (kW)")
    group = p.add_mutually_exclusive_group()
    group.add_argument('--order', help="comma-separated water-fill order, e.g. C1,C2,C3,C4")
    group.add_argument('--optimal', action='store_true', help="exact optimum with its realizing order")
    p.set_defaults(func=commands.cmd_sequence)

    p = sub.add_parser('shift', parents=[common, profile], help="optimal load-shifting plan")
    p.set_defaults(func=commands.cmd_shift)

    p = sub.add_parser('online', parents=[common, profile], help="online load-shifting plan")
    p.set_defaults(func=commands.cmd_online)

    p = sub.add_parser('bounds', parents=[common], help="worst-case load-shifting savings bound")
    p.set_defaults(func=commands.cmd_bounds)

    p = sub.add_parser('partition', parents=[common, sweep], help="optimal-order intervals")
    p.set_defaults(func=commands.cmd_partition)

    p = sub.add_parser('gap', parents=[common, sweep], help="best vs worst fixed-order cost")
    p.set_defaults(func=commands.cmd_gap)

    p = sub.add_parser('gen', parents=[common], help="synthesize a load profile CSV")
    p.add_argument('--spec', help="profile spec JSON (default: bundled demo spec)")
    p.add_argument('--seed', type=int, help="override the spec's noise seed")
    p.set_defaults(func=commands.cmd_gen)

    p = sub.add_parser('cdf', parents=[common], help="capacity distribution of a saved plan")
    p.add_argument('--plan', required=True, help="plan CSV written by compare --plans-dir")
    p.set_defaults(func=commands.cmd_cdf)

    return parser


def configure_logging(level: Optional[str]) -> None:
    """Send logs to stderr at the requested level."""
    name = (level or os.getenv('COLDSEQ_LOG') or 'WARNING').upper()
    logging.basicConfig(
        level=getattr(logging, name, logging.WARNING),
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


def _jsonable(value: Any) -> Any:
    if hasattr(value, 'item'):
        return value.item()
    if hasattr(value, 'tolist'):
        return value.tolist()
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render(result: commands.CommandResult, fmt: str) -> str:
    """Text form of a command result."""
    if result.text is not None:
        return result.text
    if fmt == 'csv' and result.table is not None:
        return result.table.to_csv(index=False, lineterminator='\n')
    return json.dumps(result.data, indent=2, default=_jsonable) + '\n'


def _resolve_config(args: argparse.Namespace) -> ColdSeqConfig:
    overrides: Dict[str, Any] = {
        name: getattr(args, name, None)
        for name in ('surplus_step', 'surplus_cap_hours', 'stage_policy', 'decision_mode', 'log_level')
    }
    return ColdSeqConfig.from_env().with_overrides(**overrides)


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    configure_logging(args.log_level)

    try:
        config = _resolve_config(args)
        handler: Handler = args.func
        result = handler(args, config)
        text = render(result, args.format)
        if args.out:
            with open(args.out, 'w', encoding='utf-8', newline='\n') as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK

    except InfeasibleDemandError as exc:
        logger.error(f"Infeasible: {exc}")
        stages = getattr(exc, 'stages', ())
        if stages:
            sys.stderr.write(f"infeasible stages: {list(stages)}\n")
        return EXIT_INFEASIBLE

    except (ProfileParseError, OSError) as exc:
        logger.error(f"I/O error: {exc}")
        return EXIT_IO

    except (ColdSeqError, ValueError) as exc:
        logger.error(f"{type(exc).__name__}: {exc}")
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
