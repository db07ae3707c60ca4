"""Subcommand handlers.

Each handler takes the parsed arguments and the resolved configuration and
returns a CommandResult; ``main`` renders it as JSON or CSV.
"""

import argparse
import logging
from dataclasses import dataclass, field
from io import StringIO
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..core.config import ColdSeqConfig
from ..core.context import LoadProfile, ShiftPlan
from ..core.fleet import Fleet, SequencingOrder, efficiency_table, power_at, prop3_ratios
from ..core.loadshift import optimal_shift
from ..core.online import capacity_distribution, online_shift
from ..core.processor import SequencingProcessor
from ..core.static import fixed_order_gap_curve, optimal_static, order_partition
from ..core.waterfill import min_turn_on, total_capacity, waterfill
from ..io.fleets import bundled_path, load_fleet
from ..io.plans import load_plan_csv, plan_frame, save_plan_csv
from ..io.profiles import load_csv, load_spec, moving_average, save_csv, synth

logger = logging.getLogger(__name__)

DEMO_PROFILE = 'demo'


@dataclass
class CommandResult:
    """Output of a subcommand.

    Attributes:
        data: JSON payload
        table: Tabular form for --format csv
        text: Preformatted output that bypasses both (used by gen)
    """

    data: Dict[str, Any] = field(default_factory=dict)
    table: Optional[pd.DataFrame] = None
    text: Optional[str] = None


def read_profile(args: argparse.Namespace, config: ColdSeqConfig) -> LoadProfile:
    """The --profile argument as a LoadProfile, optionally smoothed."""
    if args.profile == DEMO_PROFILE:
        profile = synth(load_spec(bundled_path('demo_profile_spec.json')))
    else:
        profile = load_csv(args.profile, step_minutes=args.step_minutes)

    window = args.filter_window
    if window is None and args.filter:
        window = config.filter_window_minutes
    if window is not None:
        profile = moving_average(profile, window)
    return profile


def _plan_result(plan: ShiftPlan, fleet: Fleet, config: ColdSeqConfig) -> CommandResult:
    shares = capacity_distribution(plan, fleet, config.full_capacity_threshold, config.tolerance_kw)
    data = {
        'method': plan.label,
        'stages': len(plan),
        'avg_power_kw': plan.avg_power,
        'feasible': plan.is_feasible(config.tolerance_kw),
        'capacity_distribution': {cid: s.to_dict() for cid, s in shares.items()},
        'plan': plan_frame(plan).to_dict(orient='records'),
    }
    return CommandResult(data, plan_frame(plan))


def cmd_compare(args: argparse.Namespace, config: ColdSeqConfig) -> CommandResult:
    """Average power of all five methods on one profile."""
    fleet = load_fleet(args.fleet)
    profile = read_profile(args, config)

    processor = SequencingProcessor(config)
    report = processor.compare(fleet, profile, mean_kw=args.mean)
    plans, _, _ = processor.plans(fleet, profile, mean_kw=args.mean)

    data = report.to_dict()
    data['capacity_distribution'] = {
        name: {
            cid: share.to_dict()
            for cid, share in capacity_distribution(
                plan, fleet, config.full_capacity_threshold, config.tolerance_kw
            ).items()
        }
        for name, plan in plans.items()
    }

    if args.plans_dir:
        plans_dir = Path(args.plans_dir)
        plans_dir.mkdir(parents=True, exist_ok=True)
        for name, plan in plans.items():
            save_plan_csv(plan, plans_dir / f"{name}.csv")

    return CommandResult(data, pd.DataFrame(report.rows()))


def cmd_sequence(args: argparse.Namespace, config: ColdSeqConfig) -> CommandResult:
    """Dispatch one demand level with a fixed order or optimally."""
    fleet = load_fleet(args.fleet)
    tol = config.tolerance_kw

    if args.optimal:
        solution = optimal_static(fleet, args.q_in, tol)
        assignment, order = solution.assignment, solution.realizing_order
    else:
        order = SequencingOrder.parse(args.order) if args.order else fleet.canonical_order()
        assignment = waterfill(fleet, order, args.q_in, tol)

    rows: List[Dict[str, Any]] = []
    for c in fleet:
        q = assignment[c.id]
        rows.append({'id': c.id, 'load_kw': q, 'power_kw': power_at(c, q, tol)})

    data = {
        'q_in_kw': args.q_in,
        'mode': 'optimal' if args.optimal else 'water_fill',
        'order': str(order),
        'assignment': rows,
        'total_load_kw': assignment.total(),
        'total_power_kw': assignment.cost(fleet, tol),
    }
    return CommandResult(data, pd.DataFrame(rows))


def cmd_shift(args: argparse.Namespace, config: ColdSeqConfig) -> CommandResult:
    """Optimal load-shifting plan."""
    fleet = load_fleet(args.fleet)
    plan = optimal_shift(fleet, read_profile(args, config), config=config)
    return _plan_result(plan, fleet, config)


def cmd_online(args: argparse.Namespace, config: ColdSeqConfig) -> CommandResult:
    """Online load-shifting plan."""
    fleet = load_fleet(args.fleet)
    plan = online_shift(fleet, read_profile(args, config), args.mean, config.tolerance_kw)
    return _plan_result(plan, fleet, config)


def cmd_bounds(args: argparse.Namespace, config: ColdSeqConfig) -> CommandResult:
    """Worst-case load-shifting savings bound and per-machine cost ratios."""
    fleet = load_fleet(args.fleet)
    r_max, r_min, bound = prop3_ratios(fleet)
    table = efficiency_table(fleet)
    data = {
        'r_max': r_max,
        'r_min': r_min,
        'bound': bound,
        'total_capacity_kw': total_capacity(fleet),
        'min_turn_on_kw': min_turn_on(fleet),
        'efficiency': table,
    }
    return CommandResult(data, pd.DataFrame(table))


def _sweep_range(args: argparse.Namespace, fleet: Fleet):
    q_lo = args.q_lo if args.q_lo is not None else min_turn_on(fleet)
    q_hi = args.q_hi if args.q_hi is not None else total_capacity(fleet)
    return q_lo, q_hi


def cmd_partition(args: argparse.Namespace, config: ColdSeqConfig) -> CommandResult:
    """Demand intervals sharing one optimal realizing order."""
    fleet = load_fleet(args.fleet)
    q_lo, q_hi = _sweep_range(args, fleet)
    intervals = order_partition(fleet, q_lo, q_hi, args.step, config.tolerance_kw)
    rows = [{'q_lo_kw': lo, 'q_hi_kw': hi, 'order': str(order)} for (lo, hi), order in intervals]
    return CommandResult({'step_kw': args.step, 'intervals': rows}, pd.DataFrame(rows))


def cmd_gap(args: argparse.Namespace, config: ColdSeqConfig) -> CommandResult:
    """Best versus worst fixed-order cost across a demand sweep."""
    fleet = load_fleet(args.fleet)
    q_lo, q_hi = _sweep_range(args, fleet)
    curve = fixed_order_gap_curve(
        fleet, q_lo, q_hi, args.step, config.tolerance_kw, config.max_permutation_fleet
    )
    at = int(np.argmax(curve['gap']))
    data = {
        'max_gap': float(curve['gap'][at]),
        'max_gap_q_in_kw': float(curve['q_in'][at]),
        'points': int(curve['q_in'].size),
    }
    return CommandResult(data, pd.DataFrame(curve))


def cmd_gen(args: argparse.Namespace, config: ColdSeqConfig) -> CommandResult:
    """Synthesize a profile from a spec file."""
    spec = load_spec(args.spec or bundled_path('demo_profile_spec.json'))
    if args.seed is not None:
        spec.seed = args.seed
    profile = synth(spec)

    buffer = StringIO()
    save_csv(profile, buffer)
    return CommandResult(text=buffer.getvalue())


def cmd_cdf(args: argparse.Namespace, config: ColdSeqConfig) -> CommandResult:
    """Time each machine spends off, in trim and at full capacity in a saved plan."""
    fleet = load_fleet(args.fleet)
    plan = load_plan_csv(args.plan)
    shares = capacity_distribution(plan, fleet, config.full_capacity_threshold, config.tolerance_kw)
    rows = [{'id': cid, **share.to_dict()} for cid, share in shares.items()]
    return CommandResult({'plan': str(args.plan), 'capacity_distribution': rows}, pd.DataFrame(rows))
