"""Sequencing processor - runs every dispatch method on one (fleet, profile) pair."""

import hashlib
import json
import logging
from collections import OrderedDict
from typing import Dict, Optional, Tuple

from .config import ColdSeqConfig
from .context import METHOD_NAMES, ComparisonReport, LoadProfile, ShiftPlan
from .errors import DominanceError
from .fleet import Fleet
from .loadshift import dp_slack, fixed_order_extremes, optimal_shift, static_trajectory
from .online import online_shift

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
MAX_CACHED_PLANS = 8

PlanSet = Tuple[Dict[str, ShiftPlan], str, str]


def digest(payload: object) -> str:
    """First 16 hex characters of the sha256 of canonical JSON."""
    text = json.dumps(payload, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]


def fleet_hash(f: Fleet) -> str:
    return digest(f.to_dict())


def profile_hash(p: LoadProfile) -> str:
    return digest({'step_minutes': p.step_minutes, 'loads': [float(q) for q in p.loads]})


class SequencingProcessor:
    """Compares compressor-sequencing methods on a load profile.

    The processor:
    1. Evaluates the best and worst single fixed order
    2. Runs static optimal sequencing (no shifting)
    3. Runs the online and the optimal load-shifting plans
    4. Checks the dominance chain and assembles a ComparisonReport

    Example:
        >>> processor = SequencingProcessor(ColdSeqConfig(surplus_step=25.0))
        >>> report = processor.compare(fleet, profile)
        >>> report.savings_vs_static['optimal_ls'] > 0
        True
    """

    def __init__(self, config: Optional[ColdSeqConfig] = None):
        """Initialize the processor.

        Args:
            config: Solver configuration (defaults to ColdSeqConfig())
        """
        self.config = config or ColdSeqConfig()
        self._plan_cache: "OrderedDict[Tuple[str, str, str, Optional[float]], PlanSet]" = OrderedDict()

    def plans(
        self,
        f: Fleet,
        p: LoadProfile,
        mean_kw: Optional[float] = None,
    ) -> PlanSet:
        """Run all five methods.

        Methods run one after another; results do not depend on the order.
        The most recent results are cached per fleet, profile and config.

        Args:
            f: Fleet
            p: Load profile
            mean_kw: Optional mean override for the online policy

        Returns:
            (plans keyed by method name, best order, worst order)
        """
        key = (fleet_hash(f), profile_hash(p), digest(self.config.to_dict()), mean_kw)
        if key in self._plan_cache:
            logger.debug(f"Reusing plans for fleet {key[0]} / profile {key[1]}")
            self._plan_cache.move_to_end(key)
            return self._plan_cache[key]

        cfg = self.config
        (best_order, best), (worst_order, worst) = fixed_order_extremes(
            f, p, cfg.tolerance_kw, cfg.max_permutation_fleet
        )
        plans = {
            'worst_fixed_order': worst,
            'best_fixed_order': best,
            'static_cs': static_trajectory(f, p, cfg.tolerance_kw),
            'online_ls': online_shift(f, p, mean_kw, cfg.tolerance_kw),
            'optimal_ls': optimal_shift(f, p, config=cfg),
        }

        result = (plans, str(best_order), str(worst_order))
        self._plan_cache[key] = result
        if len(self._plan_cache) > MAX_CACHED_PLANS:
            self._plan_cache.popitem(last=False)
        return result

    def compare(
        self,
        f: Fleet,
        p: LoadProfile,
        mean_kw: Optional[float] = None,
    ) -> ComparisonReport:
        """Average power of every method, with savings against static sequencing.

        Raises:
            DominanceError: the method costs break the dominance chain
            InfeasibleStageError: the profile cannot be served
        """
        plans, best_order, worst_order = self.plans(f, p, mean_kw)
        avg = {name: plans[name].avg_power for name in METHOD_NAMES}

        static = avg['static_cs']
        savings = {
            name: (100.0 * (static - avg[name]) / static if static > 0 else 0.0)
            for name in METHOD_NAMES
        }

        report = ComparisonReport(
            avg_power=avg,
            savings_vs_static=savings,
            best_order=best_order,
            worst_order=worst_order,
            fleet_hash=fleet_hash(f),
            profile_hash=profile_hash(p),
            tolerance_kw=self.tolerance(f),
            schema_version=SCHEMA_VERSION,
        )
        self.check_dominance(report)

        for plan in plans.values():
            violations = plan.cumulative_violations(self.config.tolerance_kw)
            if violations:
                raise DominanceError(
                    f"plan '{plan.label}' falls behind demand at stages {violations[:10]}"
                )

        logger.info(
            f"Compared {len(p)} stages: static {static:.2f} kW, "
            f"optimal LS {avg['optimal_ls']:.2f} kW, online LS {avg['online_ls']:.2f} kW"
        )
        return report

    def tolerance(self, f: Fleet) -> float:
        """Slack allowed in the dominance chain: kW tolerance plus one DP grid cell."""
        return self.config.tolerance_kw + dp_slack(f, self.config.surplus_step)

    def check_dominance(self, report: ComparisonReport) -> None:
        """Verify worst ≥ best ≥ static ≥ optimal LS and online ≥ optimal LS.

        Raises:
            DominanceError: a link of the chain fails by more than the tolerance
        """
        avg = report.avg_power
        tol = report.tolerance_kw
        links = [
            ('worst_fixed_order', 'best_fixed_order'),
            ('best_fixed_order', 'static_cs'),
            ('static_cs', 'optimal_ls'),
            ('online_ls', 'optimal_ls'),
        ]
        for upper, lower in links:
            if avg[upper] < avg[lower] - tol:
                raise DominanceError(
                    f"{upper} ({avg[upper]:.6f} kW) is below {lower} "
                    f"({avg[lower]:.6f} kW) by more than {tol:.6g} kW"
                )
