"""Online load shifting and capacity-distribution reporting.

The online policy never trims. Each stage it adds the new demand to an
unmet-demand accumulator, targets max(accumulator, profile mean), and switches
machines on at full capacity in shift order until the target is covered.
Overshoot is banked as a negative accumulator and used up in later stages.
"""

import logging
from typing import Dict, Optional

import numpy as np

from .context import Assignment, CapacityShare, LoadProfile, ShiftPlan
from .errors import ParameterError
from .fleet import Fleet, TOLERANCE_KW, shift_order
from .waterfill import total_capacity

logger = logging.getLogger(__name__)


def online_shift(
    f: Fleet,
    p: LoadProfile,
    mean_kw: Optional[float] = None,
    tolerance: float = TOLERANCE_KW,
) -> ShiftPlan:
    """Run the online load-shifting heuristic over a profile.

    Args:
        f: Fleet
        p: Load profile
        mean_kw: Expected mean load; defaults to the profile's own mean. Pass
            a forecast here to run the policy without hindsight.
        tolerance: Slack for the activation test (kW)

    Returns:
        ShiftPlan labelled 'online_ls' whose machines are only off or at q_max

    Raises:
        ParameterError: mean_kw negative or above total capacity

    Example:
        >>> plan = online_shift(butterball, LoadProfile.constant(3000, 24))
        >>> plan.assignments[0].loads['C1']
        3000.0
    """
    capacity = total_capacity(f)
    mean = p.mean() if mean_kw is None else float(mean_kw)
    if mean < 0 or mean > capacity + tolerance:
        raise ParameterError(f"mean load must be within [0, {capacity}] kW, got {mean}")
    if mean_kw is not None:
        logger.info(f"online_shift: using supplied mean {mean:.3f} kW (profile mean {p.mean():.3f})")

    order = shift_order(f)
    machines = [f.get(cid) for cid in order]

    unmet = 0.0
    shifted = np.zeros(len(p))
    assignments = []
    for k, q_in in enumerate(p.loads):
        unmet += q_in
        target = max(unmet, mean)
        loads = {cid: 0.0 for cid in f.ids}

        for c in machines:
            if target <= tolerance:
                break
            loads[c.id] = c.q_max
            target -= c.q_max
            unmet -= c.q_max

        if target > tolerance:
            logger.warning(f"online_shift: stage {k} target exceeds fleet capacity by {target:.3f} kW")

        shifted[k] = sum(loads.values())
        assignments.append(Assignment(loads))

    if -unmet > capacity:
        logger.warning(
            f"online_shift: plan ends with {-unmet:.1f} kW·stage of banked surplus, "
            f"more than one stage of total capacity"
        )

    power = np.array([a.cost(f, tolerance) for a in assignments])
    plan = ShiftPlan(p.loads.copy(), shifted, tuple(assignments), power, 'online_ls')
    logger.info(f"online_shift: avg_power={plan.avg_power:.4f} kW")
    return plan


def capacity_distribution(
    plan: ShiftPlan,
    f: Fleet,
    threshold: float = 0.99,
    tolerance: float = TOLERANCE_KW,
) -> Dict[str, CapacityShare]:
    """Share of stages each machine spends off, in trim, and at full capacity.

    A load above ``threshold``·q_max counts as full; any other nonzero load,
    q_min included, counts as trim.
    """
    if not 0 < threshold <= 1:
        raise ParameterError(f"threshold must be in (0, 1], got {threshold}")

    stages = max(len(plan), 1)
    shares = {}
    for c in f:
        q = np.array([a.loads.get(c.id, 0.0) for a in plan.assignments])
        off = int(np.count_nonzero(q <= tolerance))
        full = int(np.count_nonzero(q > threshold * c.q_max))
        trim = len(q) - off - full
        shares[c.id] = CapacityShare(off / stages, trim / stages, full / stages)
    return shares
