"""Fixed-order water filling and assignment costing.

Water filling is the industry-standard dispatch: walk a fixed order turning
machines on at full capacity until demand is covered, then walk the order
backwards trimming running machines toward q_min until the surplus is gone.
"""

import logging
from typing import Dict, Iterable

from .context import Assignment
from .errors import DomainError, InfeasibleDemandError
from .fleet import Fleet, SequencingOrder, TOLERANCE_KW, power_at

logger = logging.getLogger(__name__)


def total_capacity(f: Fleet) -> float:
    """Sum of q_max over the fleet."""
    return float(sum(c.q_max for c in f))


def min_turn_on(f: Fleet) -> float:
    """Smallest q_min in the fleet."""
    return float(min(c.q_min for c in f))


def check_demand(f: Fleet, q_in: float, tolerance: float = TOLERANCE_KW) -> None:
    """Reject negative demand and demand above total capacity.

    Raises:
        DomainError: q_in < 0
        InfeasibleDemandError: q_in > total capacity (carries the shortfall)
    """
    if q_in < -tolerance:
        raise DomainError(f"demand must be non-negative, got {q_in} kW")

    capacity = total_capacity(f)
    if q_in > capacity + tolerance:
        shortfall = q_in - capacity
        raise InfeasibleDemandError(
            f"demand {q_in} kW exceeds total fleet capacity {capacity} kW "
            f"(shortfall {shortfall:.6g} kW)",
            shortfall_kw=shortfall,
        )


def waterfill(
    f: Fleet,
    order: Iterable[str],
    q_in: float,
    tolerance: float = TOLERANCE_KW,
) -> Assignment:
    """Dispatch ``q_in`` by water filling in ``order``.

    The first pass turns machines on at q_max while demand exceeds the running
    total. The second pass walks the order in reverse and trims each running
    machine by min(q_max - q_min, surplus). Below the first machine's q_min the
    result overshoots demand; that machine stays at q_min.

    Args:
        f: Fleet
        order: Order over every fleet id
        q_in: Demand (kW)
        tolerance: Slack used in the demand comparisons

    Returns:
        Assignment with total >= q_in

    Raises:
        DomainError: negative demand
        InfeasibleDemandError: demand above total capacity

    Example:
        >>> waterfill(butterball, ['C1', 'C2', 'C3', 'C4'], 3100).loads
        {'C1': 2861.0, 'C2': 239.0, 'C3': 0.0, 'C4': 0.0}
    """
    sequence: SequencingOrder = f.order(order, complete=True)
    check_demand(f, q_in, tolerance)

    loads: Dict[str, float] = {cid: 0.0 for cid in f.ids}
    q_tot = 0.0

    for cid in sequence:
        if q_in > q_tot + tolerance:
            loads[cid] = f.get(cid).q_max
            q_tot += loads[cid]

    for cid in reversed(sequence.ids):
        if q_in <= q_tot + tolerance and loads[cid] != 0:
            c = f.get(cid)
            d = max(0.0, min(c.q_max - c.q_min, q_tot - q_in))
            loads[cid] -= d
            q_tot -= d

    return Assignment(loads)


def assignment_cost(f: Fleet, a: Assignment, tolerance: float = TOLERANCE_KW) -> float:
    """Total electrical power of an assignment, the sum of P_c(q_c).

    Raises:
        DomainError: a load outside its compressor's window
    """
    return float(sum(power_at(c, a.loads.get(c.id, 0.0), tolerance) for c in f))


def waterfill_cost(
    f: Fleet,
    order: Iterable[str],
    q_in: float,
    tolerance: float = TOLERANCE_KW,
) -> float:
    """Cost of the water-fill dispatch of ``q_in`` under ``order``."""
    return assignment_cost(f, waterfill(f, order, q_in, tolerance), tolerance)
