"""Static compressor sequencing: exact single-instant optimum and fixed-order analysis.

The exact solver enumerates on-sets. Within an on-set every machine starts at
q_min and the remaining demand is filled cheapest-marginal-slope first, so at
most one machine ends strictly inside its window. The best on-set is the
global optimum of the non-convex problem, and a water-fill order that
reproduces it is returned with it.
"""

import functools
import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import ColdSeqConfig
from .context import Assignment, StaticSolution
from .errors import ParameterError, SearchSpaceError
from .fleet import Compressor, Fleet, SequencingOrder, TOLERANCE_KW, power_at
from .waterfill import assignment_cost, check_demand, waterfill

logger = logging.getLogger(__name__)

COST_TIE_KW = 1e-9
MAX_PERMUTATION_FLEET = 8
FRONTIER_CHUNK = 2_000_000


@dataclass(frozen=True)
class _Candidate:
    """Best dispatch of one on-set."""

    on_ids: Tuple[str, ...]
    loads: Dict[str, float]
    cost: float
    trim_id: Optional[str]

    def rank(self, fleet: Fleet) -> Tuple[int, Tuple[int, ...]]:
        """Tie-break key: fewer machines, then canonical positions."""
        return len(self.on_ids), tuple(fleet.index(cid) for cid in self.on_ids)


def _solve_on_set(
    members: Sequence[Compressor],
    q_in: float,
    tolerance: float,
) -> Optional[_Candidate]:
    """Cheapest loads for a fixed set of running machines, or None if infeasible."""
    capacity = sum(c.q_max for c in members)
    if q_in > capacity + tolerance:
        return None

    loads = {c.id: c.q_min for c in members}
    need = q_in - sum(c.q_min for c in members)
    trim_id = None

    # Stable sort keeps canonical order among equal slopes.
    for c in sorted(members, key=lambda m: m.slope):
        if need <= tolerance:
            break
        add = min(c.trim_range, need)
        loads[c.id] += add
        need -= add
        if add < c.trim_range - tolerance:
            trim_id = c.id

    cost = sum(power_at(c, loads[c.id], tolerance) for c in members)
    return _Candidate(tuple(c.id for c in members), loads, cost, trim_id)


def _realizing_order(
    f: Fleet,
    candidate: _Candidate,
    q_in: float,
    tolerance: float,
) -> SequencingOrder:
    """A complete order whose water fill reproduces the candidate's cost.

    Tries full machines first, then the trim machine, then machines at q_min,
    then the off machines. Falls back to searching every permutation.
    """
    loads = candidate.loads
    full = [cid for cid in f.ids if cid in loads and loads[cid] >= f.get(cid).q_max - tolerance]
    trim = [candidate.trim_id] if candidate.trim_id and candidate.trim_id not in full else []
    floor = [cid for cid in f.ids if cid in loads and cid not in full and cid not in trim]
    off = [cid for cid in f.ids if cid not in loads]

    structured = SequencingOrder(tuple(full + trim + floor + off))
    if _reproduces(f, structured, q_in, candidate.cost, tolerance):
        return structured

    logger.debug(f"Structured order {structured} does not realize the optimum; searching")
    for perm in itertools.permutations(f.ids):
        order = SequencingOrder(perm)
        if _reproduces(f, order, q_in, candidate.cost, tolerance):
            return order

    logger.warning(
        f"No water-fill order reproduces the optimum at q_in={q_in}; "
        f"returning {structured}"
    )
    return structured


def _reproduces(
    f: Fleet,
    order: SequencingOrder,
    q_in: float,
    cost: float,
    tolerance: float,
) -> bool:
    return abs(assignment_cost(f, waterfill(f, order, q_in, tolerance), tolerance) - cost) <= 1e-6


def optimal_static(
    f: Fleet,
    q_in: float,
    tolerance: float = TOLERANCE_KW,
) -> StaticSolution:
    """Exact minimum-power dispatch of ``q_in``.

    Solves min Σ P_c(q_c) subject to Σ q_c >= q_in and q_c ∈ {0} ∪ [q_min, q_max].
    Ties go to fewer running machines, then to canonical order.

    Args:
        f: Fleet
        q_in: Demand (kW)
        tolerance: Feasibility slack (kW)

    Returns:
        StaticSolution with the optimal assignment, its cost and a realizing order

    Raises:
        DomainError: negative demand
        InfeasibleDemandError: demand above total capacity
    """
    check_demand(f, q_in, tolerance)

    if q_in <= tolerance:
        return StaticSolution(Assignment.all_off(f), 0.0, f.canonical_order())

    best: Optional[_Candidate] = None
    for size in range(1, len(f) + 1):
        for members in itertools.combinations(f.compressors, size):
            candidate = _solve_on_set(members, q_in, tolerance)
            if candidate is None:
                continue
            if best is None or candidate.cost < best.cost - COST_TIE_KW or (
                abs(candidate.cost - best.cost) <= COST_TIE_KW
                and candidate.rank(f) < best.rank(f)
            ):
                best = candidate

    assert best is not None  # check_demand guarantees the full fleet is feasible

    loads = {cid: best.loads.get(cid, 0.0) for cid in f.ids}
    order = _realizing_order(f, best, q_in, tolerance)
    logger.debug(f"optimal_static q_in={q_in}: cost={best.cost:.6f} order={order}")
    return StaticSolution(Assignment(loads), float(best.cost), order)


def lipschitz_slack(f: Fleet, grid_step: float) -> float:
    """Worst-case cost excess of a grid search: max slope × grid_step × fleet size."""
    return max(c.slope for c in f) * grid_step * len(f)


@dataclass(frozen=True)
class _Frontier:
    """Pareto frontier of (total load, cost) over gridded dispatches.

    Points are sorted by total ascending with cost strictly increasing, so the
    cheapest dispatch covering a demand is the first point whose total reaches it.
    """

    totals: np.ndarray
    costs: np.ndarray
    loads: np.ndarray  # points × machines


def _machine_grid(c: Compressor, grid_step: float) -> np.ndarray:
    """{0} ∪ grid over [q_min, q_max] with both endpoints."""
    inner = c.q_min + grid_step * np.arange(1, int(np.floor(c.trim_range / grid_step)) + 1)
    inner = inner[inner < c.q_max - 1e-9]
    return np.concatenate(([0.0, c.q_min], inner, [c.q_max]))


def _machine_cost(c: Compressor, grid: np.ndarray) -> np.ndarray:
    cost = c.p_min + (grid - c.q_min) * c.slope
    return np.where(grid > 0, cost, 0.0)


def _prune(totals: np.ndarray, costs: np.ndarray) -> np.ndarray:
    """Indices of the Pareto-efficient points, sorted by total ascending."""
    order = np.lexsort((costs, -totals))
    sorted_costs = costs[order]
    prior_min = np.minimum.accumulate(np.concatenate(([np.inf], sorted_costs[:-1])))
    keep = order[sorted_costs < prior_min - COST_TIE_KW]
    return keep[::-1]


@functools.lru_cache(maxsize=32)
def _grid_frontier(f: Fleet, grid_step: float, max_points: int) -> _Frontier:
    """Exhaustive search over every on/off subset and load grid, with dominance pruning.

    Each combination step is pruned in row chunks of at most FRONTIER_CHUNK
    candidates; the union of the chunk frontiers is pruned once more.
    """
    totals = np.zeros(1)
    costs = np.zeros(1)
    loads = np.zeros((1, 0))

    for c in f:
        grid = _machine_grid(c, grid_step)
        machine_cost = _machine_cost(c, grid)
        batch = totals.size * grid.size
        if batch > max_points:
            raise SearchSpaceError(
                f"grid search would examine {batch} points at compressor {c.id} "
                f"(limit {max_points}); use a coarser grid_step"
            )

        rows = max(1, FRONTIER_CHUNK // grid.size)
        parents, choices = [], []
        for start in range(0, totals.size, rows):
            stop = min(start + rows, totals.size)
            cand_totals = (totals[start:stop, None] + grid[None, :]).ravel()
            cand_costs = (costs[start:stop, None] + machine_cost[None, :]).ravel()
            parent, choice = np.divmod(_prune(cand_totals, cand_costs), grid.size)
            parents.append(parent + start)
            choices.append(choice)

        parent = np.concatenate(parents)
        choice = np.concatenate(choices)
        cand_totals = totals[parent] + grid[choice]
        cand_costs = costs[parent] + machine_cost[choice]
        keep = _prune(cand_totals, cand_costs)

        loads = np.column_stack((loads[parent[keep]], grid[choice[keep]]))
        totals = cand_totals[keep]
        costs = cand_costs[keep]

    logger.debug(f"Grid frontier for step {grid_step}: {totals.size} points")
    return _Frontier(totals, costs, loads)


def brute_oracle(
    f: Fleet,
    q_in: float,
    grid_step: float,
    tolerance: float = TOLERANCE_KW,
    max_points: Optional[int] = None,
) -> StaticSolution:
    """Grid search for the static optimum, independent of the structural solver.

    Every machine may be off or at any grid load in its window (endpoints always
    included). The search combines machines one at a time and drops partial
    dispatches that are dominated (less total for at least the same cost), so
    the result is the exact optimum over the grid. It lies within
    ``lipschitz_slack(f, grid_step)`` of the true optimum.

    Raises:
        ParameterError: grid_step <= 0
        InfeasibleDemandError: demand above total capacity
        SearchSpaceError: a combination step exceeds ``max_points`` candidates
            (default: ColdSeqConfig.max_oracle_points)
    """
    if max_points is None:
        max_points = ColdSeqConfig().max_oracle_points
    if grid_step <= 0:
        raise ParameterError(f"grid_step must be positive, got {grid_step}")
    check_demand(f, q_in, tolerance)

    frontier = _grid_frontier(f, float(grid_step), int(max_points))
    idx = int(np.searchsorted(frontier.totals, q_in - tolerance, side='left'))
    row = frontier.loads[idx]
    loads = {cid: float(row[i]) for i, cid in enumerate(f.ids)}

    # Heavier machines first, the order a water fill would need.
    order = SequencingOrder(tuple(sorted(f.ids, key=lambda cid: (-loads[cid], f.index(cid)))))
    return StaticSolution(Assignment(loads), float(frontier.costs[idx]), order)


def all_orders(f: Fleet, max_fleet: int = MAX_PERMUTATION_FLEET) -> List[SequencingOrder]:
    """Every complete order of the fleet, lexicographic by id.

    Raises:
        SearchSpaceError: fleet larger than ``max_fleet``
    """
    if len(f) > max_fleet:
        raise SearchSpaceError(
            f"refusing to enumerate {len(f)}! orders; fleets are limited to {max_fleet} machines"
        )
    return [SequencingOrder(p) for p in itertools.permutations(sorted(f.ids))]


def fixed_order_costs(
    f: Fleet,
    q_in: float,
    tolerance: float = TOLERANCE_KW,
    max_fleet: int = MAX_PERMUTATION_FLEET,
) -> List[Tuple[SequencingOrder, float]]:
    """Water-fill cost of ``q_in`` under every complete order, cheapest first.

    Ties are broken lexicographically by order.
    """
    check_demand(f, q_in, tolerance)
    results = [
        (order, assignment_cost(f, waterfill(f, order, q_in, tolerance), tolerance))
        for order in all_orders(f, max_fleet)
    ]
    results.sort(key=lambda item: (item[1], item[0].ids))
    return results


def _sweep(q_lo: float, q_hi: float, step: float) -> np.ndarray:
    if step <= 0:
        raise ParameterError(f"step must be positive, got {step}")
    if not q_lo < q_hi:
        raise ParameterError(f"need q_lo < q_hi, got [{q_lo}, {q_hi}]")
    count = int(np.floor((q_hi - q_lo) / step + 1e-9)) + 1
    grid = q_lo + step * np.arange(count)
    if grid[-1] < q_hi - 1e-9:
        grid = np.append(grid, q_hi)
    return grid


def fixed_order_gap_curve(
    f: Fleet,
    q_lo: float,
    q_hi: float,
    step: float,
    tolerance: float = TOLERANCE_KW,
    max_fleet: int = MAX_PERMUTATION_FLEET,
) -> Dict[str, np.ndarray]:
    """Best and worst fixed-order cost across a demand sweep.

    Returns:
        Dict of arrays: 'q_in', 'best', 'worst', and 'gap' = (worst - best) / best
    """
    from .stage_costs.fixed_order import FixedOrderStageCost

    grid = _sweep(q_lo, q_hi, step)
    check_demand(f, float(grid[-1]), tolerance)
    check_demand(f, float(grid[0]), tolerance)

    costs = np.vstack([
        FixedOrderStageCost(f, order, tolerance)(grid) for order in all_orders(f, max_fleet)
    ])
    best = costs.min(axis=0)
    worst = costs.max(axis=0)
    with np.errstate(divide='ignore', invalid='ignore'):
        gap = np.where(best > 0, (worst - best) / best, 0.0)

    logger.info(f"Fixed-order gap sweep over {grid.size} loads: max gap {gap.max():.4f}")
    return {'q_in': grid, 'best': best, 'worst': worst, 'gap': gap}


def order_partition(
    f: Fleet,
    q_lo: float,
    q_hi: float,
    step: float,
    tolerance: float = TOLERANCE_KW,
) -> List[Tuple[Tuple[float, float], SequencingOrder]]:
    """Demand intervals sharing the same optimal realizing order.

    Sweeps q_in over [q_lo, q_hi] at ``step`` and merges adjacent grid points
    whose optimal_static realizing order is identical.

    Returns:
        List of ((first q_in, last q_in), order) in increasing demand
    """
    grid = _sweep(q_lo, q_hi, step)
    intervals: List[Tuple[Tuple[float, float], SequencingOrder]] = []

    for q in grid:
        order = optimal_static(f, float(q), tolerance).realizing_order
        if intervals and intervals[-1][1] == order:
            (lo, _), _ = intervals[-1]
            intervals[-1] = ((lo, float(q)), order)
        else:
            intervals.append(((float(q), float(q)), order))

    logger.info(f"Order partition over [{q_lo}, {q_hi}]: {len(intervals)} intervals")
    return intervals
