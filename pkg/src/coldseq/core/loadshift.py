"""Compressor sequencing with load shifting.

Load shifting lets the plant serve cooling early and bank it in the product,
subject to cumulative feasibility: shifted service may lead demand but never
lag it. ``optimal_shift`` solves the problem as a dynamic program over the
banked surplus s(k) = Σ_{j<=k} (q_sh(j) - q_in(j)).

Backward pass: on a grid of surplus states per stage the value function is

    V_k(s) = min_b  g(b) + V_{k+1}(s + b - q_in(k))

with V_{k+1} interpolated linearly between grid states. The forward pass
replays the decisions from the exact (unrounded) surplus, so every returned
plan is cumulative-feasible without rounding error.
"""

import logging
from dataclasses import replace
from typing import Iterable, List, Optional, Tuple

import numpy as np

from .config import ColdSeqConfig
from .context import Assignment, LoadProfile, ShiftPlan
from .errors import InfeasibleStageError, ParameterError, SearchSpaceError, SurplusCapError
from .fleet import Compressor, Fleet, SequencingOrder, TOLERANCE_KW
from .stage_costs import FixedOrderStageCost, StageCost, get_stage_cost
from .static import all_orders, optimal_static
from .waterfill import total_capacity

logger = logging.getLogger(__name__)


def infeasible_stages(f: Fleet, p: LoadProfile, tolerance: float = TOLERANCE_KW) -> List[int]:
    """Stages whose cumulative demand exceeds what the fleet can deliver by then."""
    capacity = total_capacity(f)
    reachable = capacity * np.arange(1, len(p) + 1)
    return [int(k) for k in np.flatnonzero(p.cumulative() > reachable + tolerance)]


def required_carry(f: Fleet, p: LoadProfile) -> np.ndarray:
    """Minimum surplus that must be banked on entering each stage.

    Entry k is the carry-in needed for stages k..T; the extra last entry is 0.
    """
    capacity = total_capacity(f)
    carry = np.zeros(len(p) + 1)
    for k in range(len(p) - 1, -1, -1):
        carry[k] = max(0.0, p.loads[k] - capacity + carry[k + 1])
    return carry


def surplus_cap_kw(f: Fleet, p: LoadProfile, cap_hours: float) -> float:
    """Surplus cap in kW·stage: ``cap_hours`` of total capacity."""
    return cap_hours * 60.0 / p.step_minutes * total_capacity(f)


def _state_grid(low: float, high: float, step: float) -> np.ndarray:
    count = int(np.floor((high - low) / step + 1e-9)) + 1
    grid = low + step * np.arange(count)
    if high - grid[-1] > 1e-9:
        grid = np.append(grid, high)
    return grid


def _decision_set(
    stage_cost: StageCost,
    capacity: float,
    step: float,
    mode: str,
) -> np.ndarray:
    if mode == 'grid':
        base = _state_grid(0.0, capacity, step)
    else:
        base = stage_cost.breakpoints()
    return np.unique(base[base <= capacity + 1e-9])


def _check_servable(f: Fleet, p: LoadProfile, tolerance: float) -> None:
    stages = infeasible_stages(f, p, tolerance)
    if stages:
        k = stages[0]
        shortfall = float(p.cumulative()[k] - total_capacity(f) * (k + 1))
        raise InfeasibleStageError(
            f"profile cannot be served even with maximal pre-cooling; first infeasible "
            f"stage {k} (shortfall {shortfall:.6g} kW·stage); stages {stages[:10]}",
            stages=stages,
            shortfall_kw=shortfall,
        )


def _evaluate(
    stage_cost: StageCost,
    surplus: np.ndarray,
    decisions: np.ndarray,
    q_in: float,
    need_after: float,
    cap: float,
    capacity: float,
    next_grid: Optional[np.ndarray],
    next_value: Optional[np.ndarray],
    base_cost: np.ndarray,
    tolerance: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Total cost of each (state, decision) pair and the decisions used.

    Candidates are the fixed decision set plus, per state, the surplus-clearing
    load and the unshifted load.
    """
    clearing = np.clip(q_in + need_after - surplus, 0.0, capacity)
    unshifted = np.full(surplus.shape, min(q_in, capacity))

    b = np.column_stack((
        unshifted,
        clearing,
        np.broadcast_to(decisions, (surplus.size, decisions.size)),
    ))
    g = np.column_stack((
        stage_cost(unshifted),
        stage_cost(clearing),
        np.broadcast_to(base_cost, (surplus.size, decisions.size)),
    ))

    after = surplus[:, None] + b - q_in
    feasible = (after >= need_after - tolerance) & (after <= cap + tolerance)

    if next_grid is None:
        future = np.zeros(after.shape)
    else:
        future = np.interp(after, next_grid, next_value)

    total = np.where(feasible, g + future, np.inf)
    return total, b


def optimal_shift(
    f: Fleet,
    p: LoadProfile,
    surplus_step: Optional[float] = None,
    *,
    stage_policy: Optional[str] = None,
    decision_mode: Optional[str] = None,
    surplus_cap: Optional[float] = None,
    config: Optional[ColdSeqConfig] = None,
) -> ShiftPlan:
    """Minimum-average-power load-shifting plan.

    Args:
        f: Fleet
        p: Load profile q_in(0..T)
        surplus_step: Surplus grid step (kW·stage); defaults to the config's
        stage_policy: 'fixed_order' (water fill in shift order) or 'optimal'
        decision_mode: 'breakpoints' or 'grid'
        surplus_cap: Cap on banked surplus (kW·stage); defaults to
            config.surplus_cap_hours of total capacity
        config: Base configuration; keyword arguments override it

    Returns:
        ShiftPlan labelled 'optimal_ls'

    Raises:
        InfeasibleStageError: some prefix of the profile needs more cooling than
            the fleet can deliver by then
        SurplusCapError: the profile needs more banked surplus than the cap
        ParameterError: the DP grid exceeds config.max_dp_cells
    """
    cfg = (config or ColdSeqConfig()).with_overrides(
        surplus_step=surplus_step,
        stage_policy=stage_policy,
        decision_mode=decision_mode,
    )
    tol = cfg.tolerance_kw
    step = cfg.surplus_step

    _check_servable(f, p, tol)

    capacity = total_capacity(f)
    cap = surplus_cap if surplus_cap is not None else surplus_cap_kw(f, p, cfg.surplus_cap_hours)
    need = required_carry(f, p)
    if need.max() > cap + tol:
        raise SurplusCapError(
            f"profile needs {need.max():.6g} kW·stage of banked surplus but the cap is "
            f"{cap:.6g}; raise surplus_cap_hours",
            required_cap=float(need.max()),
        )

    # Useful surplus entering stage k is bounded by the cap, by the demand still
    # to come and by what the fleet could have banked so far.
    remaining = np.cumsum(p.loads[::-1])[::-1]
    banked = capacity * np.arange(len(p)) - np.concatenate(([0.0], p.cumulative()[:-1]))
    upper = np.maximum(need[:-1], np.minimum.reduce([np.full(len(p), cap), remaining, banked]))
    grids = [_state_grid(need[k], upper[k], step) for k in range(len(p))]
    cells = sum(g.size for g in grids)
    if cells > cfg.max_dp_cells:
        raise ParameterError(
            f"load-shifting DP needs {cells} surplus states (limit {cfg.max_dp_cells}); "
            f"use a coarser surplus_step than {step}"
        )

    stage_cost = get_stage_cost(f, cfg.stage_policy, tolerance=tol)
    decisions = _decision_set(stage_cost, capacity, step, cfg.decision_mode)
    base_cost = stage_cost(decisions)

    logger.info(
        f"optimal_shift: {len(p)} stages, {cells} states, {decisions.size} decisions, "
        f"policy={cfg.stage_policy}, mode={cfg.decision_mode}"
    )

    values: List[Optional[np.ndarray]] = [None] * (len(p) + 1)
    for k in range(len(p) - 1, -1, -1):
        total, _ = _evaluate(
            stage_cost, grids[k], decisions, float(p.loads[k]), float(need[k + 1]), cap,
            capacity, grids[k + 1] if k + 1 < len(p) else None, values[k + 1], base_cost, tol,
        )
        values[k] = total.min(axis=1)

    shifted = np.zeros(len(p))
    surplus = 0.0
    for k in range(len(p)):
        total, b = _evaluate(
            stage_cost, np.array([surplus]), decisions, float(p.loads[k]), float(need[k + 1]),
            cap, capacity, grids[k + 1] if k + 1 < len(p) else None, values[k + 1], base_cost, tol,
        )
        choice = int(np.argmin(total[0]))
        shifted[k] = b[0, choice]
        surplus = max(surplus + shifted[k] - p.loads[k], 0.0)

    plan = _plan_from_shifted(f, p, shifted, stage_cost, tol, label='optimal_ls')

    # Serving every stage as it comes is always feasible when no stage exceeds
    # capacity; a shifted plan must never cost more than that.
    if p.loads.max() <= capacity + tol:
        unshifted = static_trajectory(f, p, tol)
        if unshifted.avg_power < plan.avg_power:
            logger.info(
                f"optimal_shift: unshifted plan ({unshifted.avg_power:.4f} kW) beats the "
                f"{cfg.stage_policy} DP plan ({plan.avg_power:.4f} kW)"
            )
            plan = replace(unshifted, label='optimal_ls')

    logger.info(f"optimal_shift: avg_power={plan.avg_power:.4f} kW")
    return plan


def _plan_from_shifted(
    f: Fleet,
    p: LoadProfile,
    shifted: np.ndarray,
    stage_cost: StageCost,
    tolerance: float,
    label: str,
) -> ShiftPlan:
    cache = {}
    assignments: List[Assignment] = []
    for q in shifted:
        key = float(q)
        if key not in cache:
            cache[key] = stage_cost.assignment(key)
        assignments.append(cache[key])

    power = np.array([a.cost(f, tolerance) for a in assignments])
    return ShiftPlan(p.loads.copy(), np.asarray(shifted, dtype=float), tuple(assignments), power, label)


def dp_slack(f: Fleet, surplus_step: float) -> float:
    """Average-power error budget of one surplus grid cell.

    Bounded by the most expensive cooling per kW (p_min/q_min) times the step.
    """
    return max(c.min_load_cost_ratio for c in f) * surplus_step


def tiny_oracle(
    f: Fleet,
    p: LoadProfile,
    grid_step: float,
    stage_policy: str = 'optimal',
    max_points: Optional[int] = None,
    tolerance: float = TOLERANCE_KW,
) -> ShiftPlan:
    """Exhaustive search over gridded shifted-load trajectories.

    Every stage may serve any multiple of ``grid_step`` up to total capacity.
    Trajectories that fall behind demand, or can no longer catch up, are
    pruned as they are built. Meant for a handful of stages and one or two
    machines.

    Raises:
        ParameterError: grid_step <= 0
        InfeasibleStageError: the profile cannot be served at all
        SearchSpaceError: more than ``max_points`` trajectories (default:
            ColdSeqConfig.max_oracle_points)
    """
    if max_points is None:
        max_points = ColdSeqConfig().max_oracle_points
    if grid_step <= 0:
        raise ParameterError(f"grid_step must be positive, got {grid_step}")
    _check_servable(f, p, tolerance)

    capacity = total_capacity(f)
    options = _state_grid(0.0, capacity, grid_step)
    options = options[np.abs(options / grid_step - np.round(options / grid_step)) < 1e-9]
    space = float(options.size) ** len(p)
    if space > max_points:
        raise SearchSpaceError(
            f"tiny_oracle would enumerate {space:.3g} trajectories (limit {max_points})"
        )

    stage_cost = get_stage_cost(f, stage_policy, tolerance=tolerance)
    option_cost = stage_cost(options)
    need = required_carry(f, p)

    surplus = np.zeros(1)
    cost = np.zeros(1)
    history = np.zeros((1, 0), dtype=int)
    for k in range(len(p)):
        after = (surplus[:, None] + options[None, :] - p.loads[k]).ravel()
        keep = np.flatnonzero(after >= need[k + 1] - tolerance)
        parent, choice = np.divmod(keep, options.size)
        surplus = after[keep]
        cost = cost[parent] + option_cost[choice]
        history = np.column_stack((history[parent], choice))

    # argmin returns the first minimum, the lexicographically smallest trajectory
    best = int(np.argmin(cost))
    shifted = options[history[best]]
    logger.debug(f"tiny_oracle: {cost.size} feasible trajectories, best {cost[best]:.6f}")
    return _plan_from_shifted(f, p, shifted, stage_cost, tolerance, label='tiny_oracle')


def static_trajectory(f: Fleet, p: LoadProfile, tolerance: float = TOLERANCE_KW) -> ShiftPlan:
    """Optimal sequencing without load shifting, q_sh = q_in.

    Raises:
        InfeasibleStageError: some stage exceeds total capacity
    """
    check_stage_capacity(f, p, tolerance)

    cache = {}
    assignments = []
    for q in p.loads:
        key = float(q)
        if key not in cache:
            cache[key] = optimal_static(f, key, tolerance)
        assignments.append(cache[key].assignment)

    power = np.array([a.cost(f, tolerance) for a in assignments])
    return ShiftPlan(p.loads.copy(), p.loads.copy(), tuple(assignments), power, 'static_cs')


def fixed_order_trajectory(
    f: Fleet,
    p: LoadProfile,
    order: Iterable[str],
    tolerance: float = TOLERANCE_KW,
    label: str = 'fixed_order',
) -> ShiftPlan:
    """Water filling under one order at every stage, without shifting.

    Raises:
        InfeasibleStageError: some stage exceeds total capacity
    """
    check_stage_capacity(f, p, tolerance)
    stage_cost = FixedOrderStageCost(f, order, tolerance)
    return _plan_from_shifted(f, p, p.loads.copy(), stage_cost, tolerance, label)


def check_stage_capacity(f: Fleet, p: LoadProfile, tolerance: float = TOLERANCE_KW) -> None:
    """Raise InfeasibleStageError when any stage exceeds total capacity."""
    capacity = total_capacity(f)
    over = [int(k) for k in np.flatnonzero(p.loads > capacity + tolerance)]
    if over:
        raise InfeasibleStageError(
            f"stages {over[:10]} demand more than total capacity {capacity} kW",
            stages=over,
            shortfall_kw=float(p.loads[over[0]] - capacity),
        )


def fixed_order_extremes(
    f: Fleet,
    p: LoadProfile,
    tolerance: float = TOLERANCE_KW,
    max_fleet: int = 8,
) -> Tuple[Tuple[SequencingOrder, ShiftPlan], Tuple[SequencingOrder, ShiftPlan]]:
    """Best and worst single fixed order applied over the whole profile.

    Ties go to the lexicographically smallest order.

    Returns:
        ((best order, plan), (worst order, plan)); plans are labelled
        'best_fixed_order' and 'worst_fixed_order'
    """
    check_stage_capacity(f, p, tolerance)
    orders = all_orders(f, max_fleet)
    averages = np.array([
        float(FixedOrderStageCost(f, order, tolerance)(p.loads).mean()) for order in orders
    ])

    best = orders[int(np.argmin(averages))]
    worst = orders[int(np.argmax(averages))]
    logger.info(
        f"Fixed orders: best {best} ({averages.min():.4f} kW), "
        f"worst {worst} ({averages.max():.4f} kW)"
    )

    return (
        (best, fixed_order_trajectory(f, p, best, tolerance, label='best_fixed_order')),
        (worst, fixed_order_trajectory(f, p, worst, tolerance, label='worst_fixed_order')),
    )


def worst_case_profiles(
    c: Compressor,
    D: float,
    T: int,
    step_minutes: float = 1.0,
) -> Tuple[LoadProfile, LoadProfile]:
    """The two single-machine profiles that make load shifting pay off the most.

    q1 runs the machine at q_min for the last round(D·q_max) stages; q2 runs it
    at q_max for the first round(D·q_min) stages. Both deliver about the same
    cooling and q2 cumulatively dominates q1, so q2 is a valid shifting of q1.

    Args:
        c: Compressor
        D: Scale factor
        T: Horizon; each profile has T + 1 stages

    Raises:
        ParameterError: the two blocks would overlap
    """
    if D <= 0:
        raise ParameterError(f"D must be positive, got {D}")

    tail = int(round(D * c.q_max))
    head = int(round(D * c.q_min))
    if tail < 1 or head < 1:
        raise ParameterError(f"D={D} is too small; both blocks need at least one stage")
    if not head < T - tail:
        raise ParameterError(
            f"blocks overlap: need round(D·q_min)={head} < T - round(D·q_max)={T - tail}; "
            f"increase T to at least {head + tail + 1}"
        )

    q1 = np.zeros(T + 1)
    q1[T + 1 - tail:] = c.q_min
    q2 = np.zeros(T + 1)
    q2[:head] = c.q_max
    return LoadProfile(q1, step_minutes), LoadProfile(q2, step_minutes)


def savings_gap(
    f: Fleet,
    p: LoadProfile,
    surplus_step: Optional[float] = None,
    config: Optional[ColdSeqConfig] = None,
) -> float:
    """Fraction of static-sequencing power saved by load shifting.

    Returns (J_static - J_shift) / J_shift, or +inf when shifting costs nothing
    but static sequencing does.
    """
    static = static_trajectory(f, p, (config or ColdSeqConfig()).tolerance_kw).avg_power
    shifted = optimal_shift(f, p, surplus_step, config=config).avg_power

    if shifted <= 0:
        return 0.0 if static <= 0 else float('inf')
    return (static - shifted) / shifted
