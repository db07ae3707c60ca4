"""Water-fill stage cost under one fixed order, evaluated over numpy arrays.

For an order O with prefix capacities S_1 < ... < S_m, a demand q in
(S_{j-1}, S_j] turns on the first j machines. The surplus u = S_j - q is then
trimmed from machine j backwards, each machine giving up at most its trim
range. The cost is the prefix full-load power minus the trimmed power, which
is piecewise linear in q.
"""

import logging
from typing import Iterable, List

import numpy as np

from ..context import Assignment
from ..fleet import Fleet, TOLERANCE_KW
from ..waterfill import waterfill

logger = logging.getLogger(__name__)


class FixedOrderStageCost:
    """Vectorized cost of ``waterfill(fleet, order, q)``.

    Example:
        >>> cost = FixedOrderStageCost(butterball, ['C1', 'C2', 'C3', 'C4'])
        >>> float(cost(np.array([9237.0]))[0])
        1539.0
    """

    name = 'fixed_order'

    def __init__(self, fleet: Fleet, order: Iterable[str], tolerance: float = TOLERANCE_KW):
        self.fleet = fleet
        self.order = fleet.order(order, complete=True)
        self.tolerance = tolerance

        machines = [fleet.get(cid) for cid in self.order]
        self._prefix_cap = np.cumsum([c.q_max for c in machines])
        self._prefix_power = np.cumsum([c.p_max for c in machines])
        self._turn_on_at = np.concatenate(([0.0], self._prefix_cap[:-1])) + tolerance

        # Per segment j: surplus absorbed by trimming machines j, j-1, ..., 1
        # and the power saved doing so.
        self._trim_surplus: List[np.ndarray] = []
        self._trim_saving: List[np.ndarray] = []
        for j in range(len(machines)):
            trimmed = machines[j::-1]
            self._trim_surplus.append(np.concatenate(([0.0], np.cumsum([c.trim_range for c in trimmed]))))
            self._trim_saving.append(np.concatenate(([0.0], np.cumsum([c.p_max - c.p_min for c in trimmed]))))

    @property
    def capacity(self) -> float:
        return float(self._prefix_cap[-1])

    def __call__(self, q: np.ndarray) -> np.ndarray:
        """Stage cost at each load; 0 at zero load and +inf above capacity."""
        q = np.asarray(q, dtype=float)
        cost = np.full(q.shape, np.inf)

        idle = q <= self.tolerance
        cost[idle] = 0.0

        active = ~idle & (q <= self.capacity + self.tolerance)
        if not np.any(active):
            return cost

        qa = q[active]
        segment = np.searchsorted(self._turn_on_at, qa, side='left') - 1
        segment = np.clip(segment, 0, len(self._prefix_cap) - 1)

        out = np.empty(qa.shape)
        for j in np.unique(segment):
            mask = segment == j
            surplus = np.maximum(self._prefix_cap[j] - qa[mask], 0.0)
            saving = np.interp(surplus, self._trim_surplus[j], self._trim_saving[j])
            out[mask] = self._prefix_power[j] - saving

        cost[active] = out
        return cost

    def breakpoints(self) -> np.ndarray:
        """Loads where the cost curve changes slope or jumps.

        Covers 0, every prefix capacity and every point where trimming moves
        to the next machine back, including the segment floor.
        """
        points = [0.0]
        lower = 0.0
        for j, cap in enumerate(self._prefix_cap):
            for surplus in self._trim_surplus[j]:
                q = cap - surplus
                if q > lower + self.tolerance:
                    points.append(float(q))
            lower = float(cap)
        return np.unique(np.asarray(points))

    def assignment(self, q: float) -> Assignment:
        """Per-machine loads at demand ``q``."""
        return waterfill(self.fleet, self.order, q, self.tolerance)

    def __repr__(self) -> str:
        return f"FixedOrderStageCost(order={self.order})"
