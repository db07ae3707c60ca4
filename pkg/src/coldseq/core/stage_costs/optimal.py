"""Exact static optimum J*(q) as a stage cost, evaluated over numpy arrays."""

import itertools
import logging
from typing import List, Tuple

import numpy as np

from ..context import Assignment
from ..fleet import Fleet, TOLERANCE_KW
from ..static import optimal_static

logger = logging.getLogger(__name__)


class OptimalStageCost:
    """Lower envelope of the per-on-set dispatch costs.

    For each on-set the cost is flat at Σ p_min up to Σ q_min, then rises
    through the machines' trim ranges in order of increasing slope. J*(q) is
    the minimum over on-sets.
    """

    name = 'optimal'

    def __init__(self, fleet: Fleet, tolerance: float = TOLERANCE_KW):
        self.fleet = fleet
        self.tolerance = tolerance
        self.capacity = float(sum(c.q_max for c in fleet))

        self._curves: List[Tuple[np.ndarray, np.ndarray]] = []
        for size in range(1, len(fleet) + 1):
            for members in itertools.combinations(fleet.compressors, size):
                ranked = sorted(members, key=lambda c: c.slope)
                floor = sum(c.q_min for c in members)
                base = sum(c.p_min for c in members)
                loads = floor + np.concatenate(([0.0], np.cumsum([c.trim_range for c in ranked])))
                power = base + np.concatenate(([0.0], np.cumsum([c.p_max - c.p_min for c in ranked])))
                self._curves.append((loads, power))

        logger.debug(f"OptimalStageCost over {len(self._curves)} on-sets")

    def __call__(self, q: np.ndarray) -> np.ndarray:
        """Stage cost at each load; 0 at zero load and +inf above capacity."""
        q = np.asarray(q, dtype=float)
        cost = np.full(q.shape, np.inf)

        for loads, power in self._curves:
            curve = np.interp(q, loads, power)
            curve = np.where(q <= loads[-1] + self.tolerance, curve, np.inf)
            np.minimum(cost, curve, out=cost)

        cost[q <= self.tolerance] = 0.0
        return cost

    def breakpoints(self) -> np.ndarray:
        """Kinks of every on-set curve, plus 0."""
        points = np.concatenate([loads for loads, _ in self._curves] + [np.zeros(1)])
        return np.unique(points[points <= self.capacity + self.tolerance])

    def assignment(self, q: float) -> Assignment:
        """Per-machine loads at demand ``q``."""
        return optimal_static(self.fleet, q, self.tolerance).assignment

    def __repr__(self) -> str:
        return f"OptimalStageCost(fleet={list(self.fleet.ids)})"
