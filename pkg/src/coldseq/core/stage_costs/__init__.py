"""Stage-cost curves for the load-shifting dynamic program.

Two policies are provided:
- fixed_order: water filling under one order (default: the shift order)
- optimal: the exact static optimum at every stage

Usage:
    >>> from coldseq.core.stage_costs import get_stage_cost
    >>> cost = get_stage_cost(butterball, 'fixed_order')
    >>> cost(np.array([0.0, 3000.0]))
    array([  0., 262.])
"""

import logging
from typing import Iterable, Optional, Protocol

import numpy as np

from ..context import Assignment
from ..fleet import Fleet, TOLERANCE_KW, shift_order
from .fixed_order import FixedOrderStageCost
from .optimal import OptimalStageCost

logger = logging.getLogger(__name__)

__all__ = [
    'StageCost',
    'FixedOrderStageCost',
    'OptimalStageCost',
    'get_stage_cost',
]


class StageCost(Protocol):
    """Electrical power needed to deliver a shifted load in one stage."""

    name: str
    fleet: Fleet

    def __call__(self, q: np.ndarray) -> np.ndarray:
        ...

    def breakpoints(self) -> np.ndarray:
        ...

    def assignment(self, q: float) -> Assignment:
        ...


def get_stage_cost(
    fleet: Fleet,
    policy: str = 'fixed_order',
    order: Optional[Iterable[str]] = None,
    tolerance: float = TOLERANCE_KW,
) -> StageCost:
    """Factory for the stage cost used by a load-shifting plan.

    Args:
        fleet: Fleet
        policy: 'fixed_order' or 'optimal'
        order: Order for 'fixed_order' (defaults to the shift order)
        tolerance: Feasibility slack (kW)

    Returns:
        A StageCost instance

    Raises:
        ValueError: unsupported policy
    """
    mode = policy.lower()
    logger.info(f"Creating stage cost: policy={mode}")

    if mode == 'fixed_order':
        sequence = order if order is not None else shift_order(fleet)
        return FixedOrderStageCost(fleet, sequence, tolerance)

    if mode == 'optimal':
        if order is not None:
            logger.warning("Ignoring order for the optimal stage cost")
        return OptimalStageCost(fleet, tolerance)

    raise ValueError(
        f"Unsupported stage_policy: '{policy}'. Must be one of: 'fixed_order', 'optimal'"
    )
