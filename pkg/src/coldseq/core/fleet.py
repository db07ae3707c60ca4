"""Compressor and fleet model with the affine power-heat curve.

Each compressor serves a thermal load of either 0 (off) or a value in its
window [q_min, q_max]. Inside the window the electrical power is the affine
interpolation between (q_min, p_min) and (q_max, p_max).
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple

from .errors import DomainError, FleetValidationError

logger = logging.getLogger(__name__)

TOLERANCE_KW = 1e-6


@dataclass(frozen=True)
class Compressor:
    """One machine's thermal window and power curve endpoints.

    Attributes:
        id: Short identifier, unique within a fleet
        q_min: Minimum thermal load when running (kW)
        q_max: Maximum thermal load (kW)
        p_min: Electrical power at q_min (kW)
        p_max: Electrical power at q_max (kW)
    """

    id: str
    q_min: float
    q_max: float
    p_min: float
    p_max: float

    def __post_init__(self):
        """Validate the window and curve."""
        if not self.id:
            raise FleetValidationError("compressor id must be nonempty")

        if not 0 < self.q_min < self.q_max:
            raise FleetValidationError(
                f"compressor {self.id}: need 0 < q_min < q_max, "
                f"got q_min={self.q_min}, q_max={self.q_max}"
            )

        if not 0 < self.p_min <= self.p_max:
            raise FleetValidationError(
                f"compressor {self.id}: need 0 < p_min <= p_max, "
                f"got p_min={self.p_min}, p_max={self.p_max}"
            )

    @property
    def trim_range(self) -> float:
        """Width of the thermal window, q_max - q_min."""
        return self.q_max - self.q_min

    @property
    def slope(self) -> float:
        """Marginal power per kW of cooling inside the window."""
        return (self.p_max - self.p_min) / (self.q_max - self.q_min)

    @property
    def min_load_cost_ratio(self) -> float:
        """p_min / q_min, the cost per kW of cooling at minimum load."""
        return self.p_min / self.q_min

    @property
    def is_efficient_at_capacity(self) -> bool:
        """True when cooling is no more expensive at q_max than at q_min."""
        return self.p_max / self.q_max <= self.p_min / self.q_min + 1e-12

    def to_dict(self) -> Dict[str, object]:
        """Fleet-file representation of this compressor."""
        return {
            'id': self.id,
            'q_min_kw': self.q_min,
            'q_max_kw': self.q_max,
            'p_min_kw': self.p_min,
            'p_max_kw': self.p_max,
        }


@dataclass(frozen=True)
class SequencingOrder:
    """An ordering of (a subset of) fleet compressor ids.

    Attributes:
        ids: Compressor ids, first machine first
    """

    ids: Tuple[str, ...]

    def __post_init__(self):
        """Normalize to a tuple and reject duplicates."""
        object.__setattr__(self, 'ids', tuple(self.ids))
        if len(set(self.ids)) != len(self.ids):
            raise FleetValidationError(f"sequencing order has duplicate ids: {list(self.ids)}")

    def __iter__(self):
        return iter(self.ids)

    def __len__(self) -> int:
        return len(self.ids)

    def __str__(self) -> str:
        return ','.join(self.ids)

    @classmethod
    def parse(cls, text: str) -> 'SequencingOrder':
        """Parse a comma-separated order such as 'C1,C2,C3,C4'."""
        return cls(tuple(part.strip() for part in text.split(',') if part.strip()))


@dataclass(frozen=True)
class Fleet:
    """A validated collection of compressors.

    The declaration order of ``compressors`` is the canonical order used
    for deterministic tie-breaking.

    Example:
        >>> fleet = Fleet((
        ...     Compressor('C1', 220, 3000, 124, 262),
        ...     Compressor('C2', 239, 2126, 173, 427),
        ... ))
        >>> fleet.ids
        ('C1', 'C2')
    """

    compressors: Tuple[Compressor, ...]

    def __post_init__(self):
        """Validate fleet-level invariants."""
        object.__setattr__(self, 'compressors', tuple(self.compressors))

        if not self.compressors:
            raise FleetValidationError("fleet must contain at least one compressor")

        ids = [c.id for c in self.compressors]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise FleetValidationError(f"duplicate compressor ids: {duplicates}")

        inefficient = [c.id for c in self.compressors if not c.is_efficient_at_capacity]
        if inefficient:
            raise FleetValidationError(
                f"compressors {inefficient} have p_min/q_min < p_max/q_max; "
                "curves must be at least as efficient at full capacity as at minimum load"
            )

    @property
    def ids(self) -> Tuple[str, ...]:
        """Compressor ids in canonical order."""
        return tuple(c.id for c in self.compressors)

    def __len__(self) -> int:
        return len(self.compressors)

    def __iter__(self):
        return iter(self.compressors)

    def get(self, compressor_id: str) -> Compressor:
        """Look up a compressor by id."""
        for compressor in self.compressors:
            if compressor.id == compressor_id:
                return compressor
        raise FleetValidationError(f"unknown compressor id '{compressor_id}'")

    def index(self, compressor_id: str) -> int:
        """Canonical position of a compressor."""
        if compressor_id not in self.ids:
            raise FleetValidationError(f"unknown compressor id '{compressor_id}'")
        return self.ids.index(compressor_id)

    def canonical_order(self) -> SequencingOrder:
        """The declaration order as a SequencingOrder."""
        return SequencingOrder(self.ids)

    def order(self, ids: Iterable[str], complete: bool = False) -> SequencingOrder:
        """Build a SequencingOrder checked against this fleet.

        Args:
            ids: Compressor ids
            complete: Require every fleet id to appear

        Raises:
            FleetValidationError: unknown ids, duplicates, or a missing id when
                ``complete`` is set
        """
        order = ids if isinstance(ids, SequencingOrder) else SequencingOrder(tuple(ids))
        unknown = [i for i in order if i not in self.ids]
        if unknown:
            raise FleetValidationError(f"order contains unknown compressor ids: {unknown}")

        if complete and len(order) != len(self):
            missing = [i for i in self.ids if i not in order.ids]
            raise FleetValidationError(f"order must cover the whole fleet; missing {missing}")

        return order

    def subset(self, ids: Sequence[str]) -> 'Fleet':
        """A fleet made of the given ids, kept in canonical order."""
        wanted = set(ids)
        return Fleet(tuple(c for c in self.compressors if c.id in wanted))

    def to_dict(self) -> Dict[str, List[Dict[str, object]]]:
        """Fleet-file representation."""
        return {'compressors': [c.to_dict() for c in self.compressors]}


def power_at(c: Compressor, q: float, tolerance: float = TOLERANCE_KW) -> float:
    """Electrical power drawn by ``c`` while serving thermal load ``q``.

    Args:
        c: Compressor
        q: Thermal load (kW); 0 or within [q_min, q_max]
        tolerance: Slack accepted at the window edges

    Returns:
        Electrical power (kW)

    Raises:
        DomainError: q outside {0} ∪ [q_min, q_max]

    Example:
        >>> power_at(Compressor('C1', 220, 3000, 124, 262), 3000)
        262.0
    """
    if abs(q) <= tolerance:
        return 0.0

    if q < c.q_min - tolerance or q > c.q_max + tolerance:
        raise DomainError(
            f"load {q} kW is outside compressor {c.id}'s window "
            f"{{0}} ∪ [{c.q_min}, {c.q_max}]"
        )

    q = min(max(q, c.q_min), c.q_max)
    return float(c.p_min + (q - c.q_min) / (c.q_max - c.q_min) * (c.p_max - c.p_min))


def full_capacity_cost_ratio(c: Compressor) -> float:
    """Power per kW of cooling at full capacity, p_max / q_max."""
    return c.p_max / c.q_max


def shift_order(f: Fleet) -> SequencingOrder:
    """Order the whole fleet by increasing cost of cooling at full capacity.

    The machine delivering the most cooling per kW of power comes first;
    ties keep canonical order (``sorted`` is stable).
    """
    ranked = sorted(f.compressors, key=full_capacity_cost_ratio)
    order = SequencingOrder(tuple(c.id for c in ranked))
    logger.debug(f"Shift order: {order}")
    return order


def prop3_ratios(f: Fleet) -> Tuple[float, float, float]:
    """Worst-case load-shifting savings ratios.

    Returns:
        (r_max, r_min, bound) where r_max is the largest p_min/q_min,
        r_min the smallest p_max/q_max, and bound = (r_max - r_min) / r_min
    """
    r_max = max(c.min_load_cost_ratio for c in f)
    r_min = min(full_capacity_cost_ratio(c) for c in f)
    bound = (r_max - r_min) / r_min
    return r_max, r_min, bound


def efficiency_table(f: Fleet) -> List[Dict[str, float]]:
    """Per-machine cost ratios at both window ends, in canonical order."""
    return [
        {
            'id': c.id,
            'min_load_cost_ratio': c.min_load_cost_ratio,
            'full_capacity_cost_ratio': full_capacity_cost_ratio(c),
        }
        for c in f
    ]


def make_fleet(rows: Iterable[Tuple[str, float, float, float, float]]) -> Fleet:
    """Build a fleet from (id, q_min, q_max, p_min, p_max) tuples."""
    return Fleet(tuple(Compressor(*row) for row in rows))

