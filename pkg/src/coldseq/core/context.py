"""Value and result types shared by the sequencing, shifting and reporting code."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np

from .errors import DomainError, ParameterError
from .fleet import Fleet, SequencingOrder, TOLERANCE_KW, power_at


@dataclass(frozen=True)
class Assignment:
    """Thermal load per compressor for one instant.

    Attributes:
        loads: Compressor id -> thermal load (kW); 0 means off
    """

    loads: Mapping[str, float]

    def __post_init__(self):
        object.__setattr__(self, 'loads', {k: float(v) for k, v in dict(self.loads).items()})

    def __getitem__(self, compressor_id: str) -> float:
        return self.loads[compressor_id]

    def total(self) -> float:
        """Total thermal load served."""
        return float(sum(self.loads.values()))

    def on_ids(self, tolerance: float = TOLERANCE_KW) -> List[str]:
        """Ids of running compressors."""
        return [cid for cid, q in self.loads.items() if q > tolerance]

    def trim_ids(self, fleet: Fleet, tolerance: float = TOLERANCE_KW) -> List[str]:
        """Ids strictly inside their window, q_min < q < q_max."""
        return [
            c.id for c in fleet
            if c.q_min + tolerance < self.loads[c.id] < c.q_max - tolerance
        ]

    def validate(self, fleet: Fleet, tolerance: float = TOLERANCE_KW) -> None:
        """Check keys and per-machine windows against ``fleet``.

        Raises:
            DomainError: key mismatch or a load outside {0} ∪ [q_min, q_max]
        """
        if set(self.loads) != set(fleet.ids):
            raise DomainError(
                f"assignment ids {sorted(self.loads)} do not match fleet ids {sorted(fleet.ids)}"
            )
        for c in fleet:
            power_at(c, self.loads[c.id], tolerance)

    def cost(self, fleet: Fleet, tolerance: float = TOLERANCE_KW) -> float:
        """Total electrical power of this assignment."""
        return float(sum(power_at(c, self.loads[c.id], tolerance) for c in fleet))

    @classmethod
    def all_off(cls, fleet: Fleet) -> 'Assignment':
        """Every compressor off."""
        return cls({cid: 0.0 for cid in fleet.ids})


@dataclass(frozen=True)
class StaticSolution:
    """Optimal single-instant dispatch.

    Attributes:
        assignment: Per-compressor loads
        cost: Total electrical power (kW)
        realizing_order: Order under which water filling reproduces the assignment
    """

    assignment: Assignment
    cost: float
    realizing_order: SequencingOrder


@dataclass(eq=False)
class LoadProfile:
    """Uniformly sampled refrigeration load q_in(0..T).

    Attributes:
        loads: Thermal load per stage (kW)
        step_minutes: Sampling step in minutes
    """

    loads: np.ndarray
    step_minutes: float = 1.0

    def __post_init__(self):
        """Validate and freeze the samples."""
        loads = np.array(self.loads, dtype=float).reshape(-1)
        if loads.size == 0:
            raise ParameterError("load profile must have at least one sample")
        if not np.all(np.isfinite(loads)):
            raise ParameterError("load profile contains non-finite values")
        if np.any(loads < 0):
            first = int(np.argmax(loads < 0))
            raise ParameterError(f"load profile has a negative load at stage {first}")
        if not self.step_minutes > 0:
            raise ParameterError(f"step_minutes must be positive, got {self.step_minutes}")

        loads.setflags(write=False)
        self.loads = loads
        self.step_minutes = float(self.step_minutes)

    def __len__(self) -> int:
        return int(self.loads.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LoadProfile):
            return NotImplemented
        return self.step_minutes == other.step_minutes and np.array_equal(self.loads, other.loads)

    @property
    def horizon(self) -> int:
        """Index of the last stage, T."""
        return len(self) - 1

    def mean(self) -> float:
        """Average load over all stages."""
        return float(self.loads.mean())

    def total(self) -> float:
        """Sum of loads (kW·stage)."""
        return float(self.loads.sum())

    def cumulative(self) -> np.ndarray:
        """Prefix sums of the loads."""
        return np.cumsum(self.loads)

    @classmethod
    def constant(cls, load_kw: float, stages: int, step_minutes: float = 1.0) -> 'LoadProfile':
        """A flat profile."""
        return cls(np.full(stages, float(load_kw)), step_minutes)


@dataclass(eq=False)
class ShiftPlan:
    """A served load trajectory with its per-stage dispatch.

    Attributes:
        demand: Incoming load q_in(k) (kW)
        shifted: Shifted load q_sh(k) each stage is asked to serve (kW)
        assignments: Per-stage compressor loads
        stage_power: Electrical power per stage (kW)
        avg_power: Mean of stage_power over the T+1 stages (kW)
        label: Name of the method that produced the plan
    """

    demand: np.ndarray
    shifted: np.ndarray
    assignments: Tuple[Assignment, ...]
    stage_power: np.ndarray
    label: str = ''
    avg_power: float = field(init=False)

    def __post_init__(self):
        self.demand = np.asarray(self.demand, dtype=float)
        self.shifted = np.asarray(self.shifted, dtype=float)
        self.stage_power = np.asarray(self.stage_power, dtype=float)
        self.assignments = tuple(self.assignments)

        n = self.demand.size
        if not (self.shifted.size == self.stage_power.size == len(self.assignments) == n):
            raise ParameterError("plan arrays must all have one entry per stage")

        self.avg_power = float(self.stage_power.mean()) if n else 0.0

    def __len__(self) -> int:
        return int(self.demand.size)

    @property
    def compressor_ids(self) -> Tuple[str, ...]:
        """Compressor ids in the order of the first assignment."""
        return tuple(self.assignments[0].loads) if self.assignments else ()

    def delivered(self) -> np.ndarray:
        """Total compressor load per stage."""
        return np.array([a.total() for a in self.assignments])

    def surplus(self) -> np.ndarray:
        """Running surplus, cumulative shifted minus cumulative demand."""
        return np.cumsum(self.shifted) - np.cumsum(self.demand)

    def cumulative_violations(self, tolerance: float = TOLERANCE_KW) -> List[int]:
        """Prefixes where shifted cooling lags demand by more than ``tolerance``."""
        return [int(k) for k in np.flatnonzero(self.surplus() < -tolerance)]

    def service_violations(self, tolerance: float = TOLERANCE_KW) -> List[int]:
        """Stages whose compressors deliver less than the shifted load."""
        return [int(k) for k in np.flatnonzero(self.delivered() < self.shifted - tolerance)]

    def is_feasible(self, tolerance: float = TOLERANCE_KW) -> bool:
        """True when both the cumulative and per-stage service constraints hold."""
        return not self.cumulative_violations(tolerance) and not self.service_violations(tolerance)

    def load_matrix(self, ids: Optional[Iterable[str]] = None) -> np.ndarray:
        """Stages × compressors array of loads."""
        ids = tuple(ids) if ids is not None else self.compressor_ids
        return np.array([[a.loads[cid] for cid in ids] for a in self.assignments]).reshape(
            len(self), len(ids)
        )


@dataclass(frozen=True)
class CapacityShare:
    """Fraction of stages one machine spends off, in trim, and at full capacity."""

    off_fraction: float
    trim_fraction: float
    full_fraction: float

    def to_dict(self) -> Dict[str, float]:
        return {
            'off_fraction': self.off_fraction,
            'trim_fraction': self.trim_fraction,
            'full_fraction': self.full_fraction,
        }


METHOD_NAMES = (
    'worst_fixed_order',
    'best_fixed_order',
    'static_cs',
    'online_ls',
    'optimal_ls',
)


@dataclass
class ComparisonReport:
    """Average power of every sequencing method on one profile.

    Attributes:
        avg_power: Method name -> average power (kW)
        savings_vs_static: Method name -> percent saved against static C.S.
        best_order: Best single fixed order over the profile
        worst_order: Worst single fixed order over the profile
        fleet_hash: Digest of the fleet definition
        profile_hash: Digest of the profile
        tolerance_kw: Tolerance used for the dominance check
        schema_version: Output schema version
    """

    avg_power: Dict[str, float]
    savings_vs_static: Dict[str, float]
    best_order: str
    worst_order: str
    fleet_hash: str
    profile_hash: str
    tolerance_kw: float
    schema_version: int = 1

    def to_dict(self) -> Dict[str, Any]:
        """JSON-ready representation with a stable key order."""
        return {
            'schema_version': self.schema_version,
            'fleet_hash': self.fleet_hash,
            'profile_hash': self.profile_hash,
            'tolerance_kw': self.tolerance_kw,
            'best_order': self.best_order,
            'worst_order': self.worst_order,
            'avg_power_kw': {name: self.avg_power[name] for name in METHOD_NAMES},
            'savings_vs_static_pct': {name: self.savings_vs_static[name] for name in METHOD_NAMES},
        }

    def rows(self) -> List[Dict[str, Any]]:
        """One row per method, for tabular output."""
        return [
            {
                'method': name,
                'avg_power_kw': self.avg_power[name],
                'savings_vs_static_pct': self.savings_vs_static[name],
            }
            for name in METHOD_NAMES
        ]
