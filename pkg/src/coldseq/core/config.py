"""Configuration management for compressor sequencing and load shifting."""

import os
from dataclasses import dataclass
from typing import Any, Dict

STAGE_POLICIES = ('fixed_order', 'optimal')
DECISION_MODES = ('breakpoints', 'grid')
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL')


@dataclass
class ColdSeqConfig:
    """Solver and reporting configuration.

    All fields are optional:
        tolerance_kw: Absolute tolerance for kW feasibility checks. Default: 1e-6
        surplus_step: Surplus grid step of the load-shifting DP (kW·stage). Default: 1.0
        surplus_cap_hours: Carried surplus cap, in hours of total fleet capacity.
                           Default: 24.0
        stage_policy: Per-stage dispatch used by the load-shifting DP.
                      'fixed_order' (water filling in shift order) or 'optimal'.
                      Default: 'fixed_order'
        decision_mode: Candidate shifted loads per stage. 'breakpoints' (stage-cost
                       kinks plus the surplus-clearing load) or 'grid' (every
                       multiple of surplus_step). Default: 'breakpoints'
        max_dp_cells: Refuse DPs with more than this many stage × state cells.
                      Default: 20_000_000
        max_oracle_points: Search-space guard for the brute-force oracles.
                           Default: 100_000_000
        max_permutation_fleet: Largest fleet whose orders are enumerated. Default: 8
        full_capacity_threshold: Fraction of q_max counted as full capacity in
                                 capacity distributions. Default: 0.99
        filter_window_minutes: Default moving-average window. Default: 20.0
        log_level: CLI logging level. Default: 'WARNING'

    Example:
        >>> config = ColdSeqConfig(surplus_step=25.0, stage_policy='optimal')
    """

    tolerance_kw: float = 1e-6
    surplus_step: float = 1.0
    surplus_cap_hours: float = 24.0
    stage_policy: str = 'fixed_order'
    decision_mode: str = 'breakpoints'
    max_dp_cells: int = 20_000_000
    max_oracle_points: int = 100_000_000
    max_permutation_fleet: int = 8
    full_capacity_threshold: float = 0.99
    filter_window_minutes: float = 20.0
    log_level: str = 'WARNING'

    def __post_init__(self):
        """Validate configuration."""
        self.log_level = self.log_level.upper()
        self._validate()

    def _validate(self):
        """Validate field ranges."""
        if self.tolerance_kw <= 0:
            raise ValueError(f"tolerance_kw must be positive, got {self.tolerance_kw}")

        if self.surplus_step <= 0:
            raise ValueError(f"surplus_step must be positive, got {self.surplus_step}")

        if self.surplus_cap_hours <= 0:
            raise ValueError(
                f"surplus_cap_hours must be positive, got {self.surplus_cap_hours}"
            )

        if self.stage_policy not in STAGE_POLICIES:
            raise ValueError(
                f"stage_policy must be one of {list(STAGE_POLICIES)}, got '{self.stage_policy}'"
            )

        if self.decision_mode not in DECISION_MODES:
            raise ValueError(
                f"decision_mode must be one of {list(DECISION_MODES)}, "
                f"got '{self.decision_mode}'"
            )

        if self.max_dp_cells < 1 or self.max_oracle_points < 1:
            raise ValueError("max_dp_cells and max_oracle_points must be at least 1")

        if self.max_permutation_fleet < 1:
            raise ValueError(
                f"max_permutation_fleet must be at least 1, got {self.max_permutation_fleet}"
            )

        if not 0 < self.full_capacity_threshold <= 1:
            raise ValueError(
                "full_capacity_threshold must be in (0, 1], "
                f"got {self.full_capacity_threshold}"
            )

        if self.filter_window_minutes <= 0:
            raise ValueError(
                f"filter_window_minutes must be positive, got {self.filter_window_minutes}"
            )

        if self.log_level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {list(LOG_LEVELS)}, got '{self.log_level}'")

    def with_overrides(self, **overrides: Any) -> 'ColdSeqConfig':
        """Return a copy with the given non-None fields replaced."""
        values = self.to_dict()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return type(self)(**values)

    def to_dict(self) -> Dict[str, Any]:
        """Plain dictionary of all fields."""
        return dict(self.__dict__)

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> 'ColdSeqConfig':
        """Create configuration from dictionary.

        Args:
            config_dict: Configuration dictionary

        Returns:
            ColdSeqConfig instance

        Example:
            >>> config = ColdSeqConfig.from_dict({'surplus_step': 10.0})
        """
        return cls(**config_dict)

    @classmethod
    def from_env(cls, prefix: str = 'COLDSEQ_') -> 'ColdSeqConfig':
        """Load configuration from environment variables.

        Reads {prefix}<FIELD> for every field, upper-cased (for example
        COLDSEQ_SURPLUS_STEP, COLDSEQ_STAGE_POLICY). The log level is read
        from {prefix}LOG. Unset variables keep their defaults.

        Args:
            prefix: Prefix for environment variable names

        Returns:
            ColdSeqConfig instance

        Example:
            >>> os.environ['COLDSEQ_SURPLUS_STEP'] = '25'
            >>> config = ColdSeqConfig.from_env()
        """
        defaults = cls()
        values: Dict[str, Any] = {}

        for name, default in defaults.to_dict().items():
            env_name = f'{prefix}LOG' if name == 'log_level' else f'{prefix}{name.upper()}'
            raw = os.getenv(env_name)
            if raw is None or raw.strip() == '':
                continue
            try:
                values[name] = type(default)(raw.strip())
            except ValueError:
                raise ValueError(f"Invalid value for {env_name}: '{raw}'")

        return cls(**values)
