"""Load-profile files, filtering and synthetic weekly profiles.

CSV format: header ``stage_or_timestamp,load_kw``. The first column holds
either consecutive stage indices (0, 1, 2, ...) or evenly spaced timestamps,
from which the sampling step is inferred.
"""

import json
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
import pandas as pd

from ..core.config import ColdSeqConfig
from ..core.context import LoadProfile
from ..core.errors import ParameterError, ProfileParseError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

STAGE_COLUMN = 'stage_or_timestamp'
LOAD_COLUMN = 'load_kw'
DEFAULT_START = pd.Timestamp('2024-01-01 00:00:00')  # a Monday
MINUTES_PER_DAY = 1440


def _line(index: int) -> int:
    """File line of a data row; the header is line 1."""
    return int(index) + 2


def load_csv(path: PathLike, step_minutes: float = 1.0) -> LoadProfile:
    """Read a load profile.

    Args:
        path: CSV file
        step_minutes: Step used for stage-indexed files (timestamped files
            carry their own step)

    Returns:
        LoadProfile

    Raises:
        ProfileParseError: missing columns, empty file, unparsable values,
            negative loads, or uneven spacing; ``row`` is the file line
    """
    try:
        frame = pd.read_csv(
            path,
            dtype={STAGE_COLUMN: str},
            float_precision='round_trip',
            skipinitialspace=True,
        )
    except pd.errors.EmptyDataError:
        raise ProfileParseError(f"{path}: file is empty")
    except OSError as exc:
        raise ProfileParseError(f"{path}: cannot read file ({exc})")

    missing = [c for c in (STAGE_COLUMN, LOAD_COLUMN) if c not in frame.columns]
    if missing:
        raise ProfileParseError(f"{path}: missing column(s) {missing}", row=1)
    if frame.empty:
        raise ProfileParseError(f"{path}: no data rows", row=2)

    loads = pd.to_numeric(frame[LOAD_COLUMN], errors='coerce')
    bad = loads.isna() | ~np.isfinite(loads)
    if bad.any():
        i = int(np.flatnonzero(bad.to_numpy())[0])
        raise ProfileParseError(
            f"{path}: line {_line(i)}: load '{frame[LOAD_COLUMN].iloc[i]}' is not a number",
            row=_line(i),
        )

    negative = np.flatnonzero(loads.to_numpy() < 0)
    if negative.size:
        i = int(negative[0])
        raise ProfileParseError(
            f"{path}: line {_line(i)}: negative load {loads.iloc[i]}", row=_line(i)
        )

    step = _infer_step(path, frame[STAGE_COLUMN].astype(str).str.strip(), step_minutes)
    logger.info(f"Loaded {len(loads)} samples from {path} (step {step} min)")
    return LoadProfile(loads.to_numpy(dtype=float), step)


def _infer_step(path: PathLike, stamps: pd.Series, default_step: float) -> float:
    """Check even spacing of the first column and return the step in minutes."""
    stages = pd.to_numeric(stamps, errors='coerce')
    if stages.notna().all():
        values = stages.to_numpy()
        gaps = np.flatnonzero(np.diff(values) != 1)
        if gaps.size:
            i = int(gaps[0]) + 1
            raise ProfileParseError(
                f"{path}: line {_line(i)}: stage {stamps.iloc[i]} does not follow "
                f"{stamps.iloc[i - 1]}; stages must be consecutive",
                row=_line(i),
            )
        return float(default_step)

    times = pd.to_datetime(stamps, errors='coerce')
    if times.isna().any():
        i = int(np.flatnonzero(times.isna().to_numpy())[0])
        raise ProfileParseError(
            f"{path}: line {_line(i)}: '{stamps.iloc[i]}' is neither a stage index nor a timestamp",
            row=_line(i),
        )

    if len(times) < 2:
        return float(default_step)

    deltas = times.diff().dt.total_seconds().to_numpy()[1:] / 60.0
    step = deltas[0]
    if step <= 0:
        raise ProfileParseError(f"{path}: line {_line(1)}: timestamps must increase", row=_line(1))

    ragged = np.flatnonzero(np.abs(deltas - step) > 1e-9)
    if ragged.size:
        i = int(ragged[0]) + 1
        raise ProfileParseError(
            f"{path}: line {_line(i)}: step of {deltas[i - 1]:g} min differs from "
            f"{step:g} min; profiles must be evenly sampled",
            row=_line(i),
        )
    return float(step)


def save_csv(
    p: LoadProfile,
    path: PathLike,
    start: Optional[Union[str, pd.Timestamp]] = None,
) -> None:
    """Write a profile in the format ``load_csv`` reads.

    One-minute profiles without a ``start`` are written with stage indices;
    everything else gets timestamps so the step survives the round trip.
    """
    if start is None and p.step_minutes == 1.0:
        first = pd.RangeIndex(len(p)).astype(str)
    else:
        origin = pd.Timestamp(start) if start is not None else DEFAULT_START
        index = origin + pd.to_timedelta(np.arange(len(p)) * p.step_minutes, unit='min')
        first = index.strftime('%Y-%m-%d %H:%M:%S.%f').str.replace(r'\.0+$', '', regex=True)

    frame = pd.DataFrame({STAGE_COLUMN: first, LOAD_COLUMN: p.loads})
    frame.to_csv(path, index=False, lineterminator='\n')
    logger.info(f"Wrote {len(p)} samples to {path}")


def moving_average(p: LoadProfile, window_minutes: Optional[float] = None) -> LoadProfile:
    """Centered moving average, truncated at the profile ends.

    The window defaults to ColdSeqConfig.filter_window_minutes.

    Raises:
        ParameterError: window shorter than one step
    """
    if window_minutes is None:
        window_minutes = ColdSeqConfig().filter_window_minutes
    if window_minutes < p.step_minutes:
        raise ParameterError(
            f"window of {window_minutes} min is shorter than the {p.step_minutes} min step"
        )

    samples = max(1, int(round(window_minutes / p.step_minutes)))
    smoothed = pd.Series(p.loads).rolling(samples, center=True, min_periods=1).mean()
    return LoadProfile(smoothed.to_numpy(), p.step_minutes)


@dataclass
class ProfileSpec:
    """Shape of a synthetic weekly refrigeration profile.

    Weekday working hours sit at the peak, weekday nights at the base, and
    weekends at the plateau. Seeded Gaussian noise is added and the result
    clipped at zero.

    Attributes:
        horizon_days: Number of days
        step_minutes: Sampling step; must divide a day
        weekday_peak_kw: Load during weekday working hours
        weekday_base_kw: Load outside weekday working hours
        weekend_plateau_kw: Load on Saturday and Sunday
        work_start_hour: Start of working hours, [0, 24)
        work_end_hour: End of working hours, (work_start_hour, 24]
        noise_std_kw: Standard deviation of the noise
        seed: Seed of the noise generator
        start_weekday: Weekday of the first day, 0 = Monday
    """

    horizon_days: int = 7
    step_minutes: float = 60.0
    weekday_peak_kw: float = 4300.0
    weekday_base_kw: float = 2100.0
    weekend_plateau_kw: float = 2360.0
    work_start_hour: float = 6.0
    work_end_hour: float = 18.0
    noise_std_kw: float = 0.0
    seed: Optional[int] = None
    start_weekday: int = 0

    def __post_init__(self):
        """Validate the spec."""
        if self.horizon_days < 1:
            raise ParameterError(f"horizon_days must be at least 1, got {self.horizon_days}")

        if self.step_minutes <= 0:
            raise ParameterError(f"step_minutes must be positive, got {self.step_minutes}")
        per_day = MINUTES_PER_DAY / self.step_minutes
        if abs(per_day - round(per_day)) > 1e-9:
            raise ParameterError(f"step_minutes {self.step_minutes} does not divide a day")

        if not self.weekday_peak_kw >= self.weekday_base_kw >= 0 or self.weekend_plateau_kw < 0:
            raise ParameterError(
                "need weekday_peak_kw >= weekday_base_kw >= 0 and weekend_plateau_kw >= 0"
            )

        if not 0 <= self.work_start_hour < self.work_end_hour <= 24:
            raise ParameterError(
                f"working hours [{self.work_start_hour}, {self.work_end_hour}) must lie in a day"
            )

        if self.noise_std_kw < 0:
            raise ParameterError(f"noise_std_kw must be non-negative, got {self.noise_std_kw}")

        if self.start_weekday not in range(7):
            raise ParameterError(f"start_weekday must be 0..6, got {self.start_weekday}")

    @property
    def samples_per_day(self) -> int:
        return int(round(MINUTES_PER_DAY / self.step_minutes))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, values: Dict[str, Any]) -> 'ProfileSpec':
        return cls(**values)


def load_spec(path: PathLike) -> ProfileSpec:
    """Read a ProfileSpec from JSON.

    Raises:
        ProfileParseError: unreadable file or invalid JSON
        ParameterError: invalid field values
    """
    try:
        with open(path, encoding='utf-8') as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProfileParseError(f"{path}: cannot read profile spec ({exc})")

    try:
        return ProfileSpec.from_dict(values)
    except TypeError as exc:
        raise ProfileParseError(f"{path}: unexpected profile spec fields ({exc})")


def synth(spec: ProfileSpec) -> LoadProfile:
    """Generate the profile a spec describes; deterministic for a fixed seed.

    Example:
        >>> p = synth(ProfileSpec(horizon_days=1, step_minutes=60))
        >>> p.loads[10]
        4300.0
    """
    n = spec.horizon_days * spec.samples_per_day
    minutes = np.arange(n) * spec.step_minutes
    weekday = (spec.start_weekday + minutes // MINUTES_PER_DAY) % 7
    hour = (minutes % MINUTES_PER_DAY) / 60.0

    working = (hour >= spec.work_start_hour) & (hour < spec.work_end_hour)
    loads = np.where(working, spec.weekday_peak_kw, spec.weekday_base_kw)
    loads = np.where(weekday >= 5, spec.weekend_plateau_kw, loads)

    if spec.noise_std_kw > 0:
        rng = np.random.default_rng(spec.seed)
        loads = np.clip(loads + rng.normal(0.0, spec.noise_std_kw, n), 0.0, None)

    logger.debug(f"Synthesized {n} samples, mean {loads.mean():.1f} kW")
    return LoadProfile(loads, spec.step_minutes)
