"""Shift-plan CSV files: ``stage,q_in_kw,q_sh_kw,<compressor ids...>,power_kw``."""

import logging
from pathlib import Path
from typing import Union

import numpy as np
import pandas as pd

from ..core.context import Assignment, ShiftPlan
from ..core.errors import ProfileParseError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

LEADING = ('stage', 'q_in_kw', 'q_sh_kw')
TRAILING = 'power_kw'


def plan_frame(plan: ShiftPlan) -> pd.DataFrame:
    """One row per stage with demand, shifted load, per-machine loads and power."""
    ids = plan.compressor_ids
    frame = pd.DataFrame({
        'stage': np.arange(len(plan)),
        'q_in_kw': plan.demand,
        'q_sh_kw': plan.shifted,
    })
    loads = plan.load_matrix(ids)
    for i, cid in enumerate(ids):
        frame[cid] = loads[:, i]
    frame[TRAILING] = plan.stage_power
    return frame


def save_plan_csv(plan: ShiftPlan, path: PathLike) -> None:
    """Write a plan."""
    plan_frame(plan).to_csv(path, index=False, lineterminator='\n')
    logger.info(f"Wrote {len(plan)}-stage plan '{plan.label}' to {path}")


def load_plan_csv(path: PathLike, label: str = '') -> ShiftPlan:
    """Read a plan written by ``save_plan_csv``.

    Raises:
        ProfileParseError: unreadable file, wrong columns or non-numeric cells
    """
    try:
        frame = pd.read_csv(path, float_precision='round_trip')
    except pd.errors.EmptyDataError:
        raise ProfileParseError(f"{path}: file is empty")
    except OSError as exc:
        raise ProfileParseError(f"{path}: cannot read file ({exc})")

    columns = list(frame.columns)
    if tuple(columns[:3]) != LEADING or columns[-1] != TRAILING or len(columns) < 5:
        raise ProfileParseError(
            f"{path}: expected columns stage,q_in_kw,q_sh_kw,<ids...>,power_kw; got {columns}",
            row=1,
        )

    numeric = frame.apply(pd.to_numeric, errors='coerce')
    if numeric.isna().any().any():
        i = int(np.flatnonzero(numeric.isna().any(axis=1).to_numpy())[0])
        raise ProfileParseError(f"{path}: line {i + 2}: non-numeric value", row=i + 2)

    ids = columns[3:-1]
    assignments = tuple(
        Assignment({cid: float(row[cid]) for cid in ids}) for _, row in numeric.iterrows()
    )
    return ShiftPlan(
        numeric['q_in_kw'].to_numpy(dtype=float),
        numeric['q_sh_kw'].to_numpy(dtype=float),
        assignments,
        numeric[TRAILING].to_numpy(dtype=float),
        label or Path(path).stem,
    )
