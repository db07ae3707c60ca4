"""Core compressor-sequencing logic.

This package contains the framework-free fleet model, water-fill dispatch,
the exact static optimizer, the load-shifting solvers and the processor that
compares them.
"""

from .config import ColdSeqConfig
from .context import (
    Assignment,
    CapacityShare,
    ComparisonReport,
    LoadProfile,
    ShiftPlan,
    StaticSolution,
)
from .fleet import Compressor, Fleet, SequencingOrder
from .processor import SequencingProcessor

__all__ = [
    # Config
    "ColdSeqConfig",
    # Fleet
    "Compressor",
    "Fleet",
    "SequencingOrder",
    # Context
    "Assignment",
    "CapacityShare",
    "ComparisonReport",
    "LoadProfile",
    "ShiftPlan",
    "StaticSolution",
    # Processor
    "SequencingProcessor",
]
