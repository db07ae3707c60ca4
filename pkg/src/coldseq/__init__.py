"""coldseq: compressor sequencing and load shifting for industrial refrigeration.

This package computes minimum-power dispatch for a fleet of compressors with
affine power-heat curves, with and without shifting cooling into earlier
stages.

Basic usage:

    from coldseq import SequencingProcessor, ColdSeqConfig
    from coldseq.io import bundled_fleet, load_csv

    fleet = bundled_fleet('butterball')
    profile = load_csv('june.csv')
    report = SequencingProcessor(ColdSeqConfig(surplus_step=25.0)).compare(fleet, profile)
    print(report.to_dict())

Command line:

    coldseq compare --fleet butterball --profile june.csv
"""

__version__ = "0.1.0"
__author__ = "coldseq Contributors"
__license__ = "MIT"

# Core exports
from .core.config import ColdSeqConfig
from .core.context import (
    Assignment,
    ComparisonReport,
    LoadProfile,
    ShiftPlan,
    StaticSolution,
)
from .core.errors import ColdSeqError
from .core.fleet import Compressor, Fleet, SequencingOrder
from .core.processor import SequencingProcessor

__all__ = [
    # Version
    "__version__",
    # Config
    "ColdSeqConfig",
    # Fleet
    "Compressor",
    "Fleet",
    "SequencingOrder",
    # Context
    "Assignment",
    "ComparisonReport",
    "LoadProfile",
    "ShiftPlan",
    "StaticSolution",
    # Errors
    "ColdSeqError",
    # Processor
    "SequencingProcessor",
]
