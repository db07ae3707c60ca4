"""File formats: load profiles, fleets and shift plans."""

from .fleets import bundled_fleet, bundled_path, dump_fleet, load_fleet
from .plans import load_plan_csv, plan_frame, save_plan_csv
from .profiles import ProfileSpec, load_csv, load_spec, moving_average, save_csv, synth

__all__ = [
    # Fleets
    "bundled_fleet",
    "bundled_path",
    "dump_fleet",
    "load_fleet",
    # Plans
    "load_plan_csv",
    "plan_frame",
    "save_plan_csv",
    # Profiles
    "ProfileSpec",
    "load_csv",
    "load_spec",
    "moving_average",
    "save_csv",
    "synth",
]
