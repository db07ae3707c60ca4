"""Fleet definition files.

Format: ``{"compressors": [{"id", "q_min_kw", "q_max_kw", "p_min_kw", "p_max_kw"}, ...]}``.
"""

import json
import logging
from importlib import resources
from pathlib import Path
from typing import Any, Dict, List, Union

from ..core.errors import FleetValidationError, ProfileParseError
from ..core.fleet import Compressor, Fleet

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

FIELDS = ('id', 'q_min_kw', 'q_max_kw', 'p_min_kw', 'p_max_kw')
BUNDLED = ('butterball',)


def fleet_from_dict(data: Dict[str, Any]) -> Fleet:
    """Build a fleet from its file representation.

    Raises:
        FleetValidationError: missing or non-numeric fields, or invalid curves
    """
    rows = data.get('compressors') if isinstance(data, dict) else None
    if not isinstance(rows, list):
        raise FleetValidationError("fleet file must contain a 'compressors' list")

    compressors: List[Compressor] = []
    for i, row in enumerate(rows):
        missing = [f for f in FIELDS if f not in row]
        if missing:
            raise FleetValidationError(f"compressor #{i}: missing field(s) {missing}")
        try:
            compressors.append(Compressor(
                id=str(row['id']),
                q_min=float(row['q_min_kw']),
                q_max=float(row['q_max_kw']),
                p_min=float(row['p_min_kw']),
                p_max=float(row['p_max_kw']),
            ))
        except FleetValidationError:
            raise
        except (TypeError, ValueError) as exc:
            raise FleetValidationError(f"compressor #{i}: {exc}")

    return Fleet(tuple(compressors))


def load_fleet(path: PathLike) -> Fleet:
    """Read a fleet file, or a bundled fleet by name (e.g. 'butterball').

    Raises:
        ProfileParseError: unreadable file or invalid JSON
        FleetValidationError: invalid fleet contents
    """
    if str(path) in BUNDLED:
        return bundled_fleet(str(path))

    try:
        with open(path, encoding='utf-8') as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ProfileParseError(f"{path}: cannot read fleet file ({exc})")

    fleet = fleet_from_dict(data)
    logger.info(f"Loaded fleet {list(fleet.ids)} from {path}")
    return fleet


def dump_fleet(f: Fleet, path: PathLike) -> None:
    """Write a fleet file."""
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(f.to_dict(), fh, indent=2)
        fh.write('\n')


def bundled_path(name: str) -> Path:
    """Path of a file shipped in ``coldseq.data``."""
    return Path(str(resources.files('coldseq.data').joinpath(name)))


def bundled_fleet(name: str = 'butterball') -> Fleet:
    """A fleet shipped with the package.

    Raises:
        FleetValidationError: unknown name
    """
    if name not in BUNDLED:
        raise FleetValidationError(f"unknown bundled fleet '{name}'; choose from {list(BUNDLED)}")
    data = json.loads(bundled_path(f'{name}.json').read_text(encoding='utf-8'))
    return fleet_from_dict(data)
