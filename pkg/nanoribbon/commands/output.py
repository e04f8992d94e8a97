"""
Artifact Output

CSV writers and the small text formats the command line accepts for ranges
and grids.
"""

import csv
import json
import sys
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field

from nanoribbon.errors import RibbonValidationError
from nanoribbon.models import write_json
from nanoribbon.spectrum.geometry import RibbonGeometry


class GeometryOptions(BaseModel):
    """Ribbon width and potential support shared by the direct subcommands."""

    L: float = Field(description="ribbon width (2L must not be an integer)")
    R0: float = Field(default=3.0, description="half-width of the potential support")

    def geometry(self) -> RibbonGeometry:
        return RibbonGeometry(L=self.L, R0=self.R0)


def write_csv(rows: Iterable[dict], columns: Sequence[str], path: Optional[Path] = None) -> int:
    """
    Write rows as CSV with a fixed column order.

    Args:
        rows: dictionaries keyed by column name
        columns: header, in output order
        path: destination; standard output when None

    Returns:
        Number of data rows written
    """
    count = 0
    if path is None:
        writer = csv.DictWriter(sys.stdout, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
            count += 1
        return count

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
            count += 1
    return count


def _split(text: str, parts: int, what: str) -> List[str]:
    pieces = text.split(":")
    if len(pieces) != parts:
        raise RibbonValidationError(f"{what} must look like {':'.join(['<f>'] * (parts - 1))}:<n>, got {text!r}")
    return pieces


def parse_steps(text: str) -> np.ndarray:
    """'min:max:steps' -> `steps` equispaced values including both ends."""
    lo, hi, steps = _split(text, 3, "range")
    try:
        lo_f, hi_f, count = float(lo), float(hi), int(steps)
    except ValueError as exc:
        raise RibbonValidationError(f"cannot parse range {text!r}: {exc}") from exc
    if count < 1:
        raise RibbonValidationError(f"range {text!r} needs at least one step")
    if hi_f < lo_f:
        raise RibbonValidationError(f"range {text!r} has max < min")
    return np.linspace(lo_f, hi_f, count)


def parse_stepped(text: str) -> np.ndarray:
    """'min:max:step' -> min, min + step, ... up to max inclusive."""
    lo, hi, step = _split(text, 3, "range")
    try:
        lo_f, hi_f, step_f = float(lo), float(hi), float(step)
    except ValueError as exc:
        raise RibbonValidationError(f"cannot parse range {text!r}: {exc}") from exc
    if step_f <= 0 or hi_f < lo_f:
        raise RibbonValidationError(f"range {text!r} needs step > 0 and max >= min")
    count = int(np.floor((hi_f - lo_f) / step_f + 1e-9)) + 1
    return lo_f + step_f * np.arange(count)


def parse_interval(text: str) -> Tuple[float, float]:
    """'a:b' with a < b."""
    pieces = text.split(":")
    try:
        a, b = (float(p) for p in pieces)
    except ValueError as exc:
        raise RibbonValidationError(f"interval must look like <a>:<b>, got {text!r}") from exc
    if not a < b:
        raise RibbonValidationError(f"interval {text!r} is empty")
    return a, b


def parse_grid(text: str) -> Tuple[int, int]:
    """'<nx>x<ny>' -> (nx, ny)."""
    try:
        nx, ny = (int(p) for p in text.lower().split("x"))
    except ValueError as exc:
        raise RibbonValidationError(f"grid must look like <nx>x<ny>, got {text!r}") from exc
    if nx < 1 or ny < 1:
        raise RibbonValidationError(f"grid {text!r} must have positive sizes")
    return nx, ny


def emit_json(payload: Union[BaseModel, dict], path: Optional[Path] = None) -> None:
    """Write a JSON artifact, or print it when no path is given."""
    if path is not None:
        write_json(path, payload)
    elif isinstance(payload, BaseModel):
        sys.stdout.write(payload.model_dump_json(indent=2) + "\n")
    else:
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
