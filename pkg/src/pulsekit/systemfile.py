"""Single-document JSON system files.

Schema: ``{"A": [[...], ...], "D": [...], "time_unit": "days",
"name": "optional"}``. Numbers may use scientific notation. Floats are
written with ``repr`` (shortest round-trip form), so save/load preserves
matrices bit for bit.
"""

from __future__ import annotations

import json
import os

from pulsekit.errors import InvalidInputError
from pulsekit.spectral import ControlSystem, control_system

__all__ = ["system_from_dict", "system_to_dict", "load_system",
           "save_system"]

_DEFAULT_TIME_UNIT = "time units"


def system_from_dict(obj) -> ControlSystem:
    if not isinstance(obj, dict):
        raise InvalidInputError("system file must be a JSON object")
    try:
        a = obj["A"]
        d = obj["D"]
    except KeyError as exc:
        raise InvalidInputError(f"system file is missing key {exc}") from None
    time_unit = obj.get("time_unit", _DEFAULT_TIME_UNIT)
    if not isinstance(time_unit, str):
        raise InvalidInputError("time_unit must be a string")
    return control_system(a, d, time_unit=time_unit)


def system_to_dict(sys: ControlSystem, name: str | None = None) -> dict:
    out = {
        "A": [[float(v) for v in row] for row in sys.a],
        "D": [float(v) for v in sys.d],
        "time_unit": sys.time_unit,
    }
    if name is not None:
        out["name"] = name
    return out


def load_system(path: str | os.PathLike) -> ControlSystem:
    """Read a system file; parse errors carry line and column."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(
            f"{path}: parse error at line {exc.lineno}, column "
            f"{exc.colno}: {exc.msg}") from None
    try:
        return system_from_dict(obj)
    except InvalidInputError as exc:
        raise InvalidInputError(f"{path}: {exc}") from None


def save_system(path: str | os.PathLike, sys: ControlSystem,
                name: str | None = None) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(system_to_dict(sys, name=name), fh, indent=2)
        fh.write("\n")
