"""
Byte-deterministic rendering of reports: fixed key order, 17 significant digits, null for non-finite floats.
"""

import json
import math
from pathlib import Path
from typing import Any, Iterable, Union

import numpy as np
from pydantic import BaseModel

INDENT = "  "


def format_float(value: float) -> str:
    value = float(value)
    if not math.isfinite(value):
        return "null"
    return format(value, ".17g")


def _encode(value: Any, level: int) -> str:
    pad = INDENT * (level + 1)
    closing = INDENT * level
    if isinstance(value, BaseModel):
        value = value.model_dump()
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_encode(v, level + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + closing + "}"
    if isinstance(value, (list, tuple, np.ndarray)):
        if len(value) == 0:
            return "[]"
        items = [f"{pad}{_encode(v, level + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + "\n" + closing + "]"
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(value)
    return json.dumps(str(value))


def render_report(data: Any) -> str:
    """JSON text with two-space indent and a trailing newline."""
    return _encode(data, 0) + "\n"


def render_csv(rows: Iterable[dict]) -> str:
    """Sweep table with header param,lambda1,error_estimate,flags."""
    lines = ["param,lambda1,error_estimate,flags"]
    for row in rows:
        lines.append(",".join([
            format_float(row["param"]),
            format_float(row["lambda1"]),
            format_float(row["error_estimate"]),
            "|".join(row["flags"]),
        ]))
    return "\n".join(lines) + "\n"


def write_text(path: Union[str, Path], text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
