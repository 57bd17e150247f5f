"""Serialization helpers: fixed-precision CSV/JSON and run records."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import math
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

DIGITS = 15


def fmt(value) -> str:
    """Locale-independent text for one cell; floats get 15 significant digits."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.{DIGITS}g}"
    return str(value)


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def to_jsonable(obj):
    """Plain JSON types; floats rounded to 15 significant digits, complex split."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return fmt(v)
        return float(f"{v:.{DIGITS}g}")
    return obj


def json_text(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=True) + "\n"


def input_hash(command: str, parameters: dict) -> str:
    """Git-style blob hash of the canonical JSON of the inputs."""
    body = json.dumps({"command": command, "parameters": to_jsonable(parameters)}, sort_keys=True).encode()
    return hashlib.sha1(b"blob %d\0" % len(body) + body).hexdigest()


@dataclasses.dataclass
class RunRecord:
    command: str
    parameters: dict
    input_hash: str
    outputs: list[str]
    timestamp: str

    @classmethod
    def create(cls, command: str, parameters: dict, outputs=()) -> "RunRecord":
        return cls(
            command=command,
            parameters=dict(parameters),
            input_hash=input_hash(command, parameters),
            outputs=[str(p) for p in outputs],
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        )


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path
