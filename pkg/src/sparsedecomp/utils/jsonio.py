#!/usr/bin/env python3
"""
JSON I/O
Deterministic JSON reading and writing for every artifact the package emits.
"""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from ..exceptions import InputError


def _default(value: Any) -> Any:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    if hasattr(value, "to_dict"):
        return value.to_dict()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def dumps(data: Any) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, indent=2, sort_keys=True, default=_default) + "\n"


def write_json(path: str | Path, data: Any) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(dumps(data))
    return target


def read_json(path: str | Path) -> Any:
    source = Path(path)
    try:
        return json.loads(source.read_text())
    except OSError as e:
        raise InputError(f"{source}: cannot read ({e.strerror})") from e
    except json.JSONDecodeError as e:
        raise InputError(f"{source}: malformed JSON ({e.msg} at line {e.lineno})") from e
