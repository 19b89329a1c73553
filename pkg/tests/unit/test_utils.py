#!/usr/bin/env python3
"""
Tests for JSON I/O, logging setup and the error hierarchy
"""

import json
import logging
from fractions import Fraction

import pytest

from sparsedecomp.exceptions import (
    ExactCapExceeded,
    InputError,
    InvariantViolation,
    PreconditionError,
    SparseDecompError,
)
from sparsedecomp.utils.jsonio import dumps, read_json, write_json
from sparsedecomp.utils.logging_config import LOG_ENV_VAR, resolve_level

logger = logging.getLogger(__name__)


class _Tagged:
    def to_dict(self):
        return {"tag": 1}


def test_dumps_is_canonical():
    """Test sorted keys, exact rationals and set ordering"""
    text = dumps({"b": Fraction(1, 3), "a": frozenset({3, 1, 2}), "c": _Tagged()})
    assert text.endswith("\n")
    assert list(json.loads(text)) == ["a", "b", "c"]
    assert json.loads(text) == {"a": [1, 2, 3], "b": "1/3", "c": {"tag": 1}}
    assert dumps({"x": 1, "y": 2}) == dumps({"y": 2, "x": 1})


def test_dumps_rejects_unknown_objects():
    """Test that arbitrary objects are not silently stringified"""
    with pytest.raises(TypeError):
        dumps({"x": object()})


def test_write_and_read_json(output_dir):
    """Test writing into a fresh directory and reading back"""
    path = write_json(output_dir / "nested" / "data.json", {"n": 3, "edges": [[0, 1]]})
    assert path.exists()
    assert read_json(path) == {"n": 3, "edges": [[0, 1]]}


def test_read_json_errors(tmp_path):
    """Test missing and malformed JSON files"""
    with pytest.raises(InputError):
        read_json(tmp_path / "missing.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    with pytest.raises(InputError) as excinfo:
        read_json(broken)
    assert "malformed JSON" in str(excinfo.value)


def test_resolve_level(monkeypatch):
    """Test the log level environment variable"""
    monkeypatch.setenv(LOG_ENV_VAR, "debug")
    assert resolve_level() == logging.DEBUG
    monkeypatch.setenv(LOG_ENV_VAR, "chatty")
    assert resolve_level() == logging.WARNING


@pytest.mark.parametrize(
    "error,code",
    [
        (InputError("bad"), 2),
        (PreconditionError("maxdeg", "too large"), 3),
        (ExactCapExceeded("cap"), 2),
        (InvariantViolation("broken"), 1),
    ],
)
def test_exit_codes(error, code):
    """Test the exit code carried by each error"""
    assert isinstance(error, SparseDecompError)
    assert error.exit_code == code


def test_error_payloads():
    """Test the JSON error payloads"""
    error = PreconditionError("maxdeg", "too large")
    assert error.clause == "maxdeg"
    assert error.to_dict() == {"type": "PreconditionError", "message": "maxdeg: too large", "clause": "maxdeg"}
    assert InputError("bad").to_dict() == {"type": "InputError", "message": "bad"}
    assert isinstance(InputError("bad"), ValueError)


def test_package_markers_are_utf8(test_dir):
    """Test that every package __init__ under src and tests decodes as UTF-8"""
    markers = list(test_dir.rglob("__init__.py")) + list((test_dir.parent / "src").rglob("__init__.py"))
    assert len(markers) >= 8
    for path in markers:
        assert not path.read_bytes().startswith(b"\xff\xfe"), path
        path.read_text(encoding="utf-8")
