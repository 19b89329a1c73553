#!/usr/bin/env python3
"""
Tests for rational parsing, parameter models and run-config loading
"""

import logging
import math
from fractions import Fraction

import pytest
from pydantic import ValidationError

from sparsedecomp.exceptions import InputError
from sparsedecomp.utils.config import (
    DecompParams,
    LksParams,
    OmegaSequence,
    RunConfig,
    load_run_config,
    parse_rational,
)
from tests.fixtures.graphs import desk_params

logger = logging.getLogger(__name__)


@pytest.mark.parametrize(
    "value,expected",
    [(3, Fraction(3)), ("1/4", Fraction(1, 4)), (" 0.25 ", Fraction(1, 4)), (Fraction(2, 3), Fraction(2, 3))],
)
def test_parse_rational(value, expected):
    """Test accepted rational spellings"""
    assert parse_rational(value) == expected


@pytest.mark.parametrize("value", [0.25, True, "1/0", "quarter", None])
def test_parse_rational_rejects(value):
    """Test that floats and junk are rejected"""
    with pytest.raises(ValueError):
        parse_rational(value)


def test_lks_params():
    """Test the LKS threshold, halving and the η range"""
    p = LksParams(k=4, eta="1/2")
    assert p.threshold == 6
    assert p.halved().eta == Fraction(1, 4)
    assert LksParams(k=4, eta=0).threshold == 4
    with pytest.raises(ValidationError):
        LksParams(k=4, eta=1)
    with pytest.raises(ValidationError):
        LksParams(k=0, eta="1/2")


def test_explicit_omega_sequence():
    """Test indexing, ratio and bucketing of an explicit sequence"""
    seq = OmegaSequence(values=["1", "4", "16"])
    assert len(seq) == 3
    assert seq.value(2) == 4
    assert seq.max_ratio() == Fraction(1, 4)
    assert seq.bucket(33, 8) == 2
    assert seq.bucket(7, 8) == 0
    with pytest.raises(InputError):
        seq.value(0)


def test_geometric_omega_sequence():
    """Test the lazy geometric form"""
    seq = OmegaSequence.geometric(Fraction(1), Fraction(1, 4), 5)
    assert len(seq) == 5
    assert seq.value(3) == 16
    assert seq.max_ratio() == Fraction(1, 4)
    assert seq.bucket(128, 8) == 3
    assert seq.bucket(10**9, 8) == 5


@pytest.mark.parametrize(
    "data",
    [
        {"values": ["4", "1"]},
        {"values": []},
        {"values": ["0", "1"]},
        {"values": ["1"], "count": 3},
        {"first": "1", "growth": "4"},
        {"first": "1", "growth": "1", "count": 3},
    ],
)
def test_omega_sequence_shape_errors(data):
    """Test malformed omega sequences"""
    with pytest.raises(ValidationError):
        OmegaSequence.model_validate(data)


def test_decomp_params_alias_and_dump():
    """Test the lambda alias and exact rational serialization"""
    p = desk_params()
    assert p.lambda_ == 2
    assert DecompParams.model_validate({**p.model_dump(by_alias=True), "lambda": "5/2"}).lambda_ == Fraction(5, 2)
    dumped = p.model_dump(mode="json", by_alias=True)
    assert dumped["lambda"] == "2"
    assert dumped["gamma"] == "1/4"
    assert p.effective_nu_tilde == Fraction(1, 8)


@pytest.mark.parametrize(
    "field,value",
    [("gamma", 1), ("eps", 0), ("omega_star", 2), ("lambda", 0), ("b", -1), ("nu_tilde", "3/2"), ("bogus", 1)],
)
def test_decomp_params_validation(field, value):
    """Test each parameter range check"""
    data = desk_params().model_dump(by_alias=True)
    data[field] = value
    with pytest.raises(ValidationError):
        DecompParams.model_validate(data)


def test_decomp_params_frozen():
    """Test that parameter blocks are immutable"""
    with pytest.raises(ValidationError):
        desk_params().k = 9


def test_relation_warnings():
    """Test the parameter relations a desk-scale run skips"""
    warnings = desk_params().relation_warnings()
    assert len(warnings) == 3
    assert any("lambda" in w for w in warnings)
    assert any("sqrt(gamma)" in w for w in warnings)
    assert any("gamma^2*k" in w for w in warnings)
    assert len(desk_params(nu="1/2").relation_warnings()) == 5


def test_formal_constants():
    """Test that the avoiding bound collapses back to log10(eps)"""
    constants = desk_params().formal_constants()
    assert set(constants) == {
        "log10_nu_tilde",
        "log10_pattern_maxdeg",
        "log10_round_budget",
        "log10_avoiding_bound_over_k",
    }
    assert constants["log10_avoiding_bound_over_k"] == pytest.approx(math.log10(0.25))
    assert constants["log10_nu_tilde"] < 0


def test_run_config_overrides():
    """Test that flag overrides reach the nested parameter blocks"""
    config = RunConfig(command="decompose", params=desk_params())
    updated = config.with_overrides(exact_cap=5, jobs=3, seed=7, input=None)
    assert updated.params.finder.exact_cap == 5
    assert updated.params.regularity.jobs == 3
    assert updated.params.seed == 7
    assert updated.seed == 7
    assert updated.input is None
    assert config.params.finder.exact_cap == 14


def test_load_run_config_yaml(tmp_path):
    """Test loading a YAML run config with a generator and geometric omegas"""
    path = tmp_path / "run.yaml"
    path.write_text(
        "command: gap\n"
        "eta: 1/2\n"
        "k: 3\n"
        "omegas: {first: 3, growth: 8, count: 9}\n"
        "generator: {kind: union, components: [{kind: complete, n: 4}, {kind: cycle, n: 5}]}\n"
    )
    config = load_run_config(path, input="graph.json")
    assert config.command == "gap"
    assert config.eta == Fraction(1, 2)
    assert config.omegas.value(2) == 24
    assert config.generator.components[1].kind == "cycle"
    assert config.input == "graph.json"


def test_load_run_config_command_override(tmp_path):
    """Test that a command flag wins over the file and a bare flag set suffices"""
    path = tmp_path / "run.json"
    path.write_text('{"command": "gap"}')
    assert load_run_config(path, command="report").command == "report"
    assert load_run_config(None, command="generate").command == "generate"


@pytest.mark.parametrize("content", ["command: [", "- just\n- a list\n", "command: fly\n", "k: 3\n"])
def test_load_run_config_errors(tmp_path, content):
    """Test malformed and invalid config files"""
    path = tmp_path / "bad.yaml"
    path.write_text(content)
    with pytest.raises(InputError):
        load_run_config(path)


def test_load_run_config_missing_file(tmp_path):
    """Test a missing config file"""
    with pytest.raises(InputError):
        load_run_config(tmp_path / "absent.yaml", command="gap")
