#!/usr/bin/env python3
"""
Configuration Models
Pydantic models for every parameter block, exact rational parsing and run-config loading.
"""

import logging
import math
from bisect import bisect_right
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Literal, Union

import yaml
from pydantic import (
    BaseModel,
    BeforeValidator,
    ConfigDict,
    Field,
    PlainSerializer,
    ValidationError,
    field_validator,
    model_validator,
)

from ..exceptions import InputError

logger = logging.getLogger(__name__)


def parse_rational(value: Any) -> Fraction:
    """Accept ints, Fractions and strings such as "1/4" or "0.25"; reject floats."""
    if isinstance(value, bool):
        raise ValueError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ValueError(f"float {value!r} rejected; write it exactly, e.g. \"1/4\"")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"cannot parse {value!r} as a rational") from e
    raise ValueError(f"cannot parse {type(value).__name__} as a rational")


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_rational),
    PlainSerializer(str, return_type=str),
]

_MODEL_CONFIG = ConfigDict(frozen=True, arbitrary_types_allowed=True, extra="forbid")


def _open_unit(name: str, value: Fraction) -> Fraction:
    if not 0 < value < 1:
        raise ValueError(f"{name} must lie in (0,1), got {value}")
    return value


class LksParams(BaseModel):
    """k (tree order target) and η for the classes LKS, LKSmin and LKSsmall."""

    model_config = _MODEL_CONFIG

    k: int = Field(ge=1)
    eta: Rational

    @field_validator("eta")
    @classmethod
    def _eta_range(cls, v: Fraction) -> Fraction:
        # η = 0 is admitted so the plain degree-threshold examples can be expressed
        if not 0 <= v < 1:
            raise ValueError(f"eta must lie in [0,1), got {v}")
        return v

    @property
    def threshold(self) -> Fraction:
        return (1 + self.eta) * self.k

    def halved(self) -> "LksParams":
        return LksParams(k=self.k, eta=self.eta / 2)


class OmegaSequence(BaseModel):
    """Increasing sequence Ω_1 < Ω_2 < ..., given explicitly or as a geometric progression.

    The geometric form keeps long sequences (thousands of entries with ratio η²/100)
    lazy: entries are only materialized when a degree actually reaches them.
    """

    model_config = _MODEL_CONFIG

    values: tuple[Rational, ...] | None = None
    first: Rational | None = None
    growth: Rational | None = None
    count: int | None = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _shape(self) -> "OmegaSequence":
        if self.values is not None:
            if self.first is not None or self.growth is not None or self.count is not None:
                raise ValueError("give either values or first/growth/count, not both")
            if not self.values:
                raise ValueError("omega sequence is empty")
            if self.values[0] <= 0:
                raise ValueError("omega values must be positive")
            if any(a >= b for a, b in zip(self.values, self.values[1:])):
                raise ValueError("omega values must be strictly increasing")
        else:
            if self.first is None or self.growth is None or self.count is None:
                raise ValueError("geometric omega sequence needs first, growth and count")
            if self.first <= 0 or self.growth <= 1:
                raise ValueError("geometric omega sequence needs first > 0 and growth > 1")
        return self

    @classmethod
    def geometric(cls, first: Fraction, ratio: Fraction, count: int) -> "OmegaSequence":
        """Sequence with Ω_j/Ω_{j+1} = ratio."""
        return cls(first=first, growth=1 / Fraction(ratio), count=count)

    def __len__(self) -> int:
        return len(self.values) if self.values is not None else int(self.count or 0)

    def value(self, i: int) -> Fraction:
        """Ω_i, 1-based."""
        if not 1 <= i <= len(self):
            raise InputError(f"omega index {i} outside 1..{len(self)}")
        if self.values is not None:
            return self.values[i - 1]
        assert self.first is not None and self.growth is not None
        return self.first * self.growth ** (i - 1)

    def max_ratio(self) -> Fraction:
        """max_j Ω_j/Ω_{j+1}."""
        if self.values is not None:
            if len(self.values) < 2:
                return Fraction(0)
            return max(a / b for a, b in zip(self.values, self.values[1:]))
        assert self.growth is not None
        return 1 / self.growth

    def bucket(self, degree: int, k: int) -> int:
        """Largest i with Ω_i·k ≤ degree (0 when degree < Ω_1·k)."""
        if self.values is not None:
            return bisect_right([v * k for v in self.values], degree)
        i = 0
        while i < len(self) and self.value(i + 1) * k <= degree:
            i += 1
        return i


class FinderConfig(BaseModel):
    """Dense-spot finder selection."""

    model_config = _MODEL_CONFIG

    mode: Literal["auto", "exact", "heuristic"] = "auto"
    exact_cap: int = Field(default=14, ge=1)
    seed: int = 0
    restarts: int = Field(default=4, ge=1)
    max_seeds: int = Field(default=64, ge=0)
    auto_exact_limit: int = Field(default=10, ge=1)


class RegularityConfig(BaseModel):
    """Knobs of the regularity machinery; defaults follow the formal construction."""

    model_config = _MODEL_CONFIG

    exact_cap: int = Field(default=16, ge=1)
    eps_tilde_divisor: int = Field(default=8, ge=1)
    p_start: int | None = Field(default=None, ge=1)
    max_rounds: int = Field(default=10_000, ge=1)
    min_cluster_size: int = Field(default=1, ge=1)
    initial_min_clusters: int | None = Field(default=None, ge=1)
    jobs: int = Field(default=1, ge=1)


class DecompParams(BaseModel):
    """Parameters (k, Λ, γ, ε, ν, ρ, Ω*, Ω**, b, s) of bounded and sparse decompositions."""

    model_config = ConfigDict(
        frozen=True, arbitrary_types_allowed=True, extra="forbid", populate_by_name=True
    )

    k: int = Field(ge=1)
    gamma: Rational
    eps: Rational
    nu: Rational
    rho: Rational
    lambda_: Rational = Field(alias="lambda")
    omega_star: Rational
    omega_star2: Rational
    b: Rational = Fraction(0)
    s: int = Field(default=1, ge=1)
    nu_tilde: Rational | None = None
    challenge_count: int = Field(default=20, ge=0)
    exhaustive_avoiding_cap: int = Field(default=20, ge=0)
    seed: int = 0
    finder: FinderConfig = FinderConfig()
    regularity: RegularityConfig = RegularityConfig()

    @field_validator("gamma", "eps", "nu", "rho")
    @classmethod
    def _unit(cls, v: Fraction, info: Any) -> Fraction:
        return _open_unit(info.field_name, v)

    @field_validator("nu_tilde")
    @classmethod
    def _unit_or_none(cls, v: Fraction | None) -> Fraction | None:
        return None if v is None else _open_unit("nu_tilde", v)

    @field_validator("omega_star", "omega_star2")
    @classmethod
    def _above_two(cls, v: Fraction, info: Any) -> Fraction:
        if v <= 2:
            raise ValueError(f"{info.field_name} must exceed 2, got {v}")
        return v

    @field_validator("lambda_")
    @classmethod
    def _positive(cls, v: Fraction) -> Fraction:
        if v <= 0:
            raise ValueError(f"lambda must be positive, got {v}")
        return v

    @field_validator("b")
    @classmethod
    def _non_negative(cls, v: Fraction) -> Fraction:
        if v < 0:
            raise ValueError(f"b must be non-negative, got {v}")
        return v

    @property
    def effective_nu_tilde(self) -> Fraction:
        return self.nu_tilde if self.nu_tilde is not None else self.eps / 2

    def relation_warnings(self) -> list[str]:
        """Parameter relations the decomposition guarantees assume but desk runs may skip."""
        warnings = []
        if self.lambda_ <= 2:
            warnings.append(f"lambda={self.lambda_} is not > 2")
        if self.nu > self.eps:
            warnings.append(f"nu={self.nu} exceeds eps={self.eps}: cluster size window is empty")
        if 2 * self.effective_nu_tilde > self.eps:
            warnings.append("2*nu_tilde exceeds eps: chunks may be larger than eps*k")
        if self.nu > self.effective_nu_tilde:
            warnings.append("nu exceeds nu_tilde: chunks may be smaller than nu*k")
        if self.rho**2 <= 289 * self.gamma:
            warnings.append("rho <= 17*sqrt(gamma): expander path embedding is not guaranteed")
        if self.gamma**2 * self.k < 1:
            warnings.append("gamma^2*k < 1: every spot meets any nonempty challenge set")
        for message in warnings:
            logger.warning(f"Parameter relation not met: {message}")
        return warnings

    def formal_constants(self) -> dict[str, float]:
        """Formal constants of the decomposition proof, as base-10 logarithms (documentation only)."""
        omega, lam, gamma, eps = (float(x) for x in (self.omega_star, self.lambda_, self.gamma, self.eps))
        eps_tilde = eps / self.regularity.eps_tilde_divisor
        log_nu_tilde = math.log10(eps) - (omega * lam / gamma**3) * math.log10(3)
        log_m = math.log10(omega) - math.log10(gamma) - log_nu_tilde
        log_rounds = math.log10(3691) + log_m - 6 * math.log10(eps_tilde)
        return {
            "log10_nu_tilde": log_nu_tilde,
            "log10_pattern_maxdeg": log_m,
            "log10_round_budget": log_rounds,
            "log10_avoiding_bound_over_k": log_nu_tilde + (omega * lam / gamma**3) * math.log10(3),
        }


class EmbedParams(BaseModel):
    """Parameters of the shrub, expander-path and reserve-set embeddings."""

    model_config = _MODEL_CONFIG

    k: int = Field(ge=1)
    gamma: Rational = Fraction(1, 4)
    rho: Rational = Fraction(1, 4)
    eps: Rational = Fraction(1, 4)
    tau: Rational = Fraction(1, 2)
    delta: Rational = Fraction(1, 4)
    q: int = Field(default=1, ge=1)
    lookahead_divisor: int = Field(default=100, ge=1)
    retries: int = Field(default=5, ge=1)
    strict: bool = True
    seed: int = 0


class _SpecBase(BaseModel):
    model_config = _MODEL_CONFIG

    seed: int = 0


class LksExtremalSpec(_SpecBase):
    kind: Literal["lks_extremal"] = "lks_extremal"
    n: int


class EsExtremalSpec(_SpecBase):
    kind: Literal["es_extremal"] = "es_extremal"
    n: int
    k: int


class LocallyDenseSpec(_SpecBase):
    kind: Literal["locally_dense"] = "locally_dense"
    ell: int
    set_size: int
    pattern_maxdeg: int
    density: Rational
    block_size: int | None = None


class RandomSpec(_SpecBase):
    kind: Literal["random"] = "random"
    n: int
    p: Rational | None = None
    m: int | None = None


class RegularSpec(_SpecBase):
    kind: Literal["regular"] = "regular"
    n: int
    d: int


class CompleteSpec(_SpecBase):
    kind: Literal["complete"] = "complete"
    n: int


class CycleSpec(_SpecBase):
    kind: Literal["cycle"] = "cycle"
    n: int


class UnionSpec(_SpecBase):
    kind: Literal["union"] = "union"
    components: list["GeneratorSpec"]


GeneratorSpec = Annotated[
    Union[
        LksExtremalSpec,
        EsExtremalSpec,
        LocallyDenseSpec,
        RandomSpec,
        RegularSpec,
        CompleteSpec,
        CycleSpec,
        UnionSpec,
    ],
    Field(discriminator="kind"),
]
UnionSpec.model_rebuild()


class RunConfig(BaseModel):
    """Everything one CLI run needs; loaded from YAML/JSON and overridden by flags."""

    model_config = ConfigDict(arbitrary_types_allowed=True, extra="forbid")

    command: Literal["generate", "gap", "decompose", "verify", "embed", "report"]
    mode: str | None = None
    input: str | None = None
    decomposition: str | None = None
    tree: str | None = None
    output: str | None = None
    generator: GeneratorSpec | None = None
    params: DecompParams | None = None
    lks: LksParams | None = None
    omegas: OmegaSequence | None = None
    embed: EmbedParams | None = None
    eta: Rational | None = None
    k: int | None = None
    challenges: list[list[int]] = Field(default_factory=list)
    dense_c: Rational | None = None
    dense_a: Rational = Fraction(1, 8)
    path_len: int | None = None
    anchor: int | None = None
    used: list[int] = Field(default_factory=list)
    seeds: list[int] | None = None
    sweep_k: int | None = None
    seed: int = 0
    exact_cap: int | None = None
    jobs: int = Field(default=1, ge=1)
    debug_trace: bool = False

    def with_overrides(self, **overrides: Any) -> "RunConfig":
        """Apply CLI flag overrides; ``None`` values leave the file setting alone."""
        data = {key: value for key, value in overrides.items() if value is not None}
        updated = self.model_copy(update=data)
        if updated.params is not None:
            finder = updated.params.finder
            regularity = updated.params.regularity
            if "exact_cap" in data:
                finder = finder.model_copy(update={"exact_cap": data["exact_cap"]})
            if "jobs" in data:
                regularity = regularity.model_copy(update={"jobs": data["jobs"]})
            extra: dict[str, Any] = {"finder": finder, "regularity": regularity}
            if "seed" in data:
                extra["seed"] = data["seed"]
            updated = updated.model_copy(update={"params": updated.params.model_copy(update=extra)})
        return updated


def load_run_config(path: str | Path | None, **overrides: Any) -> RunConfig:
    """Read a YAML or JSON run config (JSON is valid YAML) and apply flag overrides."""
    data: dict[str, Any] = {}
    if path is not None:
        source = Path(path)
        try:
            loaded = yaml.safe_load(source.read_text())
        except OSError as e:
            raise InputError(f"{source}: cannot read config ({e})") from e
        except yaml.YAMLError as e:
            raise InputError(f"{source}: malformed config ({e})") from e
        if loaded is not None and not isinstance(loaded, dict):
            raise InputError(f"{source}: config must be a mapping")
        data = loaded or {}
    if overrides.get("command") is not None:
        data["command"] = overrides.pop("command")
    else:
        overrides.pop("command", None)
    try:
        config = RunConfig.model_validate(data)
    except ValidationError as e:
        raise InputError(f"invalid run config: {e}") from e
    return config.with_overrides(**overrides)
