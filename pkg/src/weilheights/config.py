"""Experiment configuration: a YAML document parsed into nested dataclasses.

Unknown keys are rejected; exact rationals are written as ``"p/q"`` strings.
Every parse failure is a :class:`ConfigError` (CLI exit code 2).
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from fractions import Fraction

import yaml

from .errors import ConfigError

KINDS = ("schanuel", "restriction-check", "tamagawa-check", "bt", "peyre", "enumerate")


@dataclass
class FieldBlock:
    name: str = "Q"
    minpoly: list | None = None
    basis: list | None = None
    class_number: int = 1
    roots_of_unity: int = 2


@dataclass
class VarietyBlock:
    ambient: list = field(default_factory=lambda: [1])
    variables: list | None = None
    equations: list = field(default_factory=list)
    nonvanishing: list = field(default_factory=list)
    lattice: str = "Pn"
    lattice_args: dict = field(default_factory=dict)
    action: str = "trivial"
    splitting_field: str | None = None
    bad_primes: list | None = None


@dataclass
class MetricBlock:
    kind: str = "max"
    matrix: list | None = None


@dataclass
class LadderBlock:
    b0: int = 10
    factor: str = "2"
    rungs: int = 10
    bmax: int | None = None


@dataclass
class FitBlock:
    mode: str = "fix_a"
    a: str | None = None


@dataclass
class CutoffBlock:
    prime_cutoff: int = 1000
    density_cutoff: int | None = None
    mc_samples: int = 200_000
    verify_bound: int = 20
    tolerance: str = "3/100"


@dataclass
class BTBlock:
    samples: int = 20
    coefficient_bound: int = 3
    fiber_bound: int = 48
    fiber_ladder: list = field(default_factory=lambda: [3, 4, 7, 12, 19, 27, 37, 48])


@dataclass
class OutputBlock:
    dir: str = "out"
    prefix: str = ""
    timing: bool = False


@dataclass
class ExperimentConfig:
    kind: str = "schanuel"
    name: str = ""
    field: FieldBlock = dataclasses.field(default_factory=FieldBlock)
    variety: VarietyBlock = dataclasses.field(default_factory=VarietyBlock)
    metric: MetricBlock = dataclasses.field(default_factory=MetricBlock)
    ladder: LadderBlock = dataclasses.field(default_factory=LadderBlock)
    fit: FitBlock = dataclasses.field(default_factory=FitBlock)
    cutoffs: CutoffBlock = dataclasses.field(default_factory=CutoffBlock)
    bt: BTBlock = dataclasses.field(default_factory=BTBlock)
    output: OutputBlock = dataclasses.field(default_factory=OutputBlock)
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if self.metric.kind not in ("max", "euclidean", "matrix"):
            raise ConfigError(f"unknown metric kind {self.metric.kind!r}")
        if self.fit.mode not in ("free", "fix_a"):
            raise ConfigError(f"unknown fit mode {self.fit.mode!r}")
        if self.ladder.rungs < 1 or self.ladder.b0 < 1:
            raise ConfigError("ladder needs b0 >= 1 and at least one rung")
        rational(self.ladder.factor)
        if self.fit.a is not None:
            rational(self.fit.a)


def rational(text) -> Fraction:
    """Parse an exact rational (``3``, ``"3/2"``); floats are rejected."""
    if isinstance(text, bool) or isinstance(text, float):
        raise ConfigError(f"expected an exact rational, got {text!r}")
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad rational {text!r}") from exc


def _build(cls, data, where):
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"{where}: expected a mapping")
    names = {f.name: f for f in dataclasses.fields(cls)}
    unknown = sorted(set(data) - set(names))
    if unknown:
        raise ConfigError(f"{where}: unknown keys {unknown}")
    kw = {}
    for k, v in data.items():
        sub = _BLOCKS.get((cls, k))
        kw[k] = _build(sub, v, f"{where}.{k}") if sub else v
    try:
        return cls(**kw)
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{where}: {exc}") from exc


_BLOCKS = {(ExperimentConfig, "field"): FieldBlock, (ExperimentConfig, "variety"): VarietyBlock,
           (ExperimentConfig, "metric"): MetricBlock, (ExperimentConfig, "ladder"): LadderBlock,
           (ExperimentConfig, "fit"): FitBlock, (ExperimentConfig, "cutoffs"): CutoffBlock,
           (ExperimentConfig, "bt"): BTBlock, (ExperimentConfig, "output"): OutputBlock}


def config_from_dict(data) -> ExperimentConfig:
    return _build(ExperimentConfig, data, "config")


def parse_config(text: str) -> ExperimentConfig:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    if data is None:
        data = {}
    return config_from_dict(data)


def load_config(path) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config(fh.read())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc


def config_to_dict(cfg: ExperimentConfig):
    return dataclasses.asdict(cfg)


def dump_config(cfg: ExperimentConfig) -> str:
    return yaml.safe_dump(config_to_dict(cfg), sort_keys=True)
