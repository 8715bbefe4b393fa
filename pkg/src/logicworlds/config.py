"""Suite configuration: JSON schema, defaults, validation.

Defaults: 20 relations, half of them symmetric, 20 rules per world at
stride 1, 5000/1000/1000 graphs per world, resolution lengths 2..10.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError
from .worldgraph import GenConfig

_GEN_KEYS = (
    "gamma",
    "max_expansions",
    "cycles",
    "node_pool",
    "max_walk_len",
    "graphs_per_split",
    "noise_gamma",
    "noise_depth",
    "split_fractions",
)
_SUITE_KEYS = (
    "seed",
    "num_relations",
    "symmetric_fraction",
    "rules_per_world",
    "stride",
    "valid_worlds",
    "test_worlds",
    "output_dir",
)


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = 0
    num_relations: int = 20
    symmetric_fraction: float = 0.5
    rules_per_world: int = 20
    stride: int = 1
    valid_worlds: int = 3
    test_worlds: int = 3
    gen: GenConfig = field(default_factory=GenConfig)
    output_dir: str | None = None

    def __post_init__(self) -> None:
        if self.num_relations < 2:
            raise ConfigError("num_relations must be at least 2")
        if not 0.0 <= self.symmetric_fraction <= 1.0:
            raise ConfigError("symmetric_fraction must lie in [0, 1]")
        if self.rules_per_world < 1 or self.stride < 1:
            raise ConfigError("rules_per_world and stride must be positive")
        if self.valid_worlds < 0 or self.test_worlds < 0:
            raise ConfigError("world split counts cannot be negative")

    def to_dict(self) -> dict:
        doc = {
            "seed": self.seed,
            "num_relations": self.num_relations,
            "symmetric_fraction": self.symmetric_fraction,
            "rules_per_world": self.rules_per_world,
            "stride": self.stride,
            "valid_worlds": self.valid_worlds,
            "test_worlds": self.test_worlds,
            "output_dir": self.output_dir,
            "gamma": self.gen.gamma,
            "max_expansions": self.gen.max_expansions,
            "cycles": self.gen.cycles,
            "node_pool": self.gen.node_pool,
            "max_walk_len": self.gen.max_walk_len,
            "graphs_per_split": list(self.gen.graphs_per_split),
            "noise_gamma": self.gen.noise_gamma,
            "noise_depth": self.gen.noise_depth,
            "split_fractions": list(self.gen.split_fractions),
        }
        return doc


def config_from_dict(doc: dict) -> SuiteConfig:
    unknown = set(doc) - set(_SUITE_KEYS) - set(_GEN_KEYS)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    gen_kwargs = {k: doc[k] for k in _GEN_KEYS if k in doc}
    for tuple_key in ("graphs_per_split", "split_fractions"):
        if tuple_key in gen_kwargs:
            gen_kwargs[tuple_key] = tuple(gen_kwargs[tuple_key])
    suite_kwargs = {k: doc[k] for k in _SUITE_KEYS if k in doc}
    return SuiteConfig(gen=GenConfig(**gen_kwargs), **suite_kwargs)


def load_config(path: str | Path) -> SuiteConfig:
    """Read and validate a JSON config file."""
    try:
        doc = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})")
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: config must be a JSON object")
    try:
        return config_from_dict(doc)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}")
