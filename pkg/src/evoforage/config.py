"""Run configuration: one flat dataclass plus the `key = value` file parser.

Unknown keys and type mismatches are hard errors so a typo can never
silently fall back to a default.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

from .world import DEFAULT_LAYOUT_SEED


class ConfigError(ValueError):
    """Invalid configuration (bad key, bad value, unusable combination)."""


@dataclass
class RunConfig:
    encoding: str = "lsys"              # matrix | lsys | matrixlsg
    world_type: str = "RoundedBarrier1"  # Open | RoundedBarrier1 | Maze
    generations: int = 100
    population: int = 64
    neurons: int = 256
    seed: int = 1
    width: int = 110
    height: int = 90
    layout_seed: int = DEFAULT_LAYOUT_SEED
    # genetic operators
    pm: float = 0.01
    p_type: float = 0.3
    p_cross: float = 1.0
    k_points: int = 2
    # random genotype generation
    p_conn: float = 0.05
    p_hard: float = 0.5
    p_adult: float = 0.1
    # network
    eta: float = 0.0035
    rule: str = "oja"                   # hebb | oja
    theta: float = 0.5
    # life span
    life_span: int = 8000
    starvation_limit: int = 256
    infancy_span: int = 800
    end_on_empty: bool = True

    def validate(self) -> None:
        if self.encoding not in ("matrix", "lsys", "matrixlsg"):
            raise ConfigError(f"encoding: unknown value {self.encoding!r}")
        if self.world_type not in ("Open", "RoundedBarrier1", "Maze"):
            raise ConfigError(f"world_type: unknown value {self.world_type!r}")
        if self.rule not in ("hebb", "oja"):
            raise ConfigError(f"rule: unknown value {self.rule!r}")
        for name in ("pm", "p_type", "p_cross", "p_conn", "p_hard", "p_adult"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name}: probability {v} outside [0, 1]")
        if self.generations < 0:
            raise ConfigError("generations: must be >= 0")
        if self.population < 8 or self.population % 4:
            raise ConfigError("population: must be >= 8 and divisible by 4")


def _parse_bool(key: str, raw: str) -> bool:
    low = raw.lower()
    if low in ("true", "yes", "1", "on"):
        return True
    if low in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {raw!r}")


def _parse_value(key: str, kind: type, raw: str):
    if kind is bool:
        return _parse_bool(key, raw)
    if kind is int:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None
    if kind is float:
        try:
            return float(raw)
        except ValueError:
            raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
    return raw


def load_config(text: str) -> RunConfig:
    """Parse `key = value` lines into a RunConfig; '#' starts a comment."""
    kinds = {f.name: f.type for f in fields(RunConfig)}
    # dataclass field types arrive as strings under `from __future__ annotations`
    types = {"str": str, "int": int, "float": float, "bool": bool}
    cfg = RunConfig()
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        key, eq, raw = stripped.partition("=")
        key = key.strip()
        raw = raw.strip()
        if not eq or not key or not raw:
            raise ConfigError(f"line {line_no}: expected 'key = value', got {line!r}")
        if key not in kinds:
            raise ConfigError(f"line {line_no}: unknown key {key!r}")
        kind = types[kinds[key]] if isinstance(kinds[key], str) else kinds[key]
        setattr(cfg, key, _parse_value(key, kind, raw))
    cfg.validate()
    return cfg
