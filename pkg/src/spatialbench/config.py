"""Pipeline configuration and the key=value config file format.

A config file is plain text, one `key = value` per line, `#` comments.
Dotted keys address the per-task sub-configs (`maze.tol = 2`,
`dots.shape = disk`); list values are comma-separated. Command-line flags
override file values, which override the built-in defaults.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field, replace
from pathlib import Path

from .baselines import BaselineKind, ConfigError
from .scenes import DotsConfig, MazeConfig

TASKS = ("dots", "maze")
DEFAULT_RESOLUTIONS = (16, 32, 64)


@dataclass(frozen=True)
class PipelineConfig:
    tasks: tuple[str, ...] = TASKS
    resolutions: tuple[int, ...] = DEFAULT_RESOLUTIONS
    num_cases: int = 50
    master_seed: int = 42
    out_dir: str = "runs"
    baselines: tuple[str, ...] = ("oracle",)
    adjacency: int = 4
    jobs: int = 1
    maze: MazeConfig = field(default_factory=MazeConfig)
    dots: DotsConfig = field(default_factory=DotsConfig)

    def __post_init__(self):
        if not self.tasks:
            raise ConfigError("at least one task is required")
        for task in self.tasks:
            if task not in TASKS:
                raise ConfigError(f"unknown task {task!r}; expected one of {TASKS}")
        if len(set(self.tasks)) != len(self.tasks):
            raise ConfigError(f"duplicate task in {self.tasks}")
        if not self.resolutions:
            raise ConfigError("at least one resolution is required")
        for r in self.resolutions:
            if r < 16 or r % 16 != 0:
                raise ConfigError(f"resolutions must be positive multiples of 16, got {r}")
        if len(set(self.resolutions)) != len(self.resolutions):
            raise ConfigError(f"duplicate resolution in {self.resolutions}")
        if self.num_cases < 1:
            raise ConfigError("num_cases must be >= 1")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must fit in 64 bits")
        if not self.baselines:
            raise ConfigError("at least one baseline is required")
        for text in self.baselines:
            BaselineKind.parse(text)  # raises ConfigError on bad spellings
        if self.adjacency not in (4, 8):
            raise ConfigError(f"adjacency must be 4 or 8, got {self.adjacency}")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")


def _field_types(cls) -> dict[str, str]:
    return {f.name: f.type for f in dataclasses.fields(cls)}


_TOP_TYPES = {
    name: kind
    for name, kind in _field_types(PipelineConfig).items()
    if name not in ("maze", "dots")
}
_MAZE_TYPES = _field_types(MazeConfig)
_DOTS_TYPES = _field_types(DotsConfig)

_TRUE_WORDS = ("true", "1", "yes", "on")
_FALSE_WORDS = ("false", "0", "no", "off")


def _parse_value(text: str, type_name: str, key: str):
    try:
        if type_name == "int":
            return int(text)
        if type_name == "float":
            return float(text)
        if type_name == "str":
            return text
        if type_name == "bool":
            low = text.lower()
            if low in _TRUE_WORDS:
                return True
            if low in _FALSE_WORDS:
                return False
            raise ValueError(f"not a boolean: {text!r}")
        if type_name.startswith("tuple[int"):
            return tuple(int(part.strip()) for part in text.split(",") if part.strip())
        if type_name.startswith("tuple[str"):
            return tuple(part.strip() for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {exc}") from None
    raise ConfigError(f"{key} cannot be set from a config file")


def parse_config_text(text: str, base: PipelineConfig | None = None) -> PipelineConfig:
    """Apply key=value lines on top of `base` (defaults when omitted)."""
    config = base if base is not None else PipelineConfig()
    buckets: dict[str, dict] = {"": {}, "maze": {}, "dots": {}}
    types = {"": _TOP_TYPES, "maze": _MAZE_TYPES, "dots": _DOTS_TYPES}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key = value, got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        prefix, _, name = key.rpartition(".")
        if prefix not in buckets:
            raise ConfigError(f"config line {lineno}: unknown section {prefix!r}")
        if name not in types[prefix]:
            raise ConfigError(f"config line {lineno}: unknown key {key!r}")
        if name in buckets[prefix]:
            raise ConfigError(f"config line {lineno}: duplicate key {key!r}")
        buckets[prefix][name] = _parse_value(value, types[prefix][name], key)
    try:
        if buckets["maze"]:
            config = replace(config, maze=replace(config.maze, **buckets["maze"]))
        if buckets["dots"]:
            config = replace(config, dots=replace(config.dots, **buckets["dots"]))
        if buckets[""]:
            config = replace(config, **buckets[""])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    return config


def load_config_file(path: str | Path, base: PipelineConfig | None = None) -> PipelineConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    return parse_config_text(text, base)
