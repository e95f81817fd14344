"""Reference predictors for exercising the evaluation harness.

The oracle re-runs the task's ground-truth rule on the stored channels, so
it is a fixed point of generate -> predict -> evaluate (dice = iou = 1.0 on
every case). The others are structured failure modes: constant masks, a
copied input channel, and the whole region reachable from the maze entry.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import BitMask
from .slcs import op_touch
from .scenes import DotsConfig, MazeConfig, dots_ground_truth, maze_ground_truth

_PLAIN_KINDS = ("oracle", "empty", "full", "entry_component")


class ConfigError(ValueError):
    """Invalid configuration: bad option values or a baseline/task mismatch."""


@dataclass(frozen=True)
class BaselineKind:
    name: str
    channel: int | None = None

    @classmethod
    def parse(cls, text: str) -> "BaselineKind":
        """Parse a kind spelled on the command line, e.g. `copy_channel:1`."""
        if text in _PLAIN_KINDS:
            return cls(text)
        if text.startswith("copy_channel:"):
            arg = text[len("copy_channel:"):]
            try:
                channel = int(arg)
            except ValueError:
                raise ConfigError(f"copy_channel needs an integer index, got {arg!r}") from None
            if channel < 0:
                raise ConfigError(f"copy_channel index must be >= 0, got {channel}")
            return cls("copy_channel", channel)
        raise ConfigError(
            f"unknown baseline {text!r}; expected one of "
            f"{', '.join(_PLAIN_KINDS)} or copy_channel:<index>"
        )

    @property
    def slug(self) -> str:
        """Filesystem-safe name used in `preds_<slug>` directories."""
        return self.name if self.channel is None else f"{self.name}_{self.channel}"

    def __str__(self) -> str:
        return self.name if self.channel is None else f"{self.name}:{self.channel}"


def predict(
    kind: BaselineKind,
    channels: tuple[BitMask, ...],
    task: str,
    *,
    maze_config: MazeConfig | None = None,
    dots_config: DotsConfig | None = None,
    adjacency: int = 4,
) -> BitMask:
    """Produce one baseline prediction from a case's input channels."""
    if kind.name == "oracle":
        if task == "maze":
            return maze_ground_truth(channels, maze_config or MazeConfig(), adjacency)
        if task == "dots":
            return dots_ground_truth(channels, dots_config or DotsConfig(), adjacency)
        raise ConfigError(f"unknown task {task!r}")
    if kind.name == "empty":
        first = channels[0]
        return BitMask.empty(first.width, first.height)
    if kind.name == "full":
        first = channels[0]
        return BitMask.full(first.width, first.height)
    if kind.name == "copy_channel":
        if kind.channel is None or kind.channel >= len(channels):
            raise ConfigError(
                f"copy_channel index {kind.channel} out of range for {len(channels)} channels"
            )
        return channels[kind.channel]
    if kind.name == "entry_component":
        if task != "maze":
            raise ConfigError("entry_component baseline only applies to maze cases")
        return op_touch(~channels[0], channels[1], adjacency)
    raise ConfigError(f"unknown baseline kind {kind.name!r}")
