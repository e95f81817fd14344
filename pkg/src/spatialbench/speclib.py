"""Access to the spec files shipped with the package."""

from __future__ import annotations

import functools
from importlib import resources

from .slcs import SpecProgram, parse_source, sort_check


def spec_names() -> list[str]:
    """Names of all shipped .sls files, sorted."""
    root = resources.files(__package__) / "specs"
    return sorted(entry.name for entry in root.iterdir() if entry.name.endswith(".sls"))


def spec_text(name: str) -> str:
    """Source text of a shipped spec, e.g. spec_text("dots.sls")."""
    return (resources.files(__package__) / "specs" / name).read_text(encoding="utf-8")


@functools.lru_cache(maxsize=None)
def load_program(name: str) -> SpecProgram:
    """Parsed and sort-checked shipped spec (cached; programs are immutable)."""
    program = parse_source(spec_text(name))
    sort_check(program)
    return program
