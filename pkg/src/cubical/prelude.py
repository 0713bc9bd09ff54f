"""Loading the shipped library `prelude.cutt`."""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from importlib import resources

from . import syntax as S
from .typechecker import Program, check_program


@dataclass(frozen=True)
class PreludeEntry:
    name: str
    definition: S.Definition
    tag: str


def prelude_source() -> str:
    return resources.files("cubical").joinpath("prelude.cutt").read_text(encoding="utf-8")


def _tags(src: str) -> dict[str, str]:
    # the comment block right above a `def` line
    tags: dict[str, str] = {}
    block: list[str] = []
    for line in src.splitlines():
        stripped = line.strip()
        if stripped.startswith("--"):
            block.append(stripped[2:].strip())
            continue
        m = re.match(r"def\s+(\S+)", stripped)
        if m:
            tags[m.group(1)] = " ".join(x for x in block if x)
        block = []
    return tags


def build_prelude() -> list[PreludeEntry]:
    src = prelude_source()
    tags = _tags(src)
    return [PreludeEntry(d.name, d, tags.get(d.name, "")) for d in S.parse(src)]


@functools.lru_cache(maxsize=1)
def _checked() -> Program:
    return check_program(e.definition for e in build_prelude())


def load_prelude() -> Program:
    """A fresh copy of the checked prelude, safe to extend."""
    return _checked().copy()
