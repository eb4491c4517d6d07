"""Small example graphs shipped with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..kgraph import KGraph, parse_graph

NAMES = ("N1", "N2", "N3", "L2", "L3", "C2", "D2", "F2", "acyclic")


def path(name: str) -> Path:
    return Path(str(resources.files(__name__).joinpath(f"{name}.kg")))


def load(name: str) -> KGraph:
    if name not in NAMES:
        raise KeyError(f"no fixture named {name!r}")
    return parse_graph(path(name).read_text())
