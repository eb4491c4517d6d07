"""Exact Kumjian-Pask algebras of finite higher-rank graphs."""

from .algebra import Element, KPAlgebra
from .kgraph import KGraph, Path, load_graph, parse_graph
from .ring import Fp, Q, RingSpec, Z

__all__ = ["Element", "Fp", "KGraph", "KPAlgebra", "Path", "Q", "RingSpec", "Z", "load_graph", "parse_graph"]
__version__ = "0.1.0"
