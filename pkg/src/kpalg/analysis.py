"""Graph deciders: closed paths, cofinality, aperiodicity, commutativity.

Reachability uses the digraph with an arc ``r(e) -> s(e)`` for every edge,
so ``v`` reaches ``w`` exactly when ``vΛw`` is nonempty.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Union

import networkx as nx

from .algebra import Element, KPAlgebra
from .kgraph import Degree, KGraph, deg_add, deg_join, deg_sub, degrees_below, format_degree, zero_degree

DEFAULT_BOUND = 3


class AnalysisError(ValueError):
    pass


def reach_digraph(graph: KGraph) -> nx.MultiDiGraph:
    d = nx.MultiDiGraph()
    d.add_nodes_from(graph.vertices)
    for eid in graph.edge_ids:
        e = graph.edges[eid]
        d.add_edge(e.range, e.source, key=eid, color=e.color)
    return d


def has_closed_path(graph: KGraph) -> bool:
    """True iff the skeleton contains a directed cycle (loops included)."""
    return not nx.is_directed_acyclic_graph(reach_digraph(graph))


def tail_capable_components(graph: KGraph) -> list[frozenset[str]]:
    """SCCs carrying an internal edge of every colour, sorted by smallest vertex."""
    d = reach_digraph(graph)
    found = []
    for comp in nx.strongly_connected_components(d):
        colors = {
            graph.edges[eid].color
            for eid in graph.edge_ids
            if graph.edges[eid].range in comp and graph.edges[eid].source in comp
        }
        if len(colors) == graph.k:
            found.append(frozenset(comp))
    return sorted(found, key=min)


def is_cofinal(graph: KGraph) -> bool:
    """Every vertex reaches every SCC that can carry the tail of an infinite path."""
    if any(not graph.edges_into(v, i) for v in graph.vertices for i in range(1, graph.k + 1)):
        raise AnalysisError("cofinality needs a graph without sources")
    d = reach_digraph(graph)
    tails = tail_capable_components(graph)
    for v in graph.vertices:
        reach = nx.descendants(d, v) | {v}
        if any(reach.isdisjoint(t) for t in tails):
            return False
    return True


def eventually_periodic_cofinality_oracle(graph: KGraph, max_cycle_len: int = 4) -> bool:
    """Brute-force cofinality check over infinite paths of the form ρ γγγ….

    γ ranges over closed edge walks of length at most ``max_cycle_len`` that use
    every colour, ρ over walks of length at most ``max_cycle_len`` ending at the
    start of γ.  Returns False on the first counterexample.  Reachability is
    computed here by plain breadth-first search, independently of
    :func:`is_cofinal`.
    """
    into: dict[str, list[tuple[str, str, int]]] = {v: [] for v in graph.vertices}
    for eid in graph.edge_ids:
        e = graph.edges[eid]
        into[e.range].append((eid, e.source, e.color))

    def reaches(v: str) -> set[str]:
        seen, todo = {v}, [v]
        while todo:
            x = todo.pop()
            for _, y, _ in into[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen

    reach = {v: reaches(v) for v in graph.vertices}

    def walks(start: str, length: int):
        # vertex sequences and colours of walks following r -> s
        if length == 0:
            yield [start], set()
            return
        for verts, cols in walks(start, length - 1):
            for _, y, c in into[verts[-1]]:
                yield verts + [y], cols | {c}

    all_colors = set(range(1, graph.k + 1))
    for start in graph.vertices:
        for n in range(1, max_cycle_len + 1):
            for cyc, cols in walks(start, n):
                if cyc[-1] != start or cols != all_colors:
                    continue
                tail = set(cyc)
                for head_start in graph.vertices:
                    for m in range(0, max_cycle_len + 1):
                        for conn, _ in walks(head_start, m):
                            if conn[-1] != start:
                                continue
                            visited = tail | set(conn)
                            for v in graph.vertices:
                                if reach[v].isdisjoint(visited):
                                    return False
    return True


@dataclass(frozen=True)
class AperiodicExact:
    mode: str = "exact"

    def __str__(self) -> str:
        return "aperiodic (exact, entrance criterion)"


@dataclass(frozen=True)
class NoPeriodicityUpToBound:
    bound: int
    mode: str = "bounded"

    def __str__(self) -> str:
        return f"no periodicity found up to bound {self.bound} (bounded search)"


@dataclass(frozen=True)
class PeriodicWitness:
    vertex: str
    m: Degree
    n: Degree
    mode: str = "exact"
    bound: int | None = None

    def __str__(self) -> str:
        how = "exact, entrance-free cycle" if self.mode == "exact" else f"bounded search, bound {self.bound}"
        return f"periodic witness at {self.vertex}: m={format_degree(self.m)} n={format_degree(self.n)} ({how})"


Aperiodicity = Union[AperiodicExact, NoPeriodicityUpToBound, PeriodicWitness]


def entrance_free_cycle(graph: KGraph) -> list[str] | None:
    """For k = 1: vertices of a cycle without entrance, or None."""
    if graph.k != 1:
        raise AnalysisError("the entrance criterion applies to 1-graphs")
    succ = {}
    for v in graph.vertices:
        ins = graph.edges_into(v, 1)
        if len(ins) == 1:
            succ[v] = graph.edges[ins[0]].source
    for v in graph.vertices:
        seen: list[str] = []
        x = v
        while x in succ and x not in seen:
            seen.append(x)
            x = succ[x]
        if x in seen:
            return seen[seen.index(x) :]
    return None


def has_witness(graph: KGraph, v: str, m: Degree, n: Degree, bound: int) -> bool:
    """Search λ ∈ vΛ with d(λ) = m∨n + (B,…,B) and differing shifted segments.

    Witnesses persist under extension, so checking the top degree alone
    decides whether one exists with m∨n <= d(λ) <= m∨n + (B,…,B).
    """
    top = deg_join(m, n)
    degree = deg_add(top, (bound,) * graph.k)
    for lam in graph.paths_from(v, degree):
        rest = deg_sub(degree, top)
        if graph.segment(lam, m, deg_add(m, rest)) != graph.segment(lam, n, deg_add(n, rest)):
            return True
    return False


def witness_search(graph: KGraph, bound: int = DEFAULT_BOUND, threads: int = 1) -> Aperiodicity:
    """Bounded probe for every vertex and every pair m ≠ n <= (B,…,B)."""
    degs = degrees_below((bound,) * graph.k)
    triples = [(v, m, n) for v in graph.vertices for m, n in product(degs, degs) if m != n]

    def check(t):
        return has_witness(graph, t[0], t[1], t[2], bound)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(check, triples))
    else:
        results = [check(t) for t in triples]
    for t, ok in zip(triples, results):
        if not ok:
            return PeriodicWitness(t[0], t[1], t[2], mode="bounded", bound=bound)
    return NoPeriodicityUpToBound(bound)


def aperiodicity(graph: KGraph, bound: int = DEFAULT_BOUND, threads: int = 1) -> Aperiodicity:
    """Exact entrance criterion for k = 1, bounded witness search for k >= 2."""
    if graph.k == 1:
        cycle = entrance_free_cycle(graph)
        if cycle is None:
            return AperiodicExact()
        return PeriodicWitness(min(cycle), (len(cycle),), (0,), mode="exact")
    return witness_search(graph, bound, threads)


def is_aperiodic_claim(result: Aperiodicity) -> bool:
    return isinstance(result, (AperiodicExact, NoPeriodicityUpToBound))


def is_commutative_graph(graph: KGraph) -> bool:
    """Every edge a loop and exactly one edge of each colour into each vertex."""
    for e in graph.edges.values():
        if e.range != e.source:
            return False
    return all(len(graph.edges_into(v, i)) == 1 for v in graph.vertices for i in range(1, graph.k + 1))


def components(graph: KGraph) -> list[tuple[str, ...]]:
    """Weakly connected components of the skeleton, sorted."""
    comps = nx.weakly_connected_components(reach_digraph(graph))
    return sorted(tuple(sorted(c)) for c in comps)


LaurentPoly = dict[tuple[int, ...], object]


@dataclass
class LaurentIso:
    """Per-component identification of KP_R(Λ) with Laurent polynomials."""

    graph: KGraph
    loops: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def export(self, a: Element) -> dict[str, LaurentPoly]:
        """Map each term s_α s_{β*} at vertex v to x^{d(α) - d(β)} in the v-summand."""
        ring = a.ring
        out: dict[str, dict[tuple[int, ...], object]] = {}
        for (alpha, beta), c in a.terms.items():
            v = alpha.source
            exp = deg_sub(alpha.degree, beta.degree)
            poly = out.setdefault(v, {})
            poly[exp] = ring.add(poly.get(exp, ring.zero), c)
        return {
            v: dict(sorted((e, c) for e, c in poly.items() if c != 0))
            for v, poly in sorted(out.items())
            if any(c != 0 for c in poly.values())
        }

    def element(self, algebra: KPAlgebra, polys: dict[str, LaurentPoly]) -> Element:
        """Inverse map: Laurent polynomials back to algebra elements."""
        g = self.graph
        terms = []
        for v, poly in polys.items():
            for exp, c in poly.items():
                pos = tuple(max(x, 0) for x in exp)
                neg = tuple(max(-x, 0) for x in exp)
                terms.append(((_loop_power(g, self.loops[v], pos), _loop_power(g, self.loops[v], neg)), c))
        return algebra.element(terms)


def _loop_power(graph: KGraph, loops: tuple[str, ...], n: Degree):
    word = tuple(loops[i] for i, c in enumerate(n) for _ in range(c))
    v = graph.edges[loops[0]].range
    return graph.canonicalize(word) if word else graph.vertex(v)


def laurent_iso(graph: KGraph) -> LaurentIso:
    if not is_commutative_graph(graph):
        raise AnalysisError("laurent_iso needs a commutative graph (one loop per colour at each vertex)")
    loops = {v: tuple(graph.edges_into(v, i)[0] for i in range(1, graph.k + 1)) for v in graph.vertices}
    return LaurentIso(graph, loops)


def laurent_mul(ring, p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    out: dict[tuple[int, ...], object] = {}
    for e1, c1 in p.items():
        for e2, c2 in q.items():
            e = deg_add(e1, e2)
            out[e] = ring.add(out.get(e, ring.zero), ring.mul(c1, c2))
    return dict(sorted((e, c) for e, c in out.items() if c != 0))


def format_laurent(ring, poly: LaurentPoly) -> str:
    if not poly:
        return "0"
    k = len(next(iter(poly)))
    names = ["x"] if k == 1 else [f"x{i}" for i in range(1, k + 1)]
    parts = []
    for exp, c in sorted(poly.items(), key=lambda ec: tuple(-x for x in ec[0])):
        mono = "*".join(
            name if x == 1 else f"{name}^{x}" for name, x in zip(names, exp) if x != 0
        )
        cs = ring.format(c)
        if not mono:
            parts.append(cs)
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"{cs}*{mono}")
    return " + ".join(parts)


@dataclass
class PropertyReport:
    has_closed_path: bool
    cofinal: bool
    aperiodicity: Aperiodicity
    commutative_graph: bool
    components: list[tuple[str, ...]]
    bound: int

    def lines(self) -> list[str]:
        ap = self.aperiodicity
        verdict = {
            AperiodicExact: "aperiodic",
            NoPeriodicityUpToBound: "no-periodicity-up-to-bound",
            PeriodicWitness: "periodic",
        }[type(ap)]
        out = [
            f"closed_path: {str(self.has_closed_path).lower()}",
            f"cofinal: {str(self.cofinal).lower()}",
            f"aperiodicity: {verdict}",
            f"aperiodicity_mode: {ap.mode}",
            f"aperiodicity_bound: {self.bound if ap.mode == 'bounded' else 'n/a'}",
        ]
        if isinstance(ap, PeriodicWitness):
            out.append(f"periodic_witness: vertex={ap.vertex} m={format_degree(ap.m)} n={format_degree(ap.n)}")
        out.append(f"commutative_graph: {str(self.commutative_graph).lower()}")
        out.append("components: " + " | ".join(",".join(c) for c in self.components))
        return out


def analyse(graph: KGraph, bound: int = DEFAULT_BOUND, threads: int = 1) -> PropertyReport:
    return PropertyReport(
        has_closed_path=has_closed_path(graph),
        cofinal=is_cofinal(graph),
        aperiodicity=aperiodicity(graph, bound, threads),
        commutative_graph=is_commutative_graph(graph),
        components=components(graph),
        bound=bound,
    )
