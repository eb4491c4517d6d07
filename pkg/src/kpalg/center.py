"""Exact centre of KP_R(Λ) inside a bounded normal-form window.

A window ``(ghost m, cap D)`` is the span of the terms ``s_α s_{β*}`` with
``d(β) = m``, ``d(α) <= D`` and ``s(α) = s(β)``.  Commuting with the vertex
projections and the skeleton edges (and their ghosts) is a linear condition
on the coefficients; its kernel is exactly the centre intersected with the
window.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import networkx as nx

from . import analysis
from .algebra import Element, KPAlgebra
from .kgraph import Degree, KGraph, Path, deg_join, deg_le, degrees_below, format_degree, source_free_core, zero_degree
from .ring import RingSpec, kernel


@dataclass(frozen=True)
class Window:
    ghost: Degree
    cap: Degree

    def __post_init__(self) -> None:
        if len(self.ghost) != len(self.cap):
            raise ValueError("ghost and cap must have the same length")
        if not deg_le(self.ghost, self.cap):
            raise ValueError(f"window cap {self.cap} must dominate ghost {self.ghost}")

    def __str__(self) -> str:
        return f"ghost={format_degree(self.ghost)} cap={format_degree(self.cap)}"


def windows_below(limit: Window) -> list[Window]:
    """All windows with ghost <= limit.ghost and ghost <= cap <= limit.cap."""
    out = []
    for m in degrees_below(limit.ghost):
        for d in degrees_below(limit.cap):
            if deg_le(m, d):
                out.append(Window(m, d))
    return out


def window_basis(graph: KGraph, w: Window) -> list[tuple[Path, Path]]:
    by_source: dict[str, list[Path]] = {}
    for d in degrees_below(w.cap):
        for alpha in graph.all_paths(d):
            by_source.setdefault(alpha.source, []).append(alpha)
    pairs = [(alpha, beta) for beta in graph.all_paths(w.ghost) for alpha in by_source.get(beta.source, ())]
    pairs.sort(key=lambda ab: (ab[0].sort_key, ab[1].sort_key))
    return pairs


@dataclass
class CenterResult:
    window: Window
    ring: RingSpec
    pairs: list[tuple[Path, Path]]
    basis: list[Element]
    vectors: list[list]
    equations: int
    pruned: tuple[str, ...] = ()

    @property
    def rank(self) -> int:
        return len(self.basis)


def _commutator_rows(algebra: KPAlgebra, elements: list[Element], gen: Element) -> list[dict[int, object]]:
    comms = [x.mul(gen) - gen.mul(x) for x in elements]
    top = zero_degree(algebra.graph.k)
    for c in comms:
        top = deg_join(top, c.top_ghost_degree())
    rows: dict[tuple, dict[int, object]] = {}
    for i, c in enumerate(comms):
        for pair, coeff in c.reshape(top).terms.items():
            rows.setdefault((pair[0].sort_key, pair[1].sort_key), {})[i] = coeff
    return [rows[key] for key in sorted(rows)]


def central_in_window(graph: KGraph, ring: RingSpec, w: Window, threads: int = 1) -> CenterResult:
    """Solve for Z(KP_R(Λ)) ∩ V(w) exactly.

    Graphs with sources are first cut down to their source-free core, since
    (KP4) kills every vertex projection a source feeds into.
    """
    pruned: tuple[str, ...] = ()
    if any(not graph.edges_into(v, i) for v in graph.vertices for i in range(1, graph.k + 1)):
        graph, pruned = source_free_core(graph)
    algebra = KPAlgebra(graph, ring)
    pairs = window_basis(graph, w)
    elements = [algebra.element({pair: ring.one}) for pair in pairs]
    gens = [g for _, g in algebra.generators()]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(lambda g: _commutator_rows(algebra, elements, g), gens))
    else:
        blocks = [_commutator_rows(algebra, elements, g) for g in gens]
    rows = [r for block in blocks for r in block]
    vectors = kernel(rows, len(pairs), ring) if pairs else []
    basis = [algebra.element(zip(pairs, vec)).normalize() for vec in vectors]
    return CenterResult(w, ring, pairs, basis, vectors, len(rows), pruned)


def in_span(ring: RingSpec, vectors: list[list], target: list) -> bool:
    """Exact membership of ``target`` in the span of ``vectors`` (over Q for Z)."""
    from .ring import Q, rref

    field = ring if ring.is_field else Q
    n = len(target)
    rows = [{j: field.coerce(x) for j, x in enumerate(v) if x != 0} for v in vectors]
    before = len(rref(rows, n, field)[1])
    after = len(rref(rows + [{j: field.coerce(x) for j, x in enumerate(target) if x != 0}], n, field)[1])
    return before == after


def coordinates(pairs: list[tuple[Path, Path]], a: Element) -> list:
    """Coefficient vector of an element against window pairs; None if it leaves the window."""
    index = {p: i for i, p in enumerate(pairs)}
    vec = [a.ring.zero] * len(pairs)
    for pair, c in a.terms.items():
        if pair not in index:
            return None
        vec[index[pair]] = c
    return vec


class FilterError(ValueError):
    pass


@dataclass
class FilterReport:
    """Necessary conditions satisfied by every nonzero central element."""

    ranges_equal: bool
    hereditary_ranges: bool
    ranges_meet_sources: bool
    closed_ghost_cycle: bool
    degenerate_cycle: bool

    @property
    def all_pass(self) -> bool:
        return self.ranges_equal and self.hereditary_ranges and self.ranges_meet_sources and self.closed_ghost_cycle

    def lines(self) -> list[str]:
        note = " (degenerate: ghost degree 0, vertices count as closed paths)" if self.degenerate_cycle else ""
        return [
            f"filter1_ranges_equal: {str(self.ranges_equal).lower()}",
            f"filter2_hereditary: {str(self.hereditary_ranges).lower()}",
            f"filter3_source_ranges: {str(self.ranges_meet_sources).lower()}",
            f"filter4_closed_path: {str(self.closed_ghost_cycle).lower()}{note}",
        ]


def central_filters(graph: KGraph, a: Element) -> FilterReport:
    if not a.terms:
        raise FilterError("filters apply to nonzero elements")
    ghosts = a.ghost_degrees()
    if len(ghosts) != 1:
        raise FilterError("element is not normalized: terms have mixed ghost degrees")
    terms = list(a.terms)
    f1 = all(alpha.range == beta.range for alpha, beta in terms)
    w = {beta.range for _, beta in terms}
    f2 = all(e.range in w for e in graph.edges.values() if e.source in w)
    ranges = {alpha.range for alpha, beta in terms if alpha.range == beta.range}
    f3 = all(sigma.source in ranges for sigma, _ in terms)
    betas = sorted({beta for _, beta in terms}, key=lambda p: p.sort_key)
    rel = nx.DiGraph()
    rel.add_nodes_from(range(len(betas)))
    for i, b in enumerate(betas):
        for j, b2 in enumerate(betas):
            if b2.range == b.source:
                rel.add_edge(i, j)
    f4 = not nx.is_directed_acyclic_graph(rel)
    return FilterReport(f1, f2, f3, f4, degenerate_cycle=not any(next(iter(ghosts))))


@dataclass
class ElementDiagnostic:
    ranges_cover: bool
    diagonal: bool
    uniform: bool
    expected_cover: bool
    expected_diagonal: bool
    expected_uniform: bool

    @property
    def consistent(self) -> bool:
        return (
            (self.ranges_cover or not self.expected_cover)
            and (self.diagonal or not self.expected_diagonal)
            and (self.uniform or not self.expected_uniform)
        )


def diagnostics(graph: KGraph, result: CenterResult, props: analysis.PropertyReport | None) -> list[ElementDiagnostic]:
    cofinal = bool(props and props.cofinal)
    aperiodic = bool(props and analysis.is_aperiodic_claim(props.aperiodicity))
    out = []
    for b in result.basis:
        b = b.reshape(result.window.ghost) if b.terms else b
        covers = {beta.range for _, beta in b.terms} == set(graph.vertices)
        diagonal = all(alpha == beta for alpha, beta in b.terms)
        uniform = diagonal and len(set(b.terms.values())) <= 1
        out.append(ElementDiagnostic(covers, diagonal, uniform, cofinal, aperiodic, cofinal and aperiodic))
    return out


@dataclass
class Claim:
    name: str
    status: str  # VERIFIED, REFUTED, INCONCLUSIVE
    detail: str


@dataclass
class VerdictReport:
    limit: Window
    ring: RingSpec
    props: analysis.PropertyReport | None
    results: list[CenterResult]
    claims: list[Claim]
    filters_ok: bool
    diagnostics_ok: bool
    verdict: str
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"verdict: {self.verdict}"]
        for c in self.claims:
            out.append(f"claim {c.name}: {c.status} ({c.detail})")
        out.append(f"filters_on_basis: {'pass' if self.filters_ok else 'FAIL'}")
        out.append(f"diagnostics_consistent: {str(self.diagnostics_ok).lower()}")
        for r in self.results:
            out.append(f"window {r.window}: size={len(r.pairs)} rank={r.rank}")
        out.extend(f"note: {n}" for n in self.notes)
        return out


def verify_theorems(
    graph: KGraph,
    ring: RingSpec,
    limit: Window,
    bound: int = analysis.DEFAULT_BOUND,
    threads: int = 1,
) -> VerdictReport:
    has_sources = any(not graph.edges_into(v, i) for v in graph.vertices for i in range(1, graph.k + 1))
    results = [central_in_window(graph, ring, w, threads) for w in windows_below(limit)]
    claims: list[Claim] = []
    notes: list[str] = []
    props = None
    if has_sources:
        notes.append("graph has sources; solved on its source-free core")
        if not analysis.has_closed_path(graph):
            zero = all(r.rank == 0 for r in results)
            claims.append(
                Claim("no-closed-paths", "VERIFIED" if zero else "REFUTED", "every window centre is {0}")
            )
    else:
        props = analysis.analyse(graph, bound, threads)
        ap = props.aperiodicity
        if props.cofinal and analysis.is_aperiodic_claim(ap):
            algebra = KPAlgebra(graph, ring)
            one = algebra.identity()
            scalar = all(r.rank == 1 and r.basis[0] == one for r in results)
            if isinstance(ap, analysis.AperiodicExact):
                status = "VERIFIED" if scalar else "REFUTED"
            else:
                status = "INCONCLUSIVE"
                notes.append(f"aperiodicity only probed up to bound {ap.bound}")
            detail = "centre = R*1 in every window" if scalar else "centre differs from R*1 in some window"
            claims.append(Claim("scalar-centre", status, detail))
        if props.commutative_graph:
            full = all(r.rank == len(r.pairs) for r in results)
            claims.append(
                Claim("commutative", "VERIFIED" if full else "REFUTED", "every window is entirely central")
            )
    filters_ok = all(
        central_filters(r_graph, b).all_pass
        for r in results
        for r_graph in [source_free_core(graph)[0] if r.pruned else graph]
        for b in r.basis
    )
    diagnostics_ok = all(d.consistent for r in results for d in diagnostics(graph, r, props))
    if not claims:
        verdict = "HYPOTHESES-UNMET"
        notes.append("no theorem hypotheses hold; window data reported without a claim")
    elif any(c.status == "REFUTED" for c in claims):
        verdict = "REFUTED"
    elif any(c.status == "INCONCLUSIVE" for c in claims):
        verdict = "INCONCLUSIVE"
    else:
        verdict = "VERIFIED" + "".join(
            f"-{c.name}" for c in claims if c.name != "scalar-centre"
        )
    return VerdictReport(limit, ring, props, results, claims, filters_ok, diagnostics_ok, verdict, notes)


__all__ = [
    "CenterResult",
    "Claim",
    "FilterReport",
    "VerdictReport",
    "Window",
    "central_filters",
    "central_in_window",
    "coordinates",
    "diagnostics",
    "in_span",
    "verify_theorems",
    "window_basis",
    "windows_below",
]
