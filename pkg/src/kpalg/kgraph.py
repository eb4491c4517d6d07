"""Finitely presented k-graphs and path arithmetic.

A k-graph is given by its coloured skeleton (vertices and edges of colours
``1..k``) together with factorization squares ``g h = h' g'`` where
``color(g) = color(g') < color(h) = color(h')``.  Paths are stored in
colour-canonical form: the edge word has nondecreasing colours from left to
right, and the word ``g1 g2 ... gn`` denotes the composite ``g1 g2 ... gn``
with ``r(g_{t+1}) = s(g_t)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path as FilePath
from typing import Iterable, Sequence

Degree = tuple[int, ...]

ID_RE = re.compile(r"[A-Za-z0-9_]+\Z")


def zero_degree(k: int) -> Degree:
    return (0,) * k


def unit_degree(k: int, color: int) -> Degree:
    return tuple(1 if i == color - 1 else 0 for i in range(k))


def deg_add(m: Degree, n: Degree) -> Degree:
    return tuple(a + b for a, b in zip(m, n))


def deg_sub(m: Degree, n: Degree) -> Degree:
    return tuple(a - b for a, b in zip(m, n))


def deg_le(m: Degree, n: Degree) -> bool:
    return all(a <= b for a, b in zip(m, n))


def deg_join(m: Degree, n: Degree) -> Degree:
    return tuple(max(a, b) for a, b in zip(m, n))


def degrees_below(n: Degree) -> list[Degree]:
    """All degrees ``0 <= m <= n`` in lexicographic order."""
    return [tuple(m) for m in product(*(range(c + 1) for c in n))]


def parse_degree(text: str, k: int) -> Degree:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != k:
        raise ValueError(f"degree {text!r} has {len(parts)} entries, expected k={k}")
    try:
        values = tuple(int(p) for p in parts)
    except ValueError:
        raise ValueError(f"degree {text!r} is not a list of integers") from None
    if any(v < 0 for v in values):
        raise ValueError(f"degree {text!r} has a negative entry")
    return values


def format_degree(m: Degree) -> str:
    return ",".join(str(c) for c in m)


class PathError(ValueError):
    """Raised for non-composable words, bad segment bounds and similar."""


@dataclass(frozen=True)
class Edge:
    id: str
    color: int
    range: str
    source: str


@dataclass(frozen=True)
class Square:
    """The factorization ``g h = h2 g2`` (``g``, ``g2`` of the lower colour)."""

    g: str
    h: str
    h2: str
    g2: str

    def __str__(self) -> str:
        return f"{self.g} {self.h} = {self.h2} {self.g2}"


@dataclass(frozen=True)
class Path:
    """A morphism in colour-canonical form.

    Vertices are the paths with an empty word; ``range == source`` for them.
    """

    word: tuple[str, ...]
    range: str
    source: str
    degree: Degree

    @property
    def is_vertex(self) -> bool:
        return not self.word

    @property
    def sort_key(self) -> tuple:
        return (self.degree, self.word, self.range)

    def __str__(self) -> str:
        return ".".join(self.word) if self.word else self.range


@dataclass
class KGraph:
    """A finite k-graph presentation.

    The constructor does not reject malformed input; :meth:`validate` reports
    every problem.  All other operations assume a valid graph.
    """

    k: int
    vertex_list: list[str]
    edge_list: list[Edge]
    square_list: list[Square]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        self.vertices: tuple[str, ...] = tuple(sorted(set(self.vertex_list)))
        self.edges: dict[str, Edge] = {e.id: e for e in self.edge_list}
        self.edge_ids: tuple[str, ...] = tuple(sorted(self.edges))
        # out-of-order pair (h2, g2) -> canonical pair (g, h), and back
        self._to_canonical: dict[tuple[str, str], tuple[str, str]] = {}
        self._from_canonical: dict[tuple[str, str], tuple[str, str]] = {}
        for sq in self.square_list:
            self._from_canonical.setdefault((sq.g, sq.h), (sq.h2, sq.g2))
            self._to_canonical.setdefault((sq.h2, sq.g2), (sq.g, sq.h))
        self._into: dict[tuple[str, int], tuple[str, ...]] = {}
        for eid in self.edge_ids:
            e = self.edges[eid]
            key = (e.range, e.color)
            self._into[key] = self._into.get(key, ()) + (eid,)

    # -- basic accessors -------------------------------------------------

    def edges_into(self, v: str, color: int) -> tuple[str, ...]:
        """Edge ids ``e`` of the given colour with ``r(e) = v`` (the set vΛ^{e_i})."""
        return self._into.get((v, color), ())

    def color(self, eid: str) -> int:
        return self.edges[eid].color

    def vertex(self, v: str) -> Path:
        if v not in self.vertices:
            raise PathError(f"unknown vertex {v!r}")
        return Path((), v, v, zero_degree(self.k))

    def edge(self, eid: str) -> Path:
        e = self.edges.get(eid)
        if e is None:
            raise PathError(f"unknown edge {eid!r}")
        return Path((eid,), e.range, e.source, unit_degree(self.k, e.color))

    # -- validation --------------------------------------------------------

    def validate(self, allow_sources: bool = False) -> list[str]:
        """Return a list of violations; an empty list means the graph is valid."""
        problems: list[str] = []
        if self.k < 1:
            problems.append(f"arity k={self.k} must be at least 1")
        seen: set[str] = set()
        for v in self.vertex_list:
            if v in seen:
                problems.append(f"duplicate vertex id {v}")
            seen.add(v)
        seen_edges: set[str] = set()
        for e in self.edge_list:
            if e.id in seen_edges:
                problems.append(f"duplicate edge id {e.id}")
            seen_edges.add(e.id)
            if e.id in seen:
                problems.append(f"id {e.id} used for both a vertex and an edge")
            if not 1 <= e.color <= self.k:
                problems.append(f"edge {e.id} has color {e.color} outside 1..{self.k}")
            for end, name in ((e.range, "range"), (e.source, "source")):
                if end not in seen:
                    problems.append(f"edge {e.id} has dangling {name} {end}")
        if problems:
            return problems

        problems.extend(self._check_squares())
        if not problems and self.k >= 3:
            problems.extend(self._check_hexagons())
        if not allow_sources:
            for v in self.vertices:
                for i in range(1, self.k + 1):
                    if not self.edges_into(v, i):
                        problems.append(f"source vertex {v}: no edge of color {i} has range {v}")
        return problems

    def _check_squares(self) -> list[str]:
        problems: list[str] = []
        firsts: dict[tuple[str, str], Square] = {}
        seconds: dict[tuple[str, str], Square] = {}
        for sq in self.square_list:
            missing = [x for x in (sq.g, sq.h, sq.h2, sq.g2) if x not in self.edges]
            if missing:
                problems.append(f"square {sq} names unknown edge {missing[0]}")
                continue
            g, h, h2, g2 = (self.edges[x] for x in (sq.g, sq.h, sq.h2, sq.g2))
            if not (g.color == g2.color < h.color == h2.color):
                problems.append(f"square {sq} has inconsistent colors")
                continue
            if h.range != g.source or g2.range != h2.source:
                problems.append(f"square {sq} is not composable")
                continue
            if g.range != h2.range or h.source != g2.source:
                problems.append(f"square {sq} sides have different range or source")
                continue
            if (sq.g, sq.h) in firsts:
                problems.append(f"duplicate factorization for pair ({sq.g},{sq.h})")
            firsts[(sq.g, sq.h)] = sq
            if (sq.h2, sq.g2) in seconds:
                problems.append(f"duplicate factorization for pair ({sq.h2},{sq.g2})")
            seconds[(sq.h2, sq.g2)] = sq
        for a_id in self.edge_ids:
            a = self.edges[a_id]
            for b_id in self.edge_ids:
                b = self.edges[b_id]
                if b.range != a.source or a.color == b.color:
                    continue
                table = firsts if a.color < b.color else seconds
                if (a_id, b_id) not in table:
                    problems.append(f"no factorization for pair ({a_id},{b_id})")
        return problems

    def _check_hexagons(self) -> list[str]:
        problems = []
        for x, y, z in self._composable_triples():
            try:
                w = (x, y, z)
                w = self._swap_at(w, 0)
                w = self._swap_at(w, 1)
                route_a = self._swap_at(w, 0)
                w = (x, y, z)
                w = self._swap_at(w, 1)
                w = self._swap_at(w, 0)
                route_b = self._swap_at(w, 1)
            except PathError:
                continue
            if route_a != route_b:
                problems.append(
                    f"hexagon failure for {x}.{y}.{z}: {'.'.join(route_a)} != {'.'.join(route_b)}"
                )
        return problems

    def _composable_triples(self):
        for x in self.edge_ids:
            ex = self.edges[x]
            for y in self.edge_ids:
                ey = self.edges[y]
                if ey.range != ex.source or ey.color == ex.color:
                    continue
                for z in self.edge_ids:
                    ez = self.edges[z]
                    if ez.range != ey.source or ez.color in (ex.color, ey.color):
                        continue
                    yield x, y, z

    # -- rewriting ---------------------------------------------------------

    def _swap(self, x: str, y: str) -> tuple[str, str]:
        cx, cy = self.edges[x].color, self.edges[y].color
        table = self._from_canonical if cx < cy else self._to_canonical
        try:
            return table[(x, y)]
        except KeyError:
            raise PathError(f"no factorization for pair ({x},{y})") from None

    def _swap_at(self, word: tuple[str, ...], i: int) -> tuple[str, ...]:
        a, b = self._swap(word[i], word[i + 1])
        return word[:i] + (a, b) + word[i + 2 :]

    def check_composable(self, word: Sequence[str]) -> None:
        for eid in word:
            if eid not in self.edges:
                raise PathError(f"unknown edge {eid!r}")
        for a, b in zip(word, word[1:]):
            if self.edges[b].range != self.edges[a].source:
                raise PathError(f"word is not composable at {a}.{b}: r({b}) != s({a})")

    def canonicalize(self, word: Sequence[str]) -> Path:
        """Canonical path of a nonempty composable edge word."""
        word = tuple(word)
        if not word:
            raise PathError("empty word has no vertex; use KGraph.vertex")
        cached = self._cache.get(("canon", word))
        if cached is not None:
            return cached
        self.check_composable(word)
        w = list(word)
        for i in range(1, len(w)):
            j = i
            while j > 0 and self.edges[w[j - 1]].color > self.edges[w[j]].color:
                w[j - 1], w[j] = self._swap(w[j - 1], w[j])
                j -= 1
        degree = [0] * self.k
        for eid in w:
            degree[self.edges[eid].color - 1] += 1
        result = Path(tuple(w), self.edges[w[0]].range, self.edges[w[-1]].source, tuple(degree))
        self._cache[("canon", word)] = result
        return result

    def path(self, word: Sequence[str] | str) -> Path:
        """Path from a vertex id, an edge id, or a composable word."""
        if isinstance(word, str):
            if word in self.vertices:
                return self.vertex(word)
            word = word.split(".")
        return self.canonicalize(word)

    def compose(self, lam: Path, mu: Path) -> Path:
        """The composite ``lam mu``; requires ``r(mu) = s(lam)``."""
        if mu.range != lam.source:
            raise PathError(f"cannot compose {lam} with {mu}: r({mu}) != s({lam})")
        if not mu.word:
            return lam
        if not lam.word:
            return mu
        return self.canonicalize(lam.word + mu.word)

    def _arrange(self, word: tuple[str, ...], colors: Sequence[int]) -> tuple[str, ...]:
        """Rewrite ``word`` so its colour sequence becomes ``colors``."""
        w = list(word)
        for t, c in enumerate(colors):
            j = t
            while self.edges[w[j]].color != c:
                j += 1
            while j > t:
                w[j - 1], w[j] = self._swap(w[j - 1], w[j])
                j -= 1
        return tuple(w)

    def segment(self, lam: Path, p: Degree, q: Degree) -> Path:
        """The factor ``lam(p, q)``: the middle of ``lam = mu nu rho`` with d(mu)=p."""
        if not (deg_le(zero_degree(self.k), p) and deg_le(p, q) and deg_le(q, lam.degree)):
            raise PathError(f"segment bounds {p}, {q} invalid for degree {lam.degree}")

        def colors(m: Degree) -> list[int]:
            return [i + 1 for i, c in enumerate(m) for _ in range(c)]

        head, mid, tail = colors(p), colors(deg_sub(q, p)), colors(deg_sub(lam.degree, q))
        arranged = self._arrange(lam.word, head + mid + tail) if lam.word else ()
        middle = arranged[len(head) : len(head) + len(mid)]
        if middle:
            return self.canonicalize(middle)
        if head:
            return self.vertex(self.edges[arranged[len(head) - 1]].source)
        return self.vertex(lam.range)

    def paths_from(self, v: str, n: Degree) -> tuple[Path, ...]:
        """All paths with range ``v`` and degree ``n``, sorted by word."""
        key = ("from", v, n)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        if not any(n):
            result: tuple[Path, ...] = (self.vertex(v),)
        else:
            seq = [i + 1 for i, c in enumerate(n) for _ in range(c)]
            found: list[Path] = []

            def extend(word: list[str], at: str) -> None:
                if len(word) == len(seq):
                    found.append(Path(tuple(word), v, at, n))
                    return
                for eid in self.edges_into(at, seq[len(word)]):
                    word.append(eid)
                    extend(word, self.edges[eid].source)
                    word.pop()

            extend([], v)
            result = tuple(found)
        self._cache[key] = result
        return result

    def all_paths(self, n: Degree) -> tuple[Path, ...]:
        """Λ^n across all vertices."""
        return tuple(p for v in self.vertices for p in self.paths_from(v, n))

    def min_common_extensions(self, mu: Path, nu: Path) -> tuple[tuple[Path, Path], ...]:
        """Pairs ``(a, b)`` with ``mu a = nu b`` and ``d(mu a) = d(mu) v d(nu)``."""
        key = ("mce", mu, nu)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        result: tuple[tuple[Path, Path], ...] = ()
        if mu.range == nu.range:
            top = deg_join(mu.degree, nu.degree)
            lefts = {
                self.compose(mu, a): a
                for a in self.paths_from(mu.source, deg_sub(top, mu.degree))
            }
            pairs = []
            for b in self.paths_from(nu.source, deg_sub(top, nu.degree)):
                a = lefts.get(self.compose(nu, b))
                if a is not None:
                    pairs.append((a, b))
            pairs.sort(key=lambda ab: (ab[0].sort_key, ab[1].sort_key))
            result = tuple(pairs)
        self._cache[key] = result
        return result

    # -- serialisation -----------------------------------------------------

    def to_text(self) -> str:
        lines = [f"k {self.k}"]
        lines += [f"vertex {v}" for v in self.vertex_list]
        lines += [f"edge {e.id} {e.color} {e.range} {e.source}" for e in self.edge_list]
        lines += [f"square {sq}" for sq in self.square_list]
        return "\n".join(lines) + "\n"


class GraphParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _check_id(token: str, line: int, col: int) -> str:
    if not ID_RE.match(token):
        raise GraphParseError(f"invalid identifier {token!r}", line, col)
    return token


def parse_graph(text: str) -> KGraph:
    """Parse the line-oriented ``k/vertex/edge/square`` format."""
    k = None
    vertices: list[str] = []
    edges: list[Edge] = []
    squares: list[Square] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        for col, ch in enumerate(raw, start=1):
            if not (32 <= ord(ch) < 127 or ch == "\t"):
                raise GraphParseError("non-printable or non-ASCII character", lineno, col)
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if not tokens:
            continue
        head, hcol = tokens[0]
        args = tokens[1:]

        def need(count: int) -> None:
            if len(args) != count:
                raise GraphParseError(
                    f"'{head}' expects {count} arguments, got {len(args)}", lineno, hcol
                )

        if head == "k":
            need(1)
            if k is not None:
                raise GraphParseError("duplicate 'k' declaration", lineno, hcol)
            tok, col = args[0]
            if not tok.isdigit() or int(tok) < 1:
                raise GraphParseError(f"k must be a positive integer, got {tok!r}", lineno, col)
            k = int(tok)
        elif head == "vertex":
            need(1)
            vertices.append(_check_id(args[0][0], lineno, args[0][1]))
        elif head == "edge":
            need(4)
            (eid, c1), (color, c2), (rng, c3), (src, c4) = args
            if not color.isdigit():
                raise GraphParseError(f"color must be an integer, got {color!r}", lineno, c2)
            edges.append(
                Edge(
                    _check_id(eid, lineno, c1),
                    int(color),
                    _check_id(rng, lineno, c3),
                    _check_id(src, lineno, c4),
                )
            )
        elif head == "square":
            need(5)
            if args[2][0] != "=":
                raise GraphParseError("expected '=' in square", lineno, args[2][1])
            ids = [_check_id(t, lineno, c) for t, c in (args[0], args[1], args[3], args[4])]
            squares.append(Square(*ids))
        else:
            raise GraphParseError(f"unknown directive {head!r}", lineno, hcol)
    if k is None:
        raise GraphParseError("missing 'k' declaration", 1, 1)
    return KGraph(k, vertices, edges, squares)


def load_graph(path: str | FilePath) -> KGraph:
    return parse_graph(FilePath(path).read_text(encoding="ascii", errors="replace"))


def disjoint_union(graphs: Iterable[KGraph], suffixes: Iterable[str]) -> KGraph:
    """Disjoint union of graphs of equal arity, renaming every id with a suffix."""
    graphs = list(graphs)
    k = graphs[0].k
    vertices, edges, squares = [], [], []
    for g, sfx in zip(graphs, suffixes):
        if g.k != k:
            raise ValueError("disjoint union needs graphs of equal arity")
        vertices += [v + sfx for v in g.vertex_list]
        edges += [Edge(e.id + sfx, e.color, e.range + sfx, e.source + sfx) for e in g.edge_list]
        squares += [Square(*(x + sfx for x in (s.g, s.h, s.h2, s.g2))) for s in g.square_list]
    return KGraph(k, vertices, edges, squares)


def source_free_core(graph: KGraph) -> tuple[KGraph, tuple[str, ...]]:
    """Drop, repeatedly, every vertex missing an incoming edge of some colour.

    Under (KP4) read literally, ``vΛ^n = ∅`` forces ``p_v = 0``; the survivors
    span the same algebra.  Returns the core and the removed vertices.
    """
    alive = set(graph.vertices)
    edges = dict(graph.edges)
    while True:
        dead = {
            v for v in alive
            if any(not any(e.range == v and e.color == i for e in edges.values()) for i in range(1, graph.k + 1))
        }
        if not dead:
            break
        alive -= dead
        edges = {eid: e for eid, e in edges.items() if e.range in alive and e.source in alive}
    squares = [sq for sq in graph.square_list if all(x in edges for x in (sq.g, sq.h, sq.h2, sq.g2))]
    core = KGraph(
        graph.k,
        [v for v in graph.vertex_list if v in alive],
        [e for e in graph.edge_list if e.id in edges],
        squares,
    )
    return core, tuple(sorted(set(graph.vertices) - alive))
