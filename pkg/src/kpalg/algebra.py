"""Elements of the Kumjian-Pask algebra KP_R(Λ).

An element is a finite sum ``Σ c · s_α s_{β*}`` with ``s(α) = s(β)``, stored
as a map from ``(α, β)`` path pairs to nonzero scalars.  Products use
``s_{β*} s_γ = Σ s_ρ s_{τ*}`` over the minimal common extensions
``βρ = γτ``; equality is decided by reshaping to a common ghost degree,
where the spanning set is linearly independent.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Mapping

from .kgraph import (
    Degree,
    KGraph,
    Path,
    deg_join,
    deg_le,
    deg_sub,
    unit_degree,
    zero_degree,
)
from .ring import RingSpec, RingValue, Scalar

Pair = tuple[Path, Path]


class AlgebraError(ValueError):
    pass


def _pair_key(pair: Pair) -> tuple:
    return (pair[0].sort_key, pair[1].sort_key)


class KPAlgebra:
    """The algebra KP_R(Λ) of a graph over a ring; a factory for elements."""

    def __init__(self, graph: KGraph, ring: RingSpec):
        self.graph = graph
        self.ring = ring

    def __repr__(self) -> str:
        return f"KPAlgebra(k={self.graph.k}, ring={self.ring})"

    def element(self, terms: Mapping[Pair, Scalar] | Iterable[tuple[Pair, Scalar]] = ()) -> "Element":
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[Pair, Scalar] = {}
        ring = self.ring
        for (alpha, beta), c in items:
            if alpha.source != beta.source:
                raise AlgebraError(f"term s({alpha}) st({beta}) has s(alpha) != s(beta)")
            c = ring.coerce(c.value if isinstance(c, RingValue) else c)
            key = (alpha, beta)
            acc[key] = ring.add(acc.get(key, ring.zero), c)
        return Element(self, {k: v for k, v in acc.items() if v != 0})

    def zero(self) -> "Element":
        return Element(self, {})

    def _as_path(self, x: Path | str) -> Path:
        return self.graph.path(x) if isinstance(x, str) else x

    def p(self, v: str) -> "Element":
        vp = self.graph.vertex(v)
        return Element(self, {(vp, vp): self.ring.one})

    def s(self, lam: Path | str) -> "Element":
        lam = self._as_path(lam)
        return Element(self, {(lam, self.graph.vertex(lam.source)): self.ring.one})

    def st(self, lam: Path | str) -> "Element":
        lam = self._as_path(lam)
        return Element(self, {(self.graph.vertex(lam.source), lam): self.ring.one})

    def identity(self) -> "Element":
        """Σ_v p_v, the unit of the algebra for a finite vertex set."""
        return Element(
            self, {(self.graph.vertex(v), self.graph.vertex(v)): self.ring.one for v in self.graph.vertices}
        )

    def generators(self) -> list[tuple[str, "Element"]]:
        """Vertex projections and skeleton edges with their ghosts, in fixed order."""
        gens = [(f"p({v})", self.p(v)) for v in self.graph.vertices]
        for e in self.graph.edge_ids:
            gens.append((f"s({e})", self.s(e)))
            gens.append((f"st({e})", self.st(e)))
        return gens

    def parse(self, text: str) -> "Element":
        from .expr import parse_element

        return parse_element(self, text)


class Element:
    """An immutable element of KP_R(Λ)."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: KPAlgebra, terms: dict[Pair, Scalar]):
        self.algebra = algebra
        self.terms = terms

    # -- helpers -------------------------------------------------------------

    @property
    def graph(self) -> KGraph:
        return self.algebra.graph

    @property
    def ring(self) -> RingSpec:
        return self.algebra.ring

    def _check(self, other: "Element") -> None:
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.graph is not self.graph:
            raise AlgebraError("elements belong to different graphs")
        if other.ring != self.ring:
            raise AlgebraError(f"ring mismatch: {self.ring} vs {other.ring}")

    def _new(self, acc: dict[Pair, Scalar]) -> "Element":
        return Element(self.algebra, {k: v for k, v in acc.items() if v != 0})

    def __iter__(self) -> Iterator[tuple[Pair, Scalar]]:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def is_zero(self) -> bool:
        """True iff the element is zero in the algebra."""
        return not self.normalize().terms

    def coefficient(self, alpha: Path, beta: Path) -> Scalar:
        return self.terms.get((alpha, beta), self.ring.zero)

    def ghost_degrees(self) -> set[Degree]:
        return {beta.degree for _, beta in self.terms}

    def sorted_terms(self) -> list[tuple[Pair, Scalar]]:
        return sorted(self.terms.items(), key=lambda kv: _pair_key(kv[0]))

    # -- linear structure ----------------------------------------------------

    def __add__(self, other: "Element") -> "Element":
        self._check(other)
        ring = self.ring
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = ring.add(acc.get(k, ring.zero), v)
        return self._new(acc)

    def __neg__(self) -> "Element":
        return Element(self.algebra, {k: self.ring.neg(v) for k, v in self.terms.items()})

    def __sub__(self, other: "Element") -> "Element":
        return self + (-other)

    def scale(self, c: Scalar | RingValue) -> "Element":
        ring = self.ring
        c = ring.coerce(c.value if isinstance(c, RingValue) else c)
        return self._new({k: ring.mul(c, v) for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Element):
            return self.mul(other)
        return self.scale(other)

    def __rmul__(self, c):
        return self.scale(c)

    # -- multiplication ------------------------------------------------------

    def mul(self, other: "Element") -> "Element":
        self._check(other)
        g = self.graph
        ring = self.ring
        acc: dict[Pair, Scalar] = {}
        for (alpha, beta), c1 in self.terms.items():
            for (gamma, delta), c2 in other.terms.items():
                if beta.range != gamma.range:
                    continue
                c = ring.mul(c1, c2)
                for rho, tau in g.min_common_extensions(beta, gamma):
                    key = (g.compose(alpha, rho), g.compose(delta, tau))
                    acc[key] = ring.add(acc.get(key, ring.zero), c)
        return self._new(acc)

    def star(self) -> "Element":
        """The coefficient-fixing anti-involution s_α s_{β*} -> s_β s_{α*}."""
        return Element(self.algebra, {(b, a): c for (a, b), c in self.terms.items()})

    def commutator(self, other: "Element") -> "Element":
        return self.mul(other) - other.mul(self)

    # -- normal form ---------------------------------------------------------

    def reshape(self, m: Degree) -> "Element":
        """Rewrite every term at ghost degree ``m`` using (KP4)."""
        g = self.graph
        ring = self.ring
        acc: dict[Pair, Scalar] = {}
        for (alpha, beta), c in self.terms.items():
            if not deg_le(beta.degree, m):
                raise AlgebraError(f"cannot reshape ghost degree {beta.degree} down to {m}")
            if beta.degree == m:
                key = (alpha, beta)
                acc[key] = ring.add(acc.get(key, ring.zero), c)
                continue
            for mu in g.paths_from(alpha.source, deg_sub(m, beta.degree)):
                key = (g.compose(alpha, mu), g.compose(beta, mu))
                acc[key] = ring.add(acc.get(key, ring.zero), c)
        return self._new(acc)

    def top_ghost_degree(self) -> Degree:
        m = zero_degree(self.graph.k)
        for d in self.ghost_degrees():
            m = deg_join(m, d)
        return m

    def normalize(self) -> "Element":
        """Normal form at the join of all ghost degrees, terms sorted."""
        reshaped = self.reshape(self.top_ghost_degree())
        return Element(self.algebra, dict(reshaped.sorted_terms()))

    def is_normalized(self) -> bool:
        return len(self.ghost_degrees()) <= 1

    def compact(self) -> "Element":
        """An equal element in normal form at a smaller ghost degree, when one exists.

        Greedily undoes reshaping one colour at a time; used for display.
        """
        a = self.normalize()
        g = self.graph
        progress = True
        while progress and a.terms:
            progress = False
            m = a.top_ghost_degree()
            for i in range(1, g.k + 1):
                if m[i - 1] == 0:
                    continue
                smaller = a._contract(i, m)
                if smaller is not None:
                    a = smaller
                    progress = True
                    break
        return a

    def _contract(self, color: int, m: Degree) -> "Element | None":
        g = self.graph
        e = unit_degree(g.k, color)
        low = deg_sub(m, e)
        groups: dict[Pair, dict[Path, Scalar]] = {}
        for (alpha, beta), c in self.terms.items():
            if not deg_le(e, alpha.degree):
                return None
            mu = g.segment(beta, low, m)
            if g.segment(alpha, deg_sub(alpha.degree, e), alpha.degree) != mu:
                return None
            key = (g.segment(alpha, zero_degree(g.k), deg_sub(alpha.degree, e)), g.segment(beta, zero_degree(g.k), low))
            groups.setdefault(key, {})[mu] = c
        acc = {}
        for (a0, b0), by_mu in groups.items():
            ext = g.paths_from(a0.source, e)
            if set(ext) != set(by_mu):
                return None
            coeffs = set(by_mu.values())
            if len(coeffs) != 1:
                return None
            acc[(a0, b0)] = coeffs.pop()
        return Element(self.algebra, dict(sorted(acc.items(), key=lambda kv: _pair_key(kv[0]))))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return (self - other).is_zero()

    __hash__ = None  # type: ignore[assignment]

    # -- grading -------------------------------------------------------------

    def grade_of(self, pair: Pair) -> tuple[int, ...]:
        return deg_sub(pair[0].degree, pair[1].degree)

    def graded_component(self, grade: tuple[int, ...]) -> "Element":
        return Element(self.algebra, {k: v for k, v in self.terms.items() if self.grade_of(k) == tuple(grade)})

    def graded_components(self) -> dict[tuple[int, ...], "Element"]:
        out: dict[tuple[int, ...], dict[Pair, Scalar]] = {}
        for k, v in self.terms.items():
            out.setdefault(self.grade_of(k), {})[k] = v
        return {grade: Element(self.algebra, t) for grade, t in sorted(out.items())}

    def homogeneous_degree(self) -> tuple[int, ...] | None:
        """The single ℤ^k degree of a homogeneous element; None if inhomogeneous.

        The zero element reports degree 0.
        """
        grades = {self.grade_of(k) for k in self.normalize().terms}
        if not grades:
            return zero_degree(self.graph.k)
        return grades.pop() if len(grades) == 1 else None

    # -- misc ----------------------------------------------------------------

    def support_ranges(self) -> set[str]:
        return {beta.range for _, beta in self.terms}

    def __str__(self) -> str:
        from .expr import format_element

        return format_element(self)

    def __repr__(self) -> str:
        return f"Element({self})"


def sum_elements(algebra: KPAlgebra, elements: Iterable[Element]) -> Element:
    total = algebra.zero()
    for x in elements:
        total = total + x
    return total

