"""Command-line front end.

Exit codes: 0 on success, 1 on domain errors (invalid graph, failed
precondition), 2 on parse errors (graph file, expressions, arguments).
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from . import analysis
from .algebra import AlgebraError, KPAlgebra
from .center import (
    FilterError,
    Window,
    central_filters,
    central_in_window,
    diagnostics,
    verify_theorems,
)
from .expr import ExprSyntaxError, format_element
from .kgraph import GraphParseError, KGraph, PathError, format_degree, load_graph, parse_degree
from .ring import RingError, RingSpec

GRAMMAR = """\
graph file format (one declaration per line, '#' starts a comment):
  k <int>
  vertex <id>
  edge <id> <color> <range-id> <source-id>
  square <g> <h> = <h'> <g'>     (g h = h' g', color(g)=color(g') < color(h)=color(h'))
  ids match [A-Za-z0-9_]+; unknown directives are errors.

element expressions (whitespace insignificant):
  element := term (('+'|'-') term)*
  term    := [coeff '*']? factor ('*' factor)*
  factor  := 'p(' vertex ')' | 's(' path ')' | 'st(' path ')'
  path    := id ('.' id)*
  coeff   := integer | integer '/' integer   (ring-interpreted)

rings: --ring Q | Fp:<p> | Z
degrees: comma-separated integers of length k, e.g. --degree 1,2
"""


class DomainError(Exception):
    pass


class ParseError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=1, help="worker threads for internal parallel steps")
    common.add_argument(
        "--allow-sources", action="store_true", help="permissive mode: accept graphs with source vertices"
    )

    parser = argparse.ArgumentParser(
        prog="kpalg",
        description="Exact computations in Kumjian-Pask algebras of finite k-graphs.",
        epilog=GRAMMAR,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(
            name, parents=[common], help=help_text, epilog=GRAMMAR, formatter_class=argparse.RawDescriptionHelpFormatter
        )
        p.add_argument("file", help="graph file")
        return p

    add("validate", "check the unique factorization presentation")

    p = add("paths", "list paths with a given range and degree")
    p.add_argument("--from", dest="vertex", required=True)
    p.add_argument("--degree", required=True)

    p = add("mul", "multiply two elements")
    p.add_argument("--ring", default="Q")
    p.add_argument("left")
    p.add_argument("right")

    p = add("normalize", "print the normal form of an element")
    p.add_argument("--ring", default="Q")
    p.add_argument("element")

    p = add("props", "decide closed paths, cofinality, aperiodicity, commutativity")
    p.add_argument("--aperiodicity-bound", type=int, default=analysis.DEFAULT_BOUND)

    p = add("center", "solve for the centre inside a window")
    p.add_argument("--ring", default="Q")
    p.add_argument("--ghost", required=True)
    p.add_argument("--cap", required=True)
    p.add_argument("--check", metavar="EXPR", help="test an element for centrality")
    p.add_argument("--verify", action="store_true", help="run the theorem harness up to this window")
    p.add_argument("--aperiodicity-bound", type=int, default=analysis.DEFAULT_BOUND)

    p = add("report", "everything, in a fixed section order")
    p.add_argument("--ring", default="Q")
    p.add_argument("--aperiodicity-bound", type=int, default=analysis.DEFAULT_BOUND)
    return parser


def _load(args) -> KGraph:
    try:
        graph = load_graph(args.file)
    except FileNotFoundError:
        raise DomainError(f"no such file: {args.file}") from None
    except GraphParseError as exc:
        raise ParseError(f"{args.file}: {exc}") from None
    return graph


def _require_valid(graph: KGraph, args) -> None:
    problems = graph.validate(allow_sources=args.allow_sources)
    if problems:
        raise DomainError("graph is not a valid k-graph: " + "; ".join(problems))


def _ring(text: str) -> RingSpec:
    try:
        return RingSpec.parse(text)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _degree(text: str, graph: KGraph) -> tuple[int, ...]:
    try:
        return parse_degree(text, graph.k)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _element(algebra: KPAlgebra, text: str):
    try:
        return algebra.parse(text)
    except ExprSyntaxError as exc:
        raise ParseError(f"expression {text!r}: {exc}") from None
    except (PathError, AlgebraError, RingError, ZeroDivisionError) as exc:
        raise DomainError(f"expression {text!r}: {exc}") from None


def _bool(x: bool) -> str:
    return str(x).lower()


def cmd_validate(graph: KGraph, args) -> tuple[list[str], int]:
    problems = graph.validate(allow_sources=args.allow_sources)
    if not problems:
        return ["valid"], 0
    return ["invalid"] + [f"violation: {p}" for p in problems], 1


def cmd_paths(graph: KGraph, args) -> list[str]:
    _require_valid(graph, args)
    if args.vertex not in graph.vertices:
        raise DomainError(f"unknown vertex {args.vertex!r}")
    return [str(p) for p in graph.paths_from(args.vertex, _degree(args.degree, graph))]


def cmd_mul(graph: KGraph, args) -> list[str]:
    _require_valid(graph, args)
    algebra = KPAlgebra(graph, _ring(args.ring))
    return [format_element(_element(algebra, args.left).mul(_element(algebra, args.right)))]


def cmd_normalize(graph: KGraph, args) -> list[str]:
    _require_valid(graph, args)
    algebra = KPAlgebra(graph, _ring(args.ring))
    return [format_element(_element(algebra, args.element))]


def _props_lines(graph: KGraph, bound: int, threads: int) -> list[str]:
    if bound < 0:
        raise DomainError("aperiodicity bound must be nonnegative")
    return analysis.analyse(graph, bound, threads).lines()


def cmd_props(graph: KGraph, args) -> list[str]:
    _require_valid(graph, args)
    try:
        return _props_lines(graph, args.aperiodicity_bound, args.threads)
    except analysis.AnalysisError as exc:
        raise DomainError(str(exc)) from None


def _center_lines(graph: KGraph, ring: RingSpec, window: Window, threads: int, props) -> list[str]:
    result = central_in_window(graph, ring, window, threads)
    label = "dimension" if ring.is_field else "lattice_rank"
    out = [
        f"ring: {ring}",
        f"window: {window}",
        f"window_size: {len(result.pairs)}",
        f"equations: {result.equations}",
        f"{label}: {result.rank}",
    ]
    if result.pruned:
        out.append("pruned_vertices: " + ",".join(result.pruned))
    diags = diagnostics(graph, result, props)
    for i, (b, d) in enumerate(zip(result.basis, diags), start=1):
        out.append(f"basis[{i}]: {format_element(b)}")
        filters = central_filters(graph, b)
        out.append(f"filters[{i}]: {'pass' if filters.all_pass else 'fail'}")
        out.append(
            f"diagnostics[{i}]: ranges_cover={_bool(d.ranges_cover)} diagonal={_bool(d.diagonal)} "
            f"uniform={_bool(d.uniform)}"
        )
    return out


def _check_lines(algebra: KPAlgebra, text: str) -> list[str]:
    a = _element(algebra, text)
    failing = [name for name, g in algebra.generators() if not a.commutator(g).is_zero()]
    out = [f"check: {format_element(a)}", f"central: {_bool(not failing)}"]
    if failing:
        out.append("noncommuting_generators: " + " ".join(failing))
    normal = a.normalize()
    if normal.terms:
        out.extend(central_filters(algebra.graph, normal).lines())
    return out


def cmd_center(graph: KGraph, args) -> list[str]:
    _require_valid(graph, args)
    ring = _ring(args.ring)
    try:
        window = Window(_degree(args.ghost, graph), _degree(args.cap, graph))
    except ValueError as exc:
        raise DomainError(str(exc)) from None
    has_sources = bool(graph.validate(allow_sources=False))
    props = None if has_sources else analysis.analyse(graph, args.aperiodicity_bound, args.threads)
    out = _center_lines(graph, ring, window, args.threads, props)
    if args.check:
        out.extend(_check_lines(KPAlgebra(graph, ring), args.check))
    if args.verify:
        report = verify_theorems(graph, ring, window, args.aperiodicity_bound, args.threads)
        out.extend(report.lines())
    return out


def cmd_report(graph: KGraph, args) -> list[str]:
    ring = _ring(args.ring)
    out = ["== graph ==", f"k: {graph.k}", f"vertices: {len(graph.vertices)}", f"edges: {len(graph.edges)}",
           f"squares: {len(graph.square_list)}"]
    problems = graph.validate(allow_sources=args.allow_sources)
    out.append("== validation ==")
    out.extend(["valid"] if not problems else [f"violation: {p}" for p in problems])
    if problems:
        raise DomainError("\n".join(out))
    has_sources = bool(graph.validate(allow_sources=False))
    out.append("== properties ==")
    props = None
    if has_sources:
        out.append(f"closed_path: {_bool(analysis.has_closed_path(graph))}")
        out.append("note: graph has sources; cofinality and aperiodicity not decided")
    else:
        props = analysis.analyse(graph, args.aperiodicity_bound, args.threads)
        out.extend(props.lines())
    out.append("== paths ==")
    for v in graph.vertices:
        for i in range(1, graph.k + 1):
            n = tuple(2 if j == i - 1 else 0 for j in range(graph.k))
            out.append(f"|{v}Λ^({format_degree(n)})| = {len(graph.paths_from(v, n))}")
    ones = (1,) * graph.k
    limit = Window(ones, (2,) * graph.k)
    out.append("== center ==")
    out.extend(_center_lines(graph, ring, limit, args.threads, props))
    if props is not None and props.commutative_graph:
        out.append("== laurent ==")
        iso = analysis.laurent_iso(graph)
        algebra = KPAlgebra(graph, ring)
        for v in graph.vertices:
            loops = iso.loops[v]
            names = ["x"] if graph.k == 1 else [f"x{i}" for i in range(1, graph.k + 1)]
            out.append(f"{v}: " + " ".join(f"s({e})->{x}" for x, e in zip(names, loops)))
        sample = algebra.identity()
        for v, poly in iso.export(sample).items():
            out.append(f"identity at {v}: {analysis.format_laurent(ring, poly)}")
    out.append("== verification ==")
    out.extend(verify_theorems(graph, ring, limit, args.aperiodicity_bound, args.threads).lines())
    return out


COMMANDS = {
    "paths": cmd_paths,
    "mul": cmd_mul,
    "normalize": cmd_normalize,
    "props": cmd_props,
    "center": cmd_center,
    "report": cmd_report,
}


def main(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads < 1:
        print("error: --threads must be at least 1", file=stderr)
        return 2
    try:
        graph = _load(args)
        if args.command == "validate":
            lines, code = cmd_validate(graph, args)
        else:
            lines, code = COMMANDS[args.command](graph, args), 0
    except ParseError as exc:
        print(f"parse error: {exc}", file=stderr)
        return 2
    except DomainError as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    except (FilterError, PathError, AlgebraError, RingError, analysis.AnalysisError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    for line in lines:
        print(line, file=stdout)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
