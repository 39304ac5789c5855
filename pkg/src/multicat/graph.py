"""Algebraic graph terms and their structural fold.

A graph is a term over four constructors: Empty, Vertex, Overlay, Connect.
``foldg`` replaces the constructors with a caller-supplied algebra; every
other operation here (semantics, equality, induced subgraph) is one such
algebra. Equality is always semantic: two terms are the same graph when
they denote the same vertex and edge sets, so don't compare terms with ==
expecting graph equality.

Graphs are directed: Connect(a, b) adds edges from every vertex of a to
every vertex of b, and nothing back.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Callable, TypeVar

from .errors import DataParseError

B = TypeVar("B")


@dataclass(frozen=True)
class Empty:
    pass


@dataclass(frozen=True)
class Vertex:
    id: str


@dataclass(frozen=True)
class Overlay:
    left: "GraphTerm"
    right: "GraphTerm"


@dataclass(frozen=True)
class Connect:
    left: "GraphTerm"
    right: "GraphTerm"


GraphTerm = Empty | Vertex | Overlay | Connect

EMPTY = Empty()


@dataclass(frozen=True)
class GraphSemantics:
    """Canonical meaning of a term: vertex set plus directed edge set."""
    vertices: frozenset[str]
    edges: frozenset[tuple[str, str]]


def foldg(on_empty: B,
          on_vertex: Callable[[str], B],
          on_overlay: Callable[[B, B], B],
          on_connect: Callable[[B, B], B],
          g: GraphTerm) -> B:
    """Structural recursion over a graph term; total for finite terms."""
    match g:
        case Empty():
            return on_empty
        case Vertex(v):
            return on_vertex(v)
        case Overlay(l, r):
            return on_overlay(foldg(on_empty, on_vertex, on_overlay, on_connect, l),
                              foldg(on_empty, on_vertex, on_overlay, on_connect, r))
        case Connect(l, r):
            return on_connect(foldg(on_empty, on_vertex, on_overlay, on_connect, l),
                              foldg(on_empty, on_vertex, on_overlay, on_connect, r))
    raise TypeError(f"not a graph term: {g!r}")


def semantics(g: GraphTerm) -> GraphSemantics:
    """Vertex/edge sets of a term, as a foldg instance.

    Overlay unions componentwise; Connect additionally draws an edge from
    every left vertex to every right vertex.
    """
    def connect(a: GraphSemantics, b: GraphSemantics) -> GraphSemantics:
        cross = frozenset((x, y) for x in a.vertices for y in b.vertices)
        return GraphSemantics(a.vertices | b.vertices, a.edges | b.edges | cross)

    return foldg(
        GraphSemantics(frozenset(), frozenset()),
        lambda v: GraphSemantics(frozenset({v}), frozenset()),
        lambda a, b: GraphSemantics(a.vertices | b.vertices, a.edges | b.edges),
        connect,
        g)


def graph_eq(g1: GraphTerm, g2: GraphTerm) -> bool:
    return semantics(g1) == semantics(g2)


def induced_subgraph(g: GraphTerm, keep: set[str] | frozenset[str]) -> GraphTerm:
    """Restrict g to the vertices in keep; dropped vertices become Empty.

    Connect over Empty adds no edges, so the result means exactly
    (V & keep, E & keep x keep).
    """
    return foldg(EMPTY,
                 lambda v: Vertex(v) if v in keep else EMPTY,
                 Overlay, Connect, g)


def vertices(ids: list[str]) -> GraphTerm:
    """Overlay of one Vertex per id; Empty for no ids. Balanced to keep terms shallow."""
    return overlays([Vertex(i) for i in ids])


def overlays(terms: list[GraphTerm]) -> GraphTerm:
    if not terms:
        return EMPTY
    while len(terms) > 1:
        terms = [Overlay(terms[i], terms[i + 1]) if i + 1 < len(terms) else terms[i]
                 for i in range(0, len(terms), 2)]
    return terms[0]


def edge(src: str, dst: str) -> GraphTerm:
    return Connect(Vertex(src), Vertex(dst))


def from_vertices_and_edges(ids: list[str], edges: list[tuple[str, str]]) -> GraphTerm:
    """Overlay of all vertices with one Connect term per edge."""
    return overlays([vertices(ids)] + [edge(s, d) for s, d in edges]) if ids or edges \
        else EMPTY


def to_dot(g: GraphTerm) -> str:
    """DOT text of the term's semantics, for debugging."""
    sem = semantics(g)
    lines = ["digraph {"]
    isolated = sem.vertices - {v for e in sem.edges for v in e}
    for v in sorted(isolated):
        lines.append(f"  {v};")
    for s, d in sorted(sem.edges):
        lines.append(f"  {s} -> {d};")
    lines.append("}")
    return "\n".join(lines)


def term_text(g: GraphTerm) -> str:
    """Textual term syntax: empty, vertex v, overlay(t1, t2), connect(t1, t2)."""
    return foldg("empty",
                 lambda v: f"vertex {v}",
                 lambda a, b: f"overlay({a}, {b})",
                 lambda a, b: f"connect({a}, {b})",
                 g)


def canonical_term(sem: GraphSemantics) -> GraphTerm:
    """Canonical term for a semantics: ascending vertices overlaid with connects per edge.

    Overlays associate to the left so the text form is unique.
    """
    vterm = _left_overlays([Vertex(v) for v in sorted(sem.vertices)])
    if not sem.edges:
        return vterm
    eterm = _left_overlays([edge(s, d) for s, d in sorted(sem.edges)])
    if not sem.vertices:
        return eterm
    return Overlay(vterm, eterm)


def _left_overlays(terms: list[GraphTerm]) -> GraphTerm:
    if not terms:
        return EMPTY
    return reduce(Overlay, terms)


def parse_term(text: str) -> GraphTerm:
    """Parse the textual term syntax back into a GraphTerm."""
    pos = 0

    def skip_ws():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def expect(lit: str):
        nonlocal pos
        skip_ws()
        if not text.startswith(lit, pos):
            raise DataParseError(f"expected {lit!r} at offset {pos}", file="<term>")
        pos += len(lit)

    def ident() -> str:
        nonlocal pos
        skip_ws()
        start = pos
        while pos < len(text) and (text[pos].isalnum() or text[pos] in "_-"):
            pos += 1
        if start == pos:
            raise DataParseError(f"expected an identifier at offset {pos}", file="<term>")
        return text[start:pos]

    def term() -> GraphTerm:
        skip_ws()
        word = ident()
        if word == "empty":
            return EMPTY
        if word == "vertex":
            return Vertex(ident())
        if word in ("overlay", "connect"):
            expect("(")
            left = term()
            expect(",")
            right = term()
            expect(")")
            return Overlay(left, right) if word == "overlay" else Connect(left, right)
        raise DataParseError(f"unknown term constructor {word!r}", file="<term>")

    result = term()
    skip_ws()
    if pos != len(text):
        raise DataParseError(f"trailing input at offset {pos}", file="<term>")
    return result
