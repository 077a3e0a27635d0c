"""
Signed multigraphs and their permutation-bipartition pairs.

Text grammar, one item per line::

    # comment
    v <name>
    e <tail> <head> +|- [label]

Edge ``i`` (0-based, in input order) owns the quadricell ``a = 4i+1``,
``alpha a = 4i+2``, ``beta a = 4i+3``, ``gamma a = 4i+4``.  ``theta`` pairs
``a <-> alpha a`` and ``beta a <-> gamma a``; ``alpha a`` sits in the tail's
cell and ``beta a`` in the head's cell.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import GraphError, ParseError
from .pair import PBPair, ThetaMap
from .perm import Permutation

__all__ = [
    "Edge",
    "SignedGraph",
    "parse_signed_graph",
    "format_signed_graph",
    "graph_to_pair",
    "switch",
    "amalgamate",
    "build_c2_chain",
    "c2_graph",
    "random_signed_graph",
]


@dataclass(frozen=True)
class Edge:
    tail: str
    head: str
    sign: int
    label: str = ""

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise GraphError(f"edge sign must be +1 or -1, got {self.sign!r}")

    @property
    def is_loop(self) -> bool:
        return self.tail == self.head


@dataclass(frozen=True)
class SignedGraph:
    vertices: tuple
    edges: tuple

    def __post_init__(self):
        verts = tuple(sorted(set(self.vertices)))
        edges = tuple(self.edges)
        for e in edges:
            for end in (e.tail, e.head):
                if end not in verts:
                    raise GraphError(f"edge endpoint {end!r} is not a vertex")
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, edges: Iterable, vertices: Iterable[str] = ()) -> "SignedGraph":
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(*e)
            es.append(e)
        verts = set(vertices)
        for e in es:
            verts.update((e.tail, e.head))
        return cls(tuple(verts), tuple(es))

    def degree(self, v: str) -> int:
        return sum((e.tail == v) + (e.head == v) for e in self.edges)

    def degrees(self) -> dict:
        deg = Counter({v: 0 for v in self.vertices})
        for e in self.edges:
            deg[e.tail] += 1
            deg[e.head] += 1
        return dict(deg)

    def embedding_count(self) -> int:
        from math import factorial, prod
        return prod(factorial(max(d - 1, 0)) for d in self.degrees().values())

    def __str__(self) -> str:
        return format_signed_graph(self)


def parse_signed_graph(text: str, strict: bool = False) -> SignedGraph:
    declared = []
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tok = line.split()
        if tok[0] == "v":
            if len(tok) != 2:
                raise ParseError("vertex line is 'v <name>'", lineno)
            declared.append(tok[1])
        elif tok[0] == "e":
            if len(tok) not in (4, 5) or tok[3] not in ("+", "-"):
                raise ParseError("edge line is 'e <tail> <head> +|- [label]'", lineno)
            tail, head = tok[1], tok[2]
            if strict:
                for end in (tail, head):
                    if end not in declared:
                        raise ParseError(f"unknown vertex {end!r}", lineno)
            edges.append(Edge(tail, head, 1 if tok[3] == "+" else -1, tok[4] if len(tok) == 5 else ""))
        else:
            raise ParseError(f"unknown line type {tok[0]!r}", lineno)
    return SignedGraph.from_edges(edges, declared)


def format_signed_graph(g: SignedGraph) -> str:
    lines = [f"v {v}" for v in g.vertices]
    for e in g.edges:
        sign = "+" if e.sign > 0 else "-"
        lines.append(f"e {e.tail} {e.head} {sign}" + (f" {e.label}" if e.label else ""))
    return "\n".join(lines) + "\n"


def graph_to_pair(g: SignedGraph) -> PBPair:
    """The pair (P_Sigma, Pi_Sigma) of a signed graph; cells follow ``g.vertices``."""
    if not g.edges:
        raise GraphError("graph has no edges")
    theta = []
    cycles = []
    side = {v: [] for v in g.vertices}
    for i, e in enumerate(g.edges):
        a, aa, ba, ga = 4 * i + 1, 4 * i + 2, 4 * i + 3, 4 * i + 4
        theta += [(aa, a), (ba, ga)]
        if e.sign > 0:
            cycles += [(a, ga), (aa, ba)]
        else:
            cycles += [(a, ba), (aa, ga)]
        side[e.tail].append(aa)
        side[e.head].append(ba)
    th = ThetaMap(tuple(theta))
    cells = tuple((s, [th(x) for x in s]) for s in (side[v] for v in g.vertices))
    return PBPair(th, Permutation.from_cycles(cycles), cells)


def switch(g: SignedGraph, v: str) -> SignedGraph:
    """Flip the sign of every non-loop edge at ``v``; loops flip twice and stay put."""
    if v not in g.vertices:
        raise GraphError(f"unknown vertex {v!r}")
    edges = tuple(
        Edge(e.tail, e.head, -e.sign if (v in (e.tail, e.head) and not e.is_loop) else e.sign, e.label)
        for e in g.edges
    )
    return SignedGraph(g.vertices, edges)


def amalgamate(g1: SignedGraph, v1: str, g2: SignedGraph, u2: str) -> SignedGraph:
    """Disjoint union of ``g1`` and ``g2`` with ``u2`` glued onto ``v1``.

    ``g1`` keeps its names; a clashing vertex of ``g2`` is prefixed with ``_``
    until it is unique.
    """
    if v1 not in g1.vertices:
        raise GraphError(f"unknown vertex {v1!r} in first graph")
    if u2 not in g2.vertices:
        raise GraphError(f"unknown vertex {u2!r} in second graph")
    taken = set(g1.vertices)
    rename = {u2: v1}
    for w in g2.vertices:
        if w == u2:
            continue
        name = w
        while name in taken:
            name = "_" + name
        taken.add(name)
        rename[w] = name
    edges = g1.edges + tuple(Edge(rename[e.tail], rename[e.head], e.sign, e.label) for e in g2.edges)
    return SignedGraph(tuple(taken), edges)


def c2_graph() -> SignedGraph:
    """The digon with one positive and one negative edge."""
    return SignedGraph.from_edges([("u", "v", 1), ("u", "v", -1)])


def build_c2_chain(n: int) -> SignedGraph:
    """``n`` signed digons glued end to end: vertices ``v0 .. vn``."""
    if n < 1:
        raise GraphError("chain length must be at least 1")
    edges = []
    for i in range(1, n + 1):
        edges.append(Edge(f"v{i - 1}", f"v{i}", 1))
        edges.append(Edge(f"v{i - 1}", f"v{i}", -1))
    return SignedGraph.from_edges(edges)


def random_signed_graph(rng: random.Random, max_vertices: int = 3, max_edges: int = 4) -> SignedGraph:
    nv = rng.randint(1, max_vertices)
    ne = rng.randint(1, max_edges)
    names = [f"x{i}" for i in range(nv)]
    edges = [Edge(rng.choice(names), rng.choice(names), rng.choice((1, -1))) for _ in range(ne)]
    return SignedGraph.from_edges(edges, names)


def structure_key(g: SignedGraph) -> tuple:
    """Edge list with vertices renamed by first appearance; equal keys mean equal structure."""
    order = {}
    for e in g.edges:
        for end in (e.tail, e.head):
            order.setdefault(end, len(order))
    isolated = len(g.vertices) - len(order)
    return tuple((order[e.tail], order[e.head], e.sign) for e in g.edges), isolated
