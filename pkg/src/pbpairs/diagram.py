"""
Walkup reduction diagrams.

Bits of ``S`` are eliminated one level at a time in a fixed order.  A bit
whose cell is a singleton has one descendant (``reduce_singleton``);
otherwise there is one descendant per other bit ``a`` of its cell
(``reduce_constraint(a -> b)``).  Each edge carries the two Kronecker deltas;
along a root-to-leaf path they add up to ``||PQ||`` of the matching embedding.

In ``tree`` mode root-to-leaf paths are in bijection with bi-rotations, and
the Euler-genus of each path is obtained by rebuilding ``Q`` from the path's
constraints.  ``dag`` mode merges nodes of a level whose canonical form
agrees and only supports region counts.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

from .embed import EmbeddingStats, GenusDistribution, RegionDistribution, _stats, _structure
from .errors import ModeError, OrderError
from .pair import (PBPair, ReductionTrace, canonical_text, constraint_surgery,
                   drop_from_cells, singleton_surgery)
from .perm import Permutation, orbit_count

__all__ = [
    "DiagramNode",
    "DiagramEdge",
    "ReductionDiagram",
    "PathWeight",
    "EpsilonDiagnostic",
    "default_order",
    "build_diagram",
    "diagram_paths",
    "diagram_region_distribution",
    "diagram_genus_polynomial",
    "reconstruct_bi_rotation",
    "genus_edge_weight",
    "export_dot",
]


@dataclass
class DiagramNode:
    id: int
    level: int
    pair: PBPair
    multiplicity: int = 1


@dataclass(frozen=True)
class DiagramEdge:
    parent: int
    child: int
    trace: ReductionTrace

    @property
    def weight(self) -> int:
        return self.trace.weight


@dataclass
class ReductionDiagram:
    mode: str
    order: tuple
    nodes: list = field(default_factory=list)
    edges: list = field(default_factory=list)

    @property
    def root(self) -> DiagramNode:
        return self.nodes[0]

    @property
    def leaves(self) -> list:
        last = len(self.order)
        return [n for n in self.nodes if n.level == last]

    def path_count(self) -> int:
        return sum(n.multiplicity for n in self.leaves)


@dataclass(frozen=True)
class PathWeight:
    traces: tuple
    Q: Permutation
    region_weight: int
    stats: EmbeddingStats

    @property
    def genus(self):
        return self.stats.euler_genus


def default_order(pair: PBPair) -> tuple:
    """Cell-major, ascending within each cell."""
    return tuple(x for side, _ in pair.cells for x in side)


def _check_order(pair: PBPair, order: Sequence[int]) -> tuple:
    order = tuple(int(x) for x in order)
    if len(set(order)) != len(order):
        raise OrderError(f"order repeats a bit: {order}")
    if set(order) != set(pair.s_side):
        missing = sorted(set(pair.s_side) - set(order))
        extra = sorted(set(order) - set(pair.s_side))
        raise OrderError(f"order must list every bit of S exactly once (missing {missing}, unknown {extra})")
    return order


def build_diagram(pair: PBPair, order: Optional[Sequence[int]] = None, mode: str = "tree") -> ReductionDiagram:
    if mode not in ("tree", "dag"):
        raise ModeError(f"unknown diagram mode {mode!r}")
    order = default_order(pair) if order is None else _check_order(pair, order)
    d = ReductionDiagram(mode=mode, order=order)
    d.nodes.append(DiagramNode(0, 0, pair, 1))
    level = [0]
    # every node of a level has lost the same bits, so theta and the cells are shared
    theta, cells = pair.theta, pair.cells
    for depth, b in enumerate(order, 1):
        side, _ = cells[pair.cell_of(b)]
        singleton = side == (b,)
        tb = theta(b)
        pair = PBPair._trusted(theta.without(b), pair.P, drop_from_cells(pair, b, tb, drop_empty=singleton))
        theta, cells = pair.theta, pair.cells
        # with theta and cells fixed, canonical keys agree exactly when the images of P do
        syms = sorted(theta.symbols)
        table = {}
        nxt = []
        for nid in level:
            parent = d.nodes[nid]
            P = parent.pair.P
            if singleton:
                steps = [singleton_surgery(P, parent.pair.theta, b)]
            else:
                steps = [constraint_surgery(P, parent.pair.theta, a, b) for a in side if a != b]
            for childP, trace in steps:
                key = tuple(map(childP._map.__getitem__, syms)) if mode == "dag" else None
                if key is not None and key in table:
                    cid = table[key]
                    d.nodes[cid].multiplicity += parent.multiplicity
                else:
                    cid = len(d.nodes)
                    d.nodes.append(DiagramNode(cid, depth, PBPair._trusted(theta, childP, cells),
                                               parent.multiplicity))
                    nxt.append(cid)
                    if key is not None:
                        table[key] = cid
                d.edges.append(DiagramEdge(nid, cid, trace))
        level = nxt
    return d


def diagram_region_distribution(d: ReductionDiagram) -> RegionDistribution:
    """Sum of path weights, by forward dynamic programming over the levels."""
    dist = {0: Counter({0: 1})}
    for e in d.edges:  # edges are stored level by level
        acc = dist.setdefault(e.child, Counter())
        w = e.weight
        for k, v in dist[e.parent].items():
            acc[k + w] += v
    total = Counter()
    for leaf in d.leaves:
        total.update(dist.get(leaf.id, Counter()))
    return RegionDistribution({k: total[k] for k in sorted(total)})


def reconstruct_bi_rotation(root: PBPair, traces: Sequence[ReductionTrace]) -> Permutation:
    """Rebuild ``Q`` from the steps of a root-to-leaf path.

    Walking the path backwards, a singleton step on ``b`` adds the fixed points
    ``b`` and ``theta b``; a constraint ``a -> b`` puts ``b`` right after ``a``
    and ``theta b`` right before ``theta a``.
    """
    th = root.theta
    q = {}
    inv = {}
    for tr in reversed(traces):
        b = tr.b
        tb = th(b)
        if tr.kind == "singleton":
            q[b] = inv[b] = b
            q[tb] = inv[tb] = tb
            continue
        a = tr.a
        ta = th(a)
        nxt = q[a]
        q[a], q[b] = b, nxt
        inv[b], inv[nxt] = a, b
        pre = inv[ta]
        q[pre], q[tb] = tb, ta
        inv[tb], inv[ta] = pre, tb
    return Permutation._trusted(q)


def diagram_paths(d: ReductionDiagram) -> Iterator[PathWeight]:
    if d.mode != "tree":
        raise ModeError("per-path data needs a tree-mode diagram")
    incoming = {e.child: e for e in d.edges}
    root = d.root.pair
    p_cycles = orbit_count(root.P)
    structure = None
    for leaf in d.leaves:
        traces = []
        nid = leaf.id
        while nid != 0:
            e = incoming[nid]
            traces.append(e.trace)
            nid = e.parent
        traces.reverse()
        Q = reconstruct_bi_rotation(root, traces)
        if structure is None:
            structure = _structure(root, Q._map)
        stats = _stats(root, Q._map, p_cycles, structure)
        yield PathWeight(tuple(traces), Q, sum(t.weight for t in traces), stats)


def diagram_genus_polynomial(d: ReductionDiagram) -> GenusDistribution:
    if d.mode != "tree":
        raise ModeError("Euler-genus needs per-path reconstruction; build the diagram in tree mode")
    genus = Counter()
    split = Counter()
    for path in diagram_paths(d):
        g = path.stats.euler_genus
        genus[g] += 1
        split[(g, path.stats.is_orientable)] += 1
    return GenusDistribution(
        {k: genus[k] for k in sorted(genus)},
        {k: (split[(k, True)], split[(k, False)]) for k in sorted(genus)},
    )


# -- epsilon weights (diagnostic only) ---------------------------------------

@dataclass(frozen=True)
class EpsilonDiagnostic:
    case: Optional[str]
    branch: str
    eps: dict
    delta_genus: object
    delta_genus_frozen: object
    matches: tuple
    matches_frozen: tuple
    status_flip: bool


def _branch(stats: EmbeddingStats) -> str:
    return "non-orientable" if any(not o for o in stats.orientable) else "orientable"


def genus_edge_weight(parent: PBPair, child: PBPair, trace: ReductionTrace,
                      before: EmbeddingStats, after: EmbeddingStats) -> EpsilonDiagnostic:
    """Evaluate the epsilon edge weight of one step and compare it with the genus drop.

    ``before``/``after`` are the statistics of the embedding on ``parent`` and of
    its image on ``child``.  The orbit-difference factor ``c(a, b)`` is taken
    both as ``2 (c - c')`` ("factor2") and as ``c - c'`` ("factor1").
    ``delta_genus`` uses ``2t - chi``; ``delta_genus_frozen`` applies the
    two-branch formula with the parent's branch on both sides.
    """
    branch = _branch(before)
    nonori = branch == "non-orientable"
    dc = before.c_orbits - after.c_orbits
    readings = {"factor2": 2 * dc, "factor1": dc}
    if trace.kind == "constraint":
        moving = not trace.delta1 and not trace.delta2
        if moving and trace.same_cycle_p and trace.same_cycle_pa:
            case, add = "both-same-cycle", 2
        elif moving and trace.same_cycle_pa:
            case, add = "same-cycle-Pa", 1
        elif moving and trace.same_cycle_p:
            case, add = "same-cycle-P", 1
        else:
            case, add = "otherwise", None
        if add is None:
            eps = {k: 0 for k in readings}
        else:
            eps = {k: (2 * cab if nonori else cab) + add for k, cab in readings.items()}
    else:
        if not nonori:
            case, value = "orientable", 0
        elif trace.delta1 and trace.delta2:
            case, value = "fixed-fixed", 2
        elif not trace.delta1 and not trace.delta2:
            case, value = "moving", 0
        else:
            case, value = None, None
        eps = {k: value for k in readings}

    def frozen(st):
        return (2 * st.c_orbits if nonori else st.c_orbits) - st.chi

    delta = before.euler_genus - after.euler_genus
    delta_frozen = frozen(before) - frozen(after)
    return EpsilonDiagnostic(
        case=case,
        branch=branch,
        eps=eps,
        delta_genus=delta,
        delta_genus_frozen=delta_frozen,
        matches=tuple(k for k, v in eps.items() if v is not None and v == delta),
        matches_frozen=tuple(k for k, v in eps.items() if v is not None and v == delta_frozen),
        status_flip=_branch(after) != branch and after.status != "empty",
    )


# -- DOT ------------------------------------------------------------------

def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\l")


def export_dot(d: ReductionDiagram) -> str:
    lines = ["digraph reduction {", '  node [shape=box, fontname="monospace"];']
    for n in d.nodes:
        label = canonical_text(n.pair)
        if d.mode == "dag":
            label += f"paths: {n.multiplicity}\n"
        lines.append(f'  n{n.id} [label="{_dot_escape(label)}"];')
    for e in d.edges:
        lines.append(f'  n{e.parent} -> n{e.child} [label="{_dot_escape(e.trace.label())}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
