"""
Permutation-bipartition pairs and their one-step reductions.

A pair consists of

* a fixed-point-free involution ``theta`` whose pairs ``(x, theta x)`` split the
  symbols into a side ``S`` (the ``x``) and a side ``S_theta``;
* a permutation ``P`` on ``S | S_theta`` with ``theta P theta == P^-1``, i.e. the
  cycle ``(a b ... f)`` always comes with ``(theta a, theta f, ..., theta b)``;
* an ordered list of cells ``(Pi_i, theta Pi_i)`` partitioning both sides.

Reduced pairs keep the original symbol ids, so the live set becomes sparse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ConstraintError, ParseError
from .perm import Permutation

__all__ = [
    "ThetaMap",
    "PBPair",
    "ReductionTrace",
    "Violation",
    "ValidationReport",
    "validate_pair",
    "reduce_constraint",
    "reduce_singleton",
    "constraint_surgery",
    "singleton_surgery",
    "drop_from_cells",
    "parse_pair",
    "format_pair",
    "canonical_text",
    "canonical_key",
    "empty_pair",
    "pair_from_cycles",
]


@dataclass(frozen=True)
class ThetaMap:
    """The pairing ``x <-> theta x``; ``pairs`` lists ``(x, theta x)`` with ``x`` in ``S``."""

    pairs: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(sorted((int(x), int(y)) for x, y in self.pairs)))

    @cached_property
    def _map(self) -> dict:
        m = {}
        for x, y in self.pairs:
            m[x] = y
            m[y] = x
        return m

    def __call__(self, x: int) -> int:
        return self._map[x]

    @cached_property
    def s_side(self) -> frozenset:
        return frozenset(x for x, _ in self.pairs)

    @cached_property
    def theta_side(self) -> frozenset:
        return frozenset(y for _, y in self.pairs)

    @cached_property
    def symbols(self) -> frozenset:
        return self.s_side | self.theta_side

    def without(self, x: int) -> "ThetaMap":
        y = self(x)
        t = object.__new__(ThetaMap)
        object.__setattr__(t, "pairs", tuple(p for p in self.pairs if x not in p))
        m = dict(self._map)
        del m[x], m[y]
        t.__dict__["_map"] = m  # pre-fill the cache; pairs are already sorted
        return t


def _cell(side) -> tuple:
    return tuple(sorted(int(x) for x in side))


@dataclass(frozen=True)
class PBPair:
    """A permutation-bipartition pair.  Construction does not validate; see ``validate_pair``."""

    theta: ThetaMap
    P: Permutation
    cells: tuple = field(default=())

    def __post_init__(self):
        if not isinstance(self.theta, ThetaMap):
            object.__setattr__(self, "theta", ThetaMap(tuple(self.theta)))
        object.__setattr__(self, "cells", tuple((_cell(a), _cell(b)) for a, b in self.cells))

    @classmethod
    def _trusted(cls, theta: ThetaMap, P: Permutation, cells: tuple) -> "PBPair":
        """Skip normalisation; ``cells`` must already be sorted tuples."""
        pair = object.__new__(cls)
        object.__setattr__(pair, "theta", theta)
        object.__setattr__(pair, "P", P)
        object.__setattr__(pair, "cells", cells)
        return pair

    @classmethod
    def build(cls, theta_pairs, P, cells) -> "PBPair":
        """Construct and validate; raises ``ConstraintError`` listing violations."""
        if isinstance(P, str):
            P = Permutation.parse(P)
        pair = cls(ThetaMap(tuple(theta_pairs)), P, tuple(cells))
        report = validate_pair(pair)
        if not report.ok:
            raise ConstraintError("invalid pair: " + "; ".join(map(str, report.violations)))
        return pair

    @property
    def symbols(self) -> frozenset:
        return self.theta.symbols

    @property
    def s_side(self) -> frozenset:
        return self.theta.s_side

    @property
    def size(self) -> int:
        """Number of symbols ``2n`` in ``S | S_theta``."""
        return len(self.theta.pairs) * 2

    def is_empty(self) -> bool:
        return not self.theta.pairs

    def cell_of(self, x: int) -> int:
        # cells are few and short, and pairs are rebuilt at every reduction step
        for i, (side, _) in enumerate(self.cells):
            if x in side:
                return i
        raise ConstraintError(f"bit {x} is not in any cell of S")

    def embedding_count(self) -> int:
        """``prod (m_i - 1)!`` over cell sizes; empty cells contribute 1."""
        return math.prod(math.factorial(max(len(side) - 1, 0)) for side, _ in self.cells)

    def __str__(self) -> str:
        return format_pair(self)


@dataclass(frozen=True)
class ReductionTrace:
    """Kronecker deltas and cycle-structure flags of one reduction step."""

    kind: str  # "constraint" or "singleton"
    a: int
    b: int
    delta1: int
    delta2: int
    same_cycle_p: bool
    same_cycle_pa: bool

    @property
    def weight(self) -> int:
        return self.delta1 + self.delta2

    def label(self) -> str:
        if self.kind == "singleton":
            return f"{self.b}->{self.b} w={self.weight}"
        return f"{self.a}->{self.b} w={self.weight}"


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: str

    def __str__(self):
        return f"{self.kind}: {self.witness}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations


def validate_pair(pair: PBPair) -> ValidationReport:
    out = []
    seen = {}
    for x, y in pair.theta.pairs:
        if x == y:
            out.append(Violation("theta-involution", f"theta({x}) = {x}"))
        for z in (x, y):
            if z in seen:
                out.append(Violation("theta-involution", f"symbol {z} paired twice"))
            seen[z] = True
    symbols = pair.symbols
    if pair.P.domain != symbols:
        extra = sorted(pair.P.domain ^ symbols)
        out.append(Violation("domain", f"P and theta disagree on symbols {extra}"))
    else:
        th = pair.theta
        for cyc in pair.P.cycles:
            # partner of (a b ... f) is (theta a, theta f, ..., theta b)
            partner = [th(cyc[0])] + [th(x) for x in reversed(cyc[1:])]
            n = len(partner)
            if any(pair.P(partner[i]) != partner[(i + 1) % n] for i in range(n)):
                text = "(" + " ".join(map(str, cyc)) + ")"
                out.append(Violation("theta-symmetry", f"no reversed theta-cycle for {text}"))
    left = [x for side, _ in pair.cells for x in side]
    right = [x for _, side in pair.cells for x in side]
    if sorted(left) != sorted(pair.s_side):
        out.append(Violation("cell-partition", f"cells do not partition S: {sorted(left)}"))
    if sorted(right) != sorted(pair.theta.theta_side):
        out.append(Violation("cell-partition", f"theta-cells do not partition S_theta: {sorted(right)}"))
    if not out:
        for side, tside in pair.cells:
            if _cell(pair.theta(x) for x in side) != tside:
                out.append(Violation("theta-image", f"theta{{{' '.join(map(str, side))}}} != {{{' '.join(map(str, tside))}}}"))
    return ValidationReport(tuple(out))


def drop_from_cells(pair, b, tb, drop_empty=False):
    """Cells of ``pair`` with ``b`` and ``theta b`` removed."""
    i = pair.cell_of(b)
    side, tside = pair.cells[i]
    side = tuple(x for x in side if x != b)
    if drop_empty and not side:
        return pair.cells[:i] + pair.cells[i + 1:]
    tside = tuple(x for x in tside if x != tb)
    return pair.cells[:i] + ((side, tside),) + pair.cells[i + 1:]


# In-place surgery on a map ``m`` and its inverse ``inv``; one copy per reduction.

def _times_cycle(m, inv, cycle):
    """``m := m * (cycle)``."""
    k = len(cycle)
    src = [inv[x] for x in cycle]
    for i in range(k):
        y = cycle[(i + 1) % k]
        m[src[i]] = y
        inv[y] = src[i]


def _cycle_times(m, inv, cycle):
    """``m := (cycle) * m``."""
    k = len(cycle)
    img = [m[cycle[(i + 1) % k]] for i in range(k)]
    for x, y in zip(cycle, img):
        m[x] = y
        inv[y] = x


def _delete(m, inv, b):
    """``m := m / b``."""
    succ = m.pop(b)
    pred = inv.pop(b)
    if succ != b:
        m[pred] = succ
        inv[succ] = pred


def _on_one_cycle(m, x, y) -> bool:
    z = m[x]
    while z != x:
        if z == y:
            return True
        z = m[z]
    return x == y


def _result(m, inv) -> Permutation:
    P = Permutation._trusted(m)
    P.__dict__["_inverse_map"] = inv
    return P


def constraint_surgery(P: Permutation, theta: ThetaMap, a: int, b: int):
    """``(P_{a, theta a}, trace)`` without any checks or cell bookkeeping."""
    ta, tb = theta(a), theta(b)
    m = dict(P._map)
    inv = dict(P._inverse_map)
    same_p = _on_one_cycle(m, a, b)

    bP = m[b]
    if bP == a:
        _times_cycle(m, inv, (b, a))
    elif bP != b:
        _times_cycle(m, inv, (b, a, bP))
    _delete(m, inv, b)
    # m is now P_a
    delta2 = int(m[ta] == tb)
    same_pa = _on_one_cycle(m, ta, tb)

    y = inv[tb]
    if y == ta:
        _cycle_times(m, inv, (tb, ta))
    elif y != tb:
        _cycle_times(m, inv, (ta, tb, y))
    _delete(m, inv, tb)
    return _result(m, inv), ReductionTrace("constraint", a, b, int(bP == a), delta2, same_p, same_pa)


def singleton_surgery(P: Permutation, theta: ThetaMap, b: int):
    """``(P_{b, theta b}, trace)`` without any checks or cell bookkeeping."""
    tb = theta(b)
    m = dict(P._map)
    inv = dict(P._inverse_map)
    delta1 = int(m[b] == b)
    _delete(m, inv, b)
    delta2 = int(m[tb] == tb)
    _delete(m, inv, tb)
    return _result(m, inv), ReductionTrace("singleton", b, b, delta1, delta2, True, True)


def reduce_constraint(pair: PBPair, a: int, b: int):
    """Apply the constraint ``{a -> b, theta a -> theta b}``; bit ``b`` and ``theta b`` disappear.

    ``P_a`` is ``P/b``, ``(P (b a))/b`` or ``(P (b a bP))/b`` as ``bP`` is ``b``,
    ``a`` or neither; the second stage does the same on the theta side with
    the short cycle acting first.  Returns ``(reduced_pair, trace)``.
    """
    if a == b:
        raise ConstraintError("self-constraint a -> a; use reduce_singleton")
    s = pair.s_side
    if a not in s or b not in s:
        raise ConstraintError(f"constraint {a} -> {b} must join two live bits of S")
    if pair.cell_of(a) != pair.cell_of(b):
        raise ConstraintError(f"{a} and {b} lie in different cells")
    P, trace = constraint_surgery(pair.P, pair.theta, a, b)
    tb = pair.theta(b)
    return PBPair._trusted(pair.theta.without(b), P, drop_from_cells(pair, b, tb)), trace


def reduce_singleton(pair: PBPair, b: int):
    """Eliminate a singleton cell ``{b} | {theta b}``: ``P`` loses ``b`` and then ``theta b``."""
    if b not in pair.s_side:
        raise ConstraintError(f"bit {b} is not live in S")
    side, _ = pair.cells[pair.cell_of(b)]
    if side != (b,):
        raise ConstraintError(f"cell of {b} is not a singleton: {side}")
    P, trace = singleton_surgery(pair.P, pair.theta, b)
    tb = pair.theta(b)
    return PBPair._trusted(pair.theta.without(b), P, drop_from_cells(pair, b, tb, drop_empty=True)), trace


# -- text format ------------------------------------------------------------

def format_pair(pair: PBPair) -> str:
    lines = ["theta: " + ", ".join(f"{x} {y}" for x, y in pair.theta.pairs)]
    lines.append("P: " + str(pair.P))
    for side, tside in pair.cells:
        lines.append("cell: " + " ".join(map(str, side)) + " | " + " ".join(map(str, tside)))
    return "\n".join(line.rstrip() for line in lines) + "\n"


def _ints(text, lineno):
    try:
        return [int(t) for t in text.split()]
    except ValueError:
        raise ParseError(f"expected integers, got {text.strip()!r}", lineno) from None


def parse_pair(text: str) -> PBPair:
    """Parse the line-oriented pair format; does not validate."""
    theta = None
    P = None
    cells = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise ParseError(f"expected 'key: value', got {line!r}", lineno)
        key = key.strip()
        if key == "theta":
            if theta is not None:
                raise ParseError("duplicate theta line", lineno)
            pairs = []
            for chunk in rest.split(","):
                if not chunk.strip():
                    continue
                nums = _ints(chunk, lineno)
                if len(nums) != 2:
                    raise ParseError(f"theta entry needs two symbols: {chunk.strip()!r}", lineno)
                pairs.append(tuple(nums))
            theta = ThetaMap(tuple(pairs))
        elif key == "P":
            if P is not None:
                raise ParseError("duplicate P line", lineno)
            try:
                P = Permutation.parse(rest)
            except ParseError as exc:
                raise ParseError(str(exc), lineno) from None
        elif key == "cell":
            if "|" not in rest:
                raise ParseError("cell line needs '|' between the two sides", lineno)
            left, right = rest.split("|", 1)
            cells.append((_ints(left, lineno), _ints(right, lineno)))
        else:
            raise ParseError(f"unknown key {key!r}", lineno)
    if theta is None:
        raise ParseError("missing theta line")
    if P is None:
        raise ParseError("missing P line")
    # symbols missing from P's cycle text are fixed points
    missing = theta.symbols - P.domain
    if missing:
        P = Permutation.from_cycles(P.cycles, theta.symbols)
    return PBPair(theta, P, tuple(cells))


def _relabel(pair: PBPair) -> dict:
    label = {}
    for side, _ in pair.cells:
        for x in side:
            label[x] = len(label) + 1
            label[pair.theta(x)] = len(label) + 1
    for cyc in pair.P.cycles:
        for x in cyc:
            if x not in label:
                label[x] = len(label) + 1
    return label


def canonical_text(pair: PBPair) -> str:
    """Text of the pair after order-preserving relabelling.

    Symbols are renumbered by first occurrence while walking the non-empty
    cells (each bit followed by its theta-partner), then the cycles of P.
    Equal texts imply isomorphic pairs.
    """
    label = _relabel(pair)
    theta = ThetaMap(tuple((label[x], label[y]) for x, y in pair.theta.pairs))
    P = Permutation({label[x]: label[y] for x, y in pair.P.items()})
    cells = tuple(([label[x] for x in s], [label[y] for y in t]) for s, t in pair.cells if s or t)
    return format_pair(PBPair(theta, P, cells))


def canonical_key(pair: PBPair) -> tuple:
    """Hashable equivalent of ``canonical_text``: equal keys iff equal texts."""
    label = _relabel(pair)
    theta = tuple(sorted(tuple(sorted((label[x], label[y]))) for x, y in pair.theta.pairs))
    images = tuple(sorted((label[x], label[y]) for x, y in pair.P.items()))
    cells = tuple((tuple(label[x] for x in s), tuple(sorted(label[y] for y in t)))
                  for s, t in pair.cells if s or t)
    return theta, images, cells


def empty_pair() -> PBPair:
    return PBPair(ThetaMap(()), Permutation({}), ())


def pair_from_cycles(theta_pairs: Iterable[Sequence[int]], cycles, cells) -> PBPair:
    """Convenience constructor used by tests and the CLI."""
    theta = ThetaMap(tuple(theta_pairs))
    P = Permutation.from_cycles(cycles, theta.symbols)
    return PBPair(theta, P, tuple(cells))
