"""
Permutations on finite sets of positive integers.

All products use the right action: ``x * (p * q) == (x * p) * q``, i.e. ``p``
is applied first.  Fixed points are stored explicitly, so ``orbit_count``
counts them, and a permutation always knows its live symbol set.

Cycle text looks like ``(1 4 5)(2)(3 6)``; commas are accepted on input.
"""

from __future__ import annotations

import re
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from scipy.cluster.hierarchy import DisjointSet

from .errors import DomainError, ParseError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """An immutable bijection of a finite set of symbols onto itself."""

    def __init__(self, mapping: Mapping[int, int]):
        m = dict(mapping)
        if set(m.values()) != set(m):
            raise DomainError("mapping is not a bijection of its domain")
        self._map = m

    @classmethod
    def _trusted(cls, m: dict) -> "Permutation":
        p = cls.__new__(cls)
        p._map = m
        return p

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], domain: Iterable[int] = ()) -> "Permutation":
        """Build from disjoint cycles; symbols of ``domain`` not mentioned become fixed points."""
        m = {}
        for cyc in cycles:
            cyc = list(cyc)
            for i, x in enumerate(cyc):
                if x in m:
                    raise DomainError(f"symbol {x} appears twice in cycle list")
                m[x] = cyc[(i + 1) % len(cyc)]
        for x in domain:
            m.setdefault(x, x)
        return cls._trusted(m)

    @classmethod
    def identity(cls, domain: Iterable[int]) -> "Permutation":
        return cls._trusted({x: x for x in domain})

    @classmethod
    def parse(cls, text: str, domain: Iterable[int] = ()) -> "Permutation":
        text = text.strip()
        if _CYCLE_RE.sub("", text).strip():
            raise ParseError(f"malformed cycle text: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(text):
            tokens = body.replace(",", " ").split()
            try:
                cyc = [int(t) for t in tokens]
            except ValueError:
                raise ParseError(f"non-integer symbol in cycle ({body})") from None
            if any(x <= 0 for x in cyc):
                raise ParseError(f"symbols must be positive integers: ({body})")
            if cyc:
                cycles.append(cyc)
        try:
            return cls.from_cycles(cycles, domain)
        except DomainError as exc:
            raise ParseError(str(exc)) from None

    # -- basic protocol -------------------------------------------------

    def __call__(self, x: int) -> int:
        try:
            return self._map[x]
        except KeyError:
            raise DomainError(f"symbol {x} is not live") from None

    def __contains__(self, x) -> bool:
        return x in self._map

    def __len__(self) -> int:
        return len(self._map)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._map == other._map

    def __hash__(self) -> int:
        return hash(frozenset(self._map.items()))

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"

    def __str__(self) -> str:
        return "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)

    def items(self):
        return self._map.items()

    def as_dict(self) -> dict:
        return dict(self._map)

    @cached_property
    def domain(self) -> frozenset:
        return frozenset(self._map)

    @cached_property
    def cycles(self) -> tuple:
        """Disjoint cycles, each starting at its minimum, sorted by minimum."""
        seen = set()
        out = []
        for start in sorted(self._map):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            x = self._map[start]
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self._map[x]
            out.append(tuple(cyc))
        return tuple(out)

    def inverse(self) -> "Permutation":
        return Permutation._trusted({y: x for x, y in self._map.items()})

    def preimage(self, x: int) -> int:
        inv = self._inverse_map
        try:
            return inv[x]
        except KeyError:
            raise DomainError(f"symbol {x} is not live") from None

    @cached_property
    def _inverse_map(self) -> dict:
        return {y: x for x, y in self._map.items()}

    def cycle_of(self, x: int) -> tuple:
        if x not in self._map:
            raise DomainError(f"symbol {x} is not live")
        cyc = [x]
        y = self._map[x]
        while y != x:
            cyc.append(y)
            y = self._map[y]
        return tuple(cyc)

    def same_cycle(self, x: int, y: int) -> bool:
        return y in self.cycle_of(x)

    def restricted(self, symbols: Iterable[int]) -> "Permutation":
        """Restriction to an invariant subset."""
        s = set(symbols)
        m = {x: self._map[x] for x in s}
        if set(m.values()) != s:
            raise DomainError("subset is not invariant")
        return Permutation._trusted(m)


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return ``r`` with ``x r = (x p) q``."""
    if p._map.keys() != q._map.keys():
        odd = sorted(p.domain ^ q.domain)[0]
        raise DomainError(f"domain mismatch at symbol {odd}")
    qm = q._map
    return Permutation._trusted({x: qm[y] for x, y in p._map.items()})


def apply_cycle_left(cycle: Sequence[int], p: Permutation) -> Permutation:
    """The product ``(cycle) * p`` where the short cycle acts first.

    Symbols of ``cycle`` must be live in ``p``; everything else is fixed by the
    cycle, so only ``len(cycle)`` images change.
    """
    m = dict(p._map)
    for i, x in enumerate(cycle):
        m[x] = p(cycle[(i + 1) % len(cycle)])
    return Permutation._trusted(m)


def apply_cycle_right(p: Permutation, cycle: Sequence[int]) -> Permutation:
    """The product ``p * (cycle)``: ``p`` first, then the short cycle."""
    step = {x: cycle[(i + 1) % len(cycle)] for i, x in enumerate(cycle)}
    for x in cycle:
        if x not in p:
            raise DomainError(f"symbol {x} is not live")
    m = dict(p._map)
    for x in cycle:
        src = p.preimage(x)
        m[src] = step[x]
    return Permutation._trusted(m)


def orbit_count(p: Permutation) -> int:
    """Number of cycles of ``p``, fixed points included."""
    m = p._map
    seen = set()
    n = 0
    for start in m:
        if start in seen:
            continue
        n += 1
        x = start
        while x not in seen:
            seen.add(x)
            x = m[x]
    return n


def delete_symbol(p: Permutation, b: int) -> Permutation:
    """``p/b``: drop ``b`` from its cycle, joining its predecessor to its successor."""
    if b not in p:
        raise DomainError(f"symbol {b} is not live")
    m = dict(p._map)
    succ = m.pop(b)
    if succ != b:
        m[p.preimage(b)] = succ
    return Permutation._trusted(m)


def group_orbit_count(generators: Iterable[Permutation], domain: Iterable[int]) -> int:
    """Number of orbits of the group generated by ``generators`` on ``domain``."""
    domain = list(domain)
    if not domain:
        return 0
    ds = DisjointSet(domain)
    for g in generators:
        for x, y in g.items():
            if x != y:
                ds.merge(x, y)
    return ds.n_subsets


def group_orbits(generators: Iterable[Permutation], domain: Iterable[int]) -> list:
    """Orbits as sorted tuples, ordered by their minimum."""
    domain = list(domain)
    ds = DisjointSet(domain)
    for g in generators:
        for x, y in g.items():
            if x != y:
                ds.merge(x, y)
    return sorted(tuple(sorted(s)) for s in ds.subsets())
