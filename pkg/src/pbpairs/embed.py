"""
Brute-force embeddings of a pair.

An embedding is a bi-rotation ``Q``: one cyclic order per cell ``Pi_i`` together
with its theta-reversed copy on ``theta Pi_i``.  Orders are enumerated
lexicographically with each cell's cycle anchored at its minimum bit, cells in
pair order.  Enumeration can be split over worker processes; partial counts
are merged by addition, so the result does not depend on the worker count.
"""

from __future__ import annotations

import atexit
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, Union

from scipy.cluster.hierarchy import DisjointSet

from .errors import InvalidEmbedding, SizeError
from .pair import PBPair
from .perm import Permutation, group_orbit_count, orbit_count
from .poly import Poly

__all__ = [
    "EmbeddingStats",
    "RegionDistribution",
    "GenusDistribution",
    "DEFAULT_CAP",
    "enumerate_bi_rotations",
    "bi_rotation",
    "check_bi_rotation",
    "embedding_stats",
    "iter_embedding_stats",
    "branch_genus",
    "region_distribution",
    "euler_genus_polynomial",
    "distributions",
    "euler_digraph_stats",
]

DEFAULT_CAP = 10**7


@dataclass(frozen=True)
class EmbeddingStats:
    face_cycles: int
    chi: int
    c_orbits: int
    components: int
    orientable: tuple
    euler_genus: int

    @property
    def regions(self) -> Union[int, Fraction]:
        """``||PQ|| / 2``; only graph pairs guarantee an even face count."""
        r = Fraction(self.face_cycles, 2)
        return int(r) if r.denominator == 1 else r

    @property
    def status(self) -> str:
        if not self.orientable:
            return "empty"
        if all(self.orientable):
            return "orientable"
        if not any(self.orientable):
            return "non-orientable"
        return "mixed"

    @property
    def is_orientable(self) -> bool:
        return all(self.orientable)


@dataclass(frozen=True)
class RegionDistribution:
    """Number of embeddings for each face-cycle count ``||PQ|| = 2k``."""

    counts: dict

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def regions(self) -> dict:
        """Keyed by number of regions instead of ``||PQ||``."""
        return {k // 2: v for k, v in self.counts.items()}

    def to_json(self) -> dict:
        return {str(k): self.counts[k] for k in sorted(self.counts)}


@dataclass(frozen=True)
class GenusDistribution:
    """Embeddings per Euler-genus, with an (orientable, non-orientable) split."""

    counts: dict
    split: dict

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def polynomial(self) -> Poly:
        return Poly.from_counts(self.counts)

    def __str__(self):
        return str(self.polynomial())

    def to_json(self) -> dict:
        return {str(k): self.counts[k] for k in sorted(self.counts)}

    def split_json(self) -> dict:
        return {str(k): list(self.split[k]) for k in sorted(self.split)}


# -- enumeration ------------------------------------------------------------

def _cell_orders(pair: PBPair):
    """Per cell: (anchor, sorted rest) for non-empty cells."""
    return [(side[0], side[1:]) for side, _ in pair.cells if side]


def _assemble(pair: PBPair, orders) -> dict:
    th = pair.theta
    q = {}
    for order in orders:
        n = len(order)
        for j in range(n):
            x, y = order[j], order[(j + 1) % n]
            q[x] = y
            q[th(y)] = th(x)
    return q


def bi_rotation(pair: PBPair, orders) -> Permutation:
    """The bi-rotation with the given cyclic order on each non-empty cell."""
    return Permutation._trusted(_assemble(pair, orders))


def enumerate_bi_rotations(pair: PBPair) -> Iterator[Permutation]:
    cells = _cell_orders(pair)
    choices = [[(anchor,) + rest for rest in permutations(tail)] for anchor, tail in cells]
    for orders in product(*choices):
        yield Permutation._trusted(_assemble(pair, orders))


def _unrank(items: tuple, rank: int) -> tuple:
    items = list(items)
    out = []
    for i in range(len(items), 0, -1):
        f = math.factorial(i - 1)
        j, rank = divmod(rank, f)
        out.append(items.pop(j))
    return tuple(out)


def _bi_rotations_range(pair: PBPair, start: int, stop: int) -> Iterator[Permutation]:
    cells = _cell_orders(pair)
    radices = [math.factorial(len(tail)) for _, tail in cells]
    for idx in range(start, stop):
        ranks = []
        for r in reversed(radices):
            idx, rem = divmod(idx, r)
            ranks.append(rem)
        ranks.reverse()
        orders = [(anchor,) + _unrank(tail, rk) for (anchor, tail), rk in zip(cells, ranks)]
        yield Permutation._trusted(_assemble(pair, orders))


def check_bi_rotation(pair: PBPair, Q: Permutation) -> None:
    if Q.domain != pair.symbols:
        raise InvalidEmbedding("Q does not act on the symbols of the pair")
    th = pair.theta
    for side, tside in pair.cells:
        if not side:
            continue
        cyc = set(Q.cycle_of(side[0]))
        if cyc != set(side):
            raise InvalidEmbedding(f"Q is not a single cycle on cell {side}")
        for x in side:
            if Q(th(Q(x))) != th(x):
                raise InvalidEmbedding(f"Q is not theta-reversed on cell {tside} at {x}")


# -- statistics -------------------------------------------------------------

def _structure(pair: PBPair, qm: dict) -> tuple:
    """``(c, orientable)`` for an embedding ``qm``.

    Every bi-rotation is one cycle on each ``Pi_i`` and each ``theta Pi_i``, so
    both results are the same for all embeddings of a pair.
    """
    pm = pair.P._map
    th = pair.theta
    symbols = list(pm)
    orbits = DisjointSet(symbols)
    comps = DisjointSet(symbols)
    for x in symbols:
        for y in (pm[x], qm[x]):
            orbits.merge(x, y)
            comps.merge(x, y)
        comps.merge(x, th(x))
    members = {}
    for x in sorted(symbols):
        entry = members.setdefault(comps[x], [x, set()])
        entry[1].add(orbits[x])
    # components ordered by their smallest symbol; a component is orientable iff it splits into two orbits
    orientable = tuple(len(roots) == 2 for _, roots in sorted(members.values(), key=lambda e: e[0]))
    return orbits.n_subsets, orientable


def _stats(pair: PBPair, qm: dict, p_cycles: int, structure=None) -> EmbeddingStats:
    pm = pair.P._map
    pq = {x: qm[y] for x, y in pm.items()}
    face = orbit_count(Permutation._trusted(pq))
    qcyc = orbit_count(Permutation._trusted(qm))
    # sgn(P) sgn(Q) sgn(PQ) = 1 makes the cycle total even, so chi is integral
    chi = (p_cycles + qcyc + face - pair.size) // 2
    c, orientable = structure if structure is not None else _structure(pair, qm)
    t = len(orientable)
    return EmbeddingStats(
        face_cycles=face,
        chi=chi,
        c_orbits=c,
        components=t,
        orientable=orientable,
        euler_genus=2 * t - chi,
    )


def embedding_stats(pair: PBPair, Q: Permutation) -> EmbeddingStats:
    check_bi_rotation(pair, Q)
    return _stats(pair, Q._map, orbit_count(pair.P))


def branch_genus(stats: EmbeddingStats):
    """Two-branch Euler-genus (``2c - chi`` non-orientable, ``c - chi`` orientable).

    ``None`` when components mix orientability, where the two-branch form is
    not defined.
    """
    if stats.status == "non-orientable":
        return 2 * stats.c_orbits - stats.chi
    if stats.status in ("orientable", "empty"):
        return stats.c_orbits - stats.chi
    return None


# -- distributions ----------------------------------------------------------

def _with_stats(pair: PBPair, rotations) -> Iterator[tuple]:
    p_cycles = orbit_count(pair.P)
    structure = None
    for Q in rotations:
        if structure is None:
            structure = _structure(pair, Q._map)
        yield Q, _stats(pair, Q._map, p_cycles, structure)


def iter_embedding_stats(pair: PBPair) -> Iterator[tuple]:
    """``(Q, stats)`` for every bi-rotation, in enumeration order."""
    return _with_stats(pair, enumerate_bi_rotations(pair))


def _fold(pair: PBPair, rotations) -> tuple:
    regions = Counter()
    genus = Counter()
    split = Counter()
    for _, st in _with_stats(pair, rotations):
        regions[st.face_cycles] += 1
        genus[st.euler_genus] += 1
        split[(st.euler_genus, st.is_orientable)] += 1
    return regions, genus, split


def _fold_range(pair: PBPair, start: int, stop: int) -> tuple:
    return _fold(pair, _bi_rotations_range(pair, start, stop))


@lru_cache(maxsize=None)
def _pool(workers: int) -> ProcessPoolExecutor:
    ex = ProcessPoolExecutor(max_workers=workers)
    atexit.register(ex.shutdown, wait=False, cancel_futures=True)
    return ex


def distributions(pair: PBPair, cap: int = DEFAULT_CAP, workers: int = 1):
    """Region and Euler-genus distributions in one exhaustive pass."""
    total = pair.embedding_count()
    if total > cap:
        raise SizeError(
            f"{total} embeddings exceed the cap of {cap}; use the reduction diagram (dag mode) instead"
        )
    if workers <= 1 or total < workers:
        parts = [_fold(pair, enumerate_bi_rotations(pair))]
    else:
        step = -(-total // workers)
        bounds = [(i, min(i + step, total)) for i in range(0, total, step)]
        pool = _pool(workers)
        futures = [pool.submit(_fold_range, pair, lo, hi) for lo, hi in bounds]
        parts = [f.result() for f in futures]
    regions, genus, split = Counter(), Counter(), Counter()
    for r, g, s in parts:
        regions.update(r)
        genus.update(g)
        split.update(s)
    rd = RegionDistribution({k: regions[k] for k in sorted(regions)})
    gd = GenusDistribution(
        {k: genus[k] for k in sorted(genus)},
        {k: (split[(k, True)], split[(k, False)]) for k in sorted(genus)},
    )
    return rd, gd


def region_distribution(pair: PBPair, cap: int = DEFAULT_CAP, workers: int = 1) -> RegionDistribution:
    return distributions(pair, cap, workers)[0]


def euler_genus_polynomial(pair: PBPair, cap: int = DEFAULT_CAP, workers: int = 1) -> GenusDistribution:
    return distributions(pair, cap, workers)[1]


def euler_digraph_stats(pair: PBPair, Q: Permutation) -> tuple:
    """(vertices, arcs, regions, components) of the 4-regular digraph D(P, Q)."""
    n = len(pair.P)
    regions = orbit_count(pair.P) + orbit_count(Q) + orbit_count(pair.P * Q)
    return n, 2 * n, regions, group_orbit_count([pair.P, Q], pair.P.domain)
