"""Shared builders for the test-suite."""

import random

from hypothesis import strategies as st

from pbpairs.pair import PBPair, ThetaMap, pair_from_cycles
from pbpairs.perm import Permutation
from pbpairs.sgraph import SignedGraph


# -- the nine-edge example graph and its printed embedding ------------------

NINE_EDGE_THETA = [(i, i + 1) for i in range(1, 36, 2)]
NINE_EDGE_CELLS = [
    ((2, 15, 23), (1, 16, 24)),   # u
    ((3, 6, 30), (4, 5, 29)),     # v
    ((7, 9, 35), (8, 10, 36)),    # x
    ((12, 14, 18), (11, 13, 17)),  # w
    ((19, 22, 26), (20, 21, 25)),  # z
    ((27, 31, 34), (28, 32, 33)),  # y
]
NINE_EDGE_Q = Permutation.parse(
    "(1,16,24)(2,23,15)(5,4,29)(3,6,30)(10,8,36)(7,9,35)(11,17,13)(12,14,18)"
    "(21,20,25)(19,22,26)(33,32,28)(27,31,34)"
)
NINE_EDGE_PQ_PLANE = Permutation.parse(
    "(1,29,28,21)(3,23,26,31)(11,8,4,16)(9,14,2,6)(12,35,27,19)(10,17,25,33)"
    "(5,36,32)(7,30,34)(13,24,20)(15,18,22)"
)
NINE_EDGE_PQ_TWISTED = Permutation.parse(
    "(1,6,9,14,2,29,28,21)(3,16,11,8,4,23,26,31)(12,35,27,19)(10,17,25,33)"
    "(5,36,32)(7,30,34)(13,24,20)(15,18,22)"
)


def nine_edge_pair(uv_negative=False) -> PBPair:
    cycles = []
    for k in range(9):
        a = 4 * k + 1
        cycles += [(a, a + 3), (a + 1, a + 2)]
    if uv_negative:
        cycles[0:2] = [(1, 3), (2, 4)]
    return pair_from_cycles(NINE_EDGE_THETA, cycles, NINE_EDGE_CELLS)


def nine_edge_graph() -> SignedGraph:
    return SignedGraph.from_edges([
        ("u", "v", 1), ("v", "x", 1), ("w", "x", 1), ("w", "u", 1), ("w", "z", 1),
        ("z", "u", 1), ("z", "y", 1), ("v", "y", 1), ("x", "y", 1),
    ])


# -- general pairs ----------------------------------------------------------

def _theta(n):
    return ThetaMap(tuple((2 * i - 1, 2 * i) for i in range(1, n + 1)))


def pair_from_involution(n: int, iota: dict, blocks) -> PBPair:
    """``P = theta * iota`` (theta first) is theta-symmetric for every involution ``iota``."""
    th = _theta(n)
    P = Permutation({x: iota[th(x)] for x in th.symbols})
    cells = tuple((tuple(b), tuple(th(x) for x in b)) for b in blocks)
    return PBPair(th, P, cells)


def involutions(symbols):
    symbols = list(symbols)
    if not symbols:
        yield {}
        return
    x, rest = symbols[0], symbols[1:]
    for sub in involutions(rest):
        yield {x: x, **sub}
    for i, y in enumerate(rest):
        others = rest[:i] + rest[i + 1:]
        for sub in involutions(others):
            yield {x: y, y: x, **sub}


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def all_small_pairs(max_n=3):
    for n in range(1, max_n + 1):
        S = [2 * i - 1 for i in range(1, n + 1)]
        parts = list(set_partitions(S))
        for iota in involutions(range(1, 2 * n + 1)):
            for blocks in parts:
                yield pair_from_involution(n, iota, blocks)


def random_pair(rng: random.Random, n: int) -> PBPair:
    symbols = list(range(1, 2 * n + 1))
    rng.shuffle(symbols)
    iota = {}
    while symbols:
        x = symbols.pop()
        if symbols and rng.random() < 0.7:
            y = symbols.pop(rng.randrange(len(symbols)))
        else:
            y = x
        iota[x], iota[y] = y, x
    S = [2 * i - 1 for i in range(1, n + 1)]
    rng.shuffle(S)
    k = rng.randint(1, n)
    blocks = [S[i::k] for i in range(k)]
    return pair_from_involution(n, iota, [b for b in blocks if b])


@st.composite
def pairs(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_pair(random.Random(seed), n)


def graph_strategy(max_vertices=3, max_edges=4):
    @st.composite
    def build(draw):
        nv = draw(st.integers(1, max_vertices))
        names = [f"x{i}" for i in range(nv)]
        edges = draw(st.lists(
            st.tuples(st.sampled_from(names), st.sampled_from(names), st.sampled_from((1, -1))),
            min_size=1, max_size=max_edges))
        return SignedGraph.from_edges(edges, names)
    return build()
