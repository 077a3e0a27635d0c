import random

import pytest
from hypothesis import given, settings

from pbpairs.embed import check_bi_rotation, enumerate_bi_rotations
from pbpairs.errors import ConstraintError, ParseError
from pbpairs.pair import (PBPair, ThetaMap, canonical_text, empty_pair, format_pair,
                          pair_from_cycles, parse_pair, reduce_constraint, reduce_singleton,
                          validate_pair)
from pbpairs.perm import Permutation, delete_symbol, orbit_count

from support import all_small_pairs, pairs, random_pair

THETA4 = [(1, 2), (3, 4), (5, 6), (7, 8)]


@pytest.fixture
def square():
    return pair_from_cycles(THETA4, [(1, 4, 5, 7), (2, 8, 6, 3)], [((1, 3, 5, 7), (2, 4, 6, 8))])


GOLDEN = [
    (1, 3, "(1 8 6)(2 5 7)", (1, 5, 7), (2, 6, 8)),
    (1, 5, "(1 4)(7)(2 3)(8)", (1, 3, 7), (2, 4, 8)),
    (1, 7, "(1 4 5)(2 6 3)", (1, 3, 5), (2, 4, 6)),
    (3, 5, "(3 2 8)(4 7 1)", (1, 3, 7), (2, 4, 8)),
    (3, 7, "(5 3 2)(4 6 1)", (1, 3, 5), (2, 4, 6)),
    (7, 1, "(7)(4 5)(8)(6 3)", (3, 5, 7), (4, 6, 8)),
    (7, 5, "(7 1 4)(8 3 2)", (1, 3, 7), (2, 4, 8)),
]


@pytest.mark.parametrize("a,b,expected,side,tside", GOLDEN)
def test_golden_constraint(square, a, b, expected, side, tside):
    reduced, trace = reduce_constraint(square, a, b)
    assert str(reduced.P) == str(Permutation.parse(expected))
    assert reduced.cells == ((side, tside),)
    assert validate_pair(reduced).ok
    assert (trace.a, trace.b) == (a, b)


def test_golden_deltas(square):
    # P sends 5 to 7, so the constraint 7 -> 5 has a = bP
    assert reduce_constraint(square, 7, 5)[1].delta1 == 1
    assert reduce_constraint(square, 1, 3)[1].weight == 0


def test_validation_reports_each_kind():
    bad_theta = PBPair(ThetaMap(((1, 1),)), Permutation.parse("(1)"), (((1,), (1,)),))
    assert "theta-involution" in {v.kind for v in validate_pair(bad_theta).violations}
    bad_domain = PBPair(ThetaMap(((1, 2),)), Permutation.parse("(1 3)(2)"), (((1,), (2,)),))
    assert {v.kind for v in validate_pair(bad_domain).violations} == {"domain"}
    bad_sym = pair_from_cycles([(1, 2), (3, 4)], [(1, 3)], [((1, 3), (2, 4))])
    assert {v.kind for v in validate_pair(bad_sym).violations} == {"theta-symmetry"}
    bad_cells = pair_from_cycles([(1, 2), (3, 4)], [], [((1,), (2,))])
    assert "cell-partition" in {v.kind for v in validate_pair(bad_cells).violations}
    bad_image = pair_from_cycles([(1, 2), (3, 4)], [], [((1,), (4,)), ((3,), (2,))])
    assert {v.kind for v in validate_pair(bad_image).violations} == {"theta-image"}
    with pytest.raises(ConstraintError):
        PBPair.build([(1, 2), (3, 4)], "(1 3)(2)(4)", [((1, 3), (2, 4))])


def test_build_accepts_valid(square):
    again = PBPair.build(THETA4, "(1 4 5 7)(2 8 6 3)", [((1, 3, 5, 7), (2, 4, 6, 8))])
    assert again == square


def test_reduce_errors(square):
    with pytest.raises(ConstraintError):
        reduce_constraint(square, 1, 1)
    with pytest.raises(ConstraintError):
        reduce_constraint(square, 1, 2)
    with pytest.raises(ConstraintError):
        reduce_singleton(square, 1)
    split = pair_from_cycles([(1, 2), (3, 4)], [], [((1,), (2,)), ((3,), (4,))])
    with pytest.raises(ConstraintError):
        reduce_constraint(split, 1, 3)


def test_text_format(square):
    text = format_pair(square)
    assert text == "theta: 1 2, 3 4, 5 6, 7 8\nP: (1 4 5 7)(2 8 6 3)\ncell: 1 3 5 7 | 2 4 6 8\n"
    assert parse_pair(text) == square
    assert parse_pair("# c\ntheta: 1 2\nP: ()\ncell: 1 | 2\n").P == Permutation.parse("(1)(2)")


@pytest.mark.parametrize("text", [
    "P: (1 2)\ncell: 1 | 2",
    "theta: 1 2\ncell: 1 | 2",
    "theta: 1 2 3\nP: ()",
    "theta: 1 2\nP: (1 x)",
    "theta: 1 2\nP: ()\ncell: 1 2",
    "theta: 1 2\ntheta: 1 2\nP: ()",
    "theta: 1 2\nP: ()\nfoo: 1",
    "theta 1 2",
])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_pair(text)


def test_empty_pair():
    e = empty_pair()
    assert e.is_empty() and validate_pair(e).ok and e.embedding_count() == 1


def test_canonical_text_forgets_labels(square):
    shift = {x: x + 10 for x in square.symbols}
    moved = PBPair(
        ThetaMap(tuple((shift[x], shift[y]) for x, y in square.theta.pairs)),
        Permutation({shift[x]: shift[y] for x, y in square.P.items()}),
        tuple(([shift[x] for x in s], [shift[y] for y in t]) for s, t in square.cells),
    )
    assert canonical_text(moved) == canonical_text(square)
    assert validate_pair(parse_pair(canonical_text(square))).ok


def _shrink(Q, b, tb):
    return delete_symbol(delete_symbol(Q, b), tb)


def _check_region_reduction(pair):
    """Per embedding: ||PQ|| = ||P'Q'|| + deltas, for the step that removes b."""
    for side, _ in pair.cells:
        for b in side:
            tb = pair.theta(b)
            for Q in enumerate_bi_rotations(pair):
                if len(side) == 1:
                    child, trace = reduce_singleton(pair, b)
                else:
                    child, trace = reduce_constraint(pair, Q.preimage(b), b)
                assert validate_pair(child).ok
                Qc = _shrink(Q, b, tb)
                check_bi_rotation(child, Qc)
                assert orbit_count(pair.P * Q) == orbit_count(child.P * Qc) + trace.weight


def test_region_reduction_exhaustive_small():
    count = 0
    for pair in all_small_pairs(3):
        assert validate_pair(pair).ok
        _check_region_reduction(pair)
        count += 1
    assert count == 1 * 2 + 10 * 2 + 76 * 5


@settings(max_examples=60, deadline=None)
@given(pairs(max_n=5))
def test_region_reduction_random(pair):
    assert validate_pair(pair).ok
    _check_region_reduction(pair)


@settings(max_examples=100, deadline=None)
@given(pairs(max_n=6))
def test_reductions_preserve_validity(pair):
    for side, _ in pair.cells:
        for b in side:
            if len(side) == 1:
                children = [reduce_singleton(pair, b)]
            else:
                children = [reduce_constraint(pair, a, b) for a in side if a != b]
            for child, _ in children:
                assert validate_pair(child).ok
                assert child.symbols == pair.symbols - {b, pair.theta(b)}


def test_singleton_trace_shapes():
    seen = set()
    for pair in all_small_pairs(3):
        for side, _ in pair.cells:
            if len(side) == 1:
                _, tr = reduce_singleton(pair, side[0])
                seen.add((tr.delta1, tr.delta2))
    # P fixing b forces P fixing theta b, so (1, 0) never occurs
    assert seen == {(0, 0), (0, 1), (1, 1)}
    two_cycle = pair_from_cycles([(1, 2)], [(1, 2)], [((1,), (2,))])
    assert reduce_singleton(two_cycle, 1)[1].weight == 1


def test_random_pairs_are_valid():
    rng = random.Random(5)
    for _ in range(200):
        assert validate_pair(random_pair(rng, rng.randint(1, 6))).ok
