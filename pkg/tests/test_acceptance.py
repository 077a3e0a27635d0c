"""Acceptance checks 1-10.

Each check is a function of the worker count returning ``(ok, detail, payload)``;
the payload is JSON-serialisable and criterion 10 compares its bytes across
worker counts.
"""

import contextlib
import io
import json
import random
import time
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

import pytest

from pbpairs.cli import main
from pbpairs.diagram import (build_diagram, default_order, diagram_genus_polynomial, diagram_paths,
                             diagram_region_distribution)
from pbpairs.embed import (branch_genus, distributions, embedding_stats, euler_digraph_stats,
                           iter_embedding_stats)
from pbpairs.family import asymptotic_report, builtin_c2, char_poly, recurrence, transfer_sequence
from pbpairs.pair import pair_from_cycles, reduce_constraint
from pbpairs.perm import Permutation, orbit_count
from pbpairs.poly import Poly, parse_poly
from pbpairs.sgraph import (SignedGraph, build_c2_chain, format_signed_graph, graph_to_pair,
                            parse_signed_graph, random_signed_graph, switch)

from support import NINE_EDGE_Q, nine_edge_pair

SEED = 2024
CORPUS = 200
ORDERS = 20


# -- criterion 1 -------------------------------------------------------------

GOLDEN = [
    (1, 3, "(1 8 6)(2 5 7)", ((1, 5, 7), (2, 6, 8))),
    (1, 5, "(1 4)(7)(2 3)(8)", ((1, 3, 7), (2, 4, 8))),
    (1, 7, "(1 4 5)(2 6 3)", ((1, 3, 5), (2, 4, 6))),
    (3, 5, "(3 2 8)(4 7 1)", ((1, 3, 7), (2, 4, 8))),
    (3, 7, "(5 3 2)(4 6 1)", ((1, 3, 5), (2, 4, 6))),
    (7, 1, "(7)(4 5)(8)(6 3)", ((3, 5, 7), (4, 6, 8))),
    (7, 5, "(7 1 4)(8 3 2)", ((1, 3, 7), (2, 4, 8))),
]


def check_golden_reductions(workers):
    square = pair_from_cycles([(1, 2), (3, 4), (5, 6), (7, 8)], [(1, 4, 5, 7), (2, 8, 6, 3)],
                              [((1, 3, 5, 7), (2, 4, 6, 8))])
    rows, bad = [], []
    for a, b, text, cell in GOLDEN:
        reduced, _ = reduce_constraint(square, a, b)
        got = str(reduced.P)
        rows.append([a, b, got, [list(x) for x in reduced.cells[0]]])
        if got != str(Permutation.parse(text)) or reduced.cells != (cell,):
            bad.append(f"{a}->{b}: {got} {reduced.cells}")
    return not bad, f"{len(GOLDEN) - len(bad)}/{len(GOLDEN)} reductions exact" + "".join("; " + x for x in bad), rows


# -- criterion 2 -------------------------------------------------------------

QUARTET = [
    ("negative loop", (-1,), "z", {2: 1}),
    ("positive loop", (1,), "1", {4: 1}),
    ("two negative loops", (-1, -1), "4z^2+2z", {4: 2, 2: 4}),
    ("mixed loops", (1, -1), "2z^2+4z", None),
]


def check_loop_quartet(workers):
    rows, bad = [], []
    for name, signs, poly, regions in QUARTET:
        p = graph_to_pair(SignedGraph.from_edges([("u", "u", s) for s in signs]))
        rd, gd = distributions(p, workers=workers)
        tree = build_diagram(p)
        dag = build_diagram(p, mode="dag")
        tree_rd, dag_rd = diagram_region_distribution(tree), diagram_region_distribution(dag)
        tree_gd = diagram_genus_polynomial(tree)
        E = parse_poly(poly)
        ok = gd.polynomial() == tree_gd.polynomial() == E and rd == tree_rd == dag_rd
        if regions is not None:
            ok = ok and rd.counts == regions
        rows.append([name, str(gd.polynomial()), rd.to_json(), tree_rd.to_json(), dag_rd.to_json(),
                     {str(k): v for k, v in rd.regions().items()}])
        if not ok:
            bad.append(name)
    # one region on the projective plane, two regions on the sphere
    single = [r[5] for r in rows[:2]]
    if single != [{"1": 1}, {"2": 1}]:
        bad.append(f"single-loop regions {single}")
    return not bad, "brute = tree = dag on all four" if not bad else "mismatch: " + ", ".join(bad), rows


# -- criterion 3 -------------------------------------------------------------

def check_printed_embedding(workers):
    rows, bad = [], []
    for twisted, want in ((False, (10, 2, 0)), (True, (8, 1, 1))):
        st = embedding_stats(nine_edge_pair(uv_negative=twisted), NINE_EDGE_Q)
        got = (st.face_cycles, st.chi, st.euler_genus)
        rows.append(list(got))
        if got != want:
            bad.append(f"{'twisted' if twisted else 'plane'} gave {got}")
    return not bad, f"(||PQ||, chi, genus) = {rows}" + "".join("; " + x for x in bad), rows


# -- criterion 4 -------------------------------------------------------------

def check_digraph_statistics(workers):
    p = pair_from_cycles([(1, 4), (2, 5), (3, 6)], [(1, 5, 3), (4, 6, 2)], [((1, 2, 3), (4, 5, 6))])
    first = euler_digraph_stats(p, Permutation.parse("(1 2 3)(4 6 5)"))
    second = euler_digraph_stats(p, p.P)
    ok = first == (6, 12, 6, 1) and second == (6, 12, 6, 2)
    return ok, f"{first} and {second}", [list(first), list(second)]


# -- criterion 5 -------------------------------------------------------------

C2_TABLE = {
    1: ("z", "z", "z^2"),
    2: ("4z^2+2z", "2z^3+4z^2", "6z^3"),
    3: ("20z^3+16z^2", "12z^4+16z^3+8z^2", "24z^4+12z^3"),
    4: ("104z^4+96z^3+16z^2", "48z^5+104z^4+64z^3", "120z^5+96z^4"),
    5: ("512z^5+592z^4+192z^3", "240z^6+608z^5+384z^4+64z^3", "624z^6+576z^5+96z^4"),
}


def check_family_tables(workers):
    seq = transfer_sequence(*builtin_c2(), 5)
    rows = [[str(x) for x in v] for v in seq]
    bad = [n for n, want in C2_TABLE.items() if seq[n - 1] != tuple(map(parse_poly, want))]
    return not bad, f"V_1..V_5 all components exact, E_5 = {rows[4][0]}" if not bad else f"differ at n={bad}", rows


# -- criterion 6 -------------------------------------------------------------

def check_chain_brute_force(workers):
    rows, bad, elapsed = [], [], 0.0
    for n, want in ((1, "z"), (2, "4z^2+2z"), (3, "20z^3+16z^2")):
        p = graph_to_pair(build_c2_chain(n))
        t = time.perf_counter()
        rd, gd = distributions(p, workers=workers)
        dt = time.perf_counter() - t
        if n == 3:
            elapsed = dt
        rows.append([n, rd.total, str(gd.polynomial())])
        if gd.polynomial() != parse_poly(want):
            bad.append(f"n={n}: {gd.polynomial()}")
    if rows[2][1] != 36:
        bad.append(f"n=3 enumerated {rows[2][1]} embeddings")
    if workers == 1 and elapsed >= 1.0:
        bad.append(f"n=3 took {elapsed:.3f}s")
    detail = f"z, 4z^2+2z, 20z^3+16z^2; n=3: {rows[2][1]} embeddings in {elapsed * 1000:.1f} ms"
    return not bad, detail + "".join("; " + x for x in bad), rows


# -- criterion 7 -------------------------------------------------------------

def check_recurrence(workers):
    M, V1 = builtin_c2()
    cp = char_poly(M)
    want = [Poly([1]), parse_poly("-4z"), parse_poly("-8z"), parse_poly("-24z^3")]
    rec = recurrence(M, V1)
    seq = transfer_sequence(M, V1, 5)
    ok = cp == want
    for comp in range(3):
        vals = [v[comp] for v in seq]
        ok = ok and rec.extend(vals[:3], 5)[3:] == vals[3:]
    E = rec.extend([v[0] for v in seq[:3]], 5)
    ok = ok and E[3] == parse_poly(C2_TABLE[4][0]) and E[4] == parse_poly(C2_TABLE[5][0])
    text = " ".join(f"({c})" for c in cp)
    return ok, f"char poly coefficients {text}; E_4 = {E[3]}, E_5 = {E[4]}", [[str(c) for c in cp], str(E[3]), str(E[4])]


# -- criterion 8 -------------------------------------------------------------

def check_expected_genus(workers):
    rep = asymptotic_report(*builtin_c2(), n=12)
    F = Fraction
    exact = (rep.D == 6 and rep.c == (F(2, 3), F(2, 9), F(1, 9)) and sum(rep.c) == 1
             and rep.d == F(11, 9) and rep.B == F(9, 13) and rep.C == F(11, 13))
    gap = abs(rep.fit.slope - 11 / 13)
    ok = exact and gap < 1e-3
    detail = f"D={rep.D} c={[str(x) for x in rep.c]} d={rep.d} B={rep.B} C={rep.C}; |slope - 11/13| = {gap:.2e}"
    return ok, detail, rep.to_json()


# -- criterion 9 -------------------------------------------------------------

@lru_cache(maxsize=None)
def _diagram_facts(text, orders):
    """Tree and DAG results for one graph; these take no worker count, so criterion 10 reuses them."""
    p = graph_to_pair(parse_signed_graph(text))
    tree = build_diagram(p)
    weights = [(path.Q, sum(t.weight for t in path.traces)) for path in diagram_paths(tree)]
    bad_paths = [str(Q) for Q, w in weights if w != orbit_count(p.P * Q)]
    return {
        "paths": len(weights),
        "bad_paths": bad_paths,
        "tree_rd": diagram_region_distribution(tree),
        "tree_gd": diagram_genus_polynomial(tree),
        "dag_rd": [diagram_region_distribution(build_diagram(p, o, "dag")) for o in (None,) + orders],
    }


def _graph_properties(g, rng, workers):
    """Every property for one graph; returns (payload row, list of failures)."""
    fails = []
    p = graph_to_pair(g)
    rd, gd = distributions(p, workers=workers)
    expected_total = prod(factorial(max(d - 1, 0)) for d in g.degrees().values())
    if rd.total != expected_total or gd.total != expected_total:
        fails.append(f"total {rd.total} != {expected_total}")

    for Q, st in iter_embedding_stats(p):
        if st.face_cycles % 2:
            fails.append(f"odd ||PQ|| for {Q}")
        if st.status != "mixed" and branch_genus(st) != st.euler_genus:
            fails.append(f"branch genus {branch_genus(st)} != {st.euler_genus} for {Q}")

    for v in g.vertices:
        if distributions(graph_to_pair(switch(g, v)), workers=workers)[1].counts != gd.counts:
            fails.append(f"switching at {v} changes E(z)")

    orders = []
    for _ in range(ORDERS):
        order = list(default_order(p))
        rng.shuffle(order)
        orders.append(tuple(order))
    facts = _diagram_facts(format_signed_graph(g), tuple(orders))
    fails += [f"path weight differs from ||PQ|| for {Q}" for Q in facts["bad_paths"]]
    if facts["paths"] != rd.total:
        fails.append(f"{facts['paths']} tree paths for {rd.total} embeddings")
    if facts["tree_rd"] != rd or facts["tree_gd"] != gd:
        fails.append("tree distribution differs")
    if facts["dag_rd"][0] != rd:
        fails.append("dag distribution differs")
    for order, drd in zip(orders, facts["dag_rd"][1:]):
        if drd != rd:
            fails.append(f"order {list(order)} changes the region distribution")
    row = [format_signed_graph(g), rd.to_json(), gd.to_json(), gd.split_json(),
           [list(o) for o in orders], [d.to_json() for d in facts["dag_rd"]]]
    return row, fails


def check_property_suite(workers):
    rng = random.Random(SEED)
    rows, fails = [], []
    for _ in range(CORPUS):
        g = random_signed_graph(rng)
        row, f = _graph_properties(g, rng, workers)
        rows.append(row)
        fails += [f"{format_signed_graph(g)!r}: {x}" for x in f]
    detail = f"{CORPUS} graphs x {ORDERS} orders, {len(fails)} failures"
    return not fails, detail + "".join("; " + x for x in fails[:3]), rows


CHECKS = {
    1: check_golden_reductions,
    2: check_loop_quartet,
    3: check_printed_embedding,
    4: check_digraph_statistics,
    5: check_family_tables,
    6: check_chain_brute_force,
    7: check_recurrence,
    8: check_expected_genus,
    9: check_property_suite,
}

_results = {}


def _result(n, workers=1):
    if (n, workers) not in _results:
        _results[n, workers] = CHECKS[n](workers)
    return _results[n, workers]


def _report(capsys, n, ok, detail):
    with capsys.disabled():
        print(f"\nacceptance {n} {'PASS' if ok else 'FAIL'}: {detail}")


@pytest.mark.parametrize("n", sorted(CHECKS))
def test_criterion(capsys, n):
    ok, detail, _ = _result(n)
    _report(capsys, n, ok, detail)
    assert ok, detail


# -- criterion 10 ------------------------------------------------------------

CLI_RUNS = [
    ["enumerate", "--json", "{two}"],
    ["enumerate", "{chain}"],
    ["reduce", "--json", "--mode", "dag", "{chain}"],
    ["family", "builtin", "c2", "-n", "12", "--expected-genus", "--fit", "--json"],
    ["verify", "--random", "20", "--seed", str(SEED), "--json"],
]


def _cli_bytes(argv, workers):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv[:1] + ["--workers", str(workers)] + argv[1:])
    return f"{code}\n{buf.getvalue()}".encode()


def test_determinism_across_workers(capsys, tmp_path):
    (tmp_path / "two.txt").write_text("v u\ne u u -\ne u u -\n")
    (tmp_path / "chain.txt").write_text(format_signed_graph(build_c2_chain(3)))
    files = {"two": tmp_path / "two.txt", "chain": tmp_path / "chain.txt"}
    differ = []
    for n in sorted(CHECKS):
        a = json.dumps(_result(n, 1)[2], sort_keys=True).encode()
        b = json.dumps(_result(n, 4)[2], sort_keys=True).encode()
        if a != b:
            differ.append(f"criterion {n}")
    for argv in CLI_RUNS:
        argv = [x.format(**files) for x in argv]
        if _cli_bytes(argv, 1) != _cli_bytes(argv, 4):
            differ.append(" ".join(argv[:2]))
    ok = not differ
    detail = f"criteria 1-9 and {len(CLI_RUNS)} CLI runs byte-identical for workers 1 and 4"
    _report(capsys, 10, ok, detail if ok else "differ: " + ", ".join(differ))
    assert ok, differ
