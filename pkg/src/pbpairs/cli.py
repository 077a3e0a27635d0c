"""Command-line interface: ``pbpairs <command> ...``.

Exit status is 0 on success (or equal distributions), 1 on a violation or
mismatch, and 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .diagram import (build_diagram, diagram_genus_polynomial, diagram_region_distribution,
                      export_dot)
from .embed import DEFAULT_CAP, distributions
from .errors import PBPairError
from .family import (asymptotic_report, builtin_c2, expected_genus, parse_matrix,
                     parse_vector, transfer_sequence)
from .pair import PBPair, format_pair, parse_pair, validate_pair
from .sgraph import (SignedGraph, build_c2_chain, format_signed_graph, graph_to_pair,
                     parse_signed_graph, random_signed_graph)

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


# -- equivalence verification ---------------------------------------------

@dataclass
class EquivalenceReport:
    graph: SignedGraph
    order: tuple
    regions: dict
    genus: dict
    mismatch: Optional[dict] = None

    @property
    def equal(self) -> bool:
        return self.mismatch is None

    def to_json(self) -> dict:
        return {
            "equal": self.equal,
            "graph": format_signed_graph(self.graph),
            "order": list(self.order),
            "regions": {k: {str(x): y for x, y in v.items()} for k, v in self.regions.items()},
            "eulerGenus": {k: {str(x): y for x, y in v.items()} for k, v in self.genus.items()},
            "mismatch": self.mismatch,
        }


def _first_difference(a: dict, b: dict):
    for k in sorted(set(a) | set(b)):
        if a.get(k, 0) != b.get(k, 0):
            return k, a.get(k, 0), b.get(k, 0)
    return None


def verify_equivalence(g: SignedGraph, order=None, cap: int = DEFAULT_CAP, workers: int = 1) -> EquivalenceReport:
    """Compare brute force against the tree diagram and (regions) the DAG diagram."""
    if not g.edges:
        return EquivalenceReport(g, (), {"brute": {}, "tree": {}, "dag": {}}, {"brute": {}, "tree": {}})
    pair = graph_to_pair(g)
    rd, gd = distributions(pair, cap=cap, workers=workers)
    tree = build_diagram(pair, order, "tree")
    dag = build_diagram(pair, tree.order, "dag")
    regions = {
        "brute": rd.counts,
        "tree": diagram_region_distribution(tree).counts,
        "dag": diagram_region_distribution(dag).counts,
    }
    genus = {"brute": gd.counts, "tree": diagram_genus_polynomial(tree).counts}
    report = EquivalenceReport(g, tree.order, regions, genus)
    for what, table in (("regions", regions), ("eulerGenus", genus)):
        for method in table:
            if method == "brute":
                continue
            diff = _first_difference(table["brute"], table[method])
            if diff is not None:
                report.mismatch = {"quantity": what, "method": method, "key": diff[0],
                                   "brute": diff[1], "other": diff[2]}
                return report
    return report


def _size(g: SignedGraph) -> tuple:
    return len(g.edges), len(g.vertices)


# -- input helpers ----------------------------------------------------------

def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _looks_like_pair(text: str) -> bool:
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            return line.split(":", 1)[0].strip() in ("theta", "P", "cell")
    return False


def _load_pair(path: str) -> PBPair:
    text = _read(path)
    if _looks_like_pair(text):
        return parse_pair(text)
    return graph_to_pair(parse_signed_graph(text))


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _counts_text(counts: dict) -> str:
    return " ".join(f"{k}:{v}" for k, v in sorted(counts.items())) or "-"


def _parse_order(text: Optional[str]):
    if text is None:
        return None
    return tuple(int(tok) for tok in text.replace(",", " ").split())


# -- commands ---------------------------------------------------------------

def cmd_validate(args) -> int:
    pair = _load_pair(args.file)
    report = validate_pair(pair)
    data = {"ok": report.ok, "violations": [{"kind": v.kind, "witness": str(v.witness)} for v in report.violations]}
    text = "ok" if report.ok else "\n".join(str(v) for v in report.violations)
    _emit(args, data, text)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_from_graph(args) -> int:
    pair = graph_to_pair(parse_signed_graph(_read(args.file)))
    text = format_pair(pair)
    _emit(args, {"pair": text}, text)
    return EXIT_OK


def _distribution_payload(rd, gd) -> tuple:
    poly = str(gd.polynomial())
    data = {
        "total": rd.total,
        "regions": rd.to_json(),
        "eulerGenus": gd.to_json(),
        "polynomial": poly,
        "orientableSplit": gd.split_json(),
    }
    split = " ".join(f"{k}:{o}/{n}" for k, (o, n) in sorted(gd.split.items())) or "-"
    text = (
        f"embeddings: {rd.total}\n"
        f"face cycles: {_counts_text(rd.counts)}\n"
        f"euler-genus: {_counts_text(gd.counts)}\n"
        f"polynomial: {poly}\n"
        f"orientable/non-orientable: {split}\n"
    )
    return data, text


def cmd_enumerate(args) -> int:
    pair = _load_pair(args.file)
    rd, gd = distributions(pair, cap=args.cap, workers=args.workers)
    data, text = _distribution_payload(rd, gd)
    _emit(args, data, text)
    return EXIT_OK


def cmd_reduce(args) -> int:
    pair = _load_pair(args.file)
    d = build_diagram(pair, _parse_order(args.order), args.mode)
    rd = diagram_region_distribution(d)
    data = {
        "mode": d.mode,
        "order": list(d.order),
        "nodes": len(d.nodes),
        "edges": len(d.edges),
        "paths": d.path_count(),
        "regions": rd.to_json(),
    }
    lines = [
        f"mode: {d.mode}",
        f"order: {' '.join(map(str, d.order))}",
        f"nodes: {len(d.nodes)} edges: {len(d.edges)} paths: {d.path_count()}",
        f"face cycles: {_counts_text(rd.counts)}",
    ]
    if d.mode == "tree":
        gd = diagram_genus_polynomial(d)
        data["eulerGenus"] = gd.to_json()
        lines.append(f"euler-genus: {_counts_text(gd.counts)}")
    if args.dot is not None:
        dot = export_dot(d)
        if args.dot == "-":
            sys.stdout.write(dot)
            return EXIT_OK
        Path(args.dot).write_text(dot)
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def _family_source(args) -> tuple:
    if args.source:
        if args.source != ["builtin", "c2"]:
            raise PBPairError(f"unknown family source {' '.join(args.source)!r}; only 'builtin c2' is built in")
        return builtin_c2()
    if not (args.matrix and args.init):
        raise PBPairError("family needs --matrix and --init, or 'builtin c2'")
    return parse_matrix(_read(args.matrix)), parse_vector(_read(args.init))


def cmd_family(args) -> int:
    M, V1 = _family_source(args)
    seq = transfer_sequence(M, V1, args.n)
    data = {"E": [str(v[0]) for v in seq], "V": [[str(x) for x in v] for v in seq]}
    lines = [f"E_{i}: {v[0]}" for i, v in enumerate(seq, 1)]
    if args.expected_genus:
        gammas = [expected_genus(v[0]) for v in seq]
        data["expectedGenus"] = [str(g) for g in gammas]
        lines += [f"gamma_{i}: {g}" for i, g in enumerate(gammas, 1)]
    if args.fit:
        report = asymptotic_report(M, V1, args.n)
        data["asymptotic"] = report.to_json()
        lines += [
            f"D: {report.D} regular: {report.regular}",
            f"c: {' '.join(map(str, report.c))} d: {report.d}",
            f"B: {report.B} C: {report.C}",
            f"fitted slope: {report.fit.slope:.9f} intercept: {report.fit.intercept:.9f}",
        ]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.random is not None:
        rng = random.Random(args.seed)
        graphs = [random_signed_graph(rng) for _ in range(args.random)]
    elif args.file:
        graphs = [parse_signed_graph(_read(args.file))]
    else:
        raise PBPairError("verify needs a graph file or --random N")
    order = _parse_order(args.order)
    reports = [verify_equivalence(g, order, cap=args.cap, workers=args.workers) for g in graphs]
    bad = [r for r in reports if not r.equal]
    if bad:
        worst = min(bad, key=lambda r: _size(r.graph))
        m = worst.mismatch
        data = {"checked": len(graphs), "mismatches": len(bad), "counterexample": worst.to_json()}
        text = (
            f"checked: {len(graphs)} mismatches: {len(bad)}\n"
            f"smallest counterexample:\n{format_signed_graph(worst.graph)}"
            f"order: {' '.join(map(str, worst.order))}\n"
            f"{m['quantity']} differ ({m['method']}) at {m['key']}: brute {m['brute']} vs {m['other']}\n"
        )
        _emit(args, data, text)
        return EXIT_MISMATCH
    if len(graphs) == 1:
        rep = reports[0]
        data = rep.to_json()
        text = (
            "equal\n"
            f"face cycles: {_counts_text(rep.regions['brute'])}\n"
            f"euler-genus: {_counts_text(rep.genus['brute'])}\n"
        )
    else:
        data = {"checked": len(graphs), "mismatches": 0}
        text = f"checked: {len(graphs)} mismatches: 0"
    _emit(args, data, text)
    return EXIT_OK


def cmd_chain(args) -> int:
    g = build_c2_chain(args.n)
    if args.pair:
        text = format_pair(graph_to_pair(g))
        _emit(args, {"pair": text}, text)
    else:
        text = format_signed_graph(g)
        _emit(args, {"graph": text, "embeddings": g.embedding_count()}, text)
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--workers", type=_positive, default=1, help="worker processes for enumeration")
    common.add_argument("--cap", type=_positive, default=DEFAULT_CAP, help="maximum embeddings to enumerate")

    parser = argparse.ArgumentParser(prog="pbpairs", description="Embedding distributions of permutation-bipartition pairs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a pair or graph file")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("from-graph", parents=[common], help="convert a signed graph to its pair")
    p.add_argument("file")
    p.set_defaults(func=cmd_from_graph)

    p = sub.add_parser("enumerate", parents=[common], help="brute-force region and Euler-genus distributions")
    p.add_argument("file")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("reduce", parents=[common], help="build a reduction diagram")
    p.add_argument("file")
    p.add_argument("--mode", choices=("tree", "dag"), default="tree")
    p.add_argument("--order", help="elimination order, e.g. '2,3,6'")
    p.add_argument("--dot", metavar="PATH", help="write DOT to PATH ('-' for stdout)")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("family", parents=[common], help="transfer-matrix family analysis")
    p.add_argument("source", nargs="*", help="'builtin c2' for the built-in digon family")
    p.add_argument("--matrix")
    p.add_argument("--init")
    p.add_argument("-n", type=_positive, default=5)
    p.add_argument("--expected-genus", action="store_true")
    p.add_argument("--fit", action="store_true")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("verify", parents=[common], help="brute force vs reduction diagrams")
    p.add_argument("file", nargs="?")
    p.add_argument("--random", type=_positive, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--order")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("chain", parents=[common], help="print the n-digon chain")
    p.add_argument("-n", type=_positive, required=True)
    p.add_argument("--pair", action="store_true", help="print the pair instead of the graph")
    p.set_defaults(func=cmd_chain)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (PBPairError, ValueError, OSError) as exc:
        print(f"pbpairs {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
