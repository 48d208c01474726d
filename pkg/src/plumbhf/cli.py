"""Command-line interface.

Verbs: classify, spinc, basic, relations, hf, d-invariants, oracle-check.
Exit codes: 0 success, 1 internal mismatch or instability, 2 unsupported
input, 3 I/O or parse failure.
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from .assembly import (
    SummandKind,
    d_half,
    d_minus_half_via_dual,
    full_report,
)
from .charvec import UState, lattice_context, level, spinc_of, some_torsion_char
from .classgraph import sector_graph
from .errors import (
    AmbiguousSectorMatching,
    GraphFormatError,
    NotRelatedWithinDepth,
    PlumbhfError,
    RegionUnstable,
    StateCountExceeded,
    UnknownVertexError,
    UnstableInput,
    UnsupportedGraphError,
    VisitCapExceeded,
)
from .graphs import FormKind, PlumbingGraph, classify_form, parse_plumbing
from .oracle import cross_check
from .random_graphs import random_supported_tree
from .report import (
    format_decomposition,
    frac_str,
    render,
    report_obj,
)
from .walk import (
    enumerate_basic_nontorsion,
    enumerate_basic_torsion,
    ensure_supported,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_UNSUPPORTED = 2
EXIT_IO = 3


def _load_graph(path: str) -> PlumbingGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_plumbing(fh.read())


def _sector_tag(sector) -> str:
    if sector.label is not None:
        return f"t[{sector.label}]"
    return f"t{list(sector.representative)}"


def cmd_classify(args) -> int:
    g = _load_graph(args.path)
    form = classify_form(g)
    print(f"graph: {g.name or args.path} ({g.n} vertices)")
    print(f"form: {form.kind.value}")
    print(f"inertia (n+, n0, n-): {form.inertia}")
    print(f"bad vertices: {list(form.bad_vertices) or 'none'}")
    if form.kind is FormKind.NEGATIVE_SEMIDEFINITE_CORANK1:
        ctx = lattice_context(g)
        print(f"kernel generator: {g.pairing_map(ctx.kernel)}")
    if form.kind is FormKind.UNSUPPORTED or len(form.bad_vertices) > 1:
        return EXIT_UNSUPPORTED
    return EXIT_OK


def _grouped_basics(g):
    by_sector: dict = {}
    for K in enumerate_basic_torsion(g) + enumerate_basic_nontorsion(g):
        by_sector.setdefault(spinc_of(g, K), []).append(K)
    return dict(sorted(by_sector.items(), key=lambda kv: kv[0].sort_key()))


def cmd_spinc(args) -> int:
    g = _load_graph(args.path)
    ensure_supported(g)
    for sector, basics in _grouped_basics(g).items():
        kind = "torsion" if sector.torsion else "non-torsion"
        print(
            f"{_sector_tag(sector)}: {kind}, {len(basics)} basic vector(s), "
            f"representative {g.pairing_map(sector.representative)}"
        )
    return EXIT_OK


def cmd_basic(args) -> int:
    g = _load_graph(args.path)
    ensure_supported(g)
    for sector, basics in _grouped_basics(g).items():
        if args.sector == "torsion" and not sector.torsion:
            continue
        if args.sector == "nontorsion" and sector.torsion:
            continue
        kind = "torsion" if sector.torsion else "non-torsion"
        print(f"{_sector_tag(sector)} ({kind}):")
        for K in sorted(basics):
            print(f"  {g.pairing_map(K)}")
    return EXIT_OK


def cmd_relations(args) -> int:
    g = _load_graph(args.path)
    ensure_supported(g)
    for sector, basics in _grouped_basics(g).items():
        basics = sorted(basics)
        cg = sector_graph(g, sector, basics, depth=args.depth, expansion=args.expansion)
        print(f"{_sector_tag(sector)}:")
        if not sector.torsion:
            for K in basics:
                print(f"  height {cg.leaf_height(K)} for {g.pairing_map(K)}")
        for i in range(len(basics)):
            for j in range(i + 1, len(basics)):
                rel = cg.relation(basics[i], basics[j])
                print(
                    f"  U^{rel.n} x {g.pairing_map(rel.k1)} ~ "
                    f"U^{rel.m} x {g.pairing_map(rel.k2)}"
                )
    return EXIT_OK


def cmd_hf(args) -> int:
    g = _load_graph(args.path)
    dual = _load_graph(args.dual) if args.dual else None
    even_bottoms = None
    if args.even_bottom:
        even_bottoms = {}
        for item in args.even_bottom:
            label, _, value = item.partition("=")
            even_bottoms[int(label)] = Fraction(value)
    alexander = None
    if args.alexander:
        alexander = [int(x) for x in args.alexander.split(",")]
    rep = full_report(
        g,
        dual=dual,
        even_bottoms=even_bottoms,
        alexander=alexander,
        depth=args.depth,
        expansion=args.expansion,
        jobs=args.jobs,
    )
    if args.json:
        sys.stdout.write(render(report_obj(g, rep)))
        return EXIT_OK
    print(f"graph: {g.name or args.path}")
    for res in rep.sectors:
        print(f"{_sector_tag(res.sector)}: {format_decomposition(res.summands)}")
        if res.sector.torsion:
            print(f"  d_half = {frac_str(res.d_half)}")
            if res.even_bottom is not None:
                print(
                    f"  d_minus_half = {frac_str(res.even_bottom)} "
                    f"({res.even_provenance})"
                )
        for note in res.notes:
            print(f"  note: {note}")
    for note in rep.notes:
        print(f"note: {note}")
    return EXIT_OK


def cmd_d_invariants(args) -> int:
    g = _load_graph(args.path)
    ensure_supported(g)
    dual = _load_graph(args.dual) if args.dual else None
    sectors = [s for s in _grouped_basics(g) if s.torsion]
    for sector in sectors:
        dh = d_half(g, sector, method=args.method)
        line = f"{_sector_tag(sector)}: d_half = {frac_str(dh)}"
        if dual is not None:
            dm = d_minus_half_via_dual(g, dual)
            line += f", d_minus_half = {frac_str(dm)}"
        print(line)
    return EXIT_OK


def cmd_oracle_check(args) -> int:
    if args.path == "random":
        rng = random.Random(args.seed)
        failures = 0
        for k in range(args.count):
            g = random_supported_tree(rng)
            rep = cross_check(g, m_cap=args.m_cap, box_pad=args.box_pad)
            status = "ok" if rep.ok else "MISMATCH"
            print(f"[{k + 1}/{args.count}] {g.name}: {status}")
            for line in rep.mismatches:
                print(f"  {line}")
                failures += 1
        return EXIT_OK if failures == 0 else EXIT_MISMATCH
    g = _load_graph(args.path)
    rep = cross_check(g, m_cap=args.m_cap, box_pad=args.box_pad)
    for line in rep.mismatches:
        print(f"mismatch: {line}")
    for line in rep.skipped:
        print(f"skipped: {line}")
    print(f"sectors checked: {rep.checked}; mismatches: {len(rep.mismatches)}")
    return EXIT_OK if rep.ok else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plumbhf",
        description="Heegaard Floer HF+ of plumbed three-manifolds "
        "(negative definite or semidefinite, corank 1, one bad vertex)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify the intersection form")
    p.add_argument("path")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("spinc", help="list sectors carrying homology")
    p.add_argument("path")
    p.set_defaults(func=cmd_spinc)

    p = sub.add_parser("basic", help="list basic vectors per sector")
    p.add_argument("path")
    p.add_argument("--sector", choices=["all", "torsion", "nontorsion"], default="all")
    p.set_defaults(func=cmd_basic)

    p = sub.add_parser("relations", help="heights and minimal relations")
    p.add_argument("path")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--expansion", type=int, default=2)
    p.set_defaults(func=cmd_relations)

    p = sub.add_parser("hf", help="full homology report")
    p.add_argument("path")
    p.add_argument("--dual", help="graph file for the orientation reverse")
    p.add_argument(
        "--even-bottom",
        action="append",
        metavar="LABEL=RAT",
        help="user-supplied even tower bottom for a torsion sector",
    )
    p.add_argument("--alexander", help="comma-separated a0,a1,... coefficients")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--expansion", type=int, default=2)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_hf)

    p = sub.add_parser("d-invariants", help="correction terms of torsion sectors")
    p.add_argument("path")
    p.add_argument("--dual")
    p.add_argument("--method", choices=["auto", "enumerate", "search"], default="auto")
    p.set_defaults(func=cmd_d_invariants)

    p = sub.add_parser("oracle-check", help="pipeline vs brute force")
    p.add_argument("path", help="graph file, or 'random'")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--m-cap", type=int, default=4)
    p.add_argument("--box-pad", type=int, default=1)
    p.set_defaults(func=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (UnsupportedGraphError, UnknownVertexError, AmbiguousSectorMatching) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except (
        RegionUnstable,
        UnstableInput,
        NotRelatedWithinDepth,
        VisitCapExceeded,
        StateCountExceeded,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except PlumbhfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
