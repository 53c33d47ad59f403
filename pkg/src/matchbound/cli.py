"""Command-line surface.

Exit codes: 0 success; 1 usage or parse error; 2 infeasible (a size, memo,
enumeration, or retry cap); 3 a conjecture violation was found under --strict.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bounds import bound_report, reports_to_csv
from .campaigns import CampaignConfig, run_campaign
from .correspondence import verify_fibers
from .counting import matching_marginals, matching_profile, profile_to_json
from .errors import CapExceeded, ParseError
from .graphs import (BipartiteGraph, bipartite_double_cover, emit_bipartite,
                     parse_bipartite, parse_edge_list, parse_graph6)
from .prooflab import inequality_chain_audit, rk_formula_audit, zx_distribution_audit

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_VIOLATION = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _read_graph(path: str, fmt: str | None):
    if path == "-":
        text = sys.stdin.read()
        name = "stdin"
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        name = path
    if fmt is None:
        if path.endswith(".g6"):
            fmt = "g6"
        elif path.endswith((".bip", ".bg")):
            fmt = "bipartite"
        else:
            fmt = "edges"
    if fmt == "g6":
        return parse_graph6(text), name
    if fmt == "bipartite":
        return parse_bipartite(text), name
    if fmt == "edges":
        return parse_edge_list(text), name
    raise _UsageError(f"unknown format {fmt!r}")


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ell_list(spec: str, max_ell: int) -> list[int]:
    if spec == "all":
        return list(range(max_ell + 1))
    try:
        return [int(part) for part in spec.split(",")]
    except ValueError:
        raise _UsageError(f"bad --ell value {spec!r}") from None


def build_parser() -> _Parser:
    parser = _Parser(prog="matchbound")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_flags(p):
        p.add_argument("--graph", required=True, help="input file, or - for stdin")
        p.add_argument("--format", choices=["g6", "edges", "bipartite"],
                       default=None, help="default: inferred from extension")
        p.add_argument("--out", default=None)

    p = sub.add_parser("count", help="exact matching profile")
    graph_flags(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("bounds", help="bound table for one or all ell")
    graph_flags(p)
    p.add_argument("--ell", default="all")
    p.add_argument("--json", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--phi-interp", choices=["gamma", "literal"], default="gamma")

    p = sub.add_parser("marginals", help="exact matching marginals (bipartite)")
    graph_flags(p)
    p.add_argument("--ell", required=True, type=int)

    p = sub.add_parser("double-cover", help="emit the bipartite double cover")
    graph_flags(p)

    p = sub.add_parser("fibers", help="fiber-size audit for one ell")
    graph_flags(p)
    p.add_argument("--ell", required=True, type=int)

    p = sub.add_parser("prooflab", help="entropy-argument audits (bipartite)")
    graph_flags(p)
    p.add_argument("--ell", required=True, type=int)

    p = sub.add_parser("campaign", help="seeded conjecture campaign")
    p.add_argument("--conjecture", choices=["umc", "genminc", "wild"], required=True)
    p.add_argument("--N", type=int, default=None)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--ell", default=None)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--edge-prob", type=float, default=0.5)
    p.add_argument("--family", choices=["random", "sharp"], default="random")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--phi-interp", choices=["gamma", "literal"], default="gamma")
    p.add_argument("--strict", action="store_true")
    p.add_argument("--out", default=None)

    return parser


def _cmd_count(args) -> int:
    g, _name = _read_graph(args.graph, args.format)
    if isinstance(g, BipartiteGraph):
        g = g.to_graph()
    prof = matching_profile(g)
    if args.json:
        _write(profile_to_json(prof) + "\n", args.out)
    else:
        lines = [f"{ell} {cnt}" for ell, cnt in enumerate(prof)]
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def _cmd_bounds(args) -> int:
    g, name = _read_graph(args.graph, args.format)
    n = g.size_x + g.size_y if isinstance(g, BipartiteGraph) else g.n
    ells = _ell_list(args.ell, n // 2)
    reports = [bound_report(g, ell, graph_id=name, phi_interp=args.phi_interp)
               for ell in ells]
    if args.json:
        doc = {"schema": 1, "reports": [r.to_json_dict() for r in reports]}
        _write(json.dumps(doc, indent=2) + "\n", args.out)
    else:
        _write(reports_to_csv(reports), args.out)
    return EXIT_OK


def _cmd_marginals(args) -> int:
    g, _name = _read_graph(args.graph, args.format)
    if not isinstance(g, BipartiteGraph):
        raise _UsageError("marginals need a bipartite input (--format bipartite)")
    table = matching_marginals(g, args.ell)
    _write(json.dumps(table.to_json_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_double_cover(args) -> int:
    g, _name = _read_graph(args.graph, args.format)
    if isinstance(g, BipartiteGraph):
        g = g.to_graph()
    _write(emit_bipartite(bipartite_double_cover(g)), args.out)
    return EXIT_OK


def _cmd_fibers(args) -> int:
    g, name = _read_graph(args.graph, args.format)
    if isinstance(g, BipartiteGraph):
        g = g.to_graph()
    report = verify_fibers(g, args.ell, graph_id=name)
    _write(report.to_json() + "\n", args.out)
    return EXIT_OK


def _cmd_prooflab(args) -> int:
    g, _name = _read_graph(args.graph, args.format)
    if not isinstance(g, BipartiteGraph):
        raise _UsageError("prooflab needs a bipartite input (--format bipartite)")
    ell = args.ell
    chain = inequality_chain_audit(g, ell)
    zx = [zx_distribution_audit(g, ell, x).to_json_dict() for x in range(g.size_x)]
    marginals = matching_marginals(g, ell)
    rk = [rk_formula_audit(g, ell, x, y).to_json_dict()
          for x, y in g.edges if marginals.p[x][y]]
    doc = {"schema": 1, "chain": chain.to_json_dict(),
           "sizeDistributions": zx, "availabilityFormulas": rk}
    _write(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_OK


def _cmd_campaign(args) -> int:
    ell_values = None
    ell = None
    if args.ell is not None:
        if args.conjecture == "umc":
            if args.ell != "all":
                ell_values = [int(part) for part in args.ell.split(",")]
        else:
            ell = int(args.ell)
    cfg = CampaignConfig(
        conjecture=args.conjecture, samples=args.samples, seed=args.seed,
        n_vertices=args.N, d=args.d, ell=ell, size_y=args.M,
        edge_prob=args.edge_prob, family=args.family, ell_values=ell_values,
        phi_interp=args.phi_interp, strict=args.strict)
    try:
        report = run_campaign(cfg)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None
    _write(report.to_json() + "\n", args.out)
    if report.violations and args.strict:
        return EXIT_VIOLATION
    return EXIT_OK


_COMMANDS = {
    "count": _cmd_count,
    "bounds": _cmd_bounds,
    "marginals": _cmd_marginals,
    "double-cover": _cmd_double_cover,
    "fibers": _cmd_fibers,
    "prooflab": _cmd_prooflab,
    "campaign": _cmd_campaign,
}


def cli_dispatch(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # argparse --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapExceeded as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


def main(argv=None) -> int:
    return cli_dispatch(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
