"""Command-line interface: ``immlab <command> [options]``.

Exit codes: 0 success, 1 refuted claim or error, 2 undecided within budget,
64 unreadable input, 66 missing or unwritable file.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .constructions import FAMILIES, POD_FAMILIES, ConstructionParams, LabeledGraph, build_family
from .errors import BudgetExceeded, ImmlabError, ParseError
from .formulas import devos_chromatic_bound, devos_feasible_params, inequality_table
from .hajos import random_trial
from .immersion.pods import is_pod
from .immersion.refute import check_special10, refute_dock_graph
from .immersion.search import DEFAULT_NODE_BUDGET, UNKNOWN, find_immersion
from .metrics import chromatic_number, clique_number, edge_connectivity, min_degree
from .multigraph import (
    MultiGraph,
    canonical_hash,
    from_edgelist,
    from_graph6,
    to_dot,
    to_edgelist,
    to_graph6,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_UNKNOWN = 2
EXIT_PARSE = 64
EXIT_IO = 66

log = logging.getLogger("immlab")

_FAMILY_ALIASES = {f.lower(): f for f in FAMILIES}

# edge connectivity each docked family is built to have
_CONNECTIVITY = {"Gd": 3, "Gnd": 3, "H5d": 5, "Special10Graph": 8}


def _family(name: str) -> str:
    key = name.lower()
    if key not in _FAMILY_ALIASES:
        raise argparse.ArgumentTypeError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    return _FAMILY_ALIASES[key]


def _budget_default() -> int:
    env = os.environ.get("IMMLAB_BUDGET_NODES")
    return int(env) if env else DEFAULT_NODE_BUDGET


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", type=_family)
    common.add_argument("--d", type=int, default=None)
    common.add_argument("--bays", type=int, default=1)
    common.add_argument("--k", type=int, default=None)
    common.add_argument("--pods", type=int, default=None, help="pods per bay (default: fewest that fill it)")
    common.add_argument(
        "--attach", default=None, help="concentrated, round_robin or map:FILE (default depends on the family)"
    )
    common.add_argument("--cycles", default=None, help="odd cycle lengths for DevosFamily, e.g. 3,3,3,3")
    common.add_argument("--t", type=int, default=None)
    common.add_argument("--budget-nodes", type=int, default=None)
    common.add_argument("--budget-secs", type=float, default=None)
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=["edgelist", "dot", "graph6", "json"], default=None)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--in", dest="infile", type=Path, default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="immlab", description="Complete-graph immersion toolkit.")
    p.add_argument("--version", action="version", version=f"immlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("construct", parents=[common], help="build a family instance")
    sub.add_parser("verify", parents=[common], help="check every stated property of a family instance")
    sub.add_parser("immerse", parents=[common], help="decide K_t immersion in a graph")
    for name in ("pod-check", "pod_check"):
        sub.add_parser(name, parents=[common], help="run the pod check")
    for name in ("hajos-trial", "hajos_trial"):
        hp = sub.add_parser(name, parents=[common], help="random Hajos operation trials")
        hp.add_argument("--trials", type=int, default=10)
        hp.add_argument("--length", type=int, default=6)
        hp.add_argument("--with-beta", action="store_true")
    sub.add_parser("analyze", parents=[common], help="counting formulas for one d")
    return p


# -- helpers -----------------------------------------------------------------


def _params(args) -> ConstructionParams:
    if args.family is None:
        raise ParseError("--family is required")
    d = args.d
    if d is None:
        d = 10 if args.family in ("Seymour10", "Special10Pod", "Special10Graph") else 8
    if args.family == "HajosSeed" and args.d is None:
        d = 5
    attach = args.attach
    explicit = None
    if attach and attach.startswith("map:"):
        path = Path(attach[4:])
        try:
            explicit = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ParseError(f"attachment map {path}: {exc}") from exc
        attach = "explicit"
    return ConstructionParams(
        args.family,
        d=d,
        n_bays=args.bays,
        k=args.k,
        pods_per_bay=args.pods,
        attachment=attach,
        explicit=explicit,
        devos_cycles=[int(c) for c in args.cycles.split(",")] if args.cycles else None,
    )


def _graph_to_json(g: MultiGraph) -> str:
    data = {"n": g.n, "edges": [list(e) for e in g.edges()]}
    if g.labels:
        data["labels"] = {str(v): s for v, s in g.labels.items()}
    return json.dumps(data) + "\n"


def _graph_from_json(text: str) -> MultiGraph:
    try:
        data = json.loads(text)
        labels = {int(v): s for v, s in data.get("labels", {}).items()}
        return MultiGraph(int(data["n"]), [tuple(e) for e in data["edges"]], labels)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad JSON graph: {exc}") from exc


def _read_graph(path: Path) -> MultiGraph:
    text = path.read_text()
    head = text.lstrip()
    if head.startswith("mgraph"):
        return from_edgelist(text)
    if head.startswith("{"):
        return _graph_from_json(text)
    return from_graph6(text)


def _render(g: MultiGraph, fmt: str) -> str:
    if fmt == "dot":
        return to_dot(g)
    if fmt == "graph6":
        return to_graph6(g)
    if fmt == "json":
        return _graph_to_json(g)
    return to_edgelist(g)


def _emit(args, text: str):
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)


def _envelope(args, command: str, g: MultiGraph | None, body: dict) -> dict:
    config = {
        k: (str(v) if isinstance(v, Path) else v)
        for k, v in sorted(vars(args).items())
        if k not in ("verbose",)
    }
    return {
        "tool": "immlab",
        "version": __version__,
        "command": command,
        "config": config,
        "seed": args.seed,
        "graph_hash": canonical_hash(g) if g is not None else None,
        **body,
    }


def _report(args, command, g, body):
    _emit(args, json.dumps(_envelope(args, command, g, body), indent=1, sort_keys=True) + "\n")


def _budget(args) -> int:
    return args.budget_nodes if args.budget_nodes is not None else _budget_default()


# -- commands ----------------------------------------------------------------


def cmd_construct(args) -> int:
    lg = build_family(_params(args))
    fmt = args.format or "edgelist"
    _emit(args, _render(lg.graph, fmt))
    if args.out is not None:
        sidecar = args.out.with_name(args.out.name + ".json")
        sidecar.write_text(lg.metadata_json() + "\n")
    return EXIT_OK


def _expected(lg: LabeledGraph, params: ConstructionParams) -> dict:
    d = lg.d
    fam = params.family
    out = {"min_degree": d - 1}
    if fam == "Seymour10":
        out.update(min_degree=9, chromatic_number=4, clique_number=4)
    elif fam == "DevosFamily":
        D = params.devos_D
        out["min_degree"] = lg.graph.n - 1 - D
    elif fam in _CONNECTIVITY or fam == "Mkd":
        out["edge_connectivity"] = params.k if fam == "Mkd" else _CONNECTIVITY[fam]
        out["chromatic_number"] = d - 3 if fam == "Gd" and d >= 10 else d - 2
    return out


def cmd_verify(args) -> int:
    params = _params(args)
    lg = build_family(params)
    g = lg.graph
    budget = _budget(args)
    expected = _expected(lg, params)
    claims = []

    def claim(name, observed, want):
        claims.append({"claim": name, "expected": want, "observed": observed, "ok": observed == want})

    if params.family in POD_FAMILIES:
        rep = is_pod(g, lg.d, budget)
        claim("is_pod", rep.is_pod, True)
        claim("gadgets_at_least_3", len(rep.gadgets) >= 3, True)
        body = {"claims": claims, "pod": rep.to_dict()}
    else:
        claim("min_degree", min_degree(g), expected["min_degree"])
        if "edge_connectivity" in expected:
            claim("edge_connectivity", edge_connectivity(g), expected["edge_connectivity"])
        if "chromatic_number" in expected:
            claim("chromatic_number", chromatic_number(g), expected["chromatic_number"])
        if "clique_number" in expected:
            claim("clique_number", clique_number(g), expected["clique_number"])
        body = {"claims": claims}
        t = args.t if args.t is not None else lg.d
        if lg.pod_of:
            if params.family == "Special10Graph":
                ref = check_special10(g, lg.decomposition(), budget)
            else:
                ref = refute_dock_graph(g, lg.decomposition(), lg.d, budget)
            claim(f"no_K{lg.d}_immersion", ref.refuted, True)
            body["refutation"] = ref.to_dict()
        else:
            v = find_immersion(g, t, budget, time_limit=args.budget_secs, jobs=args.jobs)
            if v.outcome == UNKNOWN:
                body["immersion"] = v.to_dict()
                _report(args, "verify", g, body)
                return EXIT_UNKNOWN
            if t == lg.d:
                want = "immersed" if params.family == "HajosSeed" else "not_immersed"
                claim(f"K{t}_immersion", v.outcome, want)
            body["immersion"] = v.to_dict()
    _report(args, "verify", g, body)
    return EXIT_OK if all(c["ok"] for c in claims) else EXIT_FAIL


def _input_graph(args) -> tuple[MultiGraph, int | None]:
    if args.infile is not None:
        return _read_graph(args.infile), args.d
    lg = build_family(_params(args))
    return lg.graph, lg.d


def cmd_immerse(args) -> int:
    g, d = _input_graph(args)
    t = args.t if args.t is not None else d
    if t is None:
        raise ParseError("--t is required")
    v = find_immersion(g, t, _budget(args), time_limit=args.budget_secs, jobs=args.jobs)
    body = {"t": t, "verdict": v.to_dict()}
    if args.out is not None and v.certificate is not None:
        cert_path = args.out.with_name(args.out.name + ".cert.json")
        cert_path.write_text(json.dumps(v.certificate.to_dict(), indent=1) + "\n")
        body["certificate_file"] = str(cert_path)
    _report(args, "immerse", g, body)
    if v.outcome == UNKNOWN:
        return EXIT_UNKNOWN
    return EXIT_OK


def cmd_pod_check(args) -> int:
    g, d = _input_graph(args)
    if d is None:
        raise ParseError("--d is required with --in")
    rep = is_pod(g, d, _budget(args))
    _report(args, "pod_check", g, {"pod": rep.to_dict()})
    return EXIT_OK if rep.is_pod else EXIT_FAIL


def cmd_hajos_trial(args) -> int:
    k = args.k if args.k is not None else 4
    kinds = ("alpha", "beta", "gamma") if args.with_beta else ("alpha", "gamma")
    lines = []
    bad = False
    for i in range(args.trials):
        rep = random_trial(args.seed + i, k, args.length, kinds, _budget(args), strict=False)
        bad = bad or bool(rep.non_beta_flips)
        lines.append(rep.to_json_line())
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_FAIL if bad else EXIT_OK


def cmd_analyze(args) -> int:
    if args.d is None:
        raise ParseError("--d is required")
    params = devos_feasible_params(args.d)
    table = inequality_table(args.d)
    if args.format == "json":
        body = {
            "devos": [dict(p.to_dict(), chromatic_bound=devos_chromatic_bound(p)) for p in params],
            "inequalities": table,
        }
        _report(args, "analyze", None, body)
        return EXIT_OK
    rows = [f"d = {args.d}"]
    if not params:
        rows.append("no feasible DeVos parameters")
    else:
        rows.append("D  t  parts            chromatic bound")
        for p in params:
            parts = ",".join(map(str, p.cycle_partition))
            rows.append(f"{p.D:<2} {p.t:<2} {parts:<16} {devos_chromatic_bound(p)}")
    cs = table["corner_split"]
    rows.append(f"min over x of -x^2 + dx + 2 - d: {min(cs.values())}")
    dc = table["dock_case"]
    if dc:
        rows.append(f"min over k of k(d-k) - 2(d-3): {min(dc.values())}")
    rows.append(f"bay wiring cut {table['wiring_cut']} <= d - 3 = {table['wiring_bound']}")
    _emit(args, "\n".join(rows) + "\n")
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "verify": cmd_verify,
    "immerse": cmd_immerse,
    "pod-check": cmd_pod_check,
    "pod_check": cmd_pod_check,
    "hajos-trial": cmd_hajos_trial,
    "hajos_trial": cmd_hajos_trial,
    "analyze": cmd_analyze,
}


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"immlab: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"immlab: {exc}", file=sys.stderr)
        return EXIT_IO
    except BudgetExceeded as exc:
        print(f"immlab: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except ImmlabError as exc:
        print(f"immlab: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
