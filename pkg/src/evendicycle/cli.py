"""Command-line front end.

Every analysis prints one JSON run report on stdout.  Exit codes: 0 success,
1 usage or input error, 2 a cap or size gate was hit, 3 a certificate failed
its re-check.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from pathlib import Path

from . import decomposition as dec_mod
from . import erdos_posa as ep
from .core import (
    DEFAULT_DICYCLE_CAP,
    Digraph,
    parse_digraph,
    random_digraph,
    strong_components,
    to_dot,
    to_edgelist,
)
from .errors import EvenDicycleError, ParseError, PreconditionError, VerificationFailure
from .evenness import contains_even_dicycle, find_weak_odd_bicycle, is_non_even, odd_bicycle
from .matching import parse_bipartite
from .walls import cylindrical_grid, cylindrical_wall, segregated_grid, vname

REPORT_SCHEMA = "evendicycle.report/1"
SIDECAR_SCHEMA = "evendicycle.generate/1"
DEFAULT_SIZE_GATE = 12


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise PreconditionError(f"cannot read {path}: {exc.strerror}") from None


def _digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def _cycle(c) -> list | None:
    return None if c is None else list(c.vertices)


# commands; each returns (input text, result payload)

def cmd_analyze(args) -> tuple[str, dict]:
    text = _read(args.file)
    D = parse_digraph(text)
    even = contains_even_dicycle(D, args.dicycle_cap)
    ne = is_non_even(D, args.dicycle_cap)
    comps = strong_components(D)
    out = {
        "vertices": D.n,
        "edges": D.m,
        "even_dicycle": even is not None,
        "even_dicycle_witness": _cycle(even),
        "non_even": ne.non_even,
        "dicycles": ne.dicycle_count,
        "strong_components": {"count": len(comps), "sizes": sorted((len(c) for c in comps), reverse=True)},
    }
    if ne.non_even:
        out["weighting"] = [[u, v, b] for (u, v), b in ne.witness.items()]
    else:
        out["certificate"] = [list(c.vertices) for c in ne.certificate]
        if D.n <= args.size_gate:
            m = find_weak_odd_bicycle(D, args.size_gate)
            out["odd_bicycle_order"] = None if m is None else m.target.n
    return text, out


def _generate(kind: str, k: int, args) -> tuple[Digraph, dict]:
    params: dict = {"k": k}
    if kind in ("grid", "seggrid"):
        D = cylindrical_grid(k) if kind == "grid" else segregated_grid(k)
        params["outward_positions"] = list(range(0, 2 * k, 2) if kind == "grid" else range(k))
        params["cycles"] = [[vname(c, p) for p in range(2 * k)] for c in range(1, k + 1)]
    elif kind == "wall":
        W = cylindrical_wall(k)
        D = W.digraph
        params["columns"] = [list(c) for c in W.columns]
        params["rows"] = [list(r) for r in W.rows]
        params["vertical_cycles"] = [list(W.vertical_cycle(x).vertices) for x in range(1, W.n_columns + 1)]
        params["horizontal_paths"] = [list(W.horizontal_path(j, h))
                                      for j in range(1, W.n_rows + 1) for h in (1, 2)]
    elif kind == "oddbicycle":
        if k < 3 or k % 2 == 0:
            raise PreconditionError("odd bicycle order must be odd and at least 3")
        D = odd_bicycle(k)
    elif kind == "counterexample":
        D = ep.counterexample_family(k, certify_up_to=args.certify_up_to, cap=args.dicycle_cap)
        params["certified"] = k <= args.certify_up_to
        params["radial_cut"] = sorted(ep.radial_cut(k))
    elif kind == "random":
        seed = int(os.environ.get("EDT_SEED", "0"))
        D = random_digraph(k, args.p, random.Random(seed))
        params.update({"p": args.p, "seed": seed})
    else:
        raise PreconditionError(f"unknown kind {kind!r}")
    return D, params


def cmd_generate(args) -> int:
    D, params = _generate(args.kind, args.k, args)
    if args.format == "dot":
        body = to_dot(D)
    elif args.format == "json":
        body = json.dumps({"vertices": list(D.vertices), "edges": [list(e) for e in D.edges]},
                          sort_keys=True) + "\n"
    else:
        body = to_edgelist(D)
    sidecar = {"schema": SIDECAR_SCHEMA, "kind": args.kind, "params": params, "format": args.format,
               "vertices": D.n, "edges": D.m, "digest": _digest(body)}
    if args.out:
        Path(args.out).write_text(body)
        Path(args.out + ".json").write_text(json.dumps(sidecar, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(body)
        sys.stderr.write(json.dumps(sidecar, sort_keys=True) + "\n")
    return 0


def cmd_pack(args):
    text = _read(args.file)
    D = parse_digraph(text)
    p = ep.max_packing(D, args.n, args.dicycle_cap)
    if not ep.verify_packing(D, p, len(p), args.n):
        raise VerificationFailure("packing does not verify")
    return text, {"size": len(p), **p.to_json({"oracle": "branch and bound", "n": args.n})}


def cmd_transversal(args):
    text = _read(args.file)
    D = parse_digraph(text)
    T = ep.min_transversal(D, args.dicycle_cap)
    return text, {"size": len(T), **T.to_json(D, {"oracle": "implicit hitting set"})}


def _load_decomposition(path: str) -> dec_mod.DirTreeDecomposition:
    try:
        data = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise ParseError(f"decomposition is not JSON: {exc.msg}", exc.lineno) from None
    try:
        return dec_mod.DirTreeDecomposition.from_json(data)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed decomposition: {exc}") from None


def cmd_extract(args):
    text = _read(args.file)
    D = parse_digraph(text)
    dec = _load_decomposition(args.decomposition)
    if args.mode == "low":
        res = ep.extract_low_dtw(D, dec, args.k, args.dicycle_cap)
    else:
        res = ep.extract_main(D, dec, args.k, args.dicycle_cap)
    return text, {"mode": args.mode, "k": args.k, **res.to_json(D)}


def cmd_global(args):
    text = _read(args.file)
    D = parse_digraph(text)
    Z = [z for z in args.z.split(",") if z] if args.z else []
    res = ep.global_decompose(D, args.k, Z, linkedness=args.linkedness, gate=args.size_gate,
                              cap=args.dicycle_cap)
    out = {"k": args.k, "linkedness": res.linkedness, "bound": res.bound, "nesting": res.nesting}
    if res.packing is not None:
        out["packing"] = res.packing.to_json({"oracle": "desk"})
        return text, out
    problems = ep.audit_global(D, res, args.dicycle_cap)
    if problems:
        raise VerificationFailure("; ".join(problems))
    out["decomposition"] = res.decomposition.to_json()
    out["width"] = dec_mod.odd_dtd_width(res.decomposition)
    return text, out


def cmd_ddpp(args):
    text = _read(args.file)
    D = parse_digraph(text)
    pairs = [tuple(p) for p in args.pair]
    paths = ep.t_ddpp(D, pairs, args.size_gate)
    return text, {"pairs": [list(p) for p in pairs], "solvable": paths is not None, "paths": paths}


def cmd_countpm(args):
    text = _read(args.file)
    B = parse_bipartite(text)
    r = ep.count_pm_via_transversal(B, max(args.size_gate, 16), args.dicycle_cap)
    return text, {"count": r.direct, "stratified": r.stratified, "transversal": list(r.transversal),
                  "strata": r.strata, "fallback_strata": r.fallback_strata}


COMMANDS = {
    "analyze": cmd_analyze,
    "pack": cmd_pack,
    "transversal": cmd_transversal,
    "extract": cmd_extract,
    "global": cmd_global,
    "ddpp": cmd_ddpp,
    "countpm": cmd_countpm,
}


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="evendicycle", description="Even dicycle analyses on small digraphs.")
    ap.add_argument("--dicycle-cap", type=int, default=DEFAULT_DICYCLE_CAP,
                    help="abort when an enumeration exceeds this many dicycles (default %(default)s)")
    ap.add_argument("--size-gate", type=int, default=DEFAULT_SIZE_GATE,
                    help="largest instance for exhaustive routines (default %(default)s)")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="even dicycles, non-evenness and strong components")
    p.add_argument("file")
    p = sub.add_parser("generate", help="write a generated digraph and its parameter sidecar")
    p.add_argument("kind", choices=["grid", "wall", "seggrid", "oddbicycle", "counterexample", "random"])
    p.add_argument("--k", type=int, required=True, help="order (vertex count for 'random')")
    p.add_argument("--p", type=float, default=0.3, help="edge probability for 'random'")
    p.add_argument("--format", choices=["edgelist", "dot", "json"], default="edgelist")
    p.add_argument("--out", help="output path; the sidecar goes to OUT.json")
    p.add_argument("--certify-up-to", type=int, default=4,
                   help="certify counterexample instances with k up to this value")
    p = sub.add_parser("pack", help="maximum family of even dicycles with bounded multiplicity")
    p.add_argument("file")
    p.add_argument("--n", type=int, default=1, help="per-vertex multiplicity bound")
    p = sub.add_parser("transversal", help="minimum even dicycle transversal")
    p.add_argument("file")
    p = sub.add_parser("extract", help="packing or transversal from a decomposition")
    p.add_argument("file")
    p.add_argument("--decomposition", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["low", "main"], default="main")
    p = sub.add_parser("global", help="strong odd decomposition from the desk oracle")
    p.add_argument("file")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--z", help="comma-separated vertices to keep in the root")
    p.add_argument("--linkedness", type=int)
    p = sub.add_parser("ddpp", help="internally disjoint paths for up to four pairs")
    p.add_argument("file")
    p.add_argument("--pair", nargs=2, action="append", required=True, metavar=("S", "T"))
    p = sub.add_parser("countpm", help="count perfect matchings two ways")
    p.add_argument("file")
    return ap


def _flags(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k != "command"}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "generate":
            return cmd_generate(args)
        start = time.perf_counter()
        text, result = COMMANDS[args.command](args)
        report = {
            "schema": REPORT_SCHEMA,
            "command": args.command,
            "input_digest": _digest(text),
            "flags": _flags(args),
            "result": result,
            "wall_clock_s": round(time.perf_counter() - start, 6),
        }
        print(json.dumps(report, sort_keys=True, default=str))
        return 0
    except EvenDicycleError as exc:
        print(json.dumps({"schema": REPORT_SCHEMA, "command": args.command, "error": type(exc).__name__,
                          "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
