"""Command-line surface.

Subcommands: solve, kernelize, generate, verify, analyze.  Exit codes:
0 feasible / success, 1 infeasible / failed verification, 2 usage or input
error, 3 resource-cap error.  Reports and timing go to stderr; everything on
stdout is deterministic for a fixed seed and --threads value.
"""

from __future__ import annotations

import argparse
import sys
from typing import Any, Optional

from .backend import BACKEND_NAME
from .boundary import BoundariedIlp
from .caps import DEFAULT_CAPS
from .core import Ilp, domain_size, normalize
from .dp import solve_dp, solve_with_modulator
from .errors import IlpkError, ParseError, ResourceCapError
from .gaifman import (build_gaifman, make_nice, td_from_pace, td_to_pace,
                      treewidth_exact, treewidth_heuristic, validate_nice,
                      validate_tree_decomposition)
from .gen import gen_hitting_set, gen_or_composition, gen_random_protrusion, gen_subset_sum
from .oracle import brute_feasible
from .protrusion import reduce_instance_detailed, validate_protrusion_decomposition
from .serialize import parse_graph_file, parse_instance, resolve_names, serialize_instance
from .tu import IntMatrix, is_tu_bruteforce, is_tu_fastpath, replace_boundaried_tu

CAPS = DEFAULT_CAPS


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _emit(data: bytes, output: Optional[str]) -> None:
    if output and output != "-":
        with open(output, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.buffer.write(data)


def _auto_decomposition(nilp: Ilp, certs: dict[str, Any]):
    """Pick a nice decomposition: certificate if present, else computed."""
    if "nice_decomposition" in certs:
        return certs["nice_decomposition"], "certificate"
    if "tree_decomposition" in certs:
        return make_nice(nilp, certs["tree_decomposition"]), "certificate td"
    g = build_gaifman(nilp)
    if g.n <= CAPS.exact_tw:
        _, td = treewidth_exact(g, CAPS)
        how = "exact treewidth"
    else:
        _, td = treewidth_heuristic(g)
        how = "min-fill treewidth"
    return make_nice(nilp, td), how


def _witness_json(ilp: Ilp, witness: dict[int, int]) -> str:
    import json
    return json.dumps({ilp.vars[v].name: value for v, value in sorted(witness.items())},
                      sort_keys=True)


def cmd_solve(args: argparse.Namespace) -> int:
    ilp, certs = parse_instance(_read(args.instance))
    if args.td:
        with open(args.td, "r", encoding="utf-8") as fh:
            td, declared = td_from_pace(fh.read())
        if declared != ilp.n:
            raise ParseError(f"--td declares {declared} vertices, instance has {ilp.n}")
        certs = dict(certs, tree_decomposition=td)
        certs.pop("nice_decomposition", None)
    if args.modulator:
        names = [s for s in args.modulator.split(",") if s]
        mods = resolve_names(ilp, names, "--modulator")
        result = solve_with_modulator(ilp, mods, CAPS)
    else:
        nilp = normalize(ilp)
        if nilp.n == 0:
            result = solve_dp(nilp, None, CAPS)
        else:
            ngd, how = _auto_decomposition(nilp, certs)
            print(f"decomposition: {how}, width {ngd.width}", file=sys.stderr)
            result = solve_dp(nilp, ngd, CAPS)
    print("feasible" if result.feasible else "infeasible")
    if result.feasible:
        print(_witness_json(ilp, result.witness))
    return 0 if result.feasible else 1


def cmd_kernelize(args: argparse.Namespace) -> int:
    ilp, certs = parse_instance(_read(args.instance))
    if args.mode == "tw":
        if "protrusion_decomposition" not in certs:
            raise ParseError("kernelize --mode tw needs a protrusion_decomposition certificate")
        reduced, details = reduce_instance_detailed(ilp, certs["protrusion_decomposition"],
                                                    CAPS, args.threads)
        _emit(serialize_instance(reduced), args.output)
        print(f"variables: {ilp.n} -> {reduced.n}", file=sys.stderr)
        print(f"constraints: {ilp.m} -> {reduced.m}", file=sys.stderr)
        print(f"parts replaced: {len(details)}", file=sys.stderr)
        blocked = [d["blocked"] for d in details if d["blocked"] is not None]
        print(f"blocked tuples per part: {blocked}", file=sys.stderr)
        return 0
    if "boundary" not in certs:
        raise ParseError("kernelize --mode tu needs a boundary certificate")
    bilp = BoundariedIlp(ilp, certs["boundary"])
    gadget = replace_boundaried_tu(bilp, CAPS)
    _emit(serialize_instance(gadget.ilp, {"boundary": gadget.boundary}), args.output)
    print(f"variables: {ilp.n} -> {gadget.ilp.n}", file=sys.stderr)
    print(f"constraints: {ilp.m} -> {gadget.ilp.m}", file=sys.stderr)
    blocked = (gadget.ilp.n - gadget.r) // (2 * gadget.r) if gadget.r else 0
    print(f"blocked tuples: {blocked}", file=sys.stderr)
    return 0


def _parse_int_list(text: str, what: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s.strip() != ""]
    except ValueError:
        raise ParseError(f"{what}: expected comma-separated integers") from None


def cmd_generate(args: argparse.Namespace) -> int:
    if args.generator == "subset-sum":
        items = _parse_int_list(args.items, "--items")
        ilp, td = gen_subset_sum(items, args.target)
        data = serialize_instance(ilp, {"tree_decomposition": td})
    elif args.generator == "hitting-set":
        sets = [_parse_int_list(group, "--sets") for group in args.sets.split(";") if group]
        ilp, modified = gen_hitting_set(args.universe_size, sets, args.k)
        data = serialize_instance(ilp, {"tu_modified_entries": modified})
    elif args.generator == "or-composition":
        graphs = []
        for path in args.graphs.split(","):
            with open(path, "r", encoding="utf-8") as fh:
                graphs.append(parse_graph_file(fh.read()))
        ilp, pd = gen_or_composition(graphs, args.k)
        data = serialize_instance(ilp, {"protrusion_decomposition": pd})
    else:
        ilp, pd = gen_random_protrusion(args.k, args.r, args.d, args.parts, args.seed)
        data = serialize_instance(ilp, {"protrusion_decomposition": pd})
    _emit(data, args.output)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    ilp, certs = parse_instance(_read(args.instance))
    nilp = normalize(ilp)
    failures = 0
    trusted: dict[str, Any] = {}

    def report(name: str, ok: bool, detail: str = "") -> None:
        nonlocal failures
        if ok:
            print(f"ok   {name}" + (f" ({detail})" if detail else ""))
        else:
            failures += 1
            print(f"FAIL {name}: {detail}")

    if "tree_decomposition" in certs:
        rep = validate_tree_decomposition(build_gaifman(ilp), certs["tree_decomposition"])
        report("tree_decomposition", rep.ok, "; ".join(d for _, d in rep.violations))
        if rep.ok:
            trusted["tree_decomposition"] = certs["tree_decomposition"]
    if "nice_decomposition" in certs:
        rep = validate_nice(nilp, certs["nice_decomposition"])
        report("nice_decomposition", rep.ok, "; ".join(d for _, d in rep.violations))
        if rep.ok:
            trusted["nice_decomposition"] = certs["nice_decomposition"]
    if "protrusion_decomposition" in certs:
        rep = validate_protrusion_decomposition(ilp, certs["protrusion_decomposition"], CAPS)
        detail = "; ".join(d for _, d in rep.violations) or "; ".join(rep.notes)
        report("protrusion_decomposition", rep.ok, detail)
    if "boundary" in certs:
        report("boundary", True, f"r = {len(certs['boundary'])}")
    if "tu_modified_entries" in certs:
        matrix = [[con.coeffs.get(j, 0) for j in range(nilp.n)] for con in nilp.constraints]
        for row, col in certs["tu_modified_entries"]:
            if row < len(matrix):
                matrix[row][col] = 0
        zeroed = IntMatrix.from_rows(matrix)
        verdict = is_tu_fastpath(zeroed)
        if verdict is None:
            try:
                verdict = is_tu_bruteforce(zeroed, CAPS)
            except ResourceCapError:
                verdict = None
        if verdict is None:
            report("tu_modified_entries", True, "zeroed matrix too large to certify")
        else:
            report("tu_modified_entries", bool(verdict),
                   "zeroing the listed entries must leave a TU matrix")

    box = 1
    for v in range(ilp.n):
        box *= ilp.domain(v).size
    if box <= CAPS.brute_box:
        oracle_res = brute_feasible(ilp, CAPS)
        if nilp.n == 0:
            dp_res = solve_dp(nilp, None, CAPS)
        else:
            ngd, _ = _auto_decomposition(nilp, trusted)
            dp_res = solve_dp(nilp, ngd, CAPS)
        agree = oracle_res.feasible == dp_res.feasible
        report("oracle-vs-dp", agree,
               f"oracle={oracle_res.feasible} dp={dp_res.feasible}")
    else:
        print(f"skip oracle-vs-dp (domain box {box} over cap)")
    return 0 if failures == 0 else 1


def cmd_analyze(args: argparse.Namespace) -> int:
    ilp, certs = parse_instance(_read(args.instance))
    nilp = normalize(ilp)
    g = build_gaifman(ilp)
    print(f"variables: {ilp.n}")
    print(f"constraints: {ilp.m} ({nilp.m} normalized)")
    print(f"domain size: {domain_size(ilp)}")
    print(f"gaifman edges: {len(g.edges())}")
    if g.n == 0:
        return 0
    ub, ub_td = treewidth_heuristic(g)
    print(f"treewidth upper bound (min-fill): {ub}")
    chosen = ub_td
    try:
        width, td = treewidth_exact(g, CAPS)
        print(f"treewidth (exact): {width}")
        chosen = td
        ngd = make_nice(nilp, td)
        print(f"nice decomposition: {len(ngd.nodes)} nodes, width {ngd.width}")
    except ResourceCapError as exc:
        print(f"treewidth (exact): skipped ({exc})")
    if args.emit_td:
        with open(args.emit_td, "w", encoding="utf-8") as fh:
            fh.write(td_to_pace(chosen, ilp.n))
        print(f"wrote {args.emit_td}", file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ilpk",
        description="Kernelization toolkit for bounded-domain ILP feasibility "
                    f"(backend: {BACKEND_NAME})")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide feasibility by treewidth DP")
    p.add_argument("instance", help="instance document path, or - for stdin")
    p.add_argument("--modulator", default="",
                   help="comma-separated variable names to branch over")
    p.add_argument("--td", default=None,
                   help="PACE .td file to use instead of computing a decomposition")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("kernelize", help="replace protrusions or a TU subsystem")
    p.add_argument("instance")
    p.add_argument("--mode", choices=["tw", "tu"], required=True)
    p.add_argument("-o", "--output", default=None, help="output path (default stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_kernelize)

    p = sub.add_parser("generate", help="emit a generated instance")
    gsub = p.add_subparsers(dest="generator", required=True)
    g = gsub.add_parser("subset-sum")
    g.add_argument("--items", required=True, help="comma-separated integers")
    g.add_argument("--target", type=int, required=True)
    g = gsub.add_parser("hitting-set")
    g.add_argument("--universe-size", type=int, required=True)
    g.add_argument("--sets", required=True,
                   help="semicolon-separated sets of comma-separated 0-based elements")
    g.add_argument("--k", type=int, required=True)
    g = gsub.add_parser("or-composition")
    g.add_argument("--graphs", required=True, help="comma-separated edge-list files")
    g.add_argument("--k", type=int, required=True)
    g = gsub.add_parser("random")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--r", type=int, required=True)
    g.add_argument("--d", type=int, required=True)
    g.add_argument("--parts", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    for gp in gsub.choices.values():
        gp.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="oracle cross-check and certificate validation")
    p.add_argument("instance")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="Gaifman statistics and treewidth")
    p.add_argument("instance")
    p.add_argument("--emit-td", default=None,
                   help="write the computed decomposition as a PACE .td file")
    p.set_defaults(func=cmd_analyze)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (IlpkError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
