"""Command-line entry point.

Structured JSON goes to stdout, a short human summary to stderr.

Exit codes: 0 success, 1 verification or self-test failure, 2 input error,
3 infeasible decomposition, 4 enumeration cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import oracle
from .decomp import (
    DEFAULT_ALLINS_CAP,
    BasisItem,
    Decomposition,
    case_basis,
    classify_prime,
    decompose,
    decompose_matrix,
    residue_report,
    verify,
    verify_transform,
)
from .exceptions import CapExceededError, FpDecompError, InfeasibleError, ParseError
from .ffield import PrimeModulus, ResidueClass, residue_class_int
from .graphs import emit_graph6, int_determinant, parse_graph, parse_graph6
from .symmat import CongruenceMap, SymMatrix, block_diag

SCHEMA_VERSION = "1.0"
CAP_ENV = "FPDECOMP_CAP"

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_CAP = 0, 1, 2, 3, 4


def default_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return oracle.DEFAULT_CAP
    try:
        return int(raw)
    except ValueError:
        raise ParseError(f"{CAP_ENV}={raw!r} is not an integer") from None


def _emit(command: str, result: dict, summary: str) -> None:
    env = {"schema_version": SCHEMA_VERSION, "command": command, "result": result}
    sys.stdout.write(json.dumps(env, sort_keys=True, indent=2) + "\n")
    if summary:
        sys.stderr.write(summary.rstrip("\n") + "\n")


def _prime(value: str) -> PrimeModulus:
    try:
        return PrimeModulus(int(value))
    except ValueError as exc:
        raise ParseError(f"bad prime {value!r}: {exc}") from None


def _read_graph(arg: str):
    # a bare "@" is the graph6 string for K1, not an empty path
    if arg.startswith("@") and len(arg) > 1:
        return parse_graph(Path(arg[1:]).read_text(encoding="ascii"))
    return parse_graph(arg)


def _parse_matrix(text: str, p: PrimeModulus) -> SymMatrix:
    try:
        rows = [[int(v) for v in row.split(",")] for row in text.split(";") if row.strip()]
    except ValueError:
        raise ParseError(f"matrix must be rows of comma-separated ints separated by ';': {text!r}")
    return SymMatrix.from_rows(rows, p)


def _basis_json(case, p: int) -> list[dict]:
    return [
        {
            "id": b.id,
            "size": b.size,
            "det": int_determinant(b.graph),
            "class": b.cls.short,
            "graph6": emit_graph6(b.graph),
        }
        for b in case_basis(case, p)
    ]


# -- subcommands ------------------------------------------------------------------


def cmd_classify(args) -> int:
    p = _prime(args.prime)
    cap = args.cap if args.cap is not None else DEFAULT_ALLINS_CAP
    case = classify_prime(p, cap=cap)
    if p.p == 2:
        residues = {str(x): ("0" if x % 2 == 0 else "S") for x in (-1, 2, 3, 5, 7)}
    else:
        residues = residue_report(p.p)
    result = {
        "p": p.p,
        "residues": residues,
        "case": case.name,
        "x6": case.x6,
        "basis": _basis_json(case, p.p),
    }
    if case.invariants is not None:
        result["invariants"] = case.invariants.to_dict()
    ids = ", ".join(["K1"] + [b["id"] for b in result["basis"]])
    _emit("classify", result, f"p={p.p}: {case.name}; basis {ids}")
    return EXIT_OK


def cmd_decompose(args) -> int:
    p = _prime(args.prime)
    cap = args.cap if args.cap is not None else DEFAULT_ALLINS_CAP
    if args.matrix is not None:
        a = _parse_matrix(args.matrix, p)
        p.require_odd()
        case = classify_prime(p, cap=cap)
        blocks, k1, tm = decompose_matrix(a, case)
        dec = Decomposition(p.p, k1, tuple(blocks), tm)
        res = verify_transform(a.entries, tm.R, _target(blocks, k1), p.p)
        result = {"matrix": [list(r) for r in a.entries]}
    else:
        g = _read_graph(args.graph)
        case = classify_prime(p, cap=cap)
        dec = decompose(g, p, cap=cap)
        res = verify(g, dec, p)
        result = {"graph": emit_graph6(g)}
    result.update(dec.to_dict())
    result["case"] = case.name
    result["verified"] = bool(res)
    parts = [f"{k}x{v}" for k, v in dec.counts().items()]
    if dec.k1_count:
        parts.append(f"K1x{dec.k1_count}")
    _emit("decompose", result, f"p={p.p}: {' + '.join(parts) or '(empty)'}; verified={bool(res)}")
    return EXIT_OK if res else EXIT_FAIL


def _target(blocks, k1: int):
    return block_diag([b.graph.adjacency_rows() for b in blocks] + [((0,),)] * k1)


def _load_envelope(arg: str) -> dict:
    text = sys.stdin.read() if arg == "-" else Path(arg).read_text(encoding="utf-8")
    try:
        env = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc.msg}", exc.pos) from None
    if not isinstance(env, dict) or env.get("command") != "decompose" or "result" not in env:
        raise ParseError("expected the output envelope of 'decompose'")
    major = str(env.get("schema_version", "")).split(".")[0]
    if major != SCHEMA_VERSION.split(".")[0]:
        raise ParseError(f"unsupported schema_version {env.get('schema_version')!r}")
    return env["result"]


def cmd_verify(args) -> int:
    body = _load_envelope(args.input)
    try:
        p = _prime(str(body["p"]))
        graphs = {k: parse_graph6(v) for k, v in body["block_graphs"].items()}
        k1 = int(body["k1_count"])
        r = tuple(tuple(int(v) for v in row) for row in body["transform"])
        blocks = []
        for name in body["block_order"]:
            g = graphs[name]
            cls = ResidueClass.RESIDUE if p.p == 2 else residue_class_int(int_determinant(g), p.p)
            blocks.append(BasisItem(name, g, cls))
        if "graph" in body:
            x = parse_graph6(body["graph"])
            a = SymMatrix.trusted(x.adjacency_rows(), p)
        else:
            x = None
            a = SymMatrix.from_rows(body["matrix"], p)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"decompose envelope is missing or mangles a field: {exc}") from None
    target_rows = _target(blocks, k1)
    if x is not None and len(target_rows) == x.n:
        claimed = CongruenceMap(r, a, SymMatrix.trusted(target_rows, p))
        res = verify(x, Decomposition(p.p, k1, tuple(blocks), claimed), p)
    else:
        res = verify_transform(a.entries, r, target_rows, p.p)
    result = {"p": p.p, "verified": res.ok, "reason": res.reason}
    if res.mismatch is not None:
        result["mismatch"] = list(res.mismatch)
    _emit("verify", result, "verified" if res else f"NOT verified: {res.reason}")
    return EXIT_OK if res else EXIT_FAIL


def cmd_atlas(args) -> int:
    spectra = {}
    lines = []
    for n in range(2, args.max_n + 1):
        values = oracle.det_spectrum(n, workers=args.workers, allow_large=args.allow_large)
        spectra[str(n)] = sorted(values)
        lines.append(oracle.format_spectrum(n, values))
    _emit("atlas", {"max_n": args.max_n, "spectra": spectra, "lines": lines}, "\n".join(lines))
    return EXIT_OK


def cmd_invariants(args) -> int:
    p = _prime(args.prime)
    cap = args.cap if args.cap is not None else default_cap()
    rep = oracle.compute_invariants(p.p, cap=cap, workers=args.workers)
    d = rep.to_dict()
    _emit("invariants", d, f"p={p.p}: N={d['N']} (X4 {d['X4']}), N'={d['N_prime']} (X5 {d['X5']})")
    return EXIT_OK


def cmd_selftest(args) -> int:
    primes = [int(x) for x in args.primes.split(",") if x.strip()]
    reports = []
    ok = True
    for p in primes:
        rep = oracle.exhaustive_verify(
            _prime(str(p)).p, args.max_n, workers=args.workers, allow_large=args.allow_large
        )
        body = rep.to_dict()
        if args.sample_n:
            srep = oracle.sampled_verify(p, args.sample_n, args.samples, args.seed, args.workers)
            body["sampled"] = {**srep.to_dict(), "seed": args.seed}
            ok &= srep.ok
        ok &= rep.ok
        reports.append(body)
    lemmas = oracle.lemma_checks()
    ok &= lemmas["ok"]
    summary = [
        f"p={r['p']} ({r['case']}): {r['graphs_checked']} graphs, {len(r['failures'])} failures"
        for r in reports
    ]
    summary.append(f"lemma checks: {'ok' if lemmas['ok'] else 'FAILED'}")
    _emit("selftest", {"ok": ok, "reports": reports, "lemmas": lemmas}, "\n".join(summary))
    return EXIT_OK if ok else EXIT_FAIL


# -- wiring -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpdecomp",
        description="Direct sum decompositions of graph adjacency matrices over F_p.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classify", help="residue case of p and its basis graphs")
    s.add_argument("--prime", "-p", required=True)
    s.add_argument("--cap", type=int, default=None, help="vertex cap for the N(p)/N'(p) search")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("decompose", help="decompose one graph")
    s.add_argument("--prime", "-p", required=True)
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", "-g", help="graph6 string, edge list 'n=..; i-j, ..', or @file")
    src.add_argument("--matrix", help="symmetric matrix as 'a,b;c,d' (need not be a graph)")
    s.add_argument("--cap", type=int, default=None)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("verify", help="re-check a saved decompose result")
    s.add_argument("--input", "-i", default="-", help="file with decompose output, or '-'")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("atlas", help="nonzero determinant sets G_2..G_k")
    s.add_argument("--max-n", type=int, required=True)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--allow-large", action="store_true", help="permit n = 8")
    s.set_defaults(func=cmd_atlas)

    s = sub.add_parser("invariants", help="N(p), N'(p) and witnesses for p with -1,2,3 residues")
    s.add_argument("--prime", "-p", required=True)
    s.add_argument("--cap", type=int, default=None, help=f"defaults to ${CAP_ENV} or 7")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_invariants)

    s = sub.add_parser("selftest", help="exhaustive decompose+verify over small graphs")
    s.add_argument("--primes", required=True, help="comma-separated primes")
    s.add_argument("--max-n", type=int, default=5)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--allow-large", action="store_true")
    s.add_argument("--sample-n", type=int, default=0, help="also spot-check random graphs of this order")
    s.add_argument("--samples", type=int, default=10000)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CAP
    except InfeasibleError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INFEASIBLE
    except (FpDecompError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
