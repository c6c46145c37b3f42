"""Command line front end: ``solgraph <subcommand> ...``.

Exit codes: 0 yes / connected / verified, 1 no / disconnected / falsified,
2 usage, parse or applicability error, 3 cap exceeded, 4 unsatisfiable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import expressibility as ex
from .errors import (CapExceeded, MethodInapplicable, NotASolution, NotTight,
                     SolgraphError, TooLarge, Unsatisfiable)
from .formulas import Formula, as_assignment, parse_formula, serialize_formula, to_bits
from .hardness import compile_tm, gen_long_path, long_path_endpoints, parse_machine
from .oracle import DEFAULT_CAP, build_graph, oracle_diameter, oracle_st_conn, to_dot
from .relations import classify_set, parse_relations
from .tight import conn_poly, stconn_tight

YES, NO, USAGE, CAP, UNSAT = 0, 1, 2, 3, 4

METHOD_ALIASES = {"bijunctive": "bijunctive", "affine": "affine",
                  "ihsb-": "ihsb_minus", "ihsb+": "ihsb_plus"}


class UsageError(Exception):
    pass


class ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from exc


def _formula(path: str) -> Formula:
    return parse_formula(_read(path), base_dir=os.path.dirname(os.path.abspath(path)))


def _status_line(f: Formula, what: str) -> str:
    rep = classify_set(f.relations)
    c = rep.complexity
    status = c.conn if what == "conn" else c.stconn
    return f"{what} for this relation set is {status} ({rep.verdict}); rerun with --oracle"


def _graph(f: Formula, args):
    g = build_graph(f, args.cap, args.strategy)
    if args.dot:
        _write(args.dot, to_dot(g))
    return g


# subcommands; each returns (exit code, report dict, text lines)


def cmd_classify(args):
    rels = list(parse_relations(_read(args.relations)).values())
    if not rels:
        raise UsageError("no relations in file")
    rep = classify_set(rels)
    report = {
        "verdict": rep.verdict,
        "schaefer_branches": list(rep.schaefer_branches),
        "tight_branches": list(rep.tight_branches),
        "complexity": vars(rep.complexity),
        "conn_method": rep.conn_method,
        "summary": rep.summary(),
        "relations": [vars(fl) for fl in rep.relations],
    }
    return YES, report, [rep.summary()]


def cmd_conn(args):
    f = _formula(args.formula)
    method = args.method
    if args.oracle:
        method = "oracle"
    if method == "auto":
        rep = classify_set(f.relations)
        if rep.conn_method is None:
            raise MethodInapplicable(_status_line(f, "conn"))
        method = rep.conn_method
    if method == "oracle":
        g = _graph(f, args)
        if len(g) == 0:
            raise Unsatisfiable("formula has no solutions")
        ok = g.connected
        report = {"connected": ok, "method": "oracle", "components": g.component_count,
                  "solutions": len(g)}
        lines = [("connected" if ok else "disconnected") + f" ({g.component_count} components, {len(g)} solutions)"]
        if not ok:
            comps = g.components()
            cert = [to_bits(comps[0][0], f.n), to_bits(comps[1][0], f.n)]
            report["certificate"] = cert
            lines.append("certificate: " + " ".join(cert))
        return (YES if ok else NO), report, lines
    d = conn_poly(f, METHOD_ALIASES[method])
    report = {"connected": d.answer, "method": method}
    lines = ["connected" if d.answer else "disconnected"]
    if d.certificate is not None:
        cert = [to_bits(a, f.n) for a in d.certificate]
        report["certificate"] = cert
        lines.append("certificate: " + " ".join(cert))
    return (YES if d.answer else NO), report, lines


def cmd_stconn(args):
    f = _formula(args.formula)
    try:
        s, t = as_assignment(args.s, f.n), as_assignment(args.t, f.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if args.oracle:
        g = _graph(f, args)
        if len(g) == 0:
            raise Unsatisfiable("formula has no solutions")
        r = oracle_st_conn(g, s, t)
        method, ok, path = "oracle", r.connected, r.path
    else:
        try:
            d = stconn_tight(f, None, s, t)
        except NotTight as exc:
            raise MethodInapplicable(_status_line(f, "st-conn")) from exc
        method, ok, path = d.method, d.answer, d.path
    report = {"connected": ok, "method": method, "s": args.s, "t": args.t}
    lines = ["connected" if ok else "disconnected"]
    if path is not None:
        report["path"] = [to_bits(a, f.n) for a in path]
        lines.append(f"path ({len(path) - 1} steps): " + " ".join(report["path"]))
    return (YES if ok else NO), report, lines


def cmd_diameter(args):
    if not args.oracle:
        raise UsageError("diameter is only computed by the oracle; pass --oracle")
    f = _formula(args.formula)
    g = _graph(f, args)
    if len(g) == 0:
        raise Unsatisfiable("formula has no solutions")
    d = oracle_diameter(g, exact_all_pairs=args.all_pairs)
    report = {"diameter": d, "components": g.component_count, "solutions": len(g), "n": f.n}
    return YES, report, [f"diameter {d} ({len(g)} solutions, {g.component_count} components)"]


def cmd_express(args):
    if args.target != "s3":
        raise UsageError("only --target s3 is supported")
    rels = list(parse_relations(_read(args.relations)).values())
    pipe = ex.express_s3(rels)
    rows, lines, ok = [], [], True
    for name, e in pipe.gadgets.items():
        row = {"gadget": name, "vars": e.formula.n, "clauses": len(e.formula.clauses),
               "base": list(e.base)}
        line = f"{name:<10} {e.formula.n:>3} vars {len(e.formula.clauses):>3} clauses"
        if args.verify:
            r = ex.verify_faithful(e, args.cap)
            row["faithful"] = r.ok
            if not r.ok:
                ok = False
                row["condition"] = r.condition
                row["detail"] = r.detail
            line += "  faithful" if r.ok else f"  FAILED condition {r.condition}: {r.detail}"
        rows.append(row)
        lines.append(line)
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            _write(os.path.join(args.out, f"{name.replace('@', '_')}.csp"), ex.serialize_expression(e))
    report = {"source": pipe.source.name, "expanding_pair": [pipe.step1.a, pipe.step1.b],
              "path_pattern": pipe.step3.pattern, "gadgets": rows}
    return (YES if ok else NO), report, lines


def cmd_gen_longpath(args):
    f = gen_long_path(args.n)
    s, t = long_path_endpoints(args.n)
    header = [f"long path n={args.n}: {2 ** (args.n // 2 + 1) - 1} solutions",
              f"s {to_bits(s, f.n)}", f"t {to_bits(t, f.n)}"]
    text = serialize_formula(f, header)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    report = {"n": args.n, "clauses": len(f.clauses), "vertices": 2 ** (args.n // 2 + 1) - 1,
              "out": args.out}
    return YES, report, ([f"wrote {len(f.clauses)} clauses to {args.out}"] if args.out else [])


def cmd_compile_tm(args):
    m = parse_machine(_read(args.machine))
    cells = args.clock_cells if args.clock_cells is not None else (2 if args.tiny else None)
    c = compile_tm(m, args.n, clock_cells=cells)
    f = c.formula
    header = [f"machine {os.path.basename(args.machine)} n={args.n} clock_cells={c.machine.clock_cells}",
              f"s {to_bits(c.s, f.n)}", f"t {to_bits(c.t, f.n)}"] + c.layout()
    text = serialize_formula(f, header)
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    report = {"n": args.n, "clock_cells": c.machine.clock_cells, "vars": f.n,
              "clauses": len(f.clauses), "s": to_bits(c.s, f.n), "t": to_bits(c.t, f.n),
              "out": args.out}
    lines = [f"{f.n} variables, {len(f.clauses)} clauses, clock {c.machine.clock_cells} cells"]
    return YES, report, (lines if args.out else [])


def build_parser() -> ArgParser:
    common = ArgParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--seed", type=int, default=0, help="recorded in every report")
    common.add_argument("--cap", type=int, default=None,
                        help=f"oracle variable cap (default {DEFAULT_CAP} or $SOLGRAPH_ORACLE_CAP)")
    common.add_argument("--dot", help="write the oracle solution graph as DOT")
    common.add_argument("--strategy", choices=["brute", "search"], default="brute",
                        help="oracle enumeration: exhaustive (capped) or pruned search (uncapped)")

    p = ArgParser(prog="solgraph", description="Connectivity of Boolean satisfiability.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=ArgParser)

    q = sub.add_parser("classify", parents=[common], help="classify a relation set")
    q.add_argument("--relations", required=True)
    q.set_defaults(run=cmd_classify)

    q = sub.add_parser("conn", parents=[common], help="is the solution graph connected?")
    q.add_argument("--formula", required=True)
    q.add_argument("--method", default="auto", choices=["auto", *METHOD_ALIASES, "oracle"])
    q.add_argument("--oracle", action="store_true", help="same as --method oracle")
    q.set_defaults(run=cmd_conn)

    q = sub.add_parser("stconn", parents=[common], help="are two solutions connected?")
    q.add_argument("--formula", required=True)
    q.add_argument("--s", required=True)
    q.add_argument("--t", required=True)
    q.add_argument("--oracle", action="store_true")
    q.set_defaults(run=cmd_stconn)

    q = sub.add_parser("diameter", parents=[common], help="largest distance inside a component")
    q.add_argument("--formula", required=True)
    q.add_argument("--oracle", action="store_true")
    q.add_argument("--all-pairs", action="store_true", help="check with all-pairs BFS")
    q.set_defaults(run=cmd_diameter)

    q = sub.add_parser("express", parents=[common], help="faithful gadgets for all 3-clauses")
    q.add_argument("--relations", required=True)
    q.add_argument("--target", default="s3")
    q.add_argument("--verify", action="store_true")
    q.add_argument("--out", help="directory for the gadget files")
    q.set_defaults(run=cmd_express)

    q = sub.add_parser("gen-longpath", parents=[common], help="formula whose solutions form a long path")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--out")
    q.set_defaults(run=cmd_gen_longpath)

    q = sub.add_parser("compile-tm", parents=[common], help="Turing machine to 3-CNF")
    q.add_argument("--machine", required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--out")
    q.add_argument("--tiny", action="store_true", help="2-cell clock (testing scale)")
    q.add_argument("--clock-cells", type=int, default=None)
    q.set_defaults(run=cmd_compile_tm)
    return p


def _emit(args, code, report, lines, err=None):
    if getattr(args, "json", False):
        out = {"command": getattr(args, "command", None), "seed": getattr(args, "seed", 0),
               "exit": code, **report}
        if err:
            out["error"] = err
        print(json.dumps(out, sort_keys=True, ensure_ascii=False))
    else:
        for line in lines:
            print(line)
        if err:
            print(f"error: {err}", file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return USAGE
    if args.cap is not None and args.cap <= 0:
        _emit(args, USAGE, {}, [], "--cap must be positive")
        return USAGE
    try:
        code, report, lines = args.run(args)
    except (Unsatisfiable,) as exc:
        code, report, lines, err = UNSAT, {}, ["unsatisfiable"], str(exc)
    except (CapExceeded, TooLarge) as exc:
        code, report, lines, err = CAP, {}, [], str(exc)
    except (UsageError, NotASolution, SolgraphError, ValueError) as exc:
        code, report, lines, err = USAGE, {}, [], str(exc)
    else:
        err = None
    _emit(args, code, report, lines, err)
    return code


if __name__ == "__main__":
    sys.exit(main())
