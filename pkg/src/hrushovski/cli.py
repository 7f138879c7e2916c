"""Command-line front end.

Exit codes: 0 success or "true", 1 semantic "false", 2 unreadable input,
3 precondition violated (including unsupported bounds and failed gates).
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .amalgam import (
    AmalgamDiagram,
    check_eventual_closure,
    enumerate_zero_extensions,
    eventual_closures,
    free_amalgam,
    verify_free_amalgamation_property,
)
from .errors import GraphFormatError, NonTriangularSystemError, PreconditionError, ZeroDenominatorError
from .graph import graph_to_json, graph_to_text, load_graph
from .itd import check_itd_closure, enumerate_proper_itds, sitd_growth_check
from .measure import named_variable, normalize, prove_nonmeasurability, standard_equations
from .predim import GoodFunction, class_violation, closure, fraction_str, predimension

EXIT_OK, EXIT_FALSE, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(text)


def _config(args) -> GoodFunction:
    if not args.config:
        return GoodFunction()
    try:
        return GoodFunction.load(args.config)
    except OSError as exc:
        raise GraphFormatError(f"cannot read {args.config}: {exc.strerror}") from None


def _read_graph(path):
    try:
        return load_graph(path)
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from None


def _read_diagram(path):
    try:
        return AmalgamDiagram.load(path)
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from None


def _subset(g, items):
    labels = []
    for item in items:
        labels += [x for x in item.split(",") if x]
    unknown = sorted(set(labels) - g.vertices)
    if unknown:
        raise GraphFormatError(f"unknown vertices {unknown}")
    return frozenset(labels)


def cmd_check(args) -> int:
    cfg = _config(args)
    g = _read_graph(args.graph)
    bad = class_violation(g, cfg)
    if bad is None:
        _emit(args, {"in_class": True}, "in K_f")
        return EXIT_OK
    witness = g.induced(bad)
    payload = {
        "in_class": False,
        "witness": graph_to_json(witness),
        "predimension": fraction_str(predimension(witness, cfg)),
        "size": len(witness),
    }
    text = (
        f"not in K_f: induced subgraph on {sorted(bad)} has predimension "
        f"{fraction_str(predimension(witness, cfg))} < f({len(witness)}) ~ {cfg.approx(len(witness)):.4f}\n"
        + graph_to_text(witness)
    )
    _emit(args, payload, text.rstrip())
    return EXIT_FALSE


def cmd_closure(args) -> int:
    cfg = _config(args)
    g = _read_graph(args.graph)
    a = _subset(g, args.vertices)
    cl = closure(a, g, cfg)
    d = predimension(g, cfg, cl)
    _emit(
        args,
        {"closure": sorted(cl), "predimension": fraction_str(d)},
        f"closure: {' '.join(sorted(cl))}\npredimension: {fraction_str(d)}",
    )
    return EXIT_OK


def cmd_amalgamate(args) -> int:
    cfg = _config(args)
    b, c = _read_graph(args.b), _read_graph(args.c)
    ident = {}
    for pair in args.identify:
        if ":" not in pair:
            raise GraphFormatError(f"identification {pair!r} should look like b_label:c_label")
        x, y = pair.split(":", 1)
        ident[x] = y
    diag = free_amalgam(b, c, ident, cfg)
    payload = diag.to_json()
    text = (
        f"A: {' '.join(sorted(diag.part_a))}\nB: {' '.join(sorted(diag.part_b))}\n"
        f"C: {' '.join(sorted(diag.part_c))}\n" + graph_to_text(diag.ambient)
    )
    _emit(args, payload, text.rstrip())
    return EXIT_OK


def cmd_eventual_closures(args) -> int:
    cfg = _config(args)
    diag = _read_diagram(args.diagram)
    if args.depth is not None:
        closed = [diag.part_a, diag.part_b, diag.part_c]
        items = enumerate_zero_extensions(diag.ambient, closed, cfg, args.depth, with_towers=True)
        found = [(h, tower) for h, tower in items if not check_eventual_closure(h, diag, cfg)]
    else:
        found = [(ec.extension, ec.tower) for ec in eventual_closures(diag, cfg)]
    payload = {
        "count": len(found),
        "closures": [
            {"extension": graph_to_json(h), "tower": [{"vertex": v, "attached_to": list(p)} for v, p in t]}
            for h, t in found
        ],
    }
    lines = [f"{len(found)} eventual closure(s)"]
    for k, (h, tower) in enumerate(found, 1):
        steps = ", ".join(f"{v}->{{{a},{b}}}" for v, (a, b) in tower) or "(the amalgam itself)"
        lines.append(f"[{k}] {len(h)} vertices, {len(h.edges)} edges; tower: {steps}")
        lines += ["    " + line for line in graph_to_text(h).splitlines()]
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_itd_scan(args) -> int:
    cfg = _config(args)
    d12 = Fraction(args.d12_max)
    if args.closure_check:
        rep = check_itd_closure(cfg, d12)
        lines = [f"{len(rep.diagrams)} proper ITD(s) with d12 <= {fraction_str(d12)}"]
        for d, ok in rep.diagrams:
            lines.append(f"  |D|={len(d.ambient)} delta={fraction_str(predimension(d.ambient, cfg))} "
                         f"{'ok' if ok else 'VIOLATES f(|D|) <= delta(D)'}")
        if rep.growth is not None:
            lines.append(f"growth f(3t) <= f(t)+1 on [{rep.growth.t_from}, {rep.growth.t_to}]: "
                         f"{'pass' if rep.growth.passed else 'fail'}")
        lines.append("pass" if rep.passed else "fail")
        _emit(args, rep.to_json(cfg), "\n".join(lines))
        return EXIT_OK if rep.passed else EXIT_FALSE
    diagrams = enumerate_proper_itds(cfg, d12)
    lines = [f"{len(diagrams)} proper ITD(s) with d12 <= {fraction_str(d12)}"]
    for d in diagrams:
        lines.append(f"  |D|={len(d.ambient)} delta={fraction_str(predimension(d.ambient, cfg))} "
                     f"edges={sorted(sorted(e) for e in d.ambient.edges)}")
        for name in ("0", "1", "2", "3", "12", "13", "23"):
            lines.append(f"    D{name}: {' '.join(sorted(d.parts[name]))}")
    _emit(args, {"count": len(diagrams), "diagrams": [d.to_json(cfg) for d in diagrams]}, "\n".join(lines))
    return EXIT_OK


def cmd_amalg_verify(args) -> int:
    cfg = _config(args)
    rep = verify_free_amalgamation_property(cfg, args.size_bound)
    if rep.passed:
        text = f"pass: {rep.triples_checked} triples over {len(rep.dots)} dots (size <= {rep.size_bound})"
    else:
        p, q, r, s = rep.counterexample
        text = (f"fail: p={p[0], fraction_str(p[1])} q={q[0], fraction_str(q[1])} "
                f"r={r[0], fraction_str(r[1])} -> {s[0], fraction_str(s[1])} lies below f")
    _emit(args, rep.to_json(), text)
    return EXIT_OK if rep.passed else EXIT_FALSE


def _range(text):
    try:
        lo, hi = text.split("..")
        return int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a range like 6..100, got {text!r}") from None


def cmd_growth_check(args) -> int:
    cfg = _config(args)
    lo, hi = args.range
    rep = sitd_growth_check(cfg, args.k, lo, hi)
    how = "analytic in the log tail" if rep.analytic else "exact comparison"
    text = (f"{'pass' if rep.passed else 'fail'}: f(3t) <= f(t) + {rep.k} for t in [{lo}, {hi}] ({how}); "
            f"equality at {rep.equalities} value(s)")
    if rep.failures:
        text += f"; first failure at t = {rep.failures[0]}"
    _emit(args, rep.to_json(), text)
    return EXIT_OK if rep.passed else EXIT_FALSE


def cmd_derive_equations(args) -> int:
    cfg = _config(args)
    eqs = standard_equations(cfg)
    unit, lam = named_variable("pt"), named_variable("edge")
    rows = []
    for eq in eqs:
        pp = normalize(eq, unit, lam)
        norm = " + ".join(
            f"({c.format('lambda')})" + "".join(f"*{v.name}" + (f"^{e}" if e > 1 else "") for v, e in m)
            for m, c in pp.terms.items()
        ) or "0"
        rows.append((eq, norm))
    payload = {"equations": [eq.to_json() | {"normalized": n + " = 0"} for eq, n in rows]}
    text = "\n".join(f"{eq.source}:\n  {eq}\n  normalized: {n} = 0" for eq, n in rows)
    _emit(args, payload, text)
    return EXIT_OK


def cmd_prove(args) -> int:
    cfg = _config(args)
    cert = prove_nonmeasurability(cfg, args.size_bound)
    ok = cert.verify()
    payload = cert.to_json() | {"replay_verified": ok}
    Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    if args.json:
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        print(f"final polynomial: {cert.final_polynomial.format('lambda') if cert.final_polynomial else 'none'}")
        print(f"conclusion: {cert.conclusion}: {cert.statement()}")
        print(f"replay: {'verified' if ok else 'MISMATCH'}")
        print(f"certificate written to {args.out}")
    return EXIT_OK if cert.forces_zero and ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="good-function JSON (default: the log-3 construction)")
    common.add_argument("--json", action="store_true", help="machine-readable output")

    parser = argparse.ArgumentParser(prog="hrushovski", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="K_f membership with a minimal witness")
    p.add_argument("graph")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("closure", parents=[common], help="d-closure of a vertex set")
    p.add_argument("graph")
    p.add_argument("vertices", nargs="+", help="labels, space or comma separated")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("amalgamate", parents=[common], help="free amalgam of two graphs")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("--identify", nargs="*", default=[], metavar="B:C", help="vertex of B glued to vertex of C")
    p.set_defaults(func=cmd_amalgamate)

    p = sub.add_parser("eventual-closures", parents=[common], help="eventual closures of an amalgam diagram")
    p.add_argument("diagram")
    p.add_argument("--depth", type=int, help="explicit tower depth (at most 5), bypassing the size window")
    p.set_defaults(func=cmd_eventual_closures)

    p = sub.add_parser("itd-scan", parents=[common], help="enumerate proper ITDs")
    p.add_argument("d12_max")
    p.add_argument("--closure-check", action="store_true", help="also test f(|D|) <= delta(D) and tail growth")
    p.set_defaults(func=cmd_itd_scan)

    p = sub.add_parser("amalg-verify", parents=[common], help="free amalgamation property check")
    p.add_argument("--size-bound", type=int, default=6)
    p.set_defaults(func=cmd_amalg_verify)

    p = sub.add_parser("growth-check", parents=[common], help="f(3t) <= f(t) + k on a range")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--range", type=_range, default=(6, 100), metavar="LO..HI")
    p.set_defaults(func=cmd_growth_check)

    p = sub.add_parser("derive-equations", parents=[common], help="print the measure equations")
    p.set_defaults(func=cmd_derive_equations)

    p = sub.add_parser("prove", parents=[common], help="build and check the lambda = 0 certificate")
    p.add_argument("--out", default="certificate.json", metavar="PATH")
    p.add_argument("--size-bound", type=int, default=6)
    p.set_defaults(func=cmd_prove)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GraphFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (NonTriangularSystemError, ZeroDenominatorError) as exc:
        print(f"derivation failed: {exc}", file=sys.stderr)
        return EXIT_FALSE


if __name__ == "__main__":
    sys.exit(main())
