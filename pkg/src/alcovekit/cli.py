"""Command-line interface: ``alcovekit <subcommand> [options]``.

Every JSON document carries a ``schema`` tag, the echoed configuration and
the calibrated conventions.  Output goes to ``--output`` if given, else to
``$ALCOVEKIT_OUTPUT_DIR/<subcommand>.<ext>`` if that variable is set, else to
stdout.  Exit status: 0 on success, 1 on a computation failure (with a JSON
error record on stderr), 2 on bad usage.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
import time
from typing import Callable, Sequence

from . import conventions
from .alcoves import (
    Alcove,
    AlcoveWindow,
    covers_up,
    cover_type,
    distance,
    format_alcove,
    gen_action,
    leq,
    s0_order_side,
)
from .errors import AlcoveKitError, DomainError, UsageError
from .globalcoh import at_q_equals_one, char_t1, is_palindromic, pg_closed, pg_stratified, series_rows, single_parity
from .hecke import AffineWeylGroup, HeckeAlgebra, word_label
from .icstalks import DefectPartition, fine_stalk, parity_check, simple_stalk
from .kostant import enumerate_partitions, kostant_poly, kostant_product, kostant_series
from .periodic import GenericKLTable, kato_element, l_expansion, verify_module_consistency
from .rootdata import SUPPORTED_TYPES, build_root_datum, cw_below, format_coweight, parse_coweight

SCHEMA_VERSION = 1
log = logging.getLogger("alcovekit")


# ----------------------------------------------------------------- helpers


def _parse_word(text: str, max_letter: int) -> tuple[int, ...]:
    text = text.strip()
    if text in ("", "e"):
        return ()
    letters = text.split(",") if "," in text else list(text)
    try:
        word = tuple(int(c) for c in letters)
    except ValueError:
        raise UsageError(f"bad word {text!r}") from None
    if any(not 0 <= c <= max_letter for c in word):
        raise UsageError(f"word {text!r} uses letters outside 0..{max_letter}")
    return word


def _top_alcove(R, args) -> Alcove:
    word = _parse_word(args.word, R.rank)
    if 0 in word:
        raise UsageError("finite Weyl group words use letters 1..rank")
    chi = parse_coweight(args.chi, R.rank) if args.chi else tuple(0 for _ in range(R.rank))
    return Alcove(R.from_word(word), chi)


def _alcove_record(R, A: Alcove) -> dict:
    return {"w": "".join(map(str, R.reduced_word(A.w))) or "e", "chi": list(A.chi), "label": format_alcove(R, A)}


def _document(kind: str, args, body: dict) -> dict:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output", "verbose")}
    return {"schema": f"alcovekit.{kind}/v{SCHEMA_VERSION}", "config": config, "conventions": conventions.as_dict(), **body}


def _emit(args, text: str, ext: str) -> None:
    target = args.output
    if target is None and os.environ.get("ALCOVEKIT_OUTPUT_DIR"):
        target = os.path.join(os.environ["ALCOVEKIT_OUTPUT_DIR"], f"{args.command}.{ext}")
    if target is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    os.makedirs(os.path.dirname(os.path.abspath(target)), exist_ok=True)
    with open(target, "w", encoding="utf-8", newline="") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")
    log.info("wrote %s", target)


def _json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def _csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _require_format(args, allowed: Sequence[str]) -> None:
    if args.format not in allowed:
        raise UsageError(f"{args.command} supports formats {', '.join(allowed)}")


# ------------------------------------------------------------- subcommands


def cmd_roots(args) -> int:
    _require_format(args, ["json"])
    R = build_root_datum(args.type)
    body = {
        "type": R.label,
        "rank": R.rank,
        "weyl_group_order": R.order,
        "positive_coroots": [list(c) for c in R.positive_coroots],
        "positive_roots": [list(r) for r in R.positive_roots],
        "longest_element": "".join(map(str, R.reduced_word(R.w0))),
        "highest_root": list(R.highest_root),
        "beta0": list(R.beta0),
        "two_rho": list(R.two_rho),
        "dim_X": R.dim_X,
        "length_counts": R.poincare_counts(),
        "pairing": [list(row) for row in R.cartan.pairing],
    }
    _emit(args, _json(_document("roots", args, body)), "json")
    return 0


def cmd_kostant(args) -> int:
    _require_format(args, ["json", "csv"])
    R = build_root_datum(args.type)
    if (args.alpha is None) == (args.alpha_max is None):
        raise UsageError("give exactly one of --alpha or --alpha-max")
    if args.alpha is not None:
        alphas = [parse_coweight(args.alpha, R.rank)]
    else:
        alphas = cw_below(parse_coweight(args.alpha_max, R.rank))
    records = []
    for alpha in alphas:
        parts = enumerate_partitions(R, alpha)
        poly = kostant_poly(R, alpha)
        records.append(
            {
                "alpha": list(alpha),
                "partitions": [[i + 1 for i in p.parts] for p in parts],
                "poly": str(poly),
                "count": len(parts),
            }
        )
    if args.format == "csv":
        rows = [[format_coweight(tuple(r["alpha"])), r["poly"], r["count"]] for r in records]
        _emit(args, _csv(["alpha", "poly", "count"], rows), "csv")
        return 0
    body = {"positive_coroots": [list(c) for c in R.positive_coroots]}
    if args.alpha is not None:
        body.update(records[0])
    else:
        body["rows"] = records
    _emit(args, _json(_document("kostant", args, body)), "json")
    return 0


def cmd_alcove_order(args) -> int:
    _require_format(args, ["json", "dot"])
    R = build_root_datum(args.type)
    window = AlcoveWindow(R, _top_alcove(R, args), args.depth)
    members = window.members
    edges = []
    for A in members:
        for B in covers_up(R, A):
            if B in window:
                edges.append((A, B, cover_type(R, A, B)))
    if args.format == "dot":
        lines = ["digraph alcoves {", "  rankdir=BT;"]
        for A in members:
            lines.append(f'  "{format_alcove(R, A)}";')
        for A, B, kind in edges:
            lines.append(f'  "{format_alcove(R, A)}" -> "{format_alcove(R, B)}" [label="{kind}"];')
        lines.append("}")
        _emit(args, "\n".join(lines), "dot")
        return 0
    adjacency = {
        format_alcove(R, A): sorted(format_alcove(R, B) for X, B, _ in edges if X == A) for A in members
    }
    body = {
        "top": _alcove_record(R, window.top),
        "depth": args.depth,
        "nodes": [dict(_alcove_record(R, A), depth=window.depth_of(A)) for A in members],
        "covers": adjacency,
    }
    _emit(args, _json(_document("alcove-order", args, body)), "json")
    return 0


def cmd_kl(args) -> int:
    _require_format(args, ["json"])
    W = AffineWeylGroup(args.type)
    H = HeckeAlgebra(W)
    x = W.from_word(_parse_word(args.word, W.rank))
    C = H.kl_selfdual(x, verify=True)
    rows = [{"y": word_label(W, y), "length": W.length(y), "h_poly": str(p)} for y, p in C.items()]
    body = {"x": word_label(W, x), "length": W.length(x), "bar_invariant": True, "rows": rows}
    _emit(args, _json(_document("kl", args, body)), "json")
    return 0


def cmd_generic_kl(args) -> int:
    _require_format(args, ["json"])
    R = build_root_datum(args.type)
    A = _top_alcove(R, args)
    window = AlcoveWindow(R, A, args.depth)
    table = GenericKLTable(R, args.k_max, confirm=args.confirm)
    rows = []
    for B in window:
        e = table.entry(B, A)
        rows.append(
            {
                "B": _alcove_record(R, B),
                "distance": distance(R, B, A),
                "qbar": str(e.qbar),
                "sign": e.sign,
                "stabilized_at_k": e.stabilized_at,
                "translation_start": e.start,
            }
        )
    body = {"A": _alcove_record(R, A), "k_max": args.k_max, "rows": rows}
    _emit(args, _json(_document("generic-kl", args, body)), "json")
    return 0


def _parse_defect(text: str | None, rank: int) -> DefectPartition:
    if not text:
        return DefectPartition()
    return DefectPartition(parse_coweight(p, rank) for p in text.split(";") if p.strip())


def cmd_stalks(args) -> int:
    _require_format(args, ["json"])
    R = build_root_datum(args.type)
    rows = []
    if args.alpha is not None:
        for alpha in cw_below(parse_coweight(args.alpha, R.rank)):
            s = simple_stalk(R, alpha)
            rows.append(
                {
                    "space": {"alpha": list(alpha)},
                    "stratum": "most degenerate point",
                    "poly": str(s.poly),
                    "shift": s.shift,
                    "parity_ok": parity_check(s),
                }
            )
    else:
        A = _top_alcove(R, args)
        gamma = _parse_defect(args.defect, R.rank)
        lowered = Alcove(A.w, tuple(a - g for a, g in zip(A.chi, gamma.total(R.rank))))
        table = GenericKLTable(R, args.k_max)
        for B in AlcoveWindow(R, lowered, args.depth):
            s = fine_stalk(R, A, B, gamma, table)
            rows.append(
                {
                    "space": _alcove_record(R, A),
                    "stratum": dict(_alcove_record(R, B), gamma=[list(g) for g in gamma.parts]),
                    "poly": str(s.poly),
                    "shift": s.shift,
                    "parity_ok": parity_check(s),
                }
            )
    _emit(args, _json(_document("stalks", args, {"rows": rows})), "json")
    return 0


def cmd_poincare(args) -> int:
    _require_format(args, ["json", "csv"])
    R = build_root_datum(args.type)
    bound = parse_coweight(args.alpha_max, R.rank)
    closed = pg_closed(R, bound)
    rows = series_rows(closed, R)
    agree = closed == pg_stratified(R, bound)
    if args.format == "csv":
        table = [
            [format_coweight(tuple(r["alpha"])), r["poly_q"], r["poly_t_if_integral"] or "", r["palindromic"], r["parity_ok"]]
            for r in rows
        ]
        _emit(args, _csv(["alpha", "poly_q", "poly_t_if_integral", "palindromic", "parity_ok"], table), "csv")
        return 0
    body = {"base": list(R.two_rho), "rows": rows, "matches_stratified": agree}
    _emit(args, _json(_document("poincare", args, body)), "json")
    return 0


# -------------------------------------------------------------- verify


def _suite_kostant(R, depth):
    bound = tuple(depth for _ in range(R.rank))
    yield "kostant_product_identity", kostant_series(R, bound) == kostant_product(R, bound)
    yield "kostant_counts", all(
        kostant_poly(R, a).evaluate(1) == len(enumerate_partitions(R, a)) for a in cw_below(bound)
    )


def _suite_poincare(R, depth):
    bound = tuple(depth for _ in range(R.rank))
    closed = pg_closed(R, bound)
    yield "closed_equals_stratified", closed == pg_stratified(R, bound)
    yield "palindromic_single_parity", all(is_palindromic(p) and single_parity(p) for _, p in closed.items())
    yield "character_at_q1", at_q_equals_one(closed) == char_t1(R, bound)


def _suite_order(R, depth):
    top = Alcove(R.w0, tuple(0 for _ in range(R.rank)))
    window = AlcoveWindow(R, top, depth)
    members = window.members
    yield "leq_equals_generated", all(leq(R, A, B) == window.leq_generated(A, B) for A in members for B in members)
    yield "s0_positivity", all(leq(R, gen_action(R, 0, A), A) == s0_order_side(R, A) for A in members)
    yield "graded_covers", all(
        distance(R, A, B) == 1 and cover_type(R, A, B) is not None for A in members for B in covers_up(R, A)
    )


def _suite_hecke(R, depth):
    W = AffineWeylGroup(R)
    H = HeckeAlgebra(W)
    ok = True
    for x in W.elements_up_to(depth):
        C = H.kl_selfdual(x, verify=False)
        ok = ok and H.bar(C) == C
    yield "selfdual_bar_invariant", ok


def _suite_periodic(R, depth):
    chi = tuple(0 for _ in range(R.rank))
    window = AlcoveWindow(R, Alcove(R.w0, chi), depth)
    table = GenericKLTable(R)
    yield "kato_match", l_expansion(R, window.top, window, table) == kato_element(R, chi, window)
    ok = True
    for B in window:
        for A in window:
            q = table.qbar(B, A)
            if not q:
                continue
            d = distance(R, B, A)
            ok = ok and leq(R, B, A) and all(c > 0 for _, c in q.terms())
            ok = ok and all(e <= 0 and (e - d) % 2 == 0 for e in q.exponents())
            ok = ok and (q.coefficient(0) == (1 if A == B else 0))
    yield "qbar_invariants", ok
    consistent = True
    for A in window:
        if window.depth_of(A) > depth // 2:
            continue
        for i in range(R.rank + 1):
            consistent = consistent and verify_module_consistency(R, A, i, depth, table).passed
    yield "module_consistency", consistent


SUITES: dict[str, Callable] = {
    "kostant": _suite_kostant,
    "poincare": _suite_poincare,
    "order": _suite_order,
    "hecke": _suite_hecke,
    "periodic": _suite_periodic,
}


def cmd_verify(args) -> int:
    _require_format(args, ["json"])
    R = build_root_datum(args.type)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    results = []
    for name in names:
        start = time.perf_counter()
        for check, passed in SUITES[name](R, args.depth):
            results.append({"suite": name, "check": check, "passed": bool(passed)})
        log.info("suite %s finished in %.2fs", name, time.perf_counter() - start)
    all_ok = all(r["passed"] for r in results)
    body = {"results": results, "passed": all_ok}
    _emit(args, _json(_document("verify", args, body)), "json")
    return 0 if all_ok else 1


# ----------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="alcovekit", description="Exact computations with alcoves, KL polynomials and quasimap stalks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats=("json",)):
        p.add_argument("--type", default="A2", choices=SUPPORTED_TYPES, help="Cartan type")
        p.add_argument("--format", default=formats[0], choices=("json", "csv", "dot"))
        p.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
        p.add_argument("--verbose", "-v", action="count", default=0)

    def top(p):
        p.add_argument("--word", default="e", help="finite Weyl word of the top alcove, e.g. 121")
        p.add_argument("--chi", default=None, help="coweight of the top alcove, e.g. 0,0")
        p.add_argument("--depth", type=int, default=4)

    p = sub.add_parser("roots", help="root datum tables")
    common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("kostant", help="Kostant partitions and K^alpha(t)")
    common(p)
    p.add_argument("--alpha", default=None)
    p.add_argument("--alpha-max", default=None)
    p.set_defaults(func=cmd_kostant)

    p = sub.add_parser("alcove-order", help="window of the alcove poset")
    common(p)
    top(p)
    p.set_defaults(func=cmd_alcove_order)

    p = sub.add_parser("kl", help="self-dual basis element of the affine Hecke algebra")
    common(p)
    p.add_argument("--word", required=True, help="affine word over 0..rank, e.g. 010")
    p.set_defaults(func=cmd_kl)

    p = sub.add_parser("generic-kl", help="generic KL polynomials below an alcove")
    common(p)
    top(p)
    p.add_argument("--k-max", type=int, default=6)
    p.add_argument("--confirm", action="store_true", help="require a third agreeing translate")
    p.set_defaults(func=cmd_generic_kl)

    p = sub.add_parser("stalks", help="IC stalk generating functions")
    common(p)
    top(p)
    p.add_argument("--alpha", default=None, help="list simple stalks for all coweights up to alpha")
    p.add_argument("--defect", default=None, help="defect multiset, e.g. '1,0;0,1'")
    p.add_argument("--k-max", type=int, default=6)
    p.set_defaults(func=cmd_stalks)

    p = sub.add_parser("poincare", help="global IH Poincare series")
    common(p)
    p.add_argument("--alpha-max", required=True)
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("verify", help="run the verification suites")
    common(p)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--suite", default="all", choices=("all",) + tuple(SUITES))
    p.set_defaults(func=cmd_verify)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    if getattr(args, "depth", 0) < 0:
        parser.error("--depth must be non-negative")
    if getattr(args, "k_max", 2) < 2:
        parser.error("--k-max must be at least 2")
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        # malformed or out-of-domain flag values
        parser.error(str(exc))
    except AlcoveKitError as exc:
        record = {"schema": f"alcovekit.error/v{SCHEMA_VERSION}", "error": type(exc).__name__, "message": str(exc)}
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
