"""``equipop`` command line.

Exit status: 0 on success, 1 when a mathematical check fails or an input is
not separable, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable, Iterable

from . import analytic
from .perm import NotSeparable, compact, is_separable, parse_perm
from .popularity import (
    FILTERS,
    BudgetExceeded,
    enumerate_separable,
    equipopularity_classes,
    partitions_of,
    popularity_series,
    popularity_table,
    schroder_count,
    verify_classification,
)
from .tree import canonicalize, decompose, format_partition, format_tree, parse_partition, signature, wedge

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

Check = tuple[str, bool]


class UsageError(Exception):
    pass


def _perm_arg(text: str):
    try:
        return parse_perm(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _separable_arg(text: str):
    pi = _perm_arg(text)
    if not pi:
        raise UsageError("empty permutation")
    if not is_separable(pi):
        raise NotSeparable(f"{compact(pi)} is not separable")
    return pi


# --- commands ----------------------------------------------------------------

def cmd_enumerate(args, out) -> int:
    if args.n < 1:
        raise UsageError("n must be positive")
    perms = enumerate_separable(args.n)
    if args.format == "count":
        print(schroder_count(args.n), file=out)
    elif args.format == "json":
        json.dump([compact(p) for p in perms], out)
        out.write("\n")
    else:
        for p in perms:
            print(compact(p), file=out)
    return EXIT_OK


def cmd_tree(args, out) -> int:
    print(format_tree(decompose(_separable_arg(args.perm))), file=out)
    return EXIT_OK


def cmd_signature(args, out) -> int:
    print(format_partition(signature(decompose(_separable_arg(args.perm)))), file=out)
    return EXIT_OK


def cmd_wedge(args, out) -> int:
    try:
        parts = parse_partition(args.partition)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    tree, pi = wedge(parts)
    print(format_tree(tree) if args.tree else compact(pi), file=out)
    return EXIT_OK


def cmd_canonical(args, out) -> int:
    tree = decompose(_separable_arg(args.perm))
    canon, moves = canonicalize(tree)
    json.dump({
        "tree": format_tree(tree),
        "signature": format_partition(signature(tree)),
        "canonical": format_tree(canon),
        "moves": [{"kind": m.kind, "nodes": [list(p) for p in m.nodes]} for m in moves],
    }, out, indent=2)
    out.write("\n")
    return EXIT_OK


def cmd_popularity(args, out) -> int:
    sigma = _separable_arg(args.pattern)
    k, N = len(sigma), args.max_length
    if N < k:
        raise UsageError("--max-length must be at least the pattern length")
    s = popularity_series(sigma, N, filter=args.filter, threads=args.threads, budget=args.budget)
    coeffs = [int(s[n]) for n in range(k, N + 1)]
    if args.format == "series":
        print(s.to_text(), file=out)
    elif args.format == "csv":
        print("n,count", file=out)
        for n, c in zip(range(k, N + 1), coeffs):
            print(f"{n},{c}", file=out)
    else:
        print(",".join(map(str, coeffs)), file=out)
    return EXIT_OK


def cmd_table(args, out) -> int:
    table = popularity_table(args.pattern_length, args.max_length, filter=args.filter,
                             threads=args.threads, budget=args.budget)
    out.write(table.to_csv())
    return EXIT_OK


def cmd_classes(args, out) -> int:
    if args.pattern_length < 1 or args.max_length < args.pattern_length:
        raise UsageError("need 1 <= --pattern-length <= --max-length")
    report = equipopularity_classes(args.pattern_length, args.max_length,
                                    threads=args.threads, budget=args.budget)
    out.write(report.to_json() + "\n")
    return EXIT_OK if report.coincide else EXIT_FAIL


# --- verification suites -----------------------------------------------------

def suite_schroder(N: int, **kw) -> Iterable[Check]:
    S = analytic.schroder_series(N)
    yield "series equals recursive count", all(S[n] == schroder_count(n) for n in range(N + 1))
    top = min(N, 9)
    yield f"series equals enumeration, n <= {top}", all(
        S[n] == sum(1 for _ in enumerate_separable(n)) for n in range(1, top + 1))
    bad = analytic.schroder_series(2, radicand_t2=-1)
    yield "minus-radicand variant is not integral at t^2", bad[2].denominator != 1


def suite_bivariate(N: int, **kw) -> Iterable[Check]:
    N = min(N, 8)
    U = min(4, N)
    brute = analytic.bivariate_P_brute(U, N, **kw)
    system = analytic.bivariate_P_system(U, N)
    closed = analytic.bivariate_P_closed(U, N)
    yield f"census = structural system (u^{U}, t^{N})", brute == system
    yield f"structural system = closed form (u^{U}, t^{N})", system == closed
    if N >= 2:
        partial = analytic.bivariate_P_system(U, N, omit_single_point=True)
        yield "system without the single-point term is rejected", partial.coeff(0, 2) != brute.coeff(0, 2)


def suite_qgegenbauer(N: int, **kw) -> Iterable[Check]:
    yield "hypergeometric form = Narayana form, n <= 20", all(
        analytic.q_via_hypergeometric(n) == analytic.q_polynomial(n) for n in range(1, 21))
    rel = [analytic.q_gegenbauer_relation(n) for n in range(1, 31)]
    yield "Gegenbauer relation at 1/(1-2x), n <= 30", all(r["unit_argument_holds"] for r in rel)
    yield "argument x/(1-2x) fails at n = 2", not rel[1]["x_argument_holds"]
    yield "Gegenbauer generating function (1 - 2xt + t^2)^(-3/2)", analytic.gegenbauer_gf_check(order=N)
    yield "(1 - xt + t^2)^(-3/2) is rejected", not analytic.gegenbauer_gf_check(order=N, x_coeff=1)


def suite_factorization(N: int, **kw) -> Iterable[Check]:
    N = min(N, 9)
    for m in range(4):
        for pi in ((1,), (2, 1), (3, 1, 2), (3, 2, 1)):
            if m + len(pi) > N:
                continue
            res = analytic.factorization_check(m, pi, N, **kw)
            for name, ok in res["checks"].items():
                yield f"m={m} pi={compact(pi)} {name}", ok


def suite_wedge(N: int, **kw) -> Iterable[Check]:
    N = min(N, 9)
    for w in range(1, min(4, N - 1) + 1):
        for lam in partitions_of(w):
            omega = wedge(lam)[1]
            ok = analytic.wedge_popularity(lam, N) == popularity_series(omega, N, **kw)
            yield f"wedge {format_partition(lam)} ({compact(omega)}) to order {N}", ok
    # formula only, so the horizon is not capped by the census
    for w in range(1, 6):
        ok = all(analytic.identify_partition(analytic.wedge_popularity(lam, w + 5), w + 1, w + 5) == lam
                 for lam in partitions_of(w))
        yield f"partition identification inverts the wedge formula, weight {w}", ok


def suite_classification(N: int, **kw) -> Iterable[Check]:
    for k in (3, 4, 5):
        res = verify_classification(k, k + 4, **kw)
        yield f"k={k} N={k + 4}: {res['classes']} classes (expected {res['expected']})", res["passed"]


SUITES: dict[str, Callable[..., Iterable[Check]]] = {
    "schroder": suite_schroder,
    "bivariate": suite_bivariate,
    "qgegenbauer": suite_qgegenbauer,
    "factorization": suite_factorization,
    "wedge": suite_wedge,
    "classification": suite_classification,
}


def cmd_verify(args, out) -> int:
    if args.order < 2:
        raise UsageError("--order must be at least 2")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    kw = {"threads": args.threads, "budget": args.budget}
    failed = 0
    for name in names:
        start = time.perf_counter()
        for label, ok in SUITES[name](args.order, **kw):
            failed += not ok
            print(f"{'PASS' if ok else 'FAIL'}  {name:<14} {label}", file=out)
        print(f"      {name:<14} done in {time.perf_counter() - start:.1f}s", file=out)
    print("all checks passed" if not failed else f"{failed} check(s) failed", file=out)
    return EXIT_OK if not failed else EXIT_FAIL


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="census worker threads (default: all CPUs)")
    common.add_argument("--budget", type=int, default=None, help="census window budget (default: 1e8)")

    p = argparse.ArgumentParser(prog="equipop", description="Pattern popularity in separable permutations.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("enumerate", help="list separable permutations of length n")
    s.add_argument("n", type=int)
    s.add_argument("--format", choices=("lines", "json", "count"), default="lines")
    s.set_defaults(func=cmd_enumerate)

    for name, func, what in (("tree", cmd_tree, "decomposition tree"),
                             ("signature", cmd_signature, "signature partition"),
                             ("canonical", cmd_canonical, "exchange sequence to the wedge form (JSON)")):
        s = sub.add_parser(name, help=f"print the {what} of a separable permutation")
        s.add_argument("perm")
        s.set_defaults(func=func)

    s = sub.add_parser("wedge", help="wedge permutation of a partition such as 2,1")
    s.add_argument("partition")
    s.add_argument("--tree", action="store_true", help="print the tree instead of the permutation")
    s.set_defaults(func=cmd_wedge)

    s = sub.add_parser("popularity", parents=[common], help="occurrence totals of a pattern")
    s.add_argument("pattern")
    s.add_argument("--max-length", type=int, required=True)
    s.add_argument("--format", choices=("list", "series", "csv"), default="list")
    s.add_argument("--filter", choices=FILTERS, default="all")
    s.set_defaults(func=cmd_popularity)

    s = sub.add_parser("table", parents=[common], help="CSV popularity table of all length-k patterns")
    s.add_argument("--pattern-length", type=int, required=True)
    s.add_argument("--max-length", type=int, required=True)
    s.add_argument("--filter", choices=FILTERS, default="all")
    s.set_defaults(func=cmd_table)

    s = sub.add_parser("classes", parents=[common], help="equipopularity classes as JSON")
    s.add_argument("--pattern-length", type=int, required=True)
    s.add_argument("--max-length", type=int, required=True)
    s.set_defaults(func=cmd_classes)

    s = sub.add_parser("verify", parents=[common], help="run identity suites")
    s.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    s.add_argument("--order", type=int, default=10)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"equipop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NotSeparable, BudgetExceeded) as exc:
        print(f"equipop: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
