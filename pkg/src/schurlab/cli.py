"""Command-line front end.

Exit codes: 0 success / PASS, 1 refuted or failed check, 2 bad arguments,
3 unknown (a budget ran out).
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import signal
import sys
from concurrent.futures import ProcessPoolExecutor

from . import BudgetExceeded, __version__
from . import census as census_mod
from . import diffset, schurity, verify
from .groups import parse_group_spec

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNKNOWN = 0, 1, 2, 3

BUDGETS = {
    # flag dest: (environment variable, default)
    "node_budget": ("SCHURLAB_NODE_BUDGET", census_mod.DEFAULT_NODE_BUDGET),
    "aut_budget": ("SCHURLAB_AUT_BUDGET", schurity.DEFAULT_NODE_BUDGET),
    "element_budget": ("SCHURLAB_ELEMENT_BUDGET", schurity.DEFAULT_ELEMENT_BUDGET),
    "search_budget": ("SCHURLAB_SEARCH_BUDGET", diffset.DEFAULT_SEARCH_BUDGET),
    "wall_clock": ("SCHURLAB_WALL_CLOCK", 0),
}


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("budgets must be nonnegative")
    return v


def _resolve_budgets(args) -> dict:
    out = {}
    for dest, (env, default) in BUDGETS.items():
        val = getattr(args, dest, None)
        if val is None:
            raw = os.environ.get(env)
            val = _positive_int(raw) if raw else default
        if val <= 0 and dest != "wall_clock":
            raise ValueError(f"{dest} must be positive")
        out[dest] = val
    return out


def _header(out, budgets: dict, **extra):
    print(f"# schurlab {__version__}", file=out)
    print("# budgets " + " ".join(f"{k}={v}" for k, v in budgets.items()), file=out)
    for k, v in extra.items():
        print(f"# {k} {v}", file=out)


def _load_census(args, budgets):
    if getattr(args, "infile", None):
        return census_mod.read_census(args.infile)
    if getattr(args, "group", None):
        return census_mod.enumerate_srings(parse_group_spec(args.group), budgets["node_budget"])
    raise ValueError("give --in CENSUS or --group SPEC")


def _pmap(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# -- commands ------------------------------------------------------------------------


def cmd_enumerate(args, budgets, out) -> int:
    G = parse_group_spec(args.group)
    cen = census_mod.enumerate_srings(G, budgets["node_budget"], checkpoint=args.checkpoint)
    text = census_mod.census_text(cen)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        _header(out, budgets, group=G.spec)
        print(f"{G.spec}: {len(cen)} S-rings written to {args.out}", file=out)
    else:
        out.write(text)
    return EXIT_OK


class _SchurityJob:
    def __init__(self, budget):
        self.budget = budget

    def __call__(self, A):
        return schurity.is_schurian(A, self.budget)


def cmd_schurity(args, budgets, out) -> int:
    cen = _load_census(args, budgets)
    _header(out, budgets, group=cen.group.spec)
    verdicts = _pmap(_SchurityJob(budgets["aut_budget"]), cen.srings, args.workers)
    counts = {"yes": 0, "no": 0, "unknown": 0}
    print(f"{'#':>4}  {'rank':>4}  {'schurian':<8}  {'|Aut|':>30}  stabilizer orbit sizes", file=out)
    for i, (A, v) in enumerate(zip(cen.srings, verdicts)):
        counts[v.label] += 1
        print(f"{i:>4}  {A.rank:>4}  {v.label:<8}  {str(v.aut_order):>30}  {list(v.orbit_sizes)}", file=out)
    print(f"total={len(cen)} schurian={counts['yes']} nonschurian={counts['no']} unknown={counts['unknown']}", file=out)
    if counts["unknown"]:
        return EXIT_UNKNOWN
    return EXIT_OK


class _ClassifyJob:
    def __init__(self, budget):
        self.budget = budget

    def __call__(self, A):
        v = verify.classify_sring(A, self.budget)
        if not verify.revalidate(v):
            raise AssertionError("classification evidence does not reproduce")
        return v


def cmd_classify(args, budgets, out) -> int:
    cen = _load_census(args, budgets)
    G = cen.group
    if G.kind != "dihedral":
        raise ValueError("classify needs a census over D:2p")
    _header(out, budgets, group=G.spec)
    verdicts = _pmap(_ClassifyJob(budgets["aut_budget"]), cen.srings, args.workers)
    print("flags: (1) rank 2, (2) cyclotomic, (3) iso to S-ring over C_2p, (4) wreath, (5) A(D)", file=out)
    bad = unknown = 0
    for i, v in enumerate(verdicts):
        ds = v.difference_set.parameters if v.difference_set else ""
        mark = "ok" if v.satisfied else ("unknown" if v.unknown else "NONE")
        bad += not v.satisfied and not v.unknown
        unknown += not v.satisfied and v.unknown
        print(f"{i:>4}  rank={v.sring.rank:<3} {v.flag_string()}  m={v.m}  {mark}  {ds}", file=out)
    status = verify.REFUTED if bad else verify.UNVERIFIED if unknown else verify.PASS
    print(f"status={status} entries={len(verdicts)} unmatched={bad} unknown={unknown}", file=out)
    return {verify.PASS: EXIT_OK, verify.REFUTED: EXIT_FAIL}.get(status, EXIT_UNKNOWN)


def cmd_diffset(args, budgets, out) -> int:
    p = args.p
    _header(out, budgets, p=p, mode=args.mode, method=args.method)
    if args.method == "pruned":
        res = diffset.search_multiplier_pruned(p, args.mode)
    else:
        res = diffset.search_exhaustive(p, args.mode, budgets["search_budget"])
    print(f"feasible (k, lambda): {diffset.feasible_parameters(p)}", file=out)
    print(f"found {len(res.records)} sets, {len(res.translation_classes())} translation classes", file=out)
    table: dict = {}
    for r in res.records:
        table[r.parameters] = table.get(r.parameters, 0) + 1
    for params in sorted(table):
        print(f"  {params}: {table[params]}", file=out)
    if args.list:
        for r in res.records:
            print(json.dumps(r.to_dict(multipliers=True), sort_keys=True), file=out)
    return EXIT_OK


def cmd_cyclotomy(args, budgets, out) -> int:
    Q = diffset.quartic_cyclotomy(args.p, args.g)
    _header(out, budgets, p=args.p)
    print(f"primitive root g={Q.g}", file=out)
    print("(i,j)_4 table, rows i, columns j:", file=out)
    for i in range(4):
        print("  " + " ".join(f"{Q.number(i, j):>4}" for j in range(4)), file=out)
    print(f"p = x^2 + 4y^2 with x={Q.x}, y={Q.y}; oriented y=(0,3)-(0,1)={Q.y_oriented}", file=out)
    held = Q.identity_holds()
    if held is None:
        print("x = 2q-1-8(1,0)_4: not applicable ((p-1)/4 is even)", file=out)
        return EXIT_OK
    q = (args.p - 1) // 4
    print(f"x = 2q-1-8(1,0)_4: {Q.x} vs {2 * q - 1 - 8 * Q.number(1, 0)} -> {'holds' if held else 'FAILS'}", file=out)
    return EXIT_OK if held else EXIT_FAIL


def cmd_verify(args, budgets, out) -> int:
    th = args.theorem
    cen = census_mod.read_census(args.census) if args.census else None
    if th == "classification":
        rep = verify.verify_classification(args.p, cen, budgets["aut_budget"])
    elif th == "main1":
        rep = verify.verify_main1(args.p, cen, budgets["aut_budget"])
    elif th == "main2":
        rep = verify.verify_main2(args.p, budgets["search_budget"])
    elif th == "dif2q":
        rep = verify.verify_dif2q(args.p)
    elif th == "lemmas":
        rep = verify.verify_lemmas(args.p, cen, budgets["aut_budget"])
    elif th == "nonschur":
        if args.t is None:
            raise ValueError("nonschur needs --t")
        rep = verify.verify_nonschur_family(args.t, node_budget=budgets["aut_budget"])
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown theorem {th}")
    _header(out, budgets, theorem=th)
    if args.json:
        print(rep.to_json(), file=out)
    else:
        print(rep.text(), file=out)
    return {verify.PASS: EXIT_OK, verify.REFUTED: EXIT_FAIL}.get(rep.status, EXIT_UNKNOWN)


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="schurlab", description="S-rings over small groups and difference sets.")
    ap.add_argument("--version", action="version", version=f"schurlab {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = ap.add_subparsers(dest="command", required=True)

    def budgets(p):
        g = p.add_argument_group("budgets (environment variables override the defaults)")
        for dest, (env, default) in BUDGETS.items():
            g.add_argument(
                "--" + dest.replace("_", "-"), dest=dest, type=_positive_int, default=None,
                help=f"default {default}; env {env}" + ("; seconds, 0 = unlimited" if dest == "wall_clock" else ""),
            )
        p.add_argument("--workers", type=int, default=1, help="worker processes; output does not depend on it")

    p = sub.add_parser("enumerate", help="all S-rings over a group, as a census file")
    p.add_argument("--group", required=True, help="C:n or D:2p")
    p.add_argument("--out", help="census file to write (stdout when omitted)")
    p.add_argument("--checkpoint", help="resumable progress file")
    budgets(p)

    for name, helptext in (("classify", "flag census entries with the classification statements"),
                           ("schurity", "schurity verdict for each census entry")):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--in", dest="infile", help="census file")
        p.add_argument("--group", help="enumerate this group instead of reading a census")
        budgets(p)

    p = sub.add_parser("diffset", help="difference sets in Z_p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--mode", choices=["all", "up_to_translation"], default="up_to_translation")
    p.add_argument("--method", choices=["exhaustive", "pruned"], default="exhaustive")
    p.add_argument("--list", action="store_true", help="print every record as JSON")
    budgets(p)

    p = sub.add_parser("verify", help="run a theorem check")
    p.add_argument("theorem", choices=["classification", "main1", "main2", "dif2q", "lemmas", "nonschur"])
    p.add_argument("--p", type=int)
    p.add_argument("--t", type=int, help="parameter t for nonschur")
    p.add_argument("--census", help="use this census instead of enumerating")
    p.add_argument("--json", action="store_true")
    budgets(p)

    p = sub.add_parser("cyclotomy", help="quartic cyclotomic numbers mod p")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--g", type=int, help="primitive root (smallest by default)")
    budgets(p)
    return ap


COMMANDS = {
    "enumerate": cmd_enumerate,
    "classify": cmd_classify,
    "schurity": cmd_schurity,
    "diffset": cmd_diffset,
    "verify": cmd_verify,
    "cyclotomy": cmd_cyclotomy,
}


class WallClockExceeded(BaseException):
    """Raised from SIGALRM; a BaseException so budget handlers inside the
    library do not turn it into a per-entry unknown."""


def _alarm(signum, frame):
    raise WallClockExceeded()


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    try:
        budgets = _resolve_budgets(args)
        if args.command == "verify" and args.theorem != "nonschur" and args.p is None:
            ap.error("verify needs --p")
        if budgets["wall_clock"]:
            signal.signal(signal.SIGALRM, _alarm)
            signal.alarm(budgets["wall_clock"])
        return COMMANDS[args.command](args, budgets, out)
    except BudgetExceeded as exc:
        print(f"unknown: budget exhausted ({exc})", file=out)
        return EXIT_UNKNOWN
    except WallClockExceeded:
        print(f"unknown: wall clock budget of {budgets['wall_clock']} s exhausted", file=out)
        return EXIT_UNKNOWN
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if signal.getsignal(signal.SIGALRM) is _alarm:
            signal.alarm(0)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
