"""Command-line entry point.

Exit codes: 0 on success or a true verdict, 1 on a false verdict (not a
member, not acyclic, A/U disagreement, Laurent violation), 2 on usage,
parse or validation errors. Mutation indices on the command line are 1-based.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from typing import Sequence

from . import __version__
from .explore import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_MAX_SEEDS,
    all_words,
    collect_cluster_variables,
    explore_exchange_graph,
    laurent_audit,
)
from .locality import (
    NotAcyclic,
    NotFiniteType,
    acyclic_a_membership,
    au_differential,
    build_isolated_cover,
    find_sink,
    freeze,
    is_acyclic,
    upper_membership_bounded,
)
from .parse import ParseError, parse_element, read_seed_file
from .seed import InvalidSeed, LaurentViolation, Seed, mutate_word


class UsageError(Exception):
    pass


def _seed_report(seed: Seed) -> dict:
    return {
        "rank": seed.rank,
        "cluster": [p.as_fraction() for p in seed.cluster],
        "coefficients": [str(seed.y_poly(i)) for i in range(seed.rank)],
        "B": seed.B.tolist(),
        "symmetrizer": list(seed.B.symmetrizer),
    }


def _seed_text(seed: Seed) -> list[str]:
    rows = "[" + ", ".join("[" + ", ".join(map(str, r)) + "]" for r in seed.B.entries) + "]"
    return [
        f"rank: {seed.rank}",
        "x: " + ", ".join(p.as_fraction() for p in seed.cluster),
        "y: " + ", ".join(str(seed.y_poly(i)) for i in range(seed.rank)),
        f"B: {rows}",
    ]


def _parse_word(text: str, rank: int) -> list[int]:
    word = []
    for part in filter(None, (p.strip() for p in text.split(","))):
        try:
            k = int(part)
        except ValueError:
            raise UsageError(f"mutation index {part!r} is not an integer") from None
        if not 1 <= k <= rank:
            raise UsageError(f"mutation index {k} out of range 1..{rank}")
        word.append(k - 1)
    return word


def cmd_validate(args, sf, seed):
    report = {"name": sf.name, "valid": True, **_seed_report(seed)}
    text = [f"valid: {sf.name}, rank {seed.rank}, {len(sf.frozen)} frozen, symmetrizer {list(seed.B.symmetrizer)}"]
    return 0, report, text


def cmd_mutate(args, sf, seed):
    word = _parse_word(args.at, seed.rank)
    out = mutate_word(seed, word)
    report = {"word": [k + 1 for k in word], **_seed_report(out)}
    return 0, report, [f"word: {[k + 1 for k in word]}"] + _seed_text(out)


def _explore_report(seed, args):
    g = explore_exchange_graph(seed, args.max_depth, args.max_seeds)
    variables = [p.as_fraction() for p in collect_cluster_variables(g)]
    report = {
        "closed": g.closed,
        "seeds": len(g.nodes),
        "edges": len(g.edges),
        "depth": g.depth,
        "variables": variables,
    }
    status = "closed" if g.closed else "not closed"
    text = [f"{status}, {len(g.nodes)} seeds, {len(variables)} variables"] + variables
    return report, text


def cmd_explore(args, sf, seed):
    report, text = _explore_report(seed, args)
    return 0, report, text


def cmd_vars(args, sf, seed):
    report, text = _explore_report(seed, args)
    return 0, {"closed": report["closed"], "variables": report["variables"]}, text[1:]


def cmd_is_acyclic(args, sf, seed):
    acyclic = is_acyclic(seed.B)
    sink = find_sink(seed.B)
    report = {"acyclic": acyclic, "sink": None if sink is None else sink + 1}
    text = ["acyclic" if acyclic else "not acyclic"]
    if sink is not None:
        text.append(f"sink: {sink + 1} ({seed.cluster[sink].as_fraction()})")
    return (0 if acyclic else 1), report, text


def cmd_freeze(args, sf, seed):
    names = [n.strip() for n in args.at.split(",") if n.strip()]
    xs = seed.cluster_names()
    for n in names:
        if n not in xs:
            raise UsageError(f"{n!r} is not a mutable variable of {sf.name}")
    f = freeze(seed, [xs.index(n) for n in names])
    report, text = _explore_report(f.seed, args)
    full = {"frozen": list(f.frozen_names), **_seed_report(f.seed), **report}
    return 0, full, [f.label] + _seed_text(f.seed) + text


def cmd_cover(args, sf, seed):
    leaves = build_isolated_cover(seed)
    report = {
        "leaves": [
            {"frozen": list(l.seed.frozen_names), "P": {v: str(p) for v, p in l.P.items()}} for l in leaves
        ]
    }
    text = []
    for l in leaves:
        consts = ", ".join(f"P[{v}] = {p}" for v, p in l.P.items())
        text.append(f"{l.label}  {consts}".rstrip())
    return 0, report, text


def cmd_member(args, sf, seed):
    a = parse_element(args.element, seed.names)
    if args.algebra == "A":
        verdict = acyclic_a_membership(seed, a)
    else:
        verdict = upper_membership_bounded(seed, a, args.depth, args.max_seeds)
    report = {"element": str(a), "in": args.algebra, **verdict.as_dict()}
    text = [("member" if verdict.member else "not member") + f" of {args.algebra}: {a.as_fraction()}"]
    if verdict.exhaustive is not None:
        text.append("exhaustive" if verdict.exhaustive else "not exhaustive (exchange graph did not close)")
    w = verdict.witness
    if w is not None:
        text.append(f"witness: {w.where}")
        if w.monomial is not None:
            text.append(f"  monomial: {w.monomial}")
        text.append(f"  coefficient: {w.coefficient}")
        text.append(f"  divisor: {w.divisor}")
    return (0 if verdict.member else 1), report, text


def cmd_check_au(args, sf, seed):
    r = au_differential(seed, args.samples, args.rng, args.max_seeds)
    text = [f"agree {r.agree}/{r.total} (members {r.members})"]
    text += [f"disagreement: {e}" for e in r.disagreements]
    return (0 if r.agree == r.total else 1), r.as_dict(), text


def cmd_laurent_audit(args, sf, seed):
    words = all_words(seed.rank, args.depth)
    if args.random:
        rng = random.Random(args.rng)
        for _ in range(args.random):
            words.append(tuple(rng.randrange(seed.rank) for _ in range(rng.randint(0, args.depth))))
    try:
        r = laurent_audit(seed, words)
    except LaurentViolation as exc:
        report = {"passed": False, "word": [k + 1 for k in exc.word], "step": exc.step}
        return 1, report, [f"failed: {exc}"]
    report = {"passed": True, "words": len(r.entries), "max_terms": r.max_terms}
    return 0, report, [f"passed: {len(r.entries)} words up to length {args.depth}, max terms {r.max_terms}"]


COMMANDS = {
    "validate": cmd_validate,
    "mutate": cmd_mutate,
    "explore": cmd_explore,
    "vars": cmd_vars,
    "is-acyclic": cmd_is_acyclic,
    "freeze": cmd_freeze,
    "cover": cmd_cover,
    "member": cmd_member,
    "check-au": cmd_check_au,
    "laurent-audit": cmd_laurent_audit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="clusteralg", description="Exact cluster algebra computations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        p.add_argument("seed_file")
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        return p

    def bounds(p):
        p.add_argument("--max-depth", type=int, default=DEFAULT_MAX_DEPTH)
        p.add_argument("--max-seeds", type=int, default=DEFAULT_MAX_SEEDS)

    add("validate", "check a seed file")
    add("mutate", "apply a mutation word").add_argument("--at", required=True, help="1-based indices, e.g. 1,2,1")
    bounds(add("explore", "explore the exchange graph"))
    bounds(add("vars", "list cluster variables"))
    add("is-acyclic", "test the exchange matrix for directed cycles")
    p = add("freeze", "freeze cluster variables")
    p.add_argument("--at", required=True, help="variable names, e.g. x1,x2")
    bounds(p)
    add("cover", "isolated cover of an acyclic seed")
    p = add("member", "membership in A or U")
    p.add_argument("--element", required=True)
    p.add_argument("--in", dest="algebra", choices=["A", "U"], required=True)
    p.add_argument("--depth", type=int, default=DEFAULT_MAX_DEPTH)
    p.add_argument("--max-seeds", type=int, default=DEFAULT_MAX_SEEDS)
    p = add("check-au", "compare A- and U-membership on random elements")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--rng", type=int, default=0)
    p.add_argument("--max-seeds", type=int, default=DEFAULT_MAX_SEEDS)
    p = add("laurent-audit", "mutate along all words and check exact division")
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--random", type=int, default=0, help="extra random words")
    p.add_argument("--rng", type=int, default=0)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for bound in ("max_depth", "max_seeds", "depth", "samples", "random"):
        if getattr(args, bound, 0) is not None and getattr(args, bound, 0) < 0:
            parser.error(f"--{bound.replace('_', '-')} must be nonnegative")
    try:
        sf = read_seed_file(args.seed_file)
        seed = sf.to_seed()
        code, report, text = COMMANDS[args.command](args, sf, seed)
    except (OSError, ParseError, InvalidSeed, NotAcyclic, NotFiniteType, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print("\n".join(text))
    return code


if __name__ == "__main__":
    sys.exit(main())
