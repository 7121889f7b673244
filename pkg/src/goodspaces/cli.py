"""Command-line front end.

Exit codes: 0 on any computed result (Unknown verdicts included), 2 on parse
or validation errors, 3 when a size limit is hit.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .actions import brute_force_nilpotency, is_nilpotent_action, triangular_sl2_action
from .classifier import classify, classify_profile
from .errors import ResourceLimitError, ValidationError
from .exprcalc import (
    ClassifyingSpace,
    GroupExpr,
    descriptor_of,
    euler_characteristic,
    free_factors,
    finite_order,
    kurosh_kernel_rank,
    parse_expr,
    parse_group_expr,
    to_text,
)
from .groups import lower_p_central_series, o_p_residual, sylow_subgroup
from .homology import bar_homology_oracle, has_closed_form, homology_comparison, space_homology
from .io import finite_group_from_text, load_action, load_representation
from .numtheory import require_prime
from .rings import parse_ring
from .zlattice import (
    EnumerationSpec,
    IntegerRepresentation,
    series_report,
    verify_nilpotent_iff_trivial,
)


def _fraction(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _space(text: str):
    e = parse_expr(text)
    return ClassifyingSpace(e) if isinstance(e, GroupExpr) else e


def _primes(text: str) -> list[int]:
    try:
        ps = sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise ValidationError(f"bad prime list {text!r}") from None
    if not ps:
        raise ValidationError("prime list is empty")
    return [require_prime(q) for q in ps]


def _range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise ValidationError(f"bad entry range {text!r}; expected LO:HI") from None
    return lo, hi


# each handler returns (payload for --json, text lines)


def cmd_classify(args):
    e = parse_expr(args.expr)
    j = classify(e, parse_ring(args.ring))
    lines = [f"{to_text(e)} over {j.ring.text()}: {j.verdict.value}"]
    lines += [f"  [{s.rule}] {s.citation} @ {s.at}" for s in j.trace]
    lines += [f"  note: {n}" for n in j.notes]
    return {"expr": to_text(e), "judgment": j.to_dict()}, lines


def cmd_profile(args):
    e = parse_expr(args.expr)
    prof = classify_profile(e, _primes(args.primes))
    lines = [f"{to_text(e)}"] + [f"  p={q}: {j.verdict.value} ({j.rule})" for q, j in prof.items()]
    return {"expr": to_text(e), "profile": {str(q): j.to_dict() for q, j in prof.items()}}, lines


def cmd_nilpotent_action(args):
    if (args.file is None) == (args.sl2 is None):
        raise ValidationError("give exactly one of an action FILE or --sl2 P")
    a = load_action(args.file) if args.file else triangular_sl2_action(args.sl2)
    d = is_nilpotent_action(a)
    brute = brute_force_nilpotency(a) if args.brute_force else None
    obstruction = None if d.obstruction is None else [a.target.names[x] for x in d.obstruction.elements]
    payload = {
        "actor_order": a.actor.order,
        "target_order": a.target.order,
        "nilpotent": d.nilpotent,
        "series": d.series.orders,
        "stabilized": d.series.stabilized,
        "obstruction": obstruction,
        "brute_force": brute,
    }
    lines = [
        f"nilpotent: {'yes' if d.nilpotent else 'no'}",
        "series orders: " + " > ".join(map(str, d.series.orders)),
    ]
    if obstruction is not None:
        lines.append(f"stuck at subgroup of order {len(obstruction)}")
    if brute is not None:
        lines.append(f"brute force: {'yes' if brute else 'no'}")
    return payload, lines


def cmd_kernel_rank(args):
    e = parse_group_expr(args.expr)
    rank = kurosh_kernel_rank(e, args.p)
    q = 1
    for f in free_factors(e):
        q *= finite_order(f) or 1
    chi = euler_characteristic(e)
    payload = {"expr": to_text(e), "p": args.p, "rank": rank, "quotient_order": q, "euler_characteristic": _fraction(chi)}
    return payload, [str(rank)]


def cmd_euler(args):
    e = parse_group_expr(args.expr)
    chi = _fraction(euler_characteristic(e))
    return {"expr": to_text(e), "euler_characteristic": chi}, [chi]


def cmd_homology(args):
    ring = parse_ring(args.ring)
    s = _space(args.space)
    if args.compare:
        t = _space(args.compare)
        cmp = homology_comparison(s, t, ring, args.max_degree)
        payload = {
            "left": to_text(s),
            "right": to_text(t),
            "equal": cmp.equal,
            "left_homology": cmp.left.to_dict(),
            "right_homology": cmp.right.to_dict(),
            "notes": list(cmp.notes),
        }
        lines = [
            f"{to_text(s)}: {cmp.left.text()}",
            f"{to_text(t)}: {cmp.right.text()}",
            f"equal over {ring.text()}: {'yes' if cmp.equal else 'no'}",
        ] + [f"note: {n}" for n in cmp.notes]
        return payload, lines
    h = space_homology(s, ring, args.max_degree)
    return {"space": to_text(s), "homology": h.to_dict()}, [f"{to_text(s)} over {ring.text()}: {h.text()}"]


def cmd_series(args):
    p = require_prime(args.p)
    G = finite_group_from_text(args.group)
    chain = lower_p_central_series(G, p)
    payload = {
        "group": to_text(parse_group_expr(args.group)),
        "p": p,
        "order": G.order,
        "lower_p_central": chain.orders,
        "reaches_trivial": chain.reaches_trivial,
        "sylow_order": sylow_subgroup(G, p).order,
        "o_p_order": o_p_residual(G, p)[0].order,
    }
    lines = [
        "lower p-central series: " + " > ".join(map(str, chain.orders)),
        f"Sylow {p}-subgroup order: {payload['sylow_order']}",
        f"O^{p} order: {payload['o_p_order']}",
    ]
    return payload, lines


def cmd_zlattice(args):
    if args.enumerate:
        lo, hi = _range(args.entries)
        ranks = tuple(sorted({int(r) for r in args.ranks.split(",")}))
        max_order = args.max_order or 6
        spec = EnumerationSpec(ranks=ranks, entry_min=lo, entry_max=hi, max_order=max_order)
        report = verify_nilpotent_iff_trivial(spec)
        payload = {"parameters": {"ranks": list(ranks), "entries": [lo, hi], "max_order": max_order}}
        payload.update(report.to_dict())
        lines = [
            f"checked {report.checked} representations, {report.nilpotent} nilpotent, "
            f"{report.trivial} trivial, {len(report.counterexamples)} counterexamples"
        ]
        return payload, lines
    if args.file is None:
        raise ValidationError("give a representation FILE or --enumerate")
    rep: IntegerRepresentation = load_representation(args.file, args.max_order or 24)
    r = series_report(rep)
    lines = [
        f"nilpotent: {'yes' if r['nilpotent'] else 'no'}",
        "rational dims: " + " > ".join(map(str, r["rational_dims"])),
        f"lattice series: {r['lattice_series']}",
    ]
    return r, lines


def cmd_oracle(args):
    ring = parse_ring(args.ring)
    e = parse_group_expr(args.group)
    G = finite_group_from_text(args.group)
    h = bar_homology_oracle(G, ring, args.max_degree)
    closed = None
    if has_closed_form(descriptor_of(e)):
        closed = space_homology(ClassifyingSpace(e), ring, args.max_degree)
    agree = None if closed is None else closed.entries == h.entries
    payload = {
        "group": to_text(e),
        "oracle": h.to_dict(),
        "closed_form": None if closed is None else closed.to_dict(),
        "agree": agree,
    }
    lines = [f"bar complex: {h.text()}"]
    if closed is not None:
        lines.append(f"closed form: {closed.text()} ({'agree' if agree else 'DISAGREE'})")
    return payload, lines


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="goodspaces", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"goodspaces {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, handler, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(handler=handler)
        return p

    p = add("classify", cmd_classify, "R-good / R-bad verdict with derivation trace")
    p.add_argument("expr")
    p.add_argument("--ring", required=True, help="p:<prime> | Z | Zinv:<primes> | Zinv:~<primes> | Zmod:<n>")

    p = add("profile", cmd_profile, "verdicts at several primes")
    p.add_argument("expr")
    p.add_argument("--primes", default="2,3,5,7")

    p = add("nilpotent-action", cmd_nilpotent_action, "decide nilpotency of a finite action")
    p.add_argument("file", nargs="?", help="action JSON file")
    p.add_argument("--sl2", type=int, help="use the triangular SL(2,p) action on F_p^2")
    p.add_argument("--brute-force", action="store_true", help="also run the filtration search")

    p = add("kernel-rank", cmd_kernel_rank, "rank of the free kernel onto the product of finite factors")
    p.add_argument("expr")
    p.add_argument("--p", type=int, required=True)

    p = add("euler", cmd_euler, "rational Euler characteristic")
    p.add_argument("expr")

    p = add("homology", cmd_homology, "homology over F_p or Z")
    p.add_argument("space")
    p.add_argument("--ring", required=True)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--compare", metavar="SPACE", help="compare with a second space")

    p = add("series", cmd_series, "lower p-central series, Sylow and O^p orders")
    p.add_argument("group")
    p.add_argument("--p", type=int, required=True)

    p = add("zlattice", cmd_zlattice, "nilpotency of finite-order integer representations")
    p.add_argument("file", nargs="?")
    p.add_argument("--enumerate", action="store_true", help="check every matrix in a bounded family")
    p.add_argument("--ranks", default="1,2,3")
    p.add_argument("--entries", default="-2:2")
    p.add_argument("--max-order", type=int, help="order bound (default 6 when enumerating, 24 for files)")

    p = add("oracle", cmd_oracle, "bar-complex homology of a small finite group")
    p.add_argument("group")
    p.add_argument("--ring", required=True)
    p.add_argument("--max-degree", type=int, default=4)
    return ap


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.handler(args)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload, lines = result
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print("\n".join(lines))
    return 0


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
