"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 budget exceeded, 4 sweep failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

from .blocks import block_road_decomposition, is_normal_braid, is_normal_braid_syllables
from .braid import (
    BraidParseError,
    BudgetExceeded,
    PositiveBraid,
    delta_divides,
    format_word,
    garside_normal_form,
    isolated_sigma2_decomposition,
    parse_braid_word,
)
from .kernel import DEFAULT_KERNEL_BUDGET, DEFAULT_PRIMES, check_kernel, verify_theorem_sweep
from .laurent import burau_of_word, is_prime, reduce_mod, specialize_rational
from .paths import MERGED, DEFAULT_PATH_BUDGET, admissible_weighted_count, distinguished_partner, enumerate_paths, path_weight, weighted_count
from .svg import DEFAULT_RENDER_BUDGET, DiagramBudgetExceeded, render_paths_svg
from .weak import is_weakly_normal

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_SWEEP = 4


class UsageError(ValueError):
    """Bad option values; reported like a parse error."""


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def _read_input(args) -> str:
    if getattr(args, "file", None):
        with open(args.file, encoding="utf-8") as fh:
            return fh.read()
    return " ".join(args.braid)


def _word(args):
    return parse_braid_word(_read_input(args))


def _positive(args) -> PositiveBraid:
    w = _word(args)
    if not w.is_positive():
        raise UsageError("this subcommand needs a positive word")
    return PositiveBraid.from_word(tuple(w))


def _primes(args) -> list[int]:
    if args.primes is None:
        return list(DEFAULT_PRIMES)
    try:
        primes = [int(x) for x in args.primes.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"bad prime list {args.primes!r}") from exc
    for t in primes:
        if not is_prime(t):
            raise UsageError(f"{t} is not prime")
    return primes


def _endpoint(text: str):
    if text in ("13", "1/3", "merged"):
        return MERGED
    if text in ("1", "2", "3"):
        return int(text)
    raise UsageError(f"bad endpoint {text!r}; use 1, 2, 3 or 13")


def _row(text: str) -> int:
    if text not in ("1", "2", "3"):
        raise UsageError(f"bad start vertex {text!r}")
    return int(text)


# ---------------------------------------------------------------------------
# Subcommands.

def cmd_normalize(args) -> int:
    w = _word(args)
    g = garside_normal_form(tuple(w))
    payload = {"input": list(w), "garside": g.to_json(), "minimal": list(g.tail.word) if g.k == 0 else None}
    lines = []
    if not len(w):
        lines.append("identity")
    if g.k == 0:
        lines.append(f"minimal: {format_word(g.tail.word) or '(identity)'}")
    lines.append(f"garside: k={g.k} tail={format_word(g.tail.word) or '(identity)'}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _parse_at(text: str) -> tuple[int, int]:
    try:
        if "/" in text:
            a, b = text.split("/", 1)
            return int(a), int(b)
        return int(text), 1
    except ValueError as exc:
        raise UsageError(f"bad value {text!r} for --at; use A or A/B") from exc


def cmd_burau(args) -> int:
    w = _word(args)
    m = burau_of_word(tuple(w))
    if args.mod is not None and args.at is not None:
        raise UsageError("--mod and --at are exclusive")
    if args.mod is not None:
        if not is_prime(args.mod):
            raise UsageError(f"{args.mod} is not prime")
        m = reduce_mod(m, args.mod)
    if args.at is not None:
        a, b = _parse_at(args.at)
        if b == 0:
            raise UsageError("denominator must be nonzero")
        values = specialize_rational(m, a, b)
        payload = {"at": str(Fraction(a, b)), "matrix": [[str(x) for x in row] for row in values]}
        text = "\n".join("  ".join(f"{str(x):>12}" for x in row) for row in values)
        _emit(args, payload, text)
        return EXIT_OK
    payload = {"matrix": m.to_json()}
    if args.mod is not None:
        payload["mod"] = args.mod
    _emit(args, payload, str(m))
    return EXIT_OK


def cmd_paths(args) -> int:
    P = _positive(args)
    r, s = _row(args.r), _endpoint(args.s)
    budget = args.budget or DEFAULT_PATH_BUDGET
    walks = enumerate_paths(P, r, s, budget)
    records = []
    for x in walks:
        partner = distinguished_partner(x)
        rec = x.to_json()
        rec["admissible"] = partner is None
        if partner is not None:
            rec["pair"] = {"kind": partner[0], "partner": list(partner[1].vertices)}
        records.append(rec)
    total = weighted_count(P, r, s)
    adm = admissible_weighted_count(P, r, s, budget)
    payload = {"braid": P.to_json(), "r": r, "s": str(s), "paths": records,
               "weighted_count": total.to_json(), "admissible_weighted_count": adm.to_json()}
    lines = [f"({r},{s})-type walks of {P}: {len(walks)}"]
    for x, rec in zip(walks, records):
        w = path_weight(x)
        tag = "admissible" if rec["admissible"] else rec["pair"]["kind"]
        lines.append(f"  {x}  {'+' if w.sign > 0 else '-'}q^{w.degree}  {tag}")
    lines.append(f"weighted count: {total}")
    lines.append(f"admissible count: {adm}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_decompose(args) -> int:
    P = _positive(args)
    dec = block_road_decomposition(P)
    segs = isolated_sigma2_decomposition(P)
    payload = {"braid": P.to_json(), "pieces": dec.to_json(), "segments": [s.to_json() for s in segs]}
    lines = [f"minimal form: {P}", "blocks and roads:"]
    word = P.word
    for item in dec.to_json():
        lo, hi = item["span"]
        label = item.get("type", "road")
        extra = f" ({item['class']})" if "class" in item else ""
        lines.append(f"  {label}{extra} [{lo},{hi}) {format_word(word[lo:hi]) or '-'}")
    lines.append("sigma_2 segments:")
    for s in segs:
        lo, hi = s.letters
        t = f" type {s.type}" if s.type else ""
        lines.append(f"  {s.kind}{t} [{lo},{hi}) {format_word(word[lo:hi]) or '-'}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_classify(args) -> int:
    P = _positive(args)
    normal = is_normal_braid(P)
    weak = is_weakly_normal(P, include_initial=args.include_initial)
    payload = {
        "braid": P.to_json(),
        "delta_divisible": delta_divides(P),
        "normal": normal.to_json(P),
        "normal_syllables": is_normal_braid_syllables(P),
        "weak": weak.to_json(P),
    }
    lines = [
        f"minimal form: {P}",
        f"delta divisible: {'yes' if payload['delta_divisible'] else 'no'}",
        f"normal: {'yes' if normal.normal else 'no'}",
    ]
    for b in normal.abnormal_blocks:
        lines.append(f"  abnormal {b.kind}-block at p={b.p} {list(b.letters)}")
    lines.append(f"weakly normal: {'yes' if weak.weakly_normal else 'no'}")
    for s in weak.strings:
        tag = f"terminal ({s.terminal_clause})" if s.terminal_clause else "not terminal"
        lines.append(f"  string of {s.k} block(s) ending at {s.end}: {s.sign}, {tag}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_check(args) -> int:
    w = _word(args)
    v = check_kernel(tuple(w), _primes(args), args.budget or DEFAULT_KERNEL_BUDGET)
    lines = [f"status: {v.status}", f"garside: k={v.k} tail={format_word(v.tail) or '(identity)'}"]
    if v.certificate:
        c = v.certificate
        lines.append(f"certificate: {c['theorem']} row {c['row']} mod {c['prime']}")
        for e in c["leading_entries"]:
            lines.append(f"  entry ({c['row']},{e['s']}): {e['coefficient']} q^{e['degree']}")
    if v.direct_check:
        d = v.direct_check
        where = f"mod {d['prime']}" if d["prime"] else "over the integers"
        lines.append(f"direct: entry {tuple(d['entry'])} differs from the power of Delta {where}")
    if v.reason:
        lines.append(f"reason: {v.reason}")
    _emit(args, v.to_json(), "\n".join(lines))
    if v.status == "unknown" and "budget" in v.reason:
        return EXIT_BUDGET
    return EXIT_OK


def cmd_scan(args) -> int:
    if args.max_len is None or args.max_len < 1:
        raise UsageError("scan needs --max-len N with N >= 1")
    if args.budget is not None and args.max_len > args.budget:
        print(f"max length {args.max_len} exceeds budget {args.budget}", file=sys.stderr)
        return EXIT_BUDGET
    primes = _primes(args)
    on_record = (lambda rec: print(json.dumps(rec, sort_keys=True))) if args.json else None
    stats = verify_theorem_sweep(args.max_len, primes, on_record=on_record)
    if args.json:
        print(json.dumps({"summary": stats.to_json()}, sort_keys=True))
    else:
        print(f"{'L':>3} {'total':>7} {'normal':>7} {'weak':>7} {'neither':>7} {'frac':>7}")
        frac = stats.normal_fraction
        for L, c in sorted(stats.counts.items()):
            print(f"{L:>3} {c['total']:>7} {c['normal']:>7} {c['weakly_normal']:>7} {c['neither']:>7} {frac[L]:>7.4f}")
        print(f"failures: {len(stats.failures)}")
        for f in stats.failures[:20]:
            print(f"  {format_word(f['word'])} ({f['class']}) mod {f['primes']}")
    return EXIT_SWEEP if stats.failures else EXIT_OK


def cmd_diagram(args) -> int:
    P = _positive(args)
    r, s = _row(args.r), _endpoint(args.s)
    svg = render_paths_svg(P, r, s, args.budget or DEFAULT_RENDER_BUDGET)
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(svg)
        if args.json:
            print(json.dumps({"svg": args.svg}))
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="burau4", description="Burau matrices and kernel checks for four-strand braids.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget", type=int, default=None, help="search or render budget")
    braid = argparse.ArgumentParser(add_help=False)
    braid.add_argument("braid", nargs="*", help="braid word, e.g. '1 2^2 -3'")
    braid.add_argument("--file", help="read the braid word from a file")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common, braid], help="minimal form and Garside form")
    p.set_defaults(func=cmd_normalize)
    p = sub.add_parser("burau", parents=[common, braid], help="Burau matrix")
    p.add_argument("--mod", type=int, default=None, metavar="T", help="reduce coefficients mod a prime")
    p.add_argument("--at", default=None, metavar="A/B", help="evaluate at a rational q")
    p.set_defaults(func=cmd_burau)
    p = sub.add_parser("paths", parents=[common, braid], help="walks of a given type with weights")
    p.add_argument("-r", required=True, help="start vertex")
    p.add_argument("-s", required=True, help="end vertex: 1, 2, 3 or 13")
    p.set_defaults(func=cmd_paths)
    p = sub.add_parser("decompose", parents=[common, braid], help="blocks, roads and sigma_2 segments")
    p.set_defaults(func=cmd_decompose)
    p = sub.add_parser("classify", parents=[common, braid], help="normal and weakly normal verdicts")
    p.add_argument("--include-initial", action="store_true", help="let an opening 2-block head an abnormal string")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("check", parents=[common, braid], help="kernel verdict with certificate")
    p.add_argument("--primes", default=None, metavar="LIST", help="comma separated primes (default 5,7)")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("scan", parents=[common], help="exhaustive row-property sweep")
    p.add_argument("--max-len", type=int, default=None, metavar="N")
    p.add_argument("--primes", default=None, metavar="LIST")
    p.set_defaults(func=cmd_scan)
    p = sub.add_parser("diagram", parents=[common, braid], help="SVG picture of walks")
    p.add_argument("-r", required=True, help="start vertex")
    p.add_argument("-s", required=True, help="end vertex: 1, 2, 3 or 13")
    p.add_argument("--svg", default=None, metavar="PATH", help="output file (default stdout)")
    p.set_defaults(func=cmd_diagram)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (BraidParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (BudgetExceeded, DiagramBudgetExceeded) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
