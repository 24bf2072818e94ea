"""Command-line front end: ``hfq <subcommand> ...``.

Exit status is 0 on success, 1 on a failed check or bad input values and
2 when an input file cannot be parsed.  ``--json`` switches any command
to JSON output tagged with ``"schema": "hfq-1"``.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import diagram as dg
from .constructions import connected_sum, lens_diagram, merge_basepoints
from .covering import (
    CoveringSpec,
    build_cover,
    find_trivializing_cocycle,
    load_spec,
    spec_to_json,
    validate_cocycle,
    verify_scaling,
)
from .errors import DiagramParseError, HFQError
from .grading import grading_table
from .lens_oracle import compare_with_engine, os_absolute_grading
from .spinc import INFINITE, spinc_partition

SCHEMA = "hfq-1"


class UsageError(HFQError):
    pass


def _rat(x) -> str:
    if x == INFINITE:
        return "inf"
    return str(Fraction(x))


def _emit(args, text_lines: list[str], payload: dict) -> None:
    if args.json:
        print(json.dumps({"schema": SCHEMA, **payload}, indent=1, sort_keys=True))
    else:
        for line in text_lines:
            print(line)


def _gen_name(gen) -> str:
    return "{" + ",".join(str(v) for v in gen) + "}"


def select_generator(diagram: dg.Diagram, gens: list, token: str):
    """``g<k>`` is the k-th enumerated generator; ``x<i>`` is vertex i on a one-curve diagram."""
    try:
        if token.startswith("g"):
            k = int(token[1:])
            if not 0 <= k < len(gens):
                raise UsageError(f"no generator {token}; there are {len(gens)}")
            return gens[k]
        if token.startswith("x"):
            i = int(token[1:])
            if diagram.num_curves != 1:
                raise UsageError("x<i> selectors need a diagram with one alpha curve")
            if (i,) not in gens:
                raise UsageError(f"vertex {i} is not a generator")
            return (i,)
    except ValueError:
        pass
    raise UsageError(f"bad generator selector {token!r}; use g<k> or x<i>")


def _write_or_print(d: dg.Diagram, out: str | None) -> None:
    if out:
        dg.dump(d, out)
    else:
        print(dg.dumps(d))


# ------------------------------------------------------------- commands


def cmd_validate(args) -> int:
    d = dg.load(args.diagram)
    rep = dg.validate(d)
    lines = ["valid"] if rep.ok else ["invalid"] + [f"  {v}" for v in rep.violations]
    _emit(args, lines, rep.to_json())
    return 0 if rep.ok else 1


def _load_valid(path: str) -> dg.Diagram:
    d = dg.load(path)
    rep = dg.validate(d)
    if not rep.ok:
        raise UsageError(f"{path} is not a valid diagram: {rep.violations[0]}")
    return d


def cmd_generators(args) -> int:
    d = _load_valid(args.diagram)
    gens = list(dg.enumerate_generators(d, args.limit))
    lines = [f"g{k} {_gen_name(g)}" for k, g in enumerate(gens)]
    _emit(args, lines, {"generators": [list(g) for g in gens]})
    return 0


def cmd_spinc(args) -> int:
    d = _load_valid(args.diagram)
    part = spinc_partition(d)
    index = {g: k for k, g in enumerate(part.generators)}
    lines = []
    classes = []
    for c, members in enumerate(part.classes):
        names = " ".join(f"g{index[g]}" for g in members)
        lines.append(f"class {c} ({'torsion' if part.torsion[c] else 'non-torsion'}): {names}")
        classes.append({
            "members": [index[g] for g in members],
            "torsion": part.torsion[c],
            "orders": [_rat(o) for o in part.orders[c]],
        })
    _emit(args, lines, {"generators": [list(g) for g in part.generators], "classes": classes})
    return 0


def cmd_grade(args) -> int:
    d = _load_valid(args.diagram)
    table = grading_table(d)
    gens = list(table.generators)
    if args.pair:
        x, y = (select_generator(d, gens, t) for t in args.pair)
        if (x, y) in table.Gr:
            value = _rat(table.Gr[(x, y)])
            _emit(args, [value], {"x": list(x), "y": list(y), "Gr": value})
        else:
            flag = table.flags[(x, y)]
            _emit(args, [f"undefined ({flag})"], {"x": list(x), "y": list(y), "Gr": None, "flag": flag})
        return 0
    index = {g: k for k, g in enumerate(gens)}
    lines, entries, flags = [], [], []
    for x in gens:
        for y in gens:
            if (x, y) in table.Gr:
                v = _rat(table.Gr[(x, y)])
                lines.append(f"Gr(g{index[x]}, g{index[y]}) = {v}")
                entries.append({"x": index[x], "y": index[y], "Gr": v})
            else:
                lines.append(f"Gr(g{index[x]}, g{index[y]}) undefined ({table.flags[(x, y)]})")
                flags.append({"x": index[x], "y": index[y], "flag": table.flags[(x, y)]})
    payload = {
        "generators": [list(g) for g in gens],
        "Gr": entries,
        "gr": {f"g{index[g]}": v for g, v in table.gr.items()},
        "flags": flags,
    }
    _emit(args, lines, payload)
    return 0


def cmd_lens(args) -> int:
    d = lens_diagram(args.p, args.q)
    if args.out:
        dg.dump(d, args.out)
    if args.oracle:
        report = compare_with_engine(args.p, args.q)
        absolute = os_absolute_grading(args.p, args.q)
        verdict = "AGREE" if report.agree else "DISAGREE"
        lines = [f"x{i} {_rat(v)}" for i, v in enumerate(absolute)]
        lines += [f"{a} {b} {e} {s} {r}" for a, b, e, s, r in report.discrepancies]
        lines.append(f"{verdict} ({report.pairs_checked} pairs)")
        _emit(args, lines, {
            "p": args.p, "q": args.q,
            "absolute": [_rat(v) for v in absolute],
            "pairs_checked": report.pairs_checked,
            "discrepancies": [[a, b, _rat(e) if e is not None else None, _rat(s), _rat(r)]
                              for a, b, e, s, r in report.discrepancies],
            "verdict": verdict,
        })
        return 0 if report.agree else 1
    if not args.out:
        if args.json:
            print(json.dumps({"schema": SCHEMA, "diagram": dg.to_json(d)}, indent=1, sort_keys=True))
        else:
            print(dg.dumps(d))
    elif args.json:
        print(json.dumps({"schema": SCHEMA, "written": args.out}, indent=1, sort_keys=True))
    return 0


def cmd_cover(args) -> int:
    d = _load_valid(args.diagram)
    gens = dg.generators(d)
    if args.auto:
        x, y = (select_generator(d, gens, t) for t in args.auto)
        spec = find_trivializing_cocycle(d, x, y)
        pairs = [(x, y)]
    else:
        spec = load_spec(args.spec)
        rep = validate_cocycle(d, spec)
        if not rep.ok:
            _emit(args, ["invalid cocycle"] + [f"  {v}" for v in rep.violations], rep.to_json())
            return 1
        if args.pair:
            pairs = [tuple(select_generator(d, gens, t) for t in args.pair)]
        else:
            part = spinc_partition(d)
            cls = {g: k for k, m in enumerate(part.classes) for g in m}
            pairs = [
                (x, y) for x in gens for y in gens
                if x != y and part.torsion[cls[x]] and part.torsion[cls[y]]
                and part.orders[cls[x]][cls[y]] != INFINITE
            ]
    cov = build_cover(d, spec)
    if args.out:
        dg.dump(cov.cover_diagram, args.out)
    index = {g: k for k, g in enumerate(gens)}
    lines = [
        f"n = {spec.n}",
        f"cover genus {cov.cover_diagram.genus}, {cov.cover_diagram.num_basepoints} basepoints",
    ]
    checks = []
    ok = True
    for x, y in pairs:
        res = verify_scaling(d, spec, x, y)
        ok &= res.passed
        lines.append(
            f"g{index[x]} g{index[y]}: downstairs {_rat(res.downstairs)}, "
            f"upstairs {res.upstairs_kind} {_rat(res.upstairs)}, n={res.n} "
            f"{'PASS' if res.passed else 'FAIL'}"
        )
        checks.append({"x": index[x], "y": index[y], **res.to_json()})
    lines.append("PASS" if ok else "FAIL")
    _emit(args, lines, {
        "spec": spec_to_json(spec),
        "cover": {"genus": cov.cover_diagram.genus, "basepoints": cov.cover_diagram.num_basepoints},
        "checks": checks,
        "passed": ok,
    })
    return 0 if ok else 1


def cmd_sum(args) -> int:
    d = connected_sum(_load_valid(args.first), _load_valid(args.second))
    _write_or_print(d, args.out)
    return 0


def cmd_merge(args) -> int:
    d = merge_basepoints(_load_valid(args.diagram), args.i, args.j)
    _write_or_print(d, args.out)
    return 0


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hfq", description="Gradings on Heegaard diagrams")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit JSON")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a diagram file")
    p.add_argument("diagram")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("generators", parents=[common], help="list generators")
    p.add_argument("diagram")
    p.add_argument("--limit", type=int, default=None)
    p.set_defaults(func=cmd_generators)

    p = sub.add_parser("spinc", parents=[common], help="Spin^c classes of generators")
    p.add_argument("diagram")
    p.set_defaults(func=cmd_spinc)

    p = sub.add_parser("grade", parents=[common], help="relative Q-grading table")
    p.add_argument("diagram")
    p.add_argument("--pair", nargs=2, metavar=("X", "Y"))
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("lens", parents=[common], help="lens space diagram and oracle check")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.add_argument("--out")
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(func=cmd_lens)

    p = sub.add_parser("cover", parents=[common], help="check Gr against a cyclic cover")
    p.add_argument("diagram")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--auto", nargs=2, metavar=("X", "Y"))
    g.add_argument("--spec")
    p.add_argument("--pair", nargs=2, metavar=("X", "Y"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("sum", parents=[common], help="connected sum of two diagrams")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sum)

    p = sub.add_parser("merge", parents=[common], help="join two basepoints by a tube")
    p.add_argument("diagram")
    p.add_argument("i", type=int)
    p.add_argument("j", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_merge)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiagramParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HFQError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
