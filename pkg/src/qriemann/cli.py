"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import spaces as sp
from ._parse import ParseError

SUITE_ORDER = ["sq2", "structure", "hodge", "cp2", "cp3", "distance", "braided", "repr", "z2", "confluence"]


class UsageError(Exception):
    pass


def _load_space(args):
    if getattr(args, "space_file", None):
        try:
            with open(args.space_file, encoding="utf-8") as fh:
                return sp.import_space(fh.read())
        except OSError as exc:
            raise UsageError(f"cannot read {args.space_file}: {exc.strerror}") from None
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad space file {args.space_file}: {exc}") from None
    name = args.space or "sq2"
    if name == "sq2" and getattr(args, "c", None) is not None:
        return sp.sq2(args.variant or "complex", c=args.c)
    try:
        return sp.preset(name, args.variant)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(payload, text, as_json, out):
    if as_json:
        out.write(json.dumps(payload, indent=2) + "\n")
    else:
        out.write(text.rstrip("\n") + "\n")


def _cmd_normal_form(args, out):
    space = _load_space(args)
    results = [str(space.element(expr)) for expr in args.expression]
    payload = [{"input": e, "normal_form": r} for e, r in zip(args.expression, results, strict=True)]
    _emit(payload if len(payload) > 1 else payload[0], "\n".join(results), args.json is True, out)
    return 0


def _cmd_geometry(args, out):
    space = _load_space(args)
    if space.metric is None:
        raise UsageError(f"space {space.name!r} carries no metric")
    res = space.compute(args.ricci_variant)
    d = res.to_dict()
    lines = [f"space: {d['space']} ({d['variant']})", f"scalar_curvature: {d['scalar_curvature']}"]
    for key in ("connection", "curvature", "ricci"):
        for a, row in enumerate(d[key]):
            for b, x in enumerate(row):
                lines.append(f"{key}[{a}][{b}]: {x}")
    for a, x in enumerate(d["torsion"]):
        lines.append(f"torsion[{a}]: {x}")
    _emit(d, "\n".join(lines), args.json is not False, out)
    return 0


def _state(text):
    if text.lower() in ("inf", "north", "infinity"):
        return None
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"state must be an integer or 'inf', got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("state index must be non-negative")
    return v


def _cmd_distance(args, out):
    from . import distance as dist

    if (args.space or "sq2") != "sq2" or args.space_file:
        raise UsageError("distances are only defined on sq2")
    try:
        series = dist.solve_distance_series(args.q, float(args.c if args.c is not None else 1), args.terms, exact_terms=1)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    m, n = args.m, args.n
    if m is not None and n is not None and m < n:
        m, n = n, m
    if m is not None and n is None:
        m, n = None, m
    try:
        report = dist.distance_report(m, n, series, args.tol)
    except dist.TruncationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for key in ("m", "n"):
        if report[key] is None:
            report[key] = "inf"
    report["distance"] = abs(report["distance"])
    text = f"d({report['m']}, {report['n']}) = {report['distance']:.12g} (tail bound {report['tail_bound']:.3g})"
    _emit(report, text, args.json is not False, out)
    return 0


def _report(suites, args, out):
    ok = all(c["pass"] for checks in suites.values() for c in checks.values())
    lines = []
    for name, checks in suites.items():
        for check, r in checks.items():
            mark = "PASS" if r["pass"] else "FAIL"
            lines.append(f"{mark} {name}/{check}: residual {r['residual']:.3g} (threshold {r['threshold']:.3g})")
    _emit(suites if len(suites) > 1 else next(iter(suites.values())), "\n".join(lines), args.json is not False, out)
    return 0 if ok else 1


def _cmd_verify(args, out):
    from . import verify

    names = list(SUITE_ORDER) if args.all or not args.suites else args.suites
    unknown = [n for n in names if n not in verify.SUITES]
    if unknown:
        raise UsageError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(SUITE_ORDER)}")
    return _report(verify.run_suites(names), args, out)


def _cmd_repr_check(args, out):
    from . import verify

    try:
        checks = verify.suite_repr(args.q, float(args.c if args.c is not None else 1), args.k_max)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return _report({"repr": checks}, args, out)


def _cmd_export_space(args, out):
    out.write(sp.export_space(_load_space(args)))
    return 0


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--space", help=f"preset name ({', '.join(sp.PRESETS)})")
    src.add_argument("--space-file", metavar="PATH", help="space definition JSON")
    common.add_argument("--variant", help="sq2 variant: complex or riemannian")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="json", action="store_const", const=True, default=None)
    fmt.add_argument("--text", dest="json", action="store_const", const=False)

    parser = argparse.ArgumentParser(prog="qriemann", description="Exact geometry on quantum spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normal-form", parents=[common], help="canonical form of expressions")
    p.add_argument("expression", nargs="+")
    p.add_argument("--c", help="expression substituted for c (sq2)")
    p.set_defaults(func=_cmd_normal_form)

    p = sub.add_parser("geometry", parents=[common], help="connection, curvature, Ricci")
    p.add_argument("--c", help="expression substituted for c (sq2)")
    p.add_argument("--ricci-variant", choices=["left", "right"], default="left")
    p.set_defaults(func=_cmd_geometry)

    p = sub.add_parser("distance", parents=[common], help="spectral distance between states of sq2")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--m", type=_state, default=None, help="state index or 'inf' (north pole)")
    p.add_argument("--n", type=_state, default=0)
    p.add_argument("--terms", type=_positive_int, default=10_000)
    p.add_argument("--tol", type=float, default=None, help="fail when the tail bound exceeds this")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suites", nargs="*", metavar="SUITE", help=", ".join(SUITE_ORDER))
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("repr-check", parents=[common], help="numeric Dirac-operator checks")
    p.add_argument("--q", type=float, default=0.5)
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--k-max", type=int, default=40)
    p.set_defaults(func=_cmd_repr_check)

    p = sub.add_parser("export-space", parents=[common], help="canonical JSON of a space")
    p.set_defaults(func=_cmd_export_space)
    return parser


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run(argv):
    """Exit code of ``main`` with argparse usage errors mapped to 2."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
