"""Command-line interface: ``rocdin analyze | compare | roc-emit | paper-repro``.

Curve specs:
    direct:<dist>     a distribution on [0, 1] read as an ROC curve
    <f0>/<f1>         parametric curve from the normal and diseased score laws
    scores:<path>     empirical curve from a ``score,label`` CSV

Exit status is 0 on success, 1 when a computation fails and 2 for usage or
parse errors. Numbers are printed with 12 significant digits.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys

import numpy as np

from .distributions import Beta, PowerRoot, Uniform01, parse_distribution
from .errors import EmptyClass, ParseError, RocdinError, UsageError
from .ingest import empirical_roc, parse_scores
from .metrics import auc, compare, dinegentropy, kl_divergence, metrics_report
from .quadrature import QuadratureConfig
from .roc import DirectCdfRoc, ParametricRoc, check_dominance, threshold_point

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE = 0, 1, 2


class CliUsageError(Exception):
    """Bad arguments detected after argparse has run."""


def fmt(x) -> str:
    """12 significant digits; infinities as ``inf``, missing values empty."""
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    out = f"{x:.12g}"
    return "0" if out == "-0" else out


def _jnum(x):
    """JSON-ready number at 12 significant digits."""
    if x is None or isinstance(x, (bool, str)):
        return x
    s = fmt(x)
    if s in ("inf", "-inf"):
        return s
    return float(s)


# ----------------------------------------------------------------- curve specs


def parse_curve(spec: str, *, with_densities: bool = True):
    """Turn a curve spec string into an ROC curve; see the module docstring."""
    spec = spec.strip()
    kind, sep, rest = spec.partition(":")
    if sep and kind.lower() == "direct":
        try:
            return DirectCdfRoc(parse_distribution(rest))
        except RocdinError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"{spec!r}: {exc}") from None
    if sep and kind.lower() == "scores":
        return empirical_roc(_read_scores(rest), kde=with_densities)
    if "/" in spec:
        f0, _, f1 = spec.partition("/")
        return ParametricRoc(parse_distribution(f0), parse_distribution(f1))
    raise ParseError(f"cannot read curve spec {spec!r}; use direct:<dist>, <f0>/<f1> or scores:<path>")


def _read_scores(path):
    try:
        return parse_scores(path)
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path}: not valid UTF-8") from None
    except EmptyClass as exc:
        raise ParseError(f"{path}: {exc}") from None


def _config(args) -> QuadratureConfig:
    try:
        return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol, max_depth=args.max_depth)
    except (ValueError, TypeError) as exc:
        raise CliUsageError(str(exc)) from None


# ------------------------------------------------------------------ rendering


def _use_color(stream) -> bool:
    return bool(getattr(stream, "isatty", lambda: False)()) and "ROCDIN_NO_COLOR" not in os.environ


def _table(header, rows, color=False) -> str:
    cells = [[fmt(c) for c in r] for r in rows]
    widths = [max(len(h), *(len(r[i]) for r in cells)) if cells else len(h) for i, h in enumerate(header)]

    def line(values):
        return "  ".join(v.ljust(w) for v, w in zip(values, widths)).rstrip()

    head = line(header)
    if color:
        head = f"\x1b[1m{head}\x1b[0m"
    out = [head, line(["-" * w for w in widths])]
    for r in cells:
        text = line(r)
        if color and "FAIL" in r:
            text = f"\x1b[31m{text}\x1b[0m"
        elif color and "PASS" in r:
            text = f"\x1b[32m{text}\x1b[0m"
        out.append(text)
    return "\n".join(out) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for r in rows:
        writer.writerow([fmt(c) for c in r])
    return buf.getvalue()


def _flatten(d, prefix=""):
    """Nested dict to (dotted key, value) pairs; lists are indexed."""
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, name + ".")
        elif isinstance(value, list):
            for i, item in enumerate(value):
                if isinstance(item, dict):
                    yield from _flatten(item, f"{name}.{i}.")
                elif isinstance(item, list):
                    for j, v in enumerate(item):
                        yield f"{name}.{i}.{j}", v
                else:
                    yield f"{name}.{i}", item
        else:
            yield name, value


def _emit_mapping(d, args, out):
    if args.format == "json":
        out.write(json.dumps(d, indent=2) + "\n")
        return
    rows = list(_flatten(d))
    if args.format == "csv":
        out.write(_csv(["key", "value"], rows))
    else:
        out.write(_table(["key", "value"], rows, _use_color(out)))


# ------------------------------------------------------------------- commands


def cmd_analyze(args, out):
    cfg = _config(args)
    picked = sum(x is not None for x in (args.roc, args.scores)) + (args.f0 is not None or args.f1 is not None)
    if picked != 1:
        raise CliUsageError("analyze needs exactly one of --roc SPEC, --f0 SPEC --f1 SPEC, or --scores FILE")
    if args.f0 is not None or args.f1 is not None:
        if args.f0 is None or args.f1 is None:
            raise CliUsageError("--f0 and --f1 must be given together")
        curve = ParametricRoc(parse_distribution(args.f0), parse_distribution(args.f1))
    elif args.scores is not None:
        curve = empirical_roc(_read_scores(args.scores), kde=True)
    else:
        curve = parse_curve(args.roc)
    result = metrics_report(curve, cfg).to_dict()
    if isinstance(curve, ParametricRoc):
        dom = check_dominance(curve)
        result["dominance"] = {
            "holds": dom.holds,
            "violations": int(dom.violations.size),
            "first_violation": _jnum(dom.violations[0]) if dom.violations.size else None,
        }
        p = np.arange(1, args.points + 1) / (args.points + 1)
        result["thresholds"] = [
            {k: _jnum(v) for k, v in threshold_point(curve, t)._asdict().items()} for t in curve.f0.quantile(p)
        ]
    _emit_mapping(result, args, out)


def cmd_compare(args, out):
    cfg = _config(args)
    if args.grid < 16:
        raise CliUsageError("--grid must be at least 16")
    a, b = parse_curve(args.spec_a), parse_curve(args.spec_b)
    verdict = compare(a, b, cfg, grid_size=args.grid)
    _emit_mapping(verdict.to_dict(), args, out)


def cmd_roc_emit(args, out):
    if args.points < 2:
        raise CliUsageError("--points must be at least 2")
    curve = parse_curve(args.spec, with_densities=False)
    u = np.linspace(0.0, 1.0, args.points)
    s = curve.roc_value(u)
    rows = list(zip(u, s))
    if args.format == "json":
        out.write(json.dumps({"u": [_jnum(x) for x in u], "sensitivity": [_jnum(x) for x in s]}) + "\n")
    elif args.format == "table":
        out.write(_table(["u", "sensitivity"], rows, _use_color(out)))
    else:
        out.write(_csv(["u", "sensitivity"], rows))


def paper_rows(cfg: QuadratureConfig = None):
    """Reproduction targets as (quantity, computed, target, tol_kind, tol)."""
    cfg = cfg or QuadratureConfig()
    u = Uniform01()
    b13, b26 = Beta(1, 3), Beta(2, 6)
    rows = [
        ("KL(Beta(1,3)||U)", kl_divergence(b13, u, cfg).value, 0.623166, "rel", 1e-4),
        ("KL(U||Beta(1,3))", kl_divergence(u, b13, cfg).value, 1.30043, "rel", 1e-4),
        ("J(Beta(1,3),U)", dinegentropy(b13, u, cfg).value, 1.923596, "rel", 1e-4),
        ("J(Beta(2,6),U)", dinegentropy(b26, u, cfg).value, 4.12548, "rel", 1e-4),
    ]
    for n, target in ((1, 0.0), (10, 11.685), (100, 141.398), (1000, 1439.814)):
        value = dinegentropy(PowerRoot(n), u, cfg).value
        rows.append((f"J(PowerRoot({n}),U)", value, target, "abs" if n == 1 else "rel", 1e-9 if n == 1 else 5e-4))
    rows.append(("AUC(Beta(1,3))", auc(DirectCdfRoc(b13), cfg).value, 0.75, "abs", 1e-8))
    rows.append(("AUC(Beta(2,6))", auc(DirectCdfRoc(b26), cfg).value, 0.75, "abs", 1e-8))
    return rows


def _judge(value, target, kind, tol):
    abs_delta = abs(value - target)
    rel_delta = abs_delta / abs(target) if target != 0 else math.inf if abs_delta else 0.0
    ok = (abs_delta if kind == "abs" else rel_delta) <= tol
    return abs_delta, rel_delta, ok


def cmd_paper_repro(args, out):
    cfg = _config(args)
    header = ["quantity", "computed", "target", "abs_delta", "rel_delta", "tolerance", "status"]
    rows, all_ok = [], True
    for name, value, target, kind, tol in paper_rows(cfg):
        abs_delta, rel_delta, ok = _judge(value, target, kind, tol)
        all_ok &= ok
        rows.append([name, value, target, abs_delta, rel_delta, f"{kind} " + f"{tol:.0e}".replace("e-0", "e-"), "PASS" if ok else "FAIL"])
    if args.format == "json":
        payload = {"rows": [dict(zip(header, [r[0], *map(_jnum, r[1:5]), r[5], r[6]])) for r in rows]}
        payload["all_pass"] = all_ok
        out.write(json.dumps(payload, indent=2) + "\n")
    elif args.format == "csv":
        out.write(_csv(header, rows))
    else:
        out.write(_table(header, rows, _use_color(out)))
        passed = sum(r[-1] == "PASS" for r in rows)
        out.write(f"\n{passed}/{len(rows)} PASS\n")
    return EXIT_OK if all_ok else EXIT_COMPUTE


# --------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--rel-tol", type=float, default=1e-9, help="relative quadrature tolerance")
    common.add_argument("--abs-tol", type=float, default=1e-12, help="absolute quadrature tolerance")
    common.add_argument("--max-depth", type=int, default=60, help="maximum panel subdivision depth")

    def fmt_arg(p, default):
        p.add_argument("--format", choices=("json", "csv", "table"), default=default, help=f"output format (default {default})")

    parser = argparse.ArgumentParser(prog="rocdin", description="ROC curve metrics and dinegentropy.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("analyze", parents=[common], help="metrics for one curve")
    p.add_argument("--roc", metavar="SPEC", help="curve spec (direct:<dist>, <f0>/<f1>, scores:<path>)")
    p.add_argument("--f0", metavar="DIST", help="score law of the normal class")
    p.add_argument("--f1", metavar="DIST", help="score law of the diseased class")
    p.add_argument("--scores", metavar="FILE", help="score,label CSV")
    p.add_argument("--points", type=int, default=9, help="rows in the threshold table (parametric curves)")
    fmt_arg(p, "json")
    p.set_defaults(handler=cmd_analyze)

    p = sub.add_parser("compare", parents=[common], help="rank two curves")
    p.add_argument("spec_a", metavar="A")
    p.add_argument("spec_b", metavar="B")
    p.add_argument("--grid", type=int, default=4096, help="crossing-detection grid size")
    fmt_arg(p, "json")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("roc-emit", parents=[common], help="sample a curve on an even fpp grid")
    p.add_argument("spec", metavar="SPEC")
    p.add_argument("--points", type=int, default=101, help="number of grid points")
    fmt_arg(p, "csv")
    p.set_defaults(handler=cmd_roc_emit)

    p = sub.add_parser("paper-repro", parents=[common], help="reproduce the published reference values")
    fmt_arg(p, "table")
    p.set_defaults(handler=cmd_paper_repro)
    return parser


def main(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code = args.handler(args, out)
    except (CliUsageError, ParseError, UsageError) as exc:
        err.write(f"rocdin {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (RocdinError, ArithmeticError, ValueError) as exc:
        err.write(f"rocdin {args.command}: computation failed: {exc}\n")
        return EXIT_COMPUTE
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
