"""Command-line interface: ``verify``, ``integrate`` and ``lerch``.

Exit codes: 0 when everything passes, 1 when a verification case fails,
2 for usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import asdict, dataclass, field, replace
from datetime import datetime, timezone

from . import __version__, constants
from .cdf import parse_cdf
from .lerch import MAX_DERIVE_ORDER, derive_closed_form, emit_coeffs, emit_json, emit_latex
from .quadrature import EngineConfig
from .representations import (
    RepresentationSpec,
    default_cases,
    double_integral,
    multi_integral,
    run_registry,
    select,
    single_integral,
)

ROW_FIELDS = ("case", "method", "value", "expected", "abs_error", "error_estimate",
              "evaluations", "seed", "pass")


@dataclass
class ReportDocument:
    tool_version: str
    reference_G: str
    engine: dict
    cases: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)
    timestamp: str | None = None

    @classmethod
    def from_rows(cls, rows: list[dict], engine: EngineConfig,
                  timestamp: str | None = None) -> "ReportDocument":
        passed = sum(1 for r in rows if r["pass"])
        return cls(
            tool_version=__version__,
            reference_G=constants.reference_string(30),
            engine=engine.to_dict(),
            cases=rows,
            summary={"total": len(rows), "passed": passed, "failed": len(rows) - passed},
            timestamp=timestamp,
        )

    def to_json(self) -> str:
        data = asdict(self)
        if self.timestamp is None:
            del data["timestamp"]
        return json.dumps(data, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls(**json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        for key, val in self.engine.items():
            buf.write(f"# {key}={val}\n")
        writer = csv.DictWriter(buf, fieldnames=ROW_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self.cases:
            writer.writerow({k: _csv_cell(row[k]) for k in ROW_FIELDS})
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = [
            f"# catalankit {self.tool_version} verification report",
            "",
            f"G = {self.reference_G}",
            "engine: " + ", ".join(f"{k}={v}" for k, v in self.engine.items()),
        ]
        if self.timestamp:
            lines.append(f"generated: {self.timestamp}")
        lines += [
            "",
            "| case | method | value | abs_error | error_estimate | evaluations | seed | pass |",
            "|---|---|---|---|---|---|---|---|",
        ]
        for r in self.cases:
            lines.append(
                f"| {r['case']} | {r['method']} | {_fmt(r['value'], '.15f')} "
                f"| {_fmt(r['abs_error'], '.2e')} | {_fmt(r['error_estimate'], '.2e')} "
                f"| {r['evaluations']} | {'' if r['seed'] is None else r['seed']} "
                f"| {'PASS' if r['pass'] else 'FAIL'} |"
            )
        s = self.summary
        lines += ["", f"passed {s['passed']}/{s['total']}"]
        return "\n".join(lines) + "\n"


def _csv_cell(v):
    if isinstance(v, float):
        return format(v, ".17g")
    return "" if v is None else v


def _fmt(v, spec: str) -> str:
    return "" if v is None else format(v, spec)


def _threads() -> int:
    raw = os.environ.get("CATALANKIT_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    if n == 0:
        return os.cpu_count() or 1
    return max(1, n)


def _engine_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv", "markdown", "text"), default=None)
    parser.add_argument("--seed", type=int, default=None, help="QMC scrambling seed")
    parser.add_argument("--tol", type=float, default=None,
                        help="absolute tolerance for the deterministic engines")
    parser.add_argument("--samples", type=int, default=None,
                        help="total QMC samples (power of two)")
    parser.add_argument("--randomizations", type=int, default=None,
                        help="independent QMC scramblings")
    parser.add_argument("--no-timestamp", action="store_true")


def _config(args: argparse.Namespace) -> EngineConfig:
    cfg = EngineConfig()
    updates = {}
    if args.tol is not None:
        updates.update(tol_1d=args.tol, tol_2d=args.tol, tol_3d=args.tol)
    if args.samples is not None:
        updates["qmc_samples"] = args.samples
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.randomizations is not None:
        updates["randomizations"] = args.randomizations
    return replace(cfg, **updates)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="catalankit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"catalankit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run the registry of verification cases")
    v.add_argument("--filter", default=None, help="glob over case names")
    v.add_argument("--list", action="store_true", help="list case names and exit")
    _engine_flags(v)

    i = sub.add_parser("integrate", help="evaluate one representation")
    i.add_argument("--rep", choices=("single", "double", "multi"), required=True)
    i.add_argument("--cdf", action="append", default=None,
                   help="CDF spec such as normal or u_quadratic:alpha=2 (repeatable)")
    i.add_argument("--cdf1", default=None)
    i.add_argument("--cdf2", default=None)
    i.add_argument("--a", action="append", type=float, default=None,
                   help="half-width(s); the last one is derived from the others")
    i.add_argument("--r", type=int, default=None, help="dimension for --rep multi")
    _engine_flags(i)

    lp = sub.add_parser("lerch", help="closed form of Phi(-z, -n, 1/2)")
    lp.add_argument("action", nargs="?", choices=("derive",), default="derive")
    lp.add_argument("--n", type=int, required=True)
    lp.add_argument("--emit", choices=("latex", "json", "coeffs"), default="latex")
    lp.add_argument("--descending", action="store_true", help="highest degree first (latex)")
    return parser


def cmd_verify(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    fmt = args.format or "markdown"
    if fmt == "text":
        parser.error("verify supports --format json, csv or markdown")
    cfg = _config(args)
    cases = default_cases()
    if args.list:
        for c in select(cases, args.filter):
            print(c.name)
        return 0
    if args.samples is not None:
        cases = [replace(c, samples=args.samples) if c.samples else c for c in cases]
    if not select(cases, args.filter):
        print(f"warning: no cases match {args.filter!r}", file=sys.stderr)
    try:
        outcomes = run_registry(args.filter, cfg, cases, workers=_threads())
    except ValueError as exc:
        parser.error(str(exc))
    for o in outcomes:
        if o.error:
            print(f"{o.case.name}: {o.error}", file=sys.stderr)
    stamp = None if args.no_timestamp else datetime.now(timezone.utc).isoformat()
    doc = ReportDocument.from_rows([o.row() for o in outcomes], cfg, stamp)
    out = {"json": doc.to_json, "csv": doc.to_csv, "markdown": doc.to_markdown}[fmt]()
    sys.stdout.write(out if out.endswith("\n") else out + "\n")
    failed = [o.case.name for o in outcomes if not o.passed]
    if failed:
        print("failed: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


def cmd_integrate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    cfg = _config(args)
    try:
        specs = args.cdf or []
        if args.rep == "single":
            g = parse_cdf(specs[0] if specs else "rademacher")
            res = single_integral(g, cfg.tol_1d)
        elif args.rep == "double":
            n1 = args.cdf1 or (specs[0] if specs else "rademacher")
            n2 = args.cdf2 or (specs[1] if len(specs) > 1 else n1)
            a = (args.a or [1.0])[0]
            if a <= 0:
                parser.error("--a must be positive")
            res = double_integral(parse_cdf(n1), parse_cdf(n2), a, cfg.tol_2d)
        else:
            r = args.r or max(len(specs), 3)
            if not specs:
                specs = ["rademacher"]
            if len(specs) == 1:
                specs = specs * r
            if len(specs) != r:
                parser.error(f"give one --cdf or exactly r={r} of them")
            if any(a <= 0 for a in args.a or []):
                parser.error("--a values must be positive")
            spec = RepresentationSpec.build([parse_cdf(s) for s in specs], args.a or ())
            res = multi_integral(spec, cfg)
    except ValueError as exc:
        parser.error(str(exc))
    delta = abs(res.value - constants.G_FLOAT)
    if (args.format or "text") == "json":
        print(json.dumps({**res.to_dict(), "abs_error_vs_G": delta}, indent=2))
    else:
        print(f"value          {res.value:.17g}")
        print(f"error_estimate {res.error_estimate:.3e}")
        print(f"|value - G|    {delta:.3e}")
        print(f"evaluations    {res.evaluations}")
        print(f"method         {res.method}" + ("" if res.seed is None else f" (seed {res.seed})"))
    return 0


def cmd_lerch(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if not 0 <= args.n <= MAX_DERIVE_ORDER:
        parser.error(f"--n must lie in [0, {MAX_DERIVE_ORDER}]")
    form = derive_closed_form(args.n)
    if args.emit == "latex":
        print(emit_latex(form, descending=args.descending))
    elif args.emit == "json":
        print(emit_json(form))
    else:
        print(emit_coeffs(form))
    return 0


def main(argv: list[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            stream.reconfigure(encoding="utf-8")
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"verify": cmd_verify, "integrate": cmd_integrate, "lerch": cmd_lerch}[args.command]
    return handler(args, parser)


if __name__ == "__main__":
    sys.exit(main())
