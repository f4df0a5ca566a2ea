"""Command-line front end.

Subcommands::

    meanslab eval <mean> <a> <b>
    meanslab verify [--claims FILE] [--samples N] [--t-min R] [--t-max R]
                    [--spacing S] [--out PATH] [--format json|csv] [--workers N]
    meanslab constants [--only ID] [--tol R] [--out PATH] [--format json|csv]
    meanslab series-check [--max-x R] [--terms N] [--out PATH] [--format json|csv]

Settings come from flags, then from the ``key = value`` file named by
``MEANSLAB_CONFIG``, then from defaults.  Exit codes: 0 when every
expectation is met, 1 on an anomaly or tolerance failure, 2 on bad input.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import os
import sys
from dataclasses import dataclass

from . import __version__
from .errors import MeansError, NumericFailure
from .expr import MeanAtom, parse_expression
from .kinds import PositivePair
from .means import eval_mean
from .report import dumps_json, make_report, rows_to_csv, write_text

CONFIG_ENV = "MEANSLAB_CONFIG"
SERIES_GRID_STEP = 0.1
FAST_RANGE = 2.8  # beyond this the default term count no longer reaches 1e-12
RELAXED_TOL = 1e-8


class UsageError(Exception):
    """Bad flags, config or input files; maps to exit code 2."""


@dataclass
class RunConfig:
    samples: int = 4096
    t_min: float = 1e-8
    t_max: float = 1 - 1e-8
    spacing: str = "log-symmetric"
    tol_constants: float = 1e-6
    output_path: str | None = None
    format: str = "json"
    workers: int = 1

    def validate(self) -> "RunConfig":
        if self.samples < 0:
            raise UsageError(f"samples must be >= 0, got {self.samples}")
        if not 0 < self.t_min <= self.t_max < 1:
            raise UsageError(f"need 0 < t_min <= t_max < 1, got {self.t_min}, {self.t_max}")
        if not self.tol_constants > 0:
            raise UsageError(f"tol_constants must be positive, got {self.tol_constants}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"format must be json or csv, got {self.format!r}")
        if self.workers < 0:
            raise UsageError(f"workers must be >= 0, got {self.workers}")
        return self


_FIELD_TYPES = {"samples": int, "workers": int, "t_min": float, "t_max": float, "tol_constants": float}


def read_config_file(path: str) -> dict:
    """Parse flat ``key = value`` lines; '#' starts a comment."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    known = {f.name for f in dataclasses.fields(RunConfig)}
    values: dict = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().replace("-", "_"), value.strip()
        if not sep or key not in known:
            raise UsageError(f"{path}:{lineno}: expected 'key = value' with a known key, got {raw!r}")
        try:
            values[key] = _FIELD_TYPES.get(key, str)(value)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    settings: dict = {}
    path = os.environ.get(CONFIG_ENV)
    if path:
        settings.update(read_config_file(path))
    for f in dataclasses.fields(RunConfig):
        flag = getattr(args, f.name, None)
        if flag is not None:
            settings[f.name] = flag
    return RunConfig(**settings).validate()


def _emit(config: RunConfig, json_text: str, csv_text: str) -> None:
    text = json_text if config.format == "json" else csv_text
    if config.output_path:
        try:
            write_text(config.output_path, text)
        except OSError as exc:
            raise UsageError(f"cannot write {config.output_path}: {exc.strerror}") from None


# -- eval ------------------------------------------------------------------


def cmd_eval(args: argparse.Namespace) -> int:
    node = parse_expression(args.mean)
    if not isinstance(node, MeanAtom):
        raise UsageError(f"expected a mean such as X or M[1/3], got {args.mean!r}")
    try:
        a, b = float(args.a), float(args.b)
    except ValueError:
        raise UsageError(f"arguments must be real numbers, got {args.a!r} {args.b!r}") from None
    result = eval_mean(node.kind, PositivePair(a, b))
    print(f"{result.value:.15g} ({result.method})")
    return 0


# -- verify ----------------------------------------------------------------


_CLAIM_COLUMNS = [
    "id",
    "status",
    "expectation",
    "anomalous",
    "min_margin",
    "argmin_t",
    "samples",
    "violation_count",
    "chain_consistent",
]


def cmd_verify(args: argparse.Namespace) -> int:
    from .claims import SamplePlan, builtin_registry, load_claims, verify_all

    config = build_config(args)
    if args.claims:
        try:
            claims = load_claims(args.claims)
        except OSError as exc:
            raise UsageError(f"cannot read claims file {args.claims}: {exc.strerror}") from None
        source = os.path.basename(args.claims)
    else:
        claims, source = builtin_registry(), "builtin"
    try:
        plan = SamplePlan(config.samples, config.t_min, config.t_max, config.spacing)
    except MeansError as exc:
        raise UsageError(str(exc)) from None
    suite = verify_all(plan, claims, workers=config.workers)

    # the worker count and output path are left out so reports are byte-identical
    meta = {"claims": source, **dataclasses.asdict(plan)}
    reports = [r.to_dict() for r in suite.reports]
    _emit(
        config,
        dumps_json(make_report(meta, __version__, claims=reports, summary=suite.counts)),
        rows_to_csv(_CLAIM_COLUMNS, reports),
    )
    for r in suite.reports:
        if r.anomalous:
            print(f"anomalous: {r.id} status={r.status} expected={r.expectation}", file=sys.stderr)
    print(suite.summary_line())
    return 1 if suite.counts["anomalous"] else 0


# -- constants -------------------------------------------------------------


_CONSTANT_COLUMNS = ["id", "estimate", "closed_form", "abs_error", "method", "published", "status", "message"]


def cmd_constants(args: argparse.Namespace) -> int:
    from .constants import CONSTANT_IDS, estimate_all_constants

    config = build_config(args)
    only = args.only or None
    if only:
        unknown = [c for c in only if c not in CONSTANT_IDS]
        if unknown:
            raise UsageError(f"unknown constant(s) {', '.join(unknown)}; known: {', '.join(CONSTANT_IDS)}")
    table = estimate_all_constants(only)
    rows = [dataclasses.asdict(c) for c in table]
    _emit(
        config,
        dumps_json(make_report({"tol_constants": config.tol_constants}, __version__, constants=rows)),
        rows_to_csv(_CONSTANT_COLUMNS, rows),
    )
    failed = False
    for c in table:
        bad = c.status != "ok" or (c.abs_error is not None and c.abs_error > config.tol_constants)
        failed |= bad
        est = "failed" if c.estimate is None else f"{c.estimate:.12g}"
        err = "" if c.abs_error is None else f" abs_error={c.abs_error:.3g}"
        print(f"{c.id:12s} {est}{err}{'  FAIL' if bad else ''}")
    return 1 if failed else 0


# -- series-check ----------------------------------------------------------


_SERIES_COLUMNS = ["kernel", "x", "terms", "series", "direct", "difference", "tail_bound", "tolerance", "status"]


def series_rows(max_x: float, terms: int) -> list[dict]:
    from .errors import DomainError
    from .series import KernelKind, direct_eval, kernel_eval

    count = int(math.floor(max_x / SERIES_GRID_STEP + 1e-9))
    grid = [round(SERIES_GRID_STEP * k, 10) for k in range(1, count + 1)]
    grid = [x for x in grid if x < math.pi]
    rows = []
    for kind in KernelKind:
        for x in grid:
            direct = direct_eval(kind, x)
            try:
                res = kernel_eval(kind, x, terms)
            except DomainError:
                # too close to the pole at pi for a geometric tail bound
                rows.append({"kernel": kind.value, "x": x, "direct": direct, "status": "no-tail-bound"})
                continue
            diff = abs(res.value - direct)
            fast = x <= FAST_RANGE
            tol = max(res.truncation_bound, 1e-12 if fast else RELAXED_TOL)
            if not fast:
                status = "out-of-fast-range" if diff <= tol else "fail"
            else:
                status = "pass" if diff <= tol else "fail"
            rows.append(
                {
                    "kernel": kind.value,
                    "x": x,
                    "terms": res.terms_used,
                    "series": res.value,
                    "direct": direct,
                    "difference": diff,
                    "tail_bound": res.truncation_bound,
                    "tolerance": tol,
                    "status": status,
                }
            )
    return rows


def cmd_series_check(args: argparse.Namespace) -> int:
    from .series import N_MAX

    config = build_config(args)
    if not 1 <= args.terms <= N_MAX:
        raise UsageError(f"--terms must be in 1..{N_MAX}, got {args.terms}")
    rows = series_rows(args.max_x, args.terms)
    meta = {"max_x": args.max_x, "terms": args.terms}
    _emit(
        config,
        dumps_json(make_report(meta, __version__, series_check=rows)),
        rows_to_csv(_SERIES_COLUMNS, rows),
    )
    failures = [r for r in rows if r["status"] == "fail"]
    for r in failures:
        print(f"fail: {r['kernel']} x={r['x']} difference={r['difference']:.3g} tolerance={r['tolerance']:.3g}")
    print(f"rows={len(rows)} failed={len(failures)}")
    return 1 if failures else 0


# -- parser ----------------------------------------------------------------


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", dest="output_path", metavar="PATH", help="write the report here")
    p.add_argument("--format", choices=("json", "csv"), help="report format (default json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="meanslab", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one mean")
    p.add_argument("mean", help="A, G, H, L, I, P, X, Y, M[p] or N[p]")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("verify", help="run the claim suite")
    p.add_argument("--claims", metavar="FILE", help="claims file (default: built-in registry)")
    p.add_argument("--samples", type=int)
    p.add_argument("--t-min", dest="t_min", type=float)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--spacing", choices=("log-symmetric", "uniform-x", "uniform-y"))
    p.add_argument("--workers", type=int, help="worker processes, 0 = one per CPU")
    _output_flags(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("constants", help="estimate the sharp constants")
    p.add_argument("--only", action="append", metavar="ID", help="restrict to this constant (repeatable)")
    p.add_argument("--tol", dest="tol_constants", type=float, help="allowed |estimate - closed form|")
    _output_flags(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("series-check", help="compare kernel series against direct evaluation")
    p.add_argument("--max-x", dest="max_x", type=float, default=2.5)
    p.add_argument("--terms", type=int, default=25)
    _output_flags(p)
    p.set_defaults(func=cmd_series_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, MeansError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
