"""Inequality chains as data, and their numerical verification.

A claim is a chain ``e1 < e2 < ... < en`` of expressions in the means of an
implicit pair.  Verification samples pairs ``(1 + t, 1 - t)`` (so A = 1 and
margins are already normalized by A), evaluates every chain entry in
extended precision, and records ``rhs - lhs`` for each adjacent link.

Claims file format, one claim per line::

    ID | e1 < e2 < ... | domain=a!=b | strict | expect=holds | source="..."

``#`` starts a comment outside quotes; whitespace around fields is ignored.
"""

from __future__ import annotations

import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

import gmpy2

from .errors import MeansError, ParseError
from .expr import Node, compile_expression, parse_expression, render
from .precise import PairMeans, working_precision

__all__ = [
    "ClaimSpec",
    "SamplePlan",
    "Violation",
    "ClaimReport",
    "SuiteReport",
    "parse_claims",
    "load_claims",
    "builtin_registry",
    "verify_claim",
    "verify_all",
    "check_pair",
]

MAX_WITNESSES = 32
EXPECTATIONS = {"holds": "holds", "counterexample": "counterexample", "known-counterexample": "counterexample"}


@dataclass(frozen=True)
class ClaimSpec:
    id: str
    chain: tuple[Node, ...]
    strict: bool = True
    domain: str = "a!=b"
    source: str = ""
    expectation: str = "holds"

    def __post_init__(self):
        if len(self.chain) < 2:
            raise MeansError(f"claim {self.id}: a chain needs at least two expressions")
        if self.expectation not in ("holds", "counterexample"):
            raise MeansError(f"claim {self.id}: unknown expectation {self.expectation!r}")

    @classmethod
    def from_strings(cls, id: str, chain, **kw) -> "ClaimSpec":
        return cls(id, tuple(parse_expression(s) for s in chain), **kw)

    def chain_text(self) -> str:
        rel = " < " if self.strict else " <= "
        return rel.join(render(node) for node in self.chain)

    def to_line(self) -> str:
        return (
            f"{self.id} | {self.chain_text()} | domain={self.domain} | "
            f"{'strict' if self.strict else 'nonstrict'} | expect={self.expectation} | "
            f'source="{self.source}"'
        )


# -- claims file -----------------------------------------------------------


def _split_fields(line: str) -> list[str]:
    """Split on '|' outside double quotes and drop a trailing '#' comment."""
    fields, buf, quoted = [], [], False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        elif not quoted and ch == "#":
            break
        elif not quoted and ch == "|":
            fields.append("".join(buf).strip())
            buf = []
            continue
        buf.append(ch)
    if quoted:
        raise ValueError("unterminated quote")
    fields.append("".join(buf).strip())
    return fields


_RELATION = re.compile(r"<=|<")


def _parse_line(line: str, lineno: int) -> ClaimSpec | None:
    try:
        fields = _split_fields(line)
    except ValueError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None
    if fields == [""]:
        return None
    if len(fields) < 2:
        raise ParseError(f"line {lineno}: expected 'ID | chain | ...'")
    cid, chain_text, options = fields[0], fields[1], fields[2:]
    if not cid or not re.fullmatch(r"[A-Za-z0-9_.\-]+", cid):
        raise ParseError(f"line {lineno}: bad claim id {cid!r}")

    kw: dict = {}
    for opt in options:
        if not opt:
            continue
        key, _, value = opt.partition("=")
        key, value = key.strip(), value.strip()
        if key in ("strict", "nonstrict") and not value:
            kw["strict"] = key == "strict"
        elif key == "domain":
            if value.replace(" ", "") != "a!=b":
                raise ParseError(f"line {lineno}: unsupported domain {value!r}")
            kw["domain"] = "a!=b"
        elif key == "expect":
            if value not in EXPECTATIONS:
                raise ParseError(f"line {lineno}: unknown expectation {value!r}")
            kw["expectation"] = EXPECTATIONS[value]
        elif key == "source":
            kw["source"] = value.strip('"')
        else:
            raise ParseError(f"line {lineno}: unknown field {opt!r}")

    relations = _RELATION.findall(chain_text)
    strict = kw.get("strict", True)
    if strict and "<=" in relations:
        raise ParseError(f"line {lineno}: '<=' in a strict claim")
    parts = _RELATION.split(chain_text)
    try:
        chain = tuple(parse_expression(p) for p in parts)
    except ParseError as exc:
        raise ParseError(f"line {lineno} ({cid}): {exc}") from None
    if len(chain) < 2:
        raise ParseError(f"line {lineno} ({cid}): chain needs at least one '<'")
    return ClaimSpec(cid, chain, **kw)


def parse_claims(text: str) -> list[ClaimSpec]:
    claims: list[ClaimSpec] = []
    seen: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        claim = _parse_line(line, lineno)
        if claim is None:
            continue
        if claim.id in seen:
            raise ParseError(f"line {lineno}: duplicate claim id {claim.id!r}")
        seen.add(claim.id)
        claims.append(claim)
    return claims


def load_claims(path: str | os.PathLike) -> list[ClaimSpec]:
    return parse_claims(Path(path).read_text(encoding="utf-8"))


def builtin_registry() -> list[ClaimSpec]:
    text = resources.files("meanslab").joinpath("data/claims.txt").read_text(encoding="utf-8")
    return parse_claims(text)


# -- sampling --------------------------------------------------------------


@dataclass(frozen=True)
class SamplePlan:
    n: int = 4096
    t_min: float = 1e-8
    t_max: float = 1 - 1e-8
    spacing: str = "log-symmetric"

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 0:
            raise MeansError(f"sample count must be a nonnegative integer, got {self.n!r}")
        if not 0.0 < self.t_min <= self.t_max < 1.0:
            raise MeansError(f"need 0 < t_min <= t_max < 1, got [{self.t_min}, {self.t_max}]")
        if self.spacing not in ("log-symmetric", "uniform-x", "uniform-y"):
            raise MeansError(f"unknown spacing {self.spacing!r}")

    def points(self) -> list[float]:
        """Sample values of t = (a - b)/(a + b), ascending.

        ``log-symmetric`` is uniform in log(t/(1-t)), which crowds samples
        toward both t -> 0 and t -> 1 where the sharp constants live.
        """
        n, lo, hi = self.n, self.t_min, self.t_max
        if n == 0:
            return []
        if n == 1 or lo == hi:
            return [lo] * n
        if self.spacing == "log-symmetric":
            fwd = lambda t: math.log(t) - math.log1p(-t)  # noqa: E731
            inv = lambda u: 1.0 / (1.0 + math.exp(-u))  # noqa: E731
        elif self.spacing == "uniform-x":
            fwd, inv = math.asin, math.sin
        else:
            fwd, inv = math.atanh, math.tanh
        u0, u1 = fwd(lo), fwd(hi)
        pts = [inv(u0 + (u1 - u0) * k / (n - 1)) for k in range(n)]
        pts[0], pts[-1] = lo, hi
        return [min(max(t, lo), hi) for t in pts]


# -- reports ---------------------------------------------------------------


@dataclass
class Violation:
    t: float
    link: int
    lhs: float
    rhs: float
    margin: float
    note: str = ""


@dataclass
class ClaimReport:
    id: str
    status: str  # verified | violated | vacuous
    expectation: str
    anomalous: bool
    min_margin: float
    argmin_t: float
    samples: int
    violation_count: int = 0
    violations: list[Violation] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)
    edge_margins: list[list[float]] = field(default_factory=list)
    chain_consistent: bool = True
    chain: str = ""
    source: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class SuiteReport:
    plan: SamplePlan
    reports: list[ClaimReport]

    @property
    def counts(self) -> dict[str, int]:
        return {
            "verified": sum(r.status == "verified" for r in self.reports),
            "violated": sum(r.status == "violated" for r in self.reports),
            "vacuous": sum(r.status == "vacuous" for r in self.reports),
            "anomalous": sum(r.anomalous for r in self.reports),
        }

    def summary_line(self) -> str:
        c = self.counts
        return f"verified={c['verified']} violated={c['violated']} anomalous={c['anomalous']}"

    def by_id(self, cid: str) -> ClaimReport:
        for r in self.reports:
            if r.id == cid:
                return r
        raise KeyError(cid)


# -- evaluation ------------------------------------------------------------


def _chain_values(compiled, t_or_pair):
    """Evaluate all compiled chains at one pair; returns (A, per-claim values)."""
    if isinstance(t_or_pair, tuple):
        pm = PairMeans(*t_or_pair)
    else:
        t = gmpy2.mpfr(t_or_pair)
        pm = PairMeans(1 + t, 1 - t)
    env = pm.value
    return pm.A, [[f(env) for f in chain] for chain in compiled]


def _evaluate_chunk(claims: list[ClaimSpec], ts: list[float]):
    """Per claim, per sample: (t, values, margins, end_margin, error)."""
    out: list[list] = [[] for _ in claims]
    with working_precision():
        compiled = [[compile_expression(node, precise=True) for node in c.chain] for c in claims]
        for t in ts:
            A, values = _chain_values(compiled, t)
            for k, vals in enumerate(values):
                if not all(gmpy2.is_finite(v) for v in vals):
                    bad = [i for i, v in enumerate(vals) if not gmpy2.is_finite(v)]
                    out[k].append((t, None, None, None, f"non-finite value in chain entry {bad[0] + 1}"))
                    continue
                margins = [float((vals[i + 1] - vals[i]) / A) for i in range(len(vals) - 1)]
                end = float((vals[-1] - vals[0]) / A)
                out[k].append((t, [float(v) for v in vals], margins, end, None))
    return out


def _summarize(claim: ClaimSpec, rows) -> ClaimReport:
    n_links = len(claim.chain) - 1
    min_margin, argmin_t = math.inf, math.nan
    violations: list[Violation] = []
    count = 0
    errors = []
    consistent = True
    worst: Violation | None = None
    for t, vals, margins, end, err in rows:
        if err is not None:
            errors.append({"t": t, "message": err})
            continue
        for i, m in enumerate(margins):
            if m < min_margin:
                min_margin, argmin_t = m, t
            bad = m <= 0.0 if claim.strict else m < 0.0
            if bad:
                count += 1
                v = Violation(t, i, vals[i], vals[i + 1], m, "tie" if m == 0.0 else "")
                if len(violations) < MAX_WITNESSES:
                    violations.append(v)
                if worst is None or m < worst.margin:
                    worst = v
        links_ok = all((m > 0.0 if claim.strict else m >= 0.0) for m in margins)
        end_ok = end > 0.0 if claim.strict else end >= 0.0
        if links_ok and not end_ok:
            consistent = False
    if worst is not None and worst not in violations:
        violations[-1] = worst
        violations.sort(key=lambda v: (v.t, v.link))

    good_rows = [r for r in rows if r[4] is None]
    edges: list[list[float]] = []
    if good_rows:
        first, last = good_rows[0][2], good_rows[-1][2]
        edges = [[first[i], last[i]] for i in range(n_links)]

    samples = len(rows)
    if samples == 0:
        status = "vacuous"
        min_margin = argmin_t = math.nan
    elif count or errors:
        status = "violated"
    else:
        status = "verified"
    if status == "vacuous":
        anomalous = False
    elif claim.expectation == "holds":
        anomalous = status != "verified"
    else:
        anomalous = status != "violated"
    return ClaimReport(
        id=claim.id,
        status=status,
        expectation=claim.expectation,
        anomalous=anomalous,
        min_margin=min_margin,
        argmin_t=argmin_t,
        samples=samples,
        violation_count=count,
        violations=violations,
        errors=errors,
        edge_margins=edges,
        chain_consistent=consistent,
        chain=claim.chain_text(),
        source=claim.source,
    )


def _chunks(ts: list[float], k: int) -> list[list[float]]:
    k = max(1, min(k, len(ts)))
    size, extra = divmod(len(ts), k)
    out, start = [], 0
    for i in range(k):
        stop = start + size + (i < extra)
        out.append(ts[start:stop])
        start = stop
    return out


def _resolve_workers(workers: int) -> int:
    if workers <= 0:
        return os.cpu_count() or 1
    return workers


def verify_all(
    plan: SamplePlan | None = None,
    claims: list[ClaimSpec] | None = None,
    workers: int = 1,
) -> SuiteReport:
    """Verify every claim over the plan's samples.

    Samples are split into contiguous chunks across ``workers`` processes
    (0 = one per CPU); results are merged in sample order, so the report
    does not depend on the worker count.
    """
    plan = plan or SamplePlan()
    claims = builtin_registry() if claims is None else list(claims)
    ts = plan.points()
    workers = _resolve_workers(workers)
    if workers == 1 or len(ts) < 2 * workers or not claims:
        parts = [_evaluate_chunk(claims, ts)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_evaluate_chunk, [claims] * workers, _chunks(ts, workers)))
    reports = []
    for k, claim in enumerate(claims):
        rows = [row for part in parts for row in part[k]]
        reports.append(_summarize(claim, rows))
    reports.sort(key=lambda r: r.id)
    return SuiteReport(plan, reports)


def verify_claim(claim: ClaimSpec, plan: SamplePlan | None = None) -> ClaimReport:
    return verify_all(plan, [claim]).reports[0]


def check_pair(claim: ClaimSpec, a: float, b: float) -> list[dict]:
    """Evaluate one claim at an explicit pair; one dict per adjacent link."""
    with working_precision():
        compiled = [[compile_expression(node, precise=True) for node in claim.chain]]
        A, (vals,) = _chain_values(compiled, (gmpy2.mpfr(a), gmpy2.mpfr(b)))
        links = []
        for i in range(len(vals) - 1):
            margin = (vals[i + 1] - vals[i]) / A
            holds = margin > 0 if claim.strict else margin >= 0
            links.append(
                {
                    "link": i,
                    "lhs": float(vals[i]),
                    "rhs": float(vals[i + 1]),
                    "margin": float(margin),
                    "holds": bool(holds),
                }
            )
    return links
