"""Acceptance criteria 1-8, one test each.

Every test records a one-line PASS/FAIL verdict, printed in the pytest
terminal summary; ``python tests/test_acceptance.py`` prints them directly.
Reference values are mpmath evaluations (tests/oracle.py or the inline
comments), frozen here.
"""

from __future__ import annotations

import math
import os
import subprocess
import sys
import tempfile
import time

import mpmath
import pytest

import naive_foil
import oracle
from meanslab import PositivePair, eval_mean, mean
from meanslab.claims import SamplePlan, builtin_registry, check_pair, verify_all
from meanslab.constants import estimate_all_constants, monotone_specs, sample_direction
from meanslab.kinds import A, G, H, I, L, P, X, Y
from meanslab.series import KernelKind, bernoulli_abs, direct_eval, kernel_eval

RESULTS: dict[int, str] = {}

# 40-digit mpmath values of the closed forms
CLOSED_FORMS = {
    "alpha": 2 / 3,
    "beta": 0.6321205588285576784,
    "beta1": 0.9929326518994357603,
    "beta2": 0.8234290013187866275,
    "c": 1.0071176510179665447,
    "pi_over_2e": 0.5778636748954608590,
    "q89": 0.4093838908503587503,
    "heron_beta": 0.6488581153971414542,
}


def record(n: int, title: str, ok: bool, detail: str) -> None:
    RESULTS[n] = f"criterion {n} ({title}): {'PASS' if ok else 'FAIL'} - {detail}"
    print(RESULTS[n])
    assert ok, RESULTS[n]


def test_criterion_1_constants():
    start = time.perf_counter()
    table = {c.id: c for c in estimate_all_constants()}
    elapsed = time.perf_counter() - start
    worst = max(abs(table[cid].estimate - ref) for cid, ref in CLOSED_FORMS.items())
    a = table["a"].estimate
    ok = worst <= 1e-6 and 0.9756 < a < 0.9757 and round(a, 4) == 0.9756 and elapsed < 5.0
    record(1, "constants", ok, f"max |estimate - closed form| = {worst:.2e}, a = {a:.6f}, {elapsed:.2f} s")


def test_criterion_2_claim_suite():
    start = time.perf_counter()
    suite = verify_all(SamplePlan(4096, 1e-8, 1 - 1e-8), workers=1)
    elapsed = time.perf_counter() - start
    holds = [r for r in suite.reports if r.expectation == "holds"]
    bad_holds = [r.id for r in holds if not (r.status == "verified" and r.min_margin > 0)]
    counter = {r.id: r for r in suite.reports if r.expectation == "counterexample"}
    witnesses_ok = set(counter) == {"C14-upper", "C26-printed-upper"} and all(r.violations for r in counter.values())

    c14 = {c.id: c for c in builtin_registry()}["C14-upper"]
    (link,) = check_pair(c14, math.e**4, 1.0)
    with mpmath.workdps(60):
        e4 = mpmath.e**4
        y_ref = float(oracle.Y(e4, 1))
        gh_ref = float(mpmath.sqrt(oracle.G(e4, 1) * oracle.H(e4, 1)))
    pair_ok = (
        not link["holds"]
        and abs(link["lhs"] - y_ref) <= 1e-12 * y_ref
        and abs(link["rhs"] - gh_ref) <= 1e-12 * gh_ref
    )
    ok = not bad_holds and witnesses_ok and pair_ok and elapsed < 10.0
    record(
        2,
        "claim suite",
        ok,
        f"{suite.summary_line()}, failing holds {bad_holds or 'none'}, "
        f"Y(e^4,1) = {link['lhs']:.6f} > sqrt(GH) = {link['rhs']:.6f}, {elapsed:.2f} s",
    )


def test_criterion_3_sharpness():
    # the upper constants are sharp as t -> 1, the lower ones as t -> 0
    suite = verify_all(SamplePlan(), [c for c in builtin_registry() if c.id in ("C12", "C13", "C17", "C21")])
    upper = {r.id: r.edge_margins[-1][1] for r in suite.reports}
    lower = {r.id: r.edge_margins[0][0] for r in suite.reports}
    ok = len(upper) == 4 and all(0 < v < 1e-3 for v in upper.values()) and all(0 < v < 1e-3 for v in lower.values())
    record(
        3,
        "sharpness",
        ok,
        "upper-link margin at t_max: " + ", ".join(f"{k} {v:.1e}" for k, v in upper.items())
        + f"; lower-link margins at t_min <= {max(lower.values()):.1e}",
    )


def test_criterion_4_stability():
    b = 1 + 1e-12
    lib_err = {k: oracle.rel_err(mean(k, 1.0, b), oracle.mean(k, 1.0, b)) for k in "LPXYI"}
    # the foil at the stated pair, its mirror and two rescaled copies (means are homogeneous)
    pairs = [(1.0, b), (1.0, 1 - 1e-12), (3.0, 3 * b), (0.7, 0.7 * b)]
    foil_err = {}
    for a_, b_ in pairs:
        for k in "LPXYI":
            err = oracle.rel_err(naive_foil.BY_LETTER[k](a_, b_), oracle.mean(k, a_, b_))
            foil_err[(a_, b_, k)] = err
    at_stated = max(foil_err[(1.0, b, k)] for k in "LPXYI")
    worst_key = max(foil_err, key=foil_err.get)
    digits_lost = math.log10(foil_err[worst_key] / 2**-53)
    ok = max(lib_err.values()) <= 1e-12 and digits_lost >= 5
    record(
        4,
        "stability",
        ok,
        f"library max rel err {max(lib_err.values()):.1e}; naive foil loses {digits_lost:.1f} digits "
        f"({worst_key[2]} at ({worst_key[0]}, {worst_key[1]!r})), "
        f"max rel err {at_stated:.1e} at (1, 1+1e-12) itself",
    )


def test_criterion_5_monotonicity():
    wanted = {"h", "f", "f4", "f5", "g", "ratio14-falling", "ratio14-rising"}
    reports = [sample_direction(s, 1000) for s in monotone_specs() if s.id in wanted]
    bad = [r.id for r in reports if not (r.monotone and r.max_violation == 0 and r.in_range)]
    ok = not bad and {r.id for r in reports} == wanted
    record(5, "monotonicity", ok, f"{len(reports)} functions at 1000 points, failures: {bad or 'none'}")


def test_criterion_6_series():
    worst = 0.0
    failures = []
    for kind in KernelKind:
        for k in range(1, 26):
            x = k / 10
            res = kernel_eval(kind, x, 25)
            diff = abs(res.value - direct_eval(kind, x))
            if diff > max(res.truncation_bound, 1e-12):
                failures.append((kind.value, x))
            worst = max(worst, diff)
    from fractions import Fraction

    coeff_ok = bernoulli_abs(1) == Fraction(1, 6) and bernoulli_abs(3) == Fraction(1, 42)
    ok = not failures and coeff_ok
    record(6, "series", ok, f"150 grid points, max |series - direct| = {worst:.1e}, failures {failures or 'none'}, |B2|, |B6| exact")


def test_criterion_7_ordering():
    order = [H, Y, G, L, X, P, I, A]
    broken = []
    for k in range(1, 1001):
        pair = PositivePair(10 ** (6 * k / 1000), 1.0)
        vals = [eval_mean(kind, pair).value for kind in order]
        if not all(lo < hi for lo, hi in zip(vals, vals[1:])):
            broken.append(pair.a)
    record(7, "ordering chain", not broken, f"H < Y < G < L < X < P < I < A at 1000 ratios up to 1e6, {len(broken)} breaks")


def test_criterion_8_determinism():
    env = {k: v for k, v in os.environ.items() if k != "MEANSLAB_CONFIG"}
    with tempfile.TemporaryDirectory() as tmp:
        paths = []
        for workers in (1, 8):
            path = os.path.join(tmp, f"w{workers}.json")
            proc = subprocess.run(
                [sys.executable, "-m", "meanslab", "verify", "--workers", str(workers), "--out", path],
                capture_output=True,
                text=True,
                env=env,
            )
            assert proc.returncode == 0, proc.stderr
            paths.append(path)
        blobs = [open(p, "rb").read() for p in paths]
    ok = blobs[0] == blobs[1]
    record(8, "determinism", ok, f"workers=1 vs workers=8 reports {'byte-identical' if ok else 'differ'} ({len(blobs[0])} bytes)")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
