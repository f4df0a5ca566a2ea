from __future__ import annotations

import math
import warnings

import gmpy2
import pytest

from meanslab.constants import (
    CONSTANT_IDS,
    MonotoneFunctionSpec,
    endpoint_limit,
    estimate_all_constants,
    estimate_constant,
    extremize,
    get_spec,
    monotone_specs,
    ratio14_fn,
    sample_direction,
)
from meanslab.errors import InvalidArgumentError, NumericFailure

# 40-digit mpmath evaluations of the closed forms, and of min_y e^{tanh y/y - 1} sqrt(cosh y)
# located with findroot on the derivative
ORACLE = {
    "alpha": 2 / 3,
    "beta": 0.6321205588285576784,
    "alpha1": 1.0,
    "beta1": 0.9929326518994357603,
    "alpha2": 2.0,
    "beta2": 0.8234290013187866275,
    "c": 1.0071176510179665447,
    "pi_over_2e": 0.5778636748954608590,
    "p89": 1 / 3,
    "q89": 0.4093838908503587503,
    "heron_alpha": 0.5,
    "heron_beta": 0.6488581153971414542,
    "c1": 1.5349285356613752021,
}
A_MIN = 0.97561347275303119454
Y_ARGMIN = 0.83287456484298416358


@pytest.fixture(scope="module")
def table():
    return {c.id: c for c in estimate_all_constants()}


def test_table_covers_all_constants(table):
    assert set(table) == set(CONSTANT_IDS)
    assert len(table) >= 10
    assert list(table) == sorted(table)


@pytest.mark.parametrize("cid", sorted(ORACLE))
def test_constant_matches_oracle(table, cid):
    c = table[cid]
    assert c.status == "ok"
    assert abs(c.estimate - ORACLE[cid]) <= 1e-8
    assert c.abs_error == abs(c.estimate - c.closed_form)
    assert c.abs_error <= 1e-6


def test_minimum_of_y_ratio(table):
    a = table["a"]
    assert a.closed_form is None and a.abs_error is None and a.method == "golden-section"
    assert a.estimate == pytest.approx(A_MIN, abs=1e-12)
    assert 0.9756 < a.estimate < 0.9757
    ext = extremize(ratio14_fn, (0.0, 3.0), 1e-10)
    assert ext.arg == pytest.approx(Y_ARGMIN, abs=1e-8)


def test_published_approximations(table):
    for c in table.values():
        if c.published is not None:
            assert abs(c.estimate - c.published) < 1e-4, c.id


def test_y_ratio_exceeds_one_before_1_5():
    assert max(float(ratio14_fn(1.2 + 0.3 * k / 100)) for k in range(101)) > 1


def test_only_filter():
    (row,) = estimate_all_constants(["beta2"])
    assert row.id == "beta2"
    with pytest.raises(InvalidArgumentError):
        estimate_constant("gamma")


@pytest.mark.parametrize("spec", monotone_specs(), ids=lambda s: s.id)
def test_direction_and_range(spec):
    n = 200 if spec.id in ("qstar", "hstar") else 1000
    report = sample_direction(spec, n)
    assert report.monotone and report.max_violation == 0.0
    assert report.in_range and not report.errors


@pytest.mark.parametrize(
    "fid, which, expected",
    [
        ("h", "lo", 1.0),
        ("h", "hi", ORACLE["beta2"]),
        ("f", "lo", 2 / 3),
        ("f", "hi", ORACLE["beta"]),
        ("f4", "hi", ORACLE["c"]),
        ("f5", "lo", 1.0),
        ("f5", "hi", ORACLE["pi_over_2e"]),
        ("g", "lo", 2 / 3),
        ("ratio26", "lo", 2 / 3),
    ],
)
def test_endpoint_limits(fid, which, expected):
    assert endpoint_limit(get_spec(fid), which) == pytest.approx(expected, abs=1e-8)


def test_g_stays_inside_its_range():
    # the comparison with 2/3 happens in mpfr; min_value is only its double rounding
    report = sample_direction(get_spec("g"), 1000)
    assert report.in_range and report.min_value >= 2 / 3 and report.max_value < 1


def test_slow_limit_is_reported():
    # g approaches 1 like 1/log(sec x): no polynomial extrapolation converges
    with pytest.raises(NumericFailure):
        endpoint_limit(get_spec("g"), "hi")


def test_sample_direction_errors():
    def evaluator(z):
        if z > 0.5:
            raise ValueError("outside")
        return z

    spec = MonotoneFunctionSpec("t", evaluator, (0.0, 1.0), "increasing", (0.0, 1.0))
    report = sample_direction(spec, 11)
    assert not report.monotone and report.errors and report.errors[0]["at"] > 0.5
    with pytest.raises(InvalidArgumentError):
        sample_direction(spec, 2)


def test_sample_direction_detects_wrong_direction():
    spec = MonotoneFunctionSpec("t", lambda z: z * z, (-1.0, 1.0), "increasing", (None, None))
    report = sample_direction(spec, 101)
    assert not report.monotone and report.max_violation > 0


def test_extremize_trivial_cases():
    arg, value = extremize(lambda z: 3.5, (0.0, 1.0), 1e-9)
    assert value == 3.5
    arg, value = extremize(math.sin, (0.0, math.pi), 1e-6, maximize=True)
    assert arg == pytest.approx(math.pi / 2, abs=1e-6) and value == pytest.approx(1.0, abs=1e-12)
    # a double-precision objective is flat to 1e-16 within ~1e-8 of the peak; mpfr resolves further
    arg, _ = extremize(gmpy2.sin, (0.0, math.pi), 1e-12, maximize=True)
    assert arg == pytest.approx(math.pi / 2, abs=1e-12)


def test_extremize_failures():
    with pytest.raises(NumericFailure):
        extremize(lambda z: z, (0.0, 1.0), 1e-9)
    with pytest.raises(InvalidArgumentError):
        extremize(math.sin, (0.0, 1.0), 0.0)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        res = extremize(lambda z: math.sin(40 * z) + z, (0.0, 3.0), 1e-9)
    assert not res.unimodal and caught
