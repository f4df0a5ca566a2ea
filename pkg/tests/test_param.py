from __future__ import annotations

import math

import mpmath
import pytest

import oracle
from meanslab import PositivePair, eval_mean, mean
from meanslab.errors import DegenerateInputError, DomainError, InvalidArgumentError
from meanslab.kinds import A, G, H, L, P, X, Y
from meanslab.param import SERIES_SWITCH, RatioKind, hyp_param, identric_from_relation, ratio_eval, trig_param

# (numerator, denominator, parameter) for each ratio kind
QUOTIENTS = {
    RatioKind.P_over_A: (P, A, "x"),
    RatioKind.G_over_A: (G, A, "x"),
    RatioKind.H_over_A: (H, A, "x"),
    RatioKind.X_over_A: (X, A, "x"),
    RatioKind.L_over_G: (L, G, "y"),
    RatioKind.L_over_A: (L, A, "y"),
    RatioKind.H_over_G: (H, G, "y"),
    RatioKind.Y_over_G: (Y, G, "y"),
}


def _mp_ratio(kind, z):
    z = mpmath.mpf(z)
    return {
        RatioKind.P_over_A: lambda: mpmath.sin(z) / z,
        RatioKind.G_over_A: lambda: mpmath.cos(z),
        RatioKind.H_over_A: lambda: mpmath.cos(z) ** 2,
        RatioKind.X_over_A: lambda: mpmath.exp(z * mpmath.cot(z) - 1),
        RatioKind.L_over_G: lambda: mpmath.sinh(z) / z,
        RatioKind.L_over_A: lambda: mpmath.tanh(z) / z,
        RatioKind.H_over_G: lambda: 1 / mpmath.cosh(z),
        RatioKind.Y_over_G: lambda: mpmath.exp(mpmath.tanh(z) / z - 1),
    }[kind]()


def test_trig_param_examples():
    assert trig_param(PositivePair(3, 1)) == pytest.approx(math.pi / 6, rel=1e-15)
    assert trig_param(PositivePair(1 + 1e-9, 1)) == pytest.approx(5e-10, rel=1e-6)
    assert trig_param(PositivePair(1e6, 1)) == pytest.approx(1.5687963274615629, rel=1e-15)


def test_hyp_param_examples():
    assert hyp_param(PositivePair(math.e**2, 1)) == pytest.approx(1.0, rel=1e-15)
    assert hyp_param(PositivePair(math.e**4, 1)) == pytest.approx(2.0, rel=1e-15)
    assert hyp_param(PositivePair(3, 1)) == pytest.approx(0.5493061443340549, rel=1e-15)


def test_degenerate_pairs():
    with pytest.raises(DegenerateInputError):
        trig_param(PositivePair(2, 2))
    with pytest.raises(DegenerateInputError):
        hyp_param(PositivePair(2, 2))


def test_ratio_examples():
    assert ratio_eval(RatioKind.P_over_A, math.pi / 6) == pytest.approx(3 / math.pi, rel=1e-15)
    assert ratio_eval(RatioKind.G_over_A, math.pi / 3) == pytest.approx(0.5, rel=1e-15)
    # mpmath: exp(tanh(2)/2 - 1)
    assert ratio_eval(RatioKind.Y_over_G, 2.0) == pytest.approx(0.5957189938311867, rel=1e-15)


@pytest.mark.parametrize("kind", list(RatioKind))
def test_ratio_domain(kind):
    bad = [0.0, -0.1, math.pi / 2 + 0.1] if kind.trig else [0.0, -1.0]
    for z in bad:
        with pytest.raises(DomainError):
            ratio_eval(kind, z)


@pytest.mark.parametrize("kind", list(RatioKind))
@pytest.mark.parametrize("z", [1e-8, 1e-5, 3e-3, 0.3, 1.2, 1.5])
def test_ratio_against_mpmath(kind, z):
    with mpmath.workdps(40):
        ref = float(_mp_ratio(kind, z))
    assert ratio_eval(kind, z) == pytest.approx(ref, rel=1e-14)


@pytest.mark.parametrize("kind", list(RatioKind))
def test_series_seam(kind):
    below = ratio_eval(kind, math.nextafter(SERIES_SWITCH, 0))
    above = ratio_eval(kind, SERIES_SWITCH)
    assert abs(below - above) <= 1e-12


@pytest.mark.parametrize("kind", list(RatioKind))
def test_limit_one(kind):
    assert abs(ratio_eval(kind, 1e-8) - 1) <= 1e-7


def test_round_trip_identities():
    for k in range(1, 1001):
        pair = PositivePair(10 ** (6 * k / 1000), 1.0)
        x, y = trig_param(pair), hyp_param(pair)
        assert math.cos(x) == pytest.approx(mean("G", pair.a, pair.b) / mean("A", pair.a, pair.b), rel=1e-14, abs=1e-14)
        for kind, (num, den, var) in QUOTIENTS.items():
            q = eval_mean(num, pair).value / eval_mean(den, pair).value
            assert ratio_eval(kind, x if var == "x" else y) == pytest.approx(q, rel=1e-12)


def test_h_equals_g_squared_over_a():
    for x in (1e-6, 0.01, 0.4, 1.0, 1.5):
        assert ratio_eval(RatioKind.H_over_A, x) == pytest.approx(ratio_eval(RatioKind.G_over_A, x) ** 2, rel=1e-14)


def test_identric_from_relation():
    assert identric_from_relation(2.5, 2.5, 2.5) == 2.5
    e = math.e
    assert identric_from_relation(e - 1, (e + 1) / 2, math.sqrt(e)) == pytest.approx(1.7895723968418335, rel=1e-14)
    # oracle I(3, 1); the relation G exp(A/L - 1) gives the identric mean
    assert identric_from_relation(2 / math.log(3), 2.0, math.sqrt(3)) == pytest.approx(1.9115576495069519, rel=1e-14)
    for a, b in [(3, 1), (1e6, 1), (1.001, 1), (5, 4)]:
        Lv, Av, Gv = mean("L", a, b), mean("A", a, b), mean("G", a, b)
        assert identric_from_relation(Lv, Av, Gv) == pytest.approx(float(oracle.mean("I", a, b)), rel=1e-12)
    with pytest.raises(InvalidArgumentError):
        identric_from_relation(-1.0, 1.0, 1.0)
