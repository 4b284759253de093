import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

import oracles
from gentrig import core
from gentrig.core import (
    FunctionKind,
    Parameter,
    arccos_p,
    arccos_p_via_arcsin,
    arcsin_p,
    arcsinh_p,
    arctan_p,
    arctanh_p,
    cos_p,
    cosh_p,
    evaluate,
    invert,
    log_deviation,
    pi_p,
    pi_p_quadrature,
    sin_p,
    sinh_p,
    tan_p,
    tan_p_ratio,
    tanh_p,
    tanh_p_complement,
    tanh_p_ratio,
)
from gentrig.errors import BracketOverflow, DivergentEndpoint, DomainError, PoleError

ps = st.floats(0.25, 16.0)


# -- Parameter ----------------------------------------------------------------


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf, -math.inf])
def test_parameter_rejects(bad):
    with pytest.raises(DomainError):
        Parameter(bad)


def test_parameter_classification():
    assert Parameter(1.0).sub_critical
    assert Parameter(0.3).sub_critical
    assert not Parameter(1.0000001).sub_critical


def test_kind_parse():
    assert FunctionKind.parse("SIN") is FunctionKind.SIN
    assert FunctionKind.parse(FunctionKind.TANH) is FunctionKind.TANH
    with pytest.raises(ValueError):
        FunctionKind.parse("sec")


# -- pi_p ---------------------------------------------------------------------


def test_pi_p_values():
    assert pi_p(2) == pytest.approx(math.pi, rel=1e-15)
    assert pi_p(1) == math.inf
    assert pi_p(0.5) == math.inf
    assert pi_p(4) == pytest.approx(2.2214414690791831, rel=1e-15)


@pytest.mark.parametrize("p", [1.05, 1.5, 3.0, 7.0, 20.0, 50.0])
def test_pi_p_quadrature(p):
    assert pi_p_quadrature(p).value == pytest.approx(pi_p(p), rel=1e-12)


def test_pi_p_quadrature_diverges():
    with pytest.raises(DivergentEndpoint):
        pi_p_quadrature(1.0)


def test_pi_p_decreasing():
    vals = [pi_p(p) for p in np.geomspace(1.01, 50, 60)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


# -- inverse functions ----------------------------------------------------------


def test_arcsin_examples():
    assert arcsin_p(2, 0.5) == pytest.approx(math.pi / 6, rel=1e-14)
    assert arcsin_p(3.3, 0.0) == 0.0
    assert arcsin_p(1, 0.5) == pytest.approx(math.log(2), rel=1e-14)
    assert arcsin_p(3, 1.0) == pytest.approx(pi_p(3) / 2, rel=1e-15)


def test_arcsin_errors():
    with pytest.raises(DomainError):
        arcsin_p(2, 1.5)
    with pytest.raises(DomainError):
        arcsin_p(2, -0.1)
    with pytest.raises(DivergentEndpoint):
        arcsin_p(1, 1.0)


def test_arccos_examples():
    assert arccos_p(2, 0.5) == pytest.approx(math.pi / 3, rel=1e-13)
    assert arccos_p(3, 1.0) == 0.0
    assert arccos_p(3, 0.3) == pytest.approx(arccos_p_via_arcsin(3, 0.3), abs=1e-10)
    assert arccos_p(3, 0.0) == pytest.approx(pi_p(3) / 2, rel=1e-12)
    with pytest.raises(DivergentEndpoint):
        arccos_p(0.8, 0.0)


@settings(max_examples=25, deadline=None)
@given(st.floats(1.05, 12.0), st.floats(0.01, 0.99))
def test_arccos_two_forms(p, x):
    assert arccos_p(p, x) == pytest.approx(arccos_p_via_arcsin(p, x), abs=1e-10)


def test_arctan_examples():
    assert arctan_p(1, 1.0) == pytest.approx(math.log(2), rel=1e-14)
    assert arctan_p(2, 1.0) == pytest.approx(math.pi / 4, rel=1e-14)
    assert arctan_p(5, 0.0) == 0.0
    # tail beyond x is about 1/(2x^2)
    assert pi_p(3) / 2 - arctan_p(3, 1e3) == pytest.approx(0.5e-6, rel=1e-5)
    with pytest.raises(DomainError):
        arctan_p(2, -1.0)
    with pytest.raises(DomainError):
        arctan_p(2, math.nan)


def test_arcsinh_examples():
    assert arcsinh_p(1, 1.0) == pytest.approx(math.log(2), rel=1e-14)
    assert arcsinh_p(2, 1.0) == pytest.approx(math.asinh(1.0), rel=1e-14)
    assert arcsinh_p(2.5, 0.0) == 0.0
    assert arcsinh_p(2, 1e6) == pytest.approx(math.asinh(1e6), rel=1e-13)


def test_arctanh_examples():
    assert arctanh_p(2, 0.5) == pytest.approx(math.atanh(0.5), rel=1e-14)
    assert arctanh_p(4, 0.0) == 0.0
    assert arctanh_p(1, 0.5) == pytest.approx(math.log(2), rel=1e-14)
    with pytest.raises(DomainError):
        arctanh_p(2, 1.0)
    # grows without bound towards 1
    assert arctanh_p(2, 1 - 1e-12) > 13


# -- forward functions: examples ------------------------------------------------


def test_sin_examples():
    assert sin_p(2, 1.0) == pytest.approx(math.sin(1.0), abs=1e-15)
    assert sin_p(1, 0.7) == pytest.approx(-math.expm1(-0.7), abs=1e-15)
    assert sin_p(7.5, 0.0) == 0.0
    assert sin_p(3, pi_p(3) / 2) == 1.0


def test_cos_examples():
    assert cos_p(2, 1.0) == pytest.approx(math.cos(1.0), abs=1e-15)
    assert cos_p(4.4, 0.0) == 1.0
    assert cos_p(1, 0.7) == pytest.approx(math.exp(-0.7), abs=1e-15)
    assert cos_p(3, pi_p(3) / 2) == 0.0


def test_tan_examples():
    assert tan_p(1, math.log(2)) == pytest.approx(1.0, abs=1e-14)
    assert tan_p(3, 0.0) == 0.0
    assert tan_p(2, 0.5) == pytest.approx(math.tan(0.5), abs=1e-15)
    assert tan_p(2, -0.5) == pytest.approx(math.tan(-0.5), abs=1e-15)


def test_tan_pole_and_branch():
    with pytest.raises(PoleError):
        tan_p(2, math.pi / 2)
    with pytest.raises(DomainError):
        tan_p(2, 2.0)


def test_sinh_examples():
    assert sinh_p(1, 1.0) == pytest.approx(math.e - 1, rel=1e-14)
    assert sinh_p(2, 1.0) == pytest.approx(math.sinh(1.0), rel=1e-14)
    assert sinh_p(5, 0.0) == 0.0
    assert sinh_p(2, -1.0) == pytest.approx(-math.sinh(1.0), rel=1e-14)


def test_sinh_bracket_cap():
    with pytest.raises(BracketOverflow):
        sinh_p(0.05, 2.0)


def test_cosh_examples():
    assert cosh_p(2, 1.0) == pytest.approx(math.cosh(1.0), rel=1e-14)
    assert cosh_p(3, 0.0) == 1.0
    c, s = cosh_p(3, 0.8), sinh_p(3, 0.8)
    assert c**3 - s**3 == pytest.approx(1.0, abs=1e-10)
    assert cosh_p(2, -1.0) == cosh_p(2, 1.0)


def test_tanh_examples():
    assert tanh_p(1, 1.0) == pytest.approx(-math.expm1(-1.0), abs=1e-15)
    assert tanh_p(2, 1.0) == pytest.approx(math.tanh(1.0), abs=1e-15)
    assert tanh_p(9, 0.0) == 0.0
    assert tanh_p(2, -1.0) == pytest.approx(-math.tanh(1.0), abs=1e-15)


def test_tanh_complement_resolves_tiny_gaps():
    # 1 - tanh(20) ~ 8.5e-18 is below float resolution of tanh itself
    assert tanh_p_complement(2, 20.0) == pytest.approx(2 / (math.exp(40) + 1), rel=1e-12)
    assert tanh_p(2, 20.0) == 1.0


def test_evaluate_diagnostics():
    ev = evaluate("sin", 2, 1.0)
    assert ev.value == pytest.approx(math.sin(1.0), abs=1e-15)
    assert abs(ev.root_residual) <= 1e-12
    assert 0 <= ev.quad_err < 1e-12
    assert ev.value_err < 1e-12


# -- classical reduction and closed forms --------------------------------------


@pytest.mark.parametrize(
    "f,ref,lo,hi",
    [
        (sin_p, math.sin, -10.0, 10.0),
        (cos_p, math.cos, -10.0, 10.0),
        (tan_p, math.tan, -1.5, 1.5),
        (sinh_p, math.sinh, -5.0, 5.0),
        (cosh_p, math.cosh, -5.0, 5.0),
        (tanh_p, math.tanh, -5.0, 5.0),
    ],
)
def test_classical_p2(f, ref, lo, hi):
    for y in np.linspace(lo, hi, 41):
        assert f(2, y) == pytest.approx(ref(y), rel=1e-12, abs=1e-13)


@pytest.mark.parametrize("y", np.linspace(0, 3, 13))
def test_p1_closed_forms(y):
    assert sin_p(1, y) == pytest.approx(-math.expm1(-y), abs=1e-10)
    assert tan_p(1, y) == pytest.approx(math.expm1(y), rel=1e-10)


def test_large_p_asymptote():
    for y in np.linspace(0, 0.9, 10):
        assert abs(sin_p(200, y) - y) <= 0.02


@pytest.mark.parametrize(
    "kind,p,y",
    [("sin", 3, 0.5), ("sin", 0.5, 0.9), ("tan", 4, 0.6), ("sinh", 3, 2.0), ("sinh", 0.5, 1.5),
     ("tanh", 1.5, 2.0), ("tanh", 6, 0.3)],
)
def test_mpmath_oracle(kind, p, y):
    ref = float(oracles.inverse(kind, p, y))
    assert invert(kind, p, y).x == pytest.approx(ref, rel=1e-13)


# -- identities and round trips ------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(ps, st.floats(0.0, 1.0))
def test_pythagorean(p, frac):
    half = pi_p(p) / 2
    y = frac * (half if math.isfinite(half) else 3.0)
    assert abs(sin_p(p, y)) ** p + abs(cos_p(p, y)) ** p == pytest.approx(1.0, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(ps, st.floats(0.0, 5.0))
def test_hyperbolic_identity(p, y):
    assume(not (p < 0.3 and y > 2))  # sinh_p overflows the bracket cap there
    c, s = cosh_p(p, y), sinh_p(p, y)
    # relative form: both powers can be large
    assert c**p - s**p == pytest.approx(1.0, rel=1e-9 * max(1.0, c**p))


@settings(max_examples=40, deadline=None)
@given(ps, st.floats(0.0, 0.999))
def test_round_trip_sin(p, frac):
    half = pi_p(p) / 2
    y = frac * (half if math.isfinite(half) else 5.0)
    x = sin_p(p, y)
    assume(x < 1.0)
    assert arcsin_p(p, x) == pytest.approx(y, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(ps, st.floats(0.001, 0.999))
def test_round_trip_cos(p, frac):
    half = pi_p(p) / 2
    y = frac * (half if math.isfinite(half) else 5.0)
    c = cos_p(p, y)
    assume(c > 0 and (p > 1 or c < 1))
    # rounding in c is amplified by 1/|cos_p'| = 1/(sin^(p-1) cos^(2-p))
    s = sin_p(p, y)
    cond = 1.0 / (s ** (p - 1) * c ** (2 - p))
    assert arccos_p_via_arcsin(p, c) == pytest.approx(y, abs=1e-9 + 4e-16 * cond)


@settings(max_examples=40, deadline=None)
@given(ps, st.floats(0.0, 0.95))
def test_round_trip_tan(p, frac):
    half = pi_p(p) / 2
    y = frac * (half if math.isfinite(half) else 5.0)
    assert arctan_p(p, tan_p(p, y)) == pytest.approx(y, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 16.0), st.floats(0.0, 5.0))
def test_round_trip_hyperbolic(p, y):
    assert arcsinh_p(p, sinh_p(p, y)) == pytest.approx(y, abs=1e-9)
    x = tanh_p(p, y)
    assume(x < 1.0)
    # arctanh_p' = 1/(1 - x^p) amplifies the rounding of x
    cond = 1.0 / -math.expm1(p * math.log(x)) if x > 0 else 1.0
    assert arctanh_p(p, x) == pytest.approx(y, abs=1e-9 + 4e-16 * cond)


@settings(max_examples=40, deadline=None)
@given(ps, st.floats(0.0, 0.95))
def test_tan_two_routes(p, frac):
    half = pi_p(p) / 2
    y = frac * (half if math.isfinite(half) else 3.0)
    t = tan_p(p, y)
    assert tan_p_ratio(p, y) == pytest.approx(t, rel=1e-9, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.5, 16.0), st.floats(0.0, 5.0))
def test_tanh_two_routes(p, y):
    assert tanh_p_ratio(p, y) == pytest.approx(tanh_p(p, y), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.floats(1.05, 16.0), st.floats(-10.0, 10.0))
def test_sin_extension(p, y):
    pp = pi_p(p)
    assert sin_p(p, pp - y) == pytest.approx(sin_p(p, y), abs=1e-9)
    assert sin_p(p, y + 2 * pp) == pytest.approx(sin_p(p, y), abs=1e-9)
    assert sin_p(p, -y) == -sin_p(p, y)
    assert cos_p(p, -y) == cos_p(p, y)


def test_cos_sign_follows_sin_derivative():
    p = 3.0
    half = pi_p(p) / 2
    for y in [half + 0.1, half + 0.5, 2 * half - 0.01]:
        h = 1e-6
        slope = (sin_p(p, y + h) - sin_p(p, y - h)) / (2 * h)
        assert math.copysign(1, cos_p(p, y)) == math.copysign(1, slope)


@settings(max_examples=40, deadline=None)
@given(ps, st.floats(0.0, 0.99), st.floats(0.0, 0.99))
def test_sin_monotone(p, a, b):
    half = pi_p(p) / 2
    scale = half if math.isfinite(half) else 5.0
    lo, hi = sorted((a * scale, b * scale))
    assume(hi > lo)
    assert sin_p(p, lo) <= sin_p(p, hi)


# -- accurate logarithms ------------------------------------------------------


def test_log_deviation_far_below_resolution():
    # sin_16(0.05) differs from 0.05 by ~3e-25, invisible in sin_p itself
    lv = log_deviation("sin", 16, 0.05)
    assert lv.value == pytest.approx(float(oracles.log_sin_dev(16, 0.05)), rel=1e-12)
    assert lv.log_base == math.log(0.05)


@pytest.mark.parametrize("kind,p,y", [("sin", 3, 0.5), ("tan", 2, 0.4), ("sinh", 0.5, 3.0), ("tanh", 16, 5.0),
                                      ("cos", 3, 0.5), ("cosh", 2, 1.0), ("sin", 0.05, 0.5)])
def test_log_deviation_matches_log(kind, p, y):
    lv = log_deviation(kind, p, y)
    ref = math.log(abs(evaluate(kind, p, y).value))
    assert lv.log == pytest.approx(ref, rel=1e-13, abs=1e-15)
    assert lv.err < 1e-10


def test_log_deviation_tanh_complement():
    lv = log_deviation("tanh", 16, 5.0)
    assert lv.value == pytest.approx(-tanh_p_complement(16, 5.0), rel=1e-12)


def test_log_deviation_domain():
    with pytest.raises(DomainError):
        log_deviation("sin", 2, 0.0)
    with pytest.raises(DomainError):
        log_deviation("cos", 2, math.pi / 2)


def test_threads_share_nothing():
    from concurrent.futures import ThreadPoolExecutor

    ys = np.linspace(0.1, 1.2, 24)
    serial = [sin_p(2.5, y) for y in ys]
    with ThreadPoolExecutor(4) as ex:
        parallel = list(ex.map(lambda y: sin_p(2.5, y), ys))
    assert serial == parallel


def test_module_constants():
    assert core.Y_TOL == 1e-12
