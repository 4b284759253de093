"""Generalized trigonometric and hyperbolic functions of a parameter p > 0.

Every function is computed from its defining integral:

========  ===================================  =========
inverse   integrand on [0, x]                  x-domain
========  ===================================  =========
arcsin_p  (1 - t**p)**(-1/p)                   [0, 1)
arctan_p  1 / (1 + t**p)                       [0, inf)
arcsinh_p (1 + t**p)**(-1/p)                   [0, inf)
arctanh_p 1 / (1 - t**p)                       [0, 1)
========  ===================================  =========

The forward functions invert these integrals by safeguarded Newton
iteration.  The two "unit" families (sin, tanh) are integrated and inverted
in the complement ``c = 1 - x`` once ``x > 1/2``, so values such as
``1 - tanh_16(5) ~ 1e-29`` are resolved to full relative precision even
though ``tanh_16(5)`` itself rounds to 1.0.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import BracketOverflow, DivergentEndpoint, DomainError, PoleError
from .quadrature import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    QuadResult,
    integrate_singular_upper,
    integrate_unit,
)

__all__ = [
    "Parameter",
    "FunctionKind",
    "Inversion",
    "Evaluation",
    "as_parameter",
    "pi_p",
    "pi_p_quadrature",
    "arcsin_p",
    "arccos_p",
    "arccos_p_via_arcsin",
    "arctan_p",
    "arcsinh_p",
    "arctanh_p",
    "sin_p",
    "cos_p",
    "tan_p",
    "tan_p_ratio",
    "sinh_p",
    "cosh_p",
    "tanh_p",
    "tanh_p_ratio",
    "tanh_p_complement",
    "invert",
    "evaluate",
    "integral_from_zero",
    "LogValue",
    "log_deviation",
]

# Inversion stops once |F(x) - y| <= Y_TOL * max(1, |y|).
Y_TOL = 1e-12
# sin_p returns 1 when pi_p/2 - y falls below this.
BOUNDARY_GAP = 1e-12
_BRACKET_CAP_LOG2 = 60
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Parameter:
    """A validated parameter value ``p > 0``."""

    p: float

    def __post_init__(self):
        p = float(self.p)
        if not (math.isfinite(p) and p > 0):
            raise DomainError(f"p must be finite and > 0, got {self.p!r}")
        object.__setattr__(self, "p", p)

    @property
    def sub_critical(self) -> bool:
        """True when ``p <= 1``, i.e. the half period is infinite."""
        return self.p <= 1.0

    def __float__(self):
        return self.p


def as_parameter(p) -> Parameter:
    return p if isinstance(p, Parameter) else Parameter(p)


class FunctionKind(str, enum.Enum):
    SIN = "sin"
    COS = "cos"
    TAN = "tan"
    SINH = "sinh"
    COSH = "cosh"
    TANH = "tanh"

    @classmethod
    def parse(cls, value) -> "FunctionKind":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


# ---------------------------------------------------------------------------
# integrands


def log_t(t, s):
    """``log t`` using the complement ``s = 1 - t`` where it is more accurate."""
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(t > 0.5, np.log1p(-s), np.log(t))


def one_minus_tp(p, lt):
    """``1 - t**p`` from ``lt = log t`` without cancellation."""
    return -np.expm1(p * lt)


def log1p_tp(p, lt):
    """``log(1 + t**p)`` from ``lt = log t``, safe for huge t."""
    return np.logaddexp(0.0, p * lt)


def _k_sin(p, t, s):
    return one_minus_tp(p, log_t(t, s)) ** (-1.0 / p)


def _k_tan(p, t, s):
    return np.exp(-log1p_tp(p, log_t(t, s)))


def _k_sinh(p, t, s):
    return np.exp(-log1p_tp(p, log_t(t, s)) / p)


def _k_tanh(p, t, s):
    return 1.0 / one_minus_tp(p, log_t(t, s))


@dataclass(frozen=True)
class _Family:
    kind: FunctionKind
    unit: bool  # x confined to [0, 1) with a singular upper end
    kernel: Callable


_FAMILIES = {
    FunctionKind.SIN: _Family(FunctionKind.SIN, True, _k_sin),
    FunctionKind.TAN: _Family(FunctionKind.TAN, False, _k_tan),
    FunctionKind.SINH: _Family(FunctionKind.SINH, False, _k_sinh),
    FunctionKind.TANH: _Family(FunctionKind.TANH, True, _k_tanh),
}


def _zero():
    return QuadResult(0.0, 0.0, 0, True)


def integral_from_zero(
    kernel: Callable,
    x: float,
    c: float | None = None,
    cfg: QuadratureConfig | None = None,
) -> QuadResult:
    """Integrate ``kernel(t, 1 - t)`` over ``[0, x]``.

    ``c`` is the complement ``1 - x``; passing it marks the kernel as
    singular at ``t = 1`` (the sin and tanh families), and it may be smaller
    than the spacing of doubles near 1.  Such integrals are taken in the
    complement variable on a logarithmic scale beyond ``x = 1/2``.  With
    ``c=None`` the kernel is regular at 1 and the part beyond ``x = 1`` is
    integrated in ``log t``.
    """
    cfg = cfg or DEFAULT_CONFIG
    if x == 0.0:
        return _zero()
    if x <= 0.5 or (c is None and x <= 1.0):
        def g(v, vc):
            t = np.where(v <= 0.5, x * v, x - x * vc)
            return x * kernel(t, 1.0 - t)

        return integrate_unit(g, cfg)
    if c is not None and c > 0.0:
        head = integral_from_zero(kernel, 0.5, 0.5, cfg)
        lo, hi = math.log(c), math.log(0.5)
        if hi - lo <= 0.0:
            return head
        span = hi - lo

        def g(v, vc):
            u = np.where(v <= 0.5, lo + span * v, hi - span * vc)
            s = np.exp(u)
            return span * s * kernel(1.0 - s, s)

        return head + integrate_unit(g, cfg)
    if c is None and x > 1.0:
        head = integral_from_zero(kernel, 1.0, None, cfg)
        span = math.log(x)

        def g(v, vc):
            u = np.where(v <= 0.5, span * v, span - span * vc)
            t = np.exp(u)
            return span * t * kernel(t, 1.0 - t)

        return head + integrate_unit(g, cfg)
    raise DomainError("integral up to the singular endpoint needs a dedicated rule")


# ---------------------------------------------------------------------------
# half period and inverse functions


def pi_p(p) -> float:
    """Half period ``2*pi/(p*sin(pi/p))``; ``inf`` for ``p <= 1``."""
    p = as_parameter(p)
    if p.sub_critical:
        return math.inf
    return 2.0 * math.pi / (p.p * math.sin(math.pi / p.p))


def pi_p_quadrature(p, cfg: QuadratureConfig | None = None) -> QuadResult:
    """``2 * int_0^1 (1 - t**p)**(-1/p) dt`` by singular quadrature (p > 1)."""
    p = as_parameter(p)
    if p.sub_critical:
        raise DivergentEndpoint(f"integral diverges for p={p.p} <= 1")
    pv = p.p

    def k(d):
        return one_minus_tp(pv, np.log1p(-d)) ** (-1.0 / pv)

    r = integrate_singular_upper(k, 0.0, 1.0, 1.0 / pv, cfg, from_upper=True)
    return QuadResult(2.0 * r.value, 2.0 * r.err_estimate, r.levels_used, r.converged)


def _check_x(x, lo, hi, hi_open, name):
    x = float(x)
    if math.isnan(x) or x < lo or x > hi or (hi_open and x >= hi):
        raise DomainError(f"{name}: argument {x} outside its domain")
    return x


def arcsin_p(p, x, cfg: QuadratureConfig | None = None) -> float:
    p = as_parameter(p)
    x = _check_x(x, 0.0, 1.0, False, "arcsin_p")
    if x == 1.0:
        if p.sub_critical:
            raise DivergentEndpoint("arcsin_p(1) diverges for p <= 1")
        return 0.5 * pi_p(p)
    pv = p.p
    return integral_from_zero(lambda t, s: _k_sin(pv, t, s), x, 1.0 - x, cfg).value


def arccos_p(p, x, cfg: QuadratureConfig | None = None) -> float:
    """``int_x^1 s**(p-2) / (1 - s**p)**(1 - 1/p) ds``."""
    p = as_parameter(p)
    x = _check_x(x, 0.0, 1.0, False, "arccos_p")
    pv = p.p
    if x == 0.0 and p.sub_critical:
        raise DivergentEndpoint("arccos_p(0) diverges for p <= 1")
    if x == 1.0:
        return 0.0

    def k(d):
        lt = np.log1p(-d)
        return np.exp((pv - 2.0) * lt) * one_minus_tp(pv, lt) ** (1.0 / pv - 1.0)

    # in the distance d = 1 - s the interval is (0, 1 - x]; the singular end
    # of (1 - s**p)**(1/p - 1) sits at d -> 0 i.e. at the upper end in s
    a = max(0.0, 1.0 - 1.0 / pv)
    return integrate_singular_upper(k, x, 1.0, a, cfg, from_upper=True).value


def arccos_p_via_arcsin(p, x, cfg: QuadratureConfig | None = None) -> float:
    """``arcsin_p((1 - x**p)**(1/p))``; the substitution-free form."""
    p = as_parameter(p)
    x = _check_x(x, 0.0, 1.0, False, "arccos_p")
    if x == 0.0:
        return arcsin_p(p, 1.0, cfg)
    pv = p.p
    z = (-np.expm1(pv * math.log(x))) ** (1.0 / pv)
    return arcsin_p(p, float(z), cfg)


def arctan_p(p, x, cfg: QuadratureConfig | None = None) -> float:
    p = as_parameter(p)
    x = _check_x(x, 0.0, math.inf, True, "arctan_p")
    pv = p.p
    return integral_from_zero(lambda t, s: _k_tan(pv, t, s), x, None, cfg).value


def arcsinh_p(p, x, cfg: QuadratureConfig | None = None) -> float:
    p = as_parameter(p)
    x = _check_x(x, 0.0, math.inf, True, "arcsinh_p")
    pv = p.p
    return integral_from_zero(lambda t, s: _k_sinh(pv, t, s), x, None, cfg).value


def arctanh_p(p, x, cfg: QuadratureConfig | None = None) -> float:
    p = as_parameter(p)
    x = _check_x(x, 0.0, 1.0, True, "arctanh_p")
    pv = p.p
    return integral_from_zero(lambda t, s: _k_tanh(pv, t, s), x, 1.0 - x, cfg).value


# ---------------------------------------------------------------------------
# inversion


@dataclass(frozen=True)
class Inversion:
    """Principal-branch solution ``x`` of ``F_p(x) = y`` for ``y >= 0``.

    ``c`` is ``1 - x`` to full relative precision for the unit families and
    ``None`` otherwise.  ``slope`` is ``F_p'(x)``, so the uncertainty in ``x``
    is ``x_err = (|residual| + quad_err) / slope``.
    """

    x: float
    c: float | None
    residual: float
    quad_err: float
    slope: float

    @property
    def x_err(self) -> float:
        if math.isinf(self.slope):
            return 0.0
        return (abs(self.residual) + self.quad_err) / self.slope


def _safeguarded_newton(obj, lo, hi, z0, scale, rising):
    """Root of a monotone objective inside the bracket ``[lo, hi]``.

    ``obj(z)`` returns ``(residual, derivative, quad_err)``; ``rising`` tells
    whether the residual increases with ``z``.  Newton steps are taken when
    they stay inside the bracket, bisection otherwise.
    """
    tol = Y_TOL * scale
    z = z0
    best = None
    polished = False
    for _ in range(200):
        r, dr, qerr = obj(z)
        if best is None or abs(r) < abs(best[1]):
            best = (z, r, qerr, dr)
        if (r < 0) == rising:
            lo = z
        else:
            hi = z
        if abs(r) <= tol:
            # one more Newton step costs one integral and usually reaches
            # the quadrature noise floor
            if polished or abs(r) <= 4 * _EPS * scale:
                break
            polished = True
        if hi - lo <= 1e-15 * max(1.0, abs(lo), abs(hi)):
            break
        step = r / dr if dr != 0 and math.isfinite(dr) else math.nan
        zn = z - step
        if not (lo < zn < hi) or not math.isfinite(zn):
            zn = 0.5 * (lo + hi)
            polished = False
        if zn == z:
            break
        z = zn
    return best


def invert(kind, p, y: float, cfg: QuadratureConfig | None = None) -> Inversion:
    """Solve ``F_p(x) = y`` on the principal branch of ``kind`` (y >= 0).

    ``kind`` is one of the four integral families: sin, tan, sinh, tanh.
    """
    kind = FunctionKind.parse(kind)
    fam = _FAMILIES[kind]
    p = as_parameter(p)
    pv = p.p
    cfg = cfg or DEFAULT_CONFIG
    y = float(y)
    if not (y >= 0.0 and math.isfinite(y)):
        raise DomainError(f"principal inversion needs finite y >= 0, got {y}")

    def k(t, s):
        return fam.kernel(pv, t, s)

    def slope_at(x, c):
        return float(k(np.array([x]), np.array([c]))[0])

    if y == 0.0:
        return Inversion(0.0, 1.0 if fam.unit else None, 0.0, 0.0, slope_at(0.0, 1.0))

    scale = max(1.0, y)
    split = 0.5 if fam.unit else 1.0
    head = integral_from_zero(k, split, 0.5 if fam.unit else None, cfg)

    if y <= head.value:
        def obj_x(x):
            if x <= 0.0:
                return -y, slope_at(0.0, 1.0), 0.0
            r = integral_from_zero(k, x, 1.0 - x if fam.unit else None, cfg)
            return r.value - y, slope_at(x, 1.0 - x), r.err_estimate

        z, r, qerr, dr = _safeguarded_newton(obj_x, 0.0, split, min(y, 0.5 * split), scale, True)
        z = min(max(z, 0.0), split)
        return Inversion(z, 1.0 - z if fam.unit else None, r, qerr, dr)

    if fam.unit:
        if kind is FunctionKind.SIN and not p.sub_critical:
            if 0.5 * pi_p(p) - y < BOUNDARY_GAP:
                return Inversion(1.0, 0.0, 0.5 * pi_p(p) - y, 0.0, math.inf)

        def tail(u):
            c = math.exp(u)
            if c >= 0.5:
                return _zero()
            span = math.log(0.5) - u

            def g(v, vc):
                w = np.where(v <= 0.5, u + span * v, math.log(0.5) - span * vc)
                s = np.exp(w)
                return span * s * k(1.0 - s, s)

            return integrate_unit(g, cfg)

        def obj_u(u):
            c = math.exp(u)
            r = tail(u)
            val = head.value + r.value - y
            return val, -slope_at(1.0 - c, c) * c, r.err_estimate + head.err_estimate

        hi = math.log(0.5)
        lo = hi - 1.0
        while True:
            r, _, _ = obj_u(lo)
            if r >= 0:
                break
            if lo < -740.0:
                # complement below the smallest double: saturated at x = 1
                return Inversion(1.0, 0.0, r, 0.0, math.inf)
            hi, lo = lo, 2.0 * lo
        z, r, qerr, dr = _safeguarded_newton(obj_u, lo, hi, 0.5 * (lo + hi), scale, False)
        c = math.exp(z)
        return Inversion(1.0 - c, c, r, qerr, slope_at(1.0 - c, c))

    # half-line families beyond x = 1, solved in u = log x
    def obj_v(u):
        t = math.exp(u)
        span = u

        def g(v, vc):
            w = np.where(v <= 0.5, span * v, span - span * vc)
            tt = np.exp(w)
            return span * tt * k(tt, 1.0 - tt)

        r = integrate_unit(g, cfg)
        val = head.value + r.value - y
        return val, slope_at(t, 1.0 - t) * t, r.err_estimate + head.err_estimate

    lo = 0.0
    hi = math.log(2.0)
    while True:
        r, _, _ = obj_v(hi)
        if r >= 0:
            break
        if hi >= _BRACKET_CAP_LOG2 * math.log(2.0):
            raise BracketOverflow(f"{kind.value}_p({y}) exceeds 2**{_BRACKET_CAP_LOG2}")
        lo, hi = hi, min(2.0 * hi, _BRACKET_CAP_LOG2 * math.log(2.0))
    z, r, qerr, dr = _safeguarded_newton(obj_v, lo, hi, 0.5 * (lo + hi), scale, True)
    x = math.exp(z)
    return Inversion(x, None, r, qerr, slope_at(x, 1.0 - x))


# ---------------------------------------------------------------------------
# forward functions


@dataclass(frozen=True)
class Evaluation:
    """A forward value with its numerical diagnostics."""

    kind: FunctionKind
    p: float
    y: float
    value: float
    quad_err: float
    root_residual: float
    value_err: float


def _reduce_trig(p: Parameter, y: float):
    """Map y into [-pi_p, pi_p] by 2*pi_p periodicity (identity for p <= 1)."""
    if p.sub_critical:
        return y
    per = 2.0 * pi_p(p)
    half = 0.5 * per
    r = math.remainder(y, per)
    if r == -half:
        r = half
    return r


def _sin_parts(p: Parameter, y: float, cfg):
    """Return (sign, inversion) with sin_p(y) = sign * inv.x."""
    y = _reduce_trig(p, y)
    sign = -1.0 if y < 0 else 1.0
    y = abs(y)
    if not p.sub_critical:
        half = 0.5 * pi_p(p)
        if y > half:
            y = 2.0 * half - y
    return sign, invert(FunctionKind.SIN, p, y, cfg)


def sin_p(p, y, cfg: QuadratureConfig | None = None) -> float:
    p = as_parameter(p)
    sign, inv = _sin_parts(p, float(y), cfg)
    return sign * inv.x


def _cos_from_inversion(p: float, inv: Inversion) -> float:
    if inv.x <= 0.5:
        return float(-np.expm1(p * math.log(inv.x)) if inv.x > 0 else 1.0) ** (1.0 / p)
    return float(one_minus_tp(p, math.log1p(-inv.c))) ** (1.0 / p)


def _cos_parts(p: Parameter, y: float, cfg):
    y = abs(_reduce_trig(p, y))
    sign = 1.0
    if not p.sub_critical:
        half = 0.5 * pi_p(p)
        if y > half:
            y = 2.0 * half - y
            sign = -1.0
    return sign, invert(FunctionKind.SIN, p, y, cfg)


def cos_p(p, y, cfg: QuadratureConfig | None = None) -> float:
    """Derivative of sin_p; equals ``(1 - sin_p(y)**p)**(1/p)`` on the principal domain."""
    p = as_parameter(p)
    sign, inv = _cos_parts(p, float(y), cfg)
    if inv.c == 0.0:
        return 0.0
    return sign * _cos_from_inversion(p.p, inv)


def _tan_principal(p: Parameter, y: float):
    if not p.sub_critical:
        half = 0.5 * pi_p(p)
        if abs(abs(y) - half) <= BOUNDARY_GAP * max(1.0, half):
            raise PoleError(f"tan_p has a pole at y={y} for p={p.p}")
        if abs(y) > half:
            raise DomainError("tan_p is implemented on the principal branch (-pi_p/2, pi_p/2) for p > 1")


def tan_p(p, y, cfg: QuadratureConfig | None = None) -> float:
    """Inverse of arctan_p, extended by oddness."""
    p = as_parameter(p)
    y = float(y)
    _tan_principal(p, y)
    inv = invert(FunctionKind.TAN, p, abs(y), cfg)
    return math.copysign(inv.x, y) if y != 0 else 0.0


def tan_p_ratio(p, y, cfg: QuadratureConfig | None = None) -> float:
    """``sin_p(y) / cos_p(y)``, the independent route to tan_p."""
    p = as_parameter(p)
    y = float(y)
    _tan_principal(p, y)
    return sin_p(p, y, cfg) / cos_p(p, y, cfg)


def sinh_p(p, y, cfg: QuadratureConfig | None = None) -> float:
    p = as_parameter(p)
    y = float(y)
    inv = invert(FunctionKind.SINH, p, abs(y), cfg)
    return math.copysign(inv.x, y) if y != 0 else 0.0


def _cosh_from_x(p: float, x: float) -> float:
    x = abs(x)
    if x <= 1.0:
        return math.exp(math.log1p(x**p) / p)
    return x * math.exp(math.log1p(x**-p) / p)


def cosh_p(p, y, cfg: QuadratureConfig | None = None) -> float:
    p = as_parameter(p)
    return _cosh_from_x(p.p, sinh_p(p, abs(float(y)), cfg))


def tanh_p(p, y, cfg: QuadratureConfig | None = None) -> float:
    """Inverse of arctanh_p, extended by oddness."""
    p = as_parameter(p)
    y = float(y)
    inv = invert(FunctionKind.TANH, p, abs(y), cfg)
    return math.copysign(inv.x, y) if y != 0 else 0.0


def tanh_p_complement(p, y, cfg: QuadratureConfig | None = None) -> float:
    """``1 - tanh_p(y)`` for ``y >= 0`` to full relative precision."""
    p = as_parameter(p)
    y = float(y)
    if y < 0:
        raise DomainError("tanh_p_complement needs y >= 0")
    return invert(FunctionKind.TANH, p, y, cfg).c


def tanh_p_ratio(p, y, cfg: QuadratureConfig | None = None) -> float:
    """``sinh_p(y) / cosh_p(y)``, the independent route to tanh_p."""
    p = as_parameter(p)
    x = sinh_p(p, y, cfg)
    return x / _cosh_from_x(p.p, x)


def evaluate(kind, p, y, cfg: QuadratureConfig | None = None) -> Evaluation:
    """Forward value of ``kind`` at ``(p, y)`` with quadrature and root diagnostics."""
    kind = FunctionKind.parse(kind)
    p = as_parameter(p)
    y = float(y)
    pv = p.p
    if kind is FunctionKind.SIN:
        sign, inv = _sin_parts(p, y, cfg)
        value, err = sign * inv.x, inv.x_err
    elif kind is FunctionKind.COS:
        sign, inv = _cos_parts(p, y, cfg)
        if inv.c == 0.0:
            value, err = 0.0, 0.0
        else:
            value = sign * _cos_from_inversion(pv, inv)
            # d cos / d x = -(x/cos)**(p-1)
            err = abs((inv.x / value) ** (pv - 1.0)) * inv.x_err if value else inv.x_err
    elif kind is FunctionKind.TAN:
        _tan_principal(p, y)
        inv = invert(kind, p, abs(y), cfg)
        value, err = math.copysign(inv.x, y), inv.x_err
    elif kind is FunctionKind.SINH:
        inv = invert(kind, p, abs(y), cfg)
        value, err = math.copysign(inv.x, y), inv.x_err
    elif kind is FunctionKind.COSH:
        inv = invert(FunctionKind.SINH, p, abs(y), cfg)
        value = _cosh_from_x(pv, inv.x)
        err = (inv.x / value) ** (pv - 1.0) * inv.x_err
    else:
        inv = invert(kind, p, abs(y), cfg)
        value, err = math.copysign(inv.x, y), inv.x_err
    if y == 0 and kind in (FunctionKind.SIN, FunctionKind.TAN, FunctionKind.SINH, FunctionKind.TANH):
        value = 0.0
    return Evaluation(kind, pv, y, float(value), float(inv.quad_err), float(inv.residual), float(err))


# ---------------------------------------------------------------------------
# accurate logarithms for parameter differences


def _x_sin(p, lt):
    return np.expm1(-np.log1p(-np.exp(p * lt)) / p)


def _x_tan(p, lt):
    return -np.exp(p * lt - log1p_tp(p, lt))


def _x_sinh(p, lt):
    return np.expm1(-log1p_tp(p, lt) / p)


def _x_tanh(p, lt):
    tp = np.exp(p * lt)
    return tp / -np.expm1(p * lt)


# kernel minus one, accurate when t**p is tiny
_EXCESS = {
    FunctionKind.SIN: _x_sin,
    FunctionKind.TAN: _x_tan,
    FunctionKind.SINH: _x_sinh,
    FunctionKind.TANH: _x_tanh,
}


@dataclass(frozen=True)
class LogValue:
    """``log |g_p(y)| - log_base`` with an absolute error bound.

    ``log_base`` is ``log y`` where the value is close to y (small
    arguments of the odd functions) and 0 otherwise.  When the bases agree, parameter differences of
    ``value`` equal those of ``log g`` exactly.  Keeping the base separate preserves deviations far
    below the resolution of ``log g`` itself (e.g. ``sin_16(0.05)``, whose
    relative distance from 0.05 is ~1e-23).
    """

    value: float
    err: float
    log_base: float

    @property
    def log(self) -> float:
        return self.log_base + self.value


def _log_dev_odd(kind: FunctionKind, p: Parameter, y: float, cfg, inv: Inversion | None = None):
    pv = p.p
    fam = _FAMILIES[kind]
    inv = inv or invert(kind, p, y, cfg)
    x = inv.x
    if x == 0.0:
        raise DomainError("log of a zero value")
    small = x <= 0.5 if fam.unit else x <= 1.0
    # y - E(x) only beats log(x) when x is close to y
    if small and abs(x / y - 1.0) < 0.5:
        ex = _EXCESS[kind]

        def k(t, s):
            return ex(pv, log_t(t, s))

        e = integral_from_zero(k, x, 1.0 - x if fam.unit else None, replace_abs_tol(cfg))
        # y - E(x) reproduces x with the residual removed
        ratio = -e.value / y
        dev = math.log1p(ratio)
        # an error dx in x moves y - E(x) by (k - 1) dx
        spill = (abs(inv.residual) + inv.quad_err) * abs(inv.slope - 1.0) / inv.slope
        err = (e.err_estimate + spill) / (y * (1.0 + ratio)) + 2 * _EPS * abs(dev)
        return LogValue(dev, err, math.log(y)), inv
    # away from y the deviation is not small and log x itself is accurate
    if fam.unit and x > 0.5:
        lx = math.log1p(-inv.c)
        return LogValue(lx, inv.x_err / x + 2 * _EPS * abs(lx), 0.0), inv
    lx = math.log(x)
    return LogValue(lx, inv.x_err / x + 2 * _EPS * abs(lx), 0.0), inv


def replace_abs_tol(cfg: QuadratureConfig | None) -> QuadratureConfig:
    from dataclasses import replace

    return replace(cfg or DEFAULT_CONFIG, abs_tol=1e-300)


def log_deviation(kind, p, y, cfg: QuadratureConfig | None = None) -> LogValue:
    """Accurate ``log g`` on the principal branch, for ``y > 0``."""
    kind = FunctionKind.parse(kind)
    p = as_parameter(p)
    y = float(y)
    if not y > 0:
        raise DomainError("log_deviation needs y > 0")
    pv = p.p
    if kind in _EXCESS:
        if kind is FunctionKind.TAN:
            _tan_principal(p, y)
        if kind is FunctionKind.SIN and not p.sub_critical and y > 0.5 * pi_p(p):
            raise DomainError("log_deviation is restricted to the principal domain")
        return _log_dev_odd(kind, p, y, cfg)[0]
    if kind is FunctionKind.COS:
        if not p.sub_critical and y >= 0.5 * pi_p(p):
            raise DomainError("log cos_p needs y < pi_p/2")
        inv = invert(FunctionKind.SIN, p, y, cfg)
        lx = math.log1p(-inv.c) if inv.x > 0.5 else math.log(inv.x)
        # log cos = log(1 - x^p)/p, d/dx = -x^(p-1)/(1 - x^p)
        q = float(one_minus_tp(pv, lx))
        val = math.log1p(-math.exp(pv * lx)) / pv
        err = math.exp((pv - 1.0) * lx) / q * inv.x_err + 2 * _EPS * abs(val)
        return LogValue(val, err, 0.0)
    # cosh: log(1 + x^p)/p with x = sinh_p(y)
    inv = invert(FunctionKind.SINH, p, y, cfg)
    lx = math.log(inv.x)
    val = float(log1p_tp(pv, lx)) / pv
    err = math.exp((pv - 1.0) * lx - float(log1p_tp(pv, lx))) * inv.x_err + 2 * _EPS * abs(val)
    return LogValue(val, err, 0.0)
