"""Numerical certification of convexity properties in the parameter p.

Every check returns a signed slack oriented so that a positive value means
the claimed inequality holds.  A slack is turned into a :class:`Margin`
by comparing it with a propagated error bound; a cell is only declared
``Holds`` or ``Fails`` when the slack clears that bound.

The error bounds are heuristic (quadrature estimates, root residuals mapped
through local slopes, rounding terms); they are not interval enclosures.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .calculus import (
    BOUNDARY_PROXIMITY,
    _alpha_dp,
    _alpha_dpp,
    _phi,
    _phi_dpp,
    derivative_report,
    make_bundle,
    phi_log_dp,
)
from .core import (
    DEFAULT_CONFIG,
    FunctionKind,
    as_parameter,
    integral_from_zero,
    invert,
    log_deviation,
    replace_abs_tol,
)
from .errors import (
    BoundaryProximity,
    DomainError,
    GentrigError,
    NoSignChange,
    UnsupportedFamily,
)
from .quadrature import QuadratureConfig, integrate

__all__ = [
    "Verdict",
    "Margin",
    "Bounded",
    "Property",
    "Variant",
    "ScanReport",
    "turan_margin",
    "corollary_condition",
    "lemma3_check",
    "lemma3_moment",
    "lemma3_constant",
    "zeta3",
    "theorem1_G",
    "theorem4_discriminant",
    "theorem5_ratio_check",
    "certified",
    "scan",
    "find_p0",
    "P0Result",
    "thread_count",
]

_EPS = float(np.finfo(float).eps)
LOG2 = math.log(2.0)


class Verdict(str, enum.Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class Margin:
    """Signed slack of an inequality and its error bound.

    ``verdict`` is derived: Holds iff ``value > err_bound``, Fails iff
    ``value < -err_bound``, Inconclusive otherwise (including NaN).
    """

    value: float
    err_bound: float
    verdict: Verdict = field(init=False)
    note: str = field(default="", compare=False)

    def __post_init__(self):
        value = float(self.value)
        err = float(self.err_bound)
        if math.isnan(err) or err < 0:
            err = math.inf
        object.__setattr__(self, "value", value)
        object.__setattr__(self, "err_bound", err)
        if value > err:
            v = Verdict.HOLDS
        elif value < -err:
            v = Verdict.FAILS
        else:
            v = Verdict.INCONCLUSIVE
        object.__setattr__(self, "verdict", v)

    def _key(self):
        # NaN slacks (cells that raised) compare equal to each other
        v = "nan" if math.isnan(self.value) else self.value
        return (v, self.err_bound, self.verdict)

    def __eq__(self, other):
        if not isinstance(other, Margin):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @classmethod
    def failed(cls, note: str) -> "Margin":
        """Placeholder for a cell whose evaluation raised."""
        return cls(math.nan, math.inf, note=note)


class Bounded(float):
    """A float carrying an absolute error estimate in ``err``."""

    err: float

    def __new__(cls, value: float, err: float):
        obj = super().__new__(cls, value)
        obj.err = float(err)
        return obj

    def __repr__(self):
        return f"Bounded({float(self)!r}, err={self.err:.3g})"


class Property(str, enum.Enum):
    TURAN_SIN = "TuranSin"
    TURAN_COS = "TuranCos"
    TURAN_TAN = "TuranTan"
    TURAN_SINH = "TuranSinh"
    TURAN_TANH = "TuranTanh"
    LOG_CONCAVE = "LogConcave"
    LOG_CONVEX = "LogConvex"
    CONCAVE = "Concave"

    @classmethod
    def parse(cls, value) -> "Property":
        if isinstance(value, cls):
            return value
        key = str(value).replace("-", "").replace("_", "").lower()
        for member in cls:
            if member.value.lower() == key:
                return member
        raise ValueError(f"unknown property {value!r}")

    @property
    def turan_kind(self) -> FunctionKind | None:
        if self.value.startswith("Turan"):
            return FunctionKind.parse(self.value[5:].lower())
        return None

    @classmethod
    def turan_for(cls, kind) -> "Property":
        kind = FunctionKind.parse(kind)
        if kind is FunctionKind.COSH:
            raise UnsupportedFamily("no Turan-type inequality is stated for cosh")
        return cls("Turan" + kind.value.capitalize())


class Variant(str, enum.Enum):
    LOG_CONVEXITY = "log-convexity"
    CONVEXITY = "convexity"

    @classmethod
    def parse(cls, value) -> "Variant":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "-")
        if key in ("log", "log-convexity", "log-concavity", "logconvexity"):
            return cls.LOG_CONVEXITY
        if key in ("convexity", "concavity", "convexity/concavity", "plain"):
            return cls.CONVEXITY
        raise ValueError(f"unknown variant {value!r}")


# ---------------------------------------------------------------------------
# Turan-type margins

# +1: f_p^2 - f_{p-1} f_{p+1};  -1: the reverse
_TURAN_SIGN = {
    FunctionKind.SIN: 1.0,
    FunctionKind.COS: 1.0,
    FunctionKind.TANH: 1.0,
    FunctionKind.TAN: -1.0,
    FunctionKind.SINH: -1.0,
}


def turan_margin(kind, p, y: float, cfg: QuadratureConfig | None = None) -> Margin:
    """Slack of the Turan-type inequality at unit spacing in p.

    Positive means the conjectured direction: ``f_p^2 > f_{p-1} f_{p+1}``
    for sin, cos and tanh, the reverse for tan and sinh.  The three values
    are combined through accurate logarithms, so slacks many orders below
    the function values (small y, large p) are still resolved.
    """
    kind = FunctionKind.parse(kind)
    if kind not in _TURAN_SIGN:
        raise UnsupportedFamily(f"no Turan-type inequality for {kind.value}")
    pv = as_parameter(p).p
    if not pv > 1.0:
        raise DomainError("turan_margin needs p > 1 so that p - 1 > 0")
    y = float(y)
    if kind in (FunctionKind.SIN, FunctionKind.COS, FunctionKind.TAN):
        if not 0.0 < y < 1.0:
            raise DomainError(f"trigonometric Turan margins need 0 < y < 1, got {y}")
    elif not (y > 0.0 and math.isfinite(y)):
        raise DomainError(f"hyperbolic Turan margins need y > 0, got {y}")
    lo, mid, hi = (log_deviation(kind, q, y, cfg) for q in (pv - 1.0, pv, pv + 1.0))
    # the bases are exact zeros or log y; their combination is exact when equal
    delta = (lo.log_base + hi.log_base - 2.0 * mid.log_base) + (lo.value + hi.value - 2.0 * mid.value)
    d_err = lo.err + hi.err + 2.0 * mid.err + _EPS * (abs(lo.value) + abs(hi.value) + 2 * abs(mid.value))
    scale = math.exp(2.0 * mid.log)
    value = _TURAN_SIGN[kind] * scale * -math.expm1(delta)
    err = scale * math.exp(abs(delta)) * d_err + 4 * _EPS * abs(value)
    return Margin(value, err)


# ---------------------------------------------------------------------------
# integral criteria


def _check_unit_x(x: float, what: str):
    if not 0.0 < x < 1.0:
        raise DomainError(f"{what} needs 0 < x < 1, got {x}")
    if 1.0 - x < BOUNDARY_PROXIMITY:
        raise BoundaryProximity(f"x={x} within {BOUNDARY_PROXIMITY:g} of 1")


def _integrals(bundle, pv: float, x: float, cfg):
    c = 1.0 - x if bundle.unit else None
    dcfg = replace_abs_tol(cfg)
    i1 = integral_from_zero(lambda t, s: bundle.f_p_integrand(pv, t, s), x, c, dcfg)
    i2 = integral_from_zero(lambda t, s: bundle.f_pp_integrand(pv, t, s), x, c, dcfg)
    return i1, i2


def _quadratic_form(a: float, b: float, c: float, i1, i2) -> Bounded:
    """``a*I1^2 + b*I1 + c*I2`` with the quadrature errors propagated."""
    f1, f2 = i1.value, i2.value
    terms = (a * f1 * f1, b * f1, c * f2)
    val = sum(terms)
    err = (abs(2 * a * f1 + b) * i1.err_estimate + abs(c) * i2.err_estimate
           + 4 * _EPS * sum(abs(t) for t in terms))
    return Bounded(val, err)


def corollary_condition(family, variant, p, x: float, cfg: QuadratureConfig | None = None) -> Bounded:
    """Left-hand side of an integral criterion for (log-)convexity in p.

    With ``x = g(p, y)``, ``I1 = int_0^x k'_p`` and ``I2 = int_0^x k''_pp``
    for the family kernel ``k``:

    ====  =============  ===================================================  =====
    fam   variant        expression                                           holds
    ====  =============  ===================================================  =====
    sin   log-convexity  phi^(p-1)/x I1^2 - 2 eta I1 + I2                     > 0
    sin   convexity      x^(p-1) phi^(p-1) I1^2 - 2 eta I1 + I2               > 0
    tan   log-convexity  (1/x - (p-1) x^(p-1)) I1^2 + 2x^p log x/(1+x^p) I1
                         + I2                                                 < 0
    tan   convexity      p x^(p-1) I1^2 + 2x^p log x/(1+x^p) I1 + I2          < 0
    sinh  log-convexity  I1^2/(1+x^p) - 2x lambda'_p(x) I1
                         + x (1+x^p)^(-1/p) I2                                < 0
    tanh  convexity      p x^(p-1)/(1-x^p) I1^2 - 2x^p log x/(1-x^p)^2 I1
                         + I2/(1-x^p)                                         > 0
    ====  =============  ===================================================  =====

    ``eta = [log phi]'_p`` at x.  "holds" is the sign when the property
    (log-concavity for sin, log-convexity for tan and sinh, concavity for
    sin and tanh, convexity for tan) holds strictly.  The tan convexity
    form equals ``-theta(x) d2g/dp2 + 2p x^(p-1) I1^2``, so a negative
    value is sufficient but not necessary for convexity; the other five
    are exact rescalings of the second derivatives.
    """
    kind = FunctionKind.parse(family)
    variant = Variant.parse(variant)
    pv = as_parameter(p).p
    x = float(x)
    if kind in (FunctionKind.COS, FunctionKind.COSH):
        raise UnsupportedFamily(f"no printed criterion for {kind.value}")
    if kind in (FunctionKind.SIN, FunctionKind.TANH):
        _check_unit_x(x, "corollary_condition")
    elif not (x > 0.0 and math.isfinite(x)):
        raise DomainError(f"corollary_condition needs x > 0, got {x}")
    if (kind, variant) in ((FunctionKind.SINH, Variant.CONVEXITY), (FunctionKind.TANH, Variant.LOG_CONVEXITY)):
        raise UnsupportedFamily(f"no printed {variant.value} criterion for {kind.value}")
    bundle = make_bundle(kind)
    i1, i2 = _integrals(bundle, pv, x, cfg)
    xa = np.array([x])
    lx = math.log(x)
    xp = math.exp(pv * lx)
    if kind is FunctionKind.SIN:
        ph = float(_phi(pv, xa)[0])
        eta = float(phi_log_dp(pv, xa)[0])
        lead = ph ** (pv - 1.0) / x
        if variant is Variant.CONVEXITY:
            lead *= xp
        return _quadratic_form(lead, -2.0 * eta, 1.0, i1, i2)
    if kind is FunctionKind.TAN:
        mid = 2.0 * xp * lx / (1.0 + xp)
        if variant is Variant.LOG_CONVEXITY:
            lead = 1.0 / x - (pv - 1.0) * xp / x
        else:
            lead = pv * xp / x
        return _quadratic_form(lead, mid, 1.0, i1, i2)
    if kind is FunctionKind.SINH:
        lam_dp = float(bundle.f_xp(pv, xa)[0])
        return _quadratic_form(1.0 / (1.0 + xp), -2.0 * x * lam_dp, x * (1.0 + xp) ** (-1.0 / pv), i1, i2)
    q = -math.expm1(pv * lx)
    return _quadratic_form(pv * xp / x / q, -2.0 * xp * lx / q**2, 1.0 / q, i1, i2)


# ---------------------------------------------------------------------------
# the estimate used for tan


class Lemma3Sides(NamedTuple):
    lhs: float
    rhs: float


def lemma3_check(p, s: float, cfg: QuadratureConfig | None = None) -> Lemma3Sides:
    """Both sides of the tan estimate; ``lhs < rhs`` is the claim.

    lhs = s p^3/(p+1)^2 (1/(p+1)^2 - log(s)^2/p^2)
    rhs = int_0^1 u^(1/p) (1 - s u)/(1 + s u)^3 log(s u)^2 du
    """
    pv = as_parameter(p).p
    s = float(s)
    if not pv > 1.0:
        raise DomainError("lemma3_check needs p > 1")
    if not 0.0 < s < 1.0:
        raise DomainError("lemma3_check needs 0 < s < 1")
    ls = math.log(s)
    lhs = s * pv**3 / (pv + 1.0) ** 2 * (1.0 / (pv + 1.0) ** 2 - ls * ls / pv**2)

    def k(u):
        su = s * u
        return u ** (1.0 / pv) * (1.0 - su) / (1.0 + su) ** 3 * (np.log(u) + ls) ** 2

    rhs = integrate(k, 0.0, 1.0, replace_abs_tol(cfg)).check().value
    return Lemma3Sides(lhs, rhs)


def lemma3_moment(p, cfg: QuadratureConfig | None = None) -> float:
    """``int_0^1 u^(1/p) log(u)^2 du`` by quadrature (exactly ``2p^3/(1+p)^3``)."""
    pv = as_parameter(p).p
    return integrate(lambda u: u ** (1.0 / pv) * np.log(u) ** 2, 0.0, 1.0, replace_abs_tol(cfg)).check().value


def zeta3(tail_tol: float = 1e-12) -> Bounded:
    """Apery's constant by direct summation of ``sum 1/n^3``.

    The tail after N terms lies in ``[1/(2(N+1)^2), 1/(2N^2)]``; N is chosen
    so that this bound is below ``tail_tol`` and the midpoint of the tail
    interval is added.
    """
    n = int(math.ceil(math.sqrt(0.5 / tail_tol)))
    k = np.arange(n, 0, -1, dtype=float)
    head = float(np.sum(1.0 / k**3))
    t_lo, t_hi = 0.5 / (n + 1.0) ** 2, 0.5 / float(n) ** 2
    return Bounded(head + 0.5 * (t_lo + t_hi), 0.5 * (t_hi - t_lo) + n * _EPS * 1e-3 + _EPS)


class Lemma3Constant(NamedTuple):
    quadrature: float
    closed_form: float
    zeta3: float


def lemma3_constant(cfg: QuadratureConfig | None = None) -> Lemma3Constant:
    """The p = 1 instance of the tan estimate, two ways.

    ``int_0^1 u log(u)^2 ((1-u)/(1+u)^3 - 1/4) du`` by quadrature and
    ``pi^2/3 - log 4 - 3 zeta(3)/2 - 1/16`` in closed form.
    """
    q = integrate(
        lambda u: u * np.log(u) ** 2 * ((1.0 - u) / (1.0 + u) ** 3 - 0.25),
        0.0,
        1.0,
        replace_abs_tol(cfg),
    ).check()
    z = zeta3()
    closed = math.pi**2 / 3.0 - math.log(4.0) - 1.5 * float(z) - 1.0 / 16.0
    return Lemma3Constant(q.value, closed, float(z))


# ---------------------------------------------------------------------------
# quantities from the proofs


def theorem1_G(p, x: float, cfg: QuadratureConfig | None = None) -> Bounded:
    """``G(x) = x eta^2 / phi^(p-1) - int_0^x phi''_pp``, negative for all p > 0.

    ``eta`` is the p-derivative of ``log phi`` at x.
    """
    pv = as_parameter(p).p
    x = float(x)
    _check_unit_x(x, "theorem1_G")
    xa = np.array([x])
    eta = float(phi_log_dp(pv, xa)[0])
    ph = float(_phi(pv, xa)[0])
    i2 = integral_from_zero(lambda t, s: _phi_dpp(pv, t, s), x, 1.0 - x, replace_abs_tol(cfg))
    first = x * eta * eta / ph ** (pv - 1.0)
    val = first - i2.value
    return Bounded(val, i2.err_estimate + 4 * _EPS * (abs(first) + abs(i2.value)))


def theorem4_discriminant(p, x: float) -> Bounded:
    """Quarter discriminant from the sinh argument, in closed form.

    With ``z = x^p`` and ``w = log(1+z)/p^2 - z log(x)/(p(1+z))``::

        D/4 = [-p z w^2 - (2w/p)(1 + p z - z log z/(1+z))
               - z log(x)^2/(p (1+z)^2)] / (x^2 (1+z)^2)

    Negative whenever p >= 1; for p < 1 the sign is only observed.
    """
    pv = as_parameter(p).p
    x = float(x)
    if not (x > 0.0 and math.isfinite(x)):
        raise DomainError(f"theorem4_discriminant needs x > 0, got {x}")
    lx = math.log(x)
    lz = pv * lx
    z = math.exp(lz)
    w = math.log1p(z) / pv**2 - z * lx / (pv * (1.0 + z))
    t1 = -pv * z * w * w
    t2 = -(2.0 * w / pv) * (1.0 + pv * z - z * lz / (1.0 + z))
    t3 = -z * lx * lx / (pv * (1.0 + z) ** 2)
    pre = 1.0 / (x * x * (1.0 + z) ** 2)
    val = (t1 + t2 + t3) * pre
    return Bounded(val, 16 * _EPS * (abs(t1) + abs(t2) + abs(t3)) * pre)


class RatioCheck(NamedTuple):
    ratio: float
    bound1: float
    bound2: float

    @property
    def ordered(self) -> bool:
        return self.ratio > self.bound1 > self.bound2


def theorem5_ratio_check(p, x: float, cfg: QuadratureConfig | None = None) -> RatioCheck:
    """Integral ratio u/v from the tanh argument and its two lower bounds.

    ``u = int_0^x t^p (t^p+1) log(1/t)^2/(1-t^p)^3``,
    ``v = int_0^x t^p log(1/t)/(1-t^p)^2``; the claim is
    ``u/v > (x^p+1) log(1/x)/(1-x^p) > 2 x^p log(1/x)/(1-x^p)``.
    """
    pv = as_parameter(p).p
    x = float(x)
    _check_unit_x(x, "theorem5_ratio_check")
    dcfg = replace_abs_tol(cfg)
    u = integral_from_zero(lambda t, s: _alpha_dpp(pv, t, s), x, 1.0 - x, dcfg)
    v = integral_from_zero(lambda t, s: _alpha_dp(pv, t, s), x, 1.0 - x, dcfg)
    lx = math.log(x)
    xp = math.exp(pv * lx)
    q = -math.expm1(pv * lx)
    return RatioCheck(u.value / -v.value, (xp + 1.0) * -lx / q, 2.0 * xp * -lx / q)


# ---------------------------------------------------------------------------
# scans


def certified(prop, kind, p: float, y: float) -> bool:
    """Whether a proved statement covers the cell (p, y)."""
    prop = Property.parse(prop)
    kind = FunctionKind.parse(kind)
    S, C, T = FunctionKind.SIN, FunctionKind.COS, FunctionKind.TAN
    SH, CH, TH = FunctionKind.SINH, FunctionKind.COSH, FunctionKind.TANH
    if not (p > 0 and y > 0):
        return False
    tk = prop.turan_kind
    if tk is not None:
        # unit-spacing log-concavity/convexity follows from the property on (p-1, p+1)
        if tk is not kind:
            return False
        if kind is S:
            return p > 1 and y < 1
        if kind in (C, T):
            return p > 2 and y < LOG2
        return p > 1
    table = {
        (Property.LOG_CONCAVE, S): p > 0 and y < 1,
        (Property.LOG_CONVEX, T): p > 1 and y < LOG2,
        (Property.LOG_CONCAVE, C): p > 1 and y < LOG2,
        (Property.LOG_CONVEX, SH): True,
        (Property.CONCAVE, TH): True,
        (Property.LOG_CONCAVE, TH): True,
        (Property.LOG_CONVEX, CH): True,
    }
    return bool(table.get((prop, kind), False))


def thread_count() -> int:
    """Worker cap from ``GENTRIG_THREADS`` (integer >= 1), else the CPU count."""
    raw = os.environ.get("GENTRIG_THREADS")
    if raw is None or raw == "":
        return max(1, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"GENTRIG_THREADS must be an integer >= 1, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"GENTRIG_THREADS must be an integer >= 1, got {raw!r}")
    return n


class Mode(str, enum.Enum):
    ANALYTIC = "analytic"
    FINITE_DIFFERENCE = "finite-diff"

    @classmethod
    def parse(cls, value) -> "Mode":
        if isinstance(value, cls):
            return value
        key = str(value).lower().replace("_", "-")
        if key in ("analytic",):
            return cls.ANALYTIC
        if key in ("finite-diff", "finitedifference", "finite-difference", "fd"):
            return cls.FINITE_DIFFERENCE
        raise ValueError(f"unknown mode {value!r}")


@dataclass(frozen=True)
class ScanReport:
    kind: FunctionKind
    property: Property
    p_grid: tuple
    y_grid: tuple
    margins: tuple  # margins[i][j] belongs to (p_grid[i], y_grid[j])
    config: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("p_grid", "y_grid"):
            g = getattr(self, name)
            if any(not b > a for a, b in zip(g, g[1:])):
                raise ValueError(f"{name} must be strictly increasing")
        if len(self.margins) != len(self.p_grid) or any(len(r) != len(self.y_grid) for r in self.margins):
            raise ValueError("margin matrix does not match the grids")

    def cells(self):
        """Yield ``(p, y, margin)`` row by row."""
        for p, row in zip(self.p_grid, self.margins):
            for y, m in zip(self.y_grid, row):
                yield p, y, m

    def asserted(self, p: float, y: float) -> bool:
        return certified(self.property, self.kind, p, y)

    def counts(self, asserted_only: bool = False) -> dict:
        out = {v: 0 for v in Verdict}
        for p, y, m in self.cells():
            if asserted_only and not self.asserted(p, y):
                continue
            out[m.verdict] += 1
        return out

    def verdicts(self) -> np.ndarray:
        return np.array([[m.verdict.value for m in row] for row in self.margins])


def _default_fd_step(p: float) -> float:
    return min(1e-2, 0.1 * p)


def _fd_cell(prop: Property, kind: FunctionKind, p: float, y: float, cfg) -> Margin:
    h = _default_fd_step(p)
    use_complement = (
        prop is Property.CONCAVE and kind is FunctionKind.TANH and invert(kind, p, y, cfg).x > 0.5
    )

    base = None if use_complement else log_deviation(kind, p, y, cfg).log_base

    def value(q):
        if use_complement:
            # g = 1 - c keeps full precision where g is close to 1
            inv = invert(kind, q, y, cfg)
            return -inv.c, inv.x_err
        lv = log_deviation(kind, q, y, cfg)
        v = lv.value + (lv.log_base - base)
        if prop is Property.CONCAVE:
            # g = e^base (1 + expm1(v)); the constant part drops out of the
            # differences and e^base is restored below
            return math.expm1(v), math.exp(v) * lv.err
        return v, lv.err

    pts = [value(p + k * h) for k in (-2, -1, 0, 1, 2)]
    f = [v for v, _ in pts]
    e = [err for _, err in pts]
    d1 = (f[1] - 2 * f[2] + f[3]) / h**2
    d2 = (f[0] - 2 * f[2] + f[4]) / (4 * h * h)
    trunc = abs(d1 - d2) / 3.0
    rnd = (e[1] + 2 * e[2] + e[3]) / h**2 + 8 * _EPS * (abs(f[1]) + 2 * abs(f[2]) + abs(f[3])) / h**2
    scale = 1.0
    if prop is Property.CONCAVE and not use_complement:
        scale = math.exp(base)
    sign = 1.0 if prop is Property.LOG_CONVEX else -1.0
    return Margin(sign * scale * d1, scale * (2 * trunc + rnd))


def _analytic_cell(prop: Property, kind: FunctionKind, p: float, y: float, cfg) -> Margin:
    rep = derivative_report(kind, p, y, cfg)
    if prop is Property.CONCAVE:
        return Margin(-rep.d2g_dp2, rep.d2g_err)
    sign = 1.0 if prop is Property.LOG_CONVEX else -1.0
    return Margin(sign * rep.d2logg_dp2, rep.quad_err)


def _cell(prop: Property, kind: FunctionKind, mode: Mode, p: float, y: float, cfg) -> Margin:
    try:
        if prop.turan_kind is not None:
            m = turan_margin(kind, p, y, cfg)
        elif mode is Mode.ANALYTIC:
            m = _analytic_cell(prop, kind, p, y, cfg)
        else:
            m = _fd_cell(prop, kind, p, y, cfg)
    except (GentrigError, ArithmeticError, ValueError) as exc:
        return Margin.failed(f"{type(exc).__name__}: {exc}")
    # no claim is trusted beyond the requested relative accuracy
    floor = cfg.rel_tol * abs(m.value) if math.isfinite(m.value) else math.inf
    if m.err_bound < floor:
        m = Margin(m.value, floor, note=m.note)
    return m


def _grid(values: Sequence[float], name: str) -> tuple:
    g = tuple(float(v) for v in values)
    if not g:
        raise ValueError(f"{name} is empty")
    if any(not math.isfinite(v) for v in g):
        raise ValueError(f"{name} has non-finite entries")
    if any(not b > a for a, b in zip(g, g[1:])):
        raise ValueError(f"{name} must be strictly increasing")
    return g


def scan(
    prop,
    p_grid: Sequence[float],
    y_grid: Sequence[float],
    mode="analytic",
    *,
    kind=None,
    cfg: QuadratureConfig | None = None,
    threads: int | None = None,
) -> ScanReport:
    """Evaluate a property's margin on every ``(p, y)`` cell.

    Parameters
    ----------
    prop : Property or str
        ``LogConcave``, ``LogConvex``, ``Concave`` or one of the Turan
        properties (which fix the function kind).
    p_grid, y_grid : sequence of float
        Strictly increasing grids.
    mode : {"analytic", "finite-diff"}
        Analytic margins use the inverse-function derivative formulas;
        finite-difference margins use second central differences in p of
        accurate logarithms of forward values, with a Richardson estimate of
        the truncation error.  Turan margins are the same in both modes.
    kind : FunctionKind or str
        Required unless ``prop`` is a Turan property.
    threads : int, optional
        Worker cap; defaults to :func:`thread_count`.

    Returns
    -------
    ScanReport
        Cells that raise are recorded as Inconclusive with a note; the scan
        never aborts.  Results do not depend on the evaluation order.
    """
    prop = Property.parse(prop)
    mode = Mode.parse(mode)
    tk = prop.turan_kind
    if kind is None:
        if tk is None:
            raise ValueError(f"{prop.value} needs a function kind")
        kind = tk
    kind = FunctionKind.parse(kind)
    if tk is not None and tk is not kind:
        raise ValueError(f"{prop.value} concerns {tk.value}, not {kind.value}")
    cfg = cfg or DEFAULT_CONFIG
    pg = _grid(p_grid, "p_grid")
    yg = _grid(y_grid, "y_grid")
    jobs = [(p, y) for p in pg for y in yg]
    n = threads if threads is not None else thread_count()
    if n <= 1 or len(jobs) < 2:
        flat = [_cell(prop, kind, mode, p, y, cfg) for p, y in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n) as ex:
            flat = list(ex.map(lambda job: _cell(prop, kind, mode, job[0], job[1], cfg), jobs))
    rows = tuple(tuple(flat[i * len(yg):(i + 1) * len(yg)]) for i in range(len(pg)))
    config = {"mode": mode.value, **asdict(cfg)}
    if mode is Mode.FINITE_DIFFERENCE:
        config["fd_step"] = "min(1e-2, 0.1*p)"
    return ScanReport(kind, prop, pg, yg, rows, config)


# ---------------------------------------------------------------------------
# searching for the concavity threshold of sin_p


@dataclass(frozen=True)
class P0Result:
    """Per-y thresholds below which ``p -> sin_p(y)`` stops being concave.

    ``witness`` maps each y to the located threshold, or to the
    :class:`NoSignChange` raised when concavity held on the whole search
    interval.  ``p0_estimate`` is the largest located threshold (NaN if
    none was found).
    """

    p0_estimate: float
    witness: dict
    p_search: tuple
    tol: float


def _d2sin(p: float, y: float, cfg) -> float:
    return derivative_report(FunctionKind.SIN, p, y, cfg).d2g_dp2


def find_p0(
    y_grid: Sequence[float],
    p_search: tuple = (0.05, 1.0),
    tol: float = 1e-4,
    cfg: QuadratureConfig | None = None,
    coarse: int = 24,
) -> P0Result:
    """Locate, for each y, where ``d2 sin_p(y)/dp2`` first turns non-negative
    as p decreases from ``p_search[1]``.

    A geometric coarse grid brackets the first sign change, then bisection
    narrows it to ``tol``.  Exploratory: nothing here is a pass/fail check.
    """
    lo, hi = map(float, p_search)
    if not 0.0 < lo < hi <= 1.0:
        raise ValueError("p_search must satisfy 0 < lo < hi <= 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    ys = _grid(y_grid, "y_grid")
    if any(not 0.0 < y < 1.0 for y in ys):
        raise ValueError("y_grid must lie in (0, 1)")
    grid = np.geomspace(hi, lo, coarse)
    witness = {}
    for y in ys:
        prev = None
        found = None
        for p in grid:
            if _d2sin(p, y, cfg) >= 0.0:
                found = p
                break
            prev = p
        if found is None:
            witness[y] = NoSignChange(f"d2 sin_p({y})/dp2 < 0 on all of [{lo}, {hi}]")
            continue
        if prev is None:
            # concavity already fails at the top of the interval
            witness[y] = float(hi)
            continue
        a, b = found, prev  # d2g >= 0 at a, < 0 at b
        while b - a > tol:
            m = 0.5 * (a + b)
            if _d2sin(m, y, cfg) >= 0.0:
                a = m
            else:
                b = m
        witness[y] = float(b)
    located = [v for v in witness.values() if isinstance(v, float)]
    est = float(max(located)) if located else math.nan
    return P0Result(est, witness, (lo, hi), float(tol))
