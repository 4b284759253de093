"""Parameter derivatives of the inverse functions.

For ``y = f(p, x)`` strictly monotone in ``x`` with inverse ``x = g(p, y)``::

    g_p      = -f_p / f_x
    g_pp     = f_x**-2 * (2 f_p f_xp - f_x f_pp - f_p**2 f_xx / f_x)
    (log g)_pp = (x f_x)**-2 * (2 x f_p f_xp - x f_x f_pp - x f_p**2 f_xx / f_x - f_p**2)

Here ``f`` is one of the defining integrals ``int_0^x k(p, t) dt``, so
``f_x``, ``f_xx`` and ``f_xp`` are pointwise kernel values and ``f_p``,
``f_pp`` are integrals of the p-derivatives of the kernel.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np
from scipy.special import expit

from .core import (
    FunctionKind,
    Inversion,
    as_parameter,
    integral_from_zero,
    invert,
    log1p_tp,
    log_t,
    one_minus_tp,
    pi_p,
)
from .errors import BoundaryProximity, DomainError, UnsupportedFamily
from .quadrature import DEFAULT_CONFIG, QuadratureConfig

__all__ = [
    "KernelBundle",
    "DerivativeReport",
    "LemmaTerms",
    "make_bundle",
    "lemma_terms",
    "inverse_dp",
    "inverse_d2p",
    "inverse_d2p_remark",
    "inverse_d2p_log",
    "derivative_report",
    "BOUNDARY_PROXIMITY",
]

BOUNDARY_PROXIMITY = 1e-8
_EPS = np.finfo(float).eps


def _s(t, s):
    return 1.0 - t if s is None else s


# -- sin family: phi = (1 - t^p)^(-1/p) --------------------------------------


def _phi(p, t, s=None):
    return one_minus_tp(p, log_t(t, _s(t, s))) ** (-1.0 / p)


def phi_log_dp(p, t, s=None):
    """``[log phi]'_p = log(1 - t^p)/p^2 + t^p log t / (p (1 - t^p))``."""
    lt = log_t(t, _s(t, s))
    q = one_minus_tp(p, lt)
    with np.errstate(invalid="ignore"):
        return np.log(q) / p**2 + np.exp(p * lt) * lt / (p * q)


def _phi_dp(p, t, s=None):
    return _phi(p, t, s) * phi_log_dp(p, t, s)


def _phi_dpp(p, t, s=None):
    lt = log_t(t, _s(t, s))
    q = one_minus_tp(p, lt)
    ph = q ** (-1.0 / p)
    eta = np.log(q) / p**2 + np.exp(p * lt) * lt / (p * q)
    d1 = ph * eta
    return d1**2 / ph - (2.0 / p) * d1 + ph * np.exp(p * lt) * lt**2 / (p * q**2)


def _phi_dxx(p, x, s=None):
    lt = log_t(x, _s(x, s))
    q = one_minus_tp(p, lt)
    return q ** (-1.0 / p) * np.exp((p - 1.0) * lt) / q


# -- tan family: theta = 1/(1 + t^p) ------------------------------------------


def _theta(p, t, s=None):
    return np.exp(-log1p_tp(p, log_t(t, _s(t, s))))


def _theta_dp(p, t, s=None):
    lt = log_t(t, _s(t, s))
    return -lt * expit(p * lt) * expit(-p * lt)


def _theta_dpp(p, t, s=None):
    lt = log_t(t, _s(t, s))
    a, b = expit(p * lt), expit(-p * lt)
    # (1 - t^p)/(1 + t^p) = b - a
    return -(lt**2) * a * b * (b - a)


def _theta_dxx(p, x, s=None):
    lt = log_t(x, _s(x, s))
    # -p x^(p-1) / (1 + x^p)^2
    return -p * np.exp(-lt) * expit(p * lt) * expit(-p * lt)


# -- sinh family: lambda = (1 + t^p)^(-1/p) -----------------------------------


def _lam(p, t, s=None):
    return np.exp(-log1p_tp(p, log_t(t, _s(t, s))) / p)


def lam_log_dp(p, t, s=None):
    """``[log lambda]'_p = log(1 + t^p)/p^2 - t^p log t / (p (1 + t^p))``."""
    lt = log_t(t, _s(t, s))
    return log1p_tp(p, lt) / p**2 - expit(p * lt) * lt / p


def _lam_dp(p, t, s=None):
    return _lam(p, t, s) * lam_log_dp(p, t, s)


def _lam_dpp(p, t, s=None):
    lt = log_t(t, _s(t, s))
    lam = np.exp(-log1p_tp(p, lt) / p)
    w = log1p_tp(p, lt) / p**2 - expit(p * lt) * lt / p
    d1 = lam * w
    return d1**2 / lam - (2.0 / p) * d1 - lam * expit(p * lt) * expit(-p * lt) * lt**2 / p


def _lam_dxx(p, x, s=None):
    lt = log_t(x, _s(x, s))
    # -lambda x^(p-1) / (1 + x^p)
    return -np.exp(-log1p_tp(p, lt) / p) * np.exp(-lt) * expit(p * lt)


# -- tanh family: alpha = 1/(1 - t^p) ------------------------------------------


def _alpha(p, t, s=None):
    return 1.0 / one_minus_tp(p, log_t(t, _s(t, s)))


def _alpha_dp(p, t, s=None):
    lt = log_t(t, _s(t, s))
    q = one_minus_tp(p, lt)
    return np.exp(p * lt) * lt / q**2


def _alpha_dpp(p, t, s=None):
    lt = log_t(t, _s(t, s))
    q = one_minus_tp(p, lt)
    tp = np.exp(p * lt)
    return tp * (tp + 1.0) * lt**2 / q**3


def _alpha_dxx(p, x, s=None):
    lt = log_t(x, _s(x, s))
    q = one_minus_tp(p, lt)
    return p * np.exp((p - 1.0) * lt) / q**2


@dataclass(frozen=True)
class KernelBundle:
    """Closed-form partial derivatives of a defining integral ``f(p, x)``.

    Every kernel has signature ``k(p, t, s=None)`` and accepts arrays; ``s``
    is an optional accurate value of ``1 - t``.  ``f_p_integrand`` and
    ``f_pp_integrand`` integrate over ``[0, x]`` to ``f_p`` and ``f_pp``;
    ``f_xp`` is the same function as ``f_p_integrand`` evaluated at ``x``.
    """

    family: FunctionKind
    f_x: Callable
    f_xx: Callable
    f_xp: Callable
    f_p_integrand: Callable
    f_pp_integrand: Callable

    @property
    def unit(self) -> bool:
        return self.family in (FunctionKind.SIN, FunctionKind.TANH)


_BUNDLES = {
    FunctionKind.SIN: KernelBundle(FunctionKind.SIN, _phi, _phi_dxx, _phi_dp, _phi_dp, _phi_dpp),
    FunctionKind.TAN: KernelBundle(FunctionKind.TAN, _theta, _theta_dxx, _theta_dp, _theta_dp, _theta_dpp),
    FunctionKind.SINH: KernelBundle(FunctionKind.SINH, _lam, _lam_dxx, _lam_dp, _lam_dp, _lam_dpp),
    FunctionKind.TANH: KernelBundle(FunctionKind.TANH, _alpha, _alpha_dxx, _alpha_dp, _alpha_dp, _alpha_dpp),
}


def make_bundle(family) -> KernelBundle:
    """Kernel bundle for one of sin, tan, sinh, tanh.

    cos and cosh are not inverses of a single integral and are rejected;
    their derivatives come from :func:`derivative_report`.
    """
    family = FunctionKind.parse(family)
    try:
        return _BUNDLES[family]
    except KeyError:
        raise UnsupportedFamily(f"no defining integral for {family.value}_p") from None


def _deriv_cfg(cfg: QuadratureConfig | None) -> QuadratureConfig:
    # the p-derivative integrals can be many orders below 1 (x^(p+1) log x
    # for small x), so only the relative target is meaningful
    cfg = cfg or DEFAULT_CONFIG
    return replace(cfg, abs_tol=1e-300)


@dataclass(frozen=True)
class LemmaTerms:
    """Everything the inverse-function formulas need at one point ``x``."""

    p: float
    x: float
    c: float | None
    f_x: float
    f_xx: float
    f_xp: float
    f_p: float
    f_pp: float
    f_p_err: float
    f_pp_err: float
    f_pp_at_x: float
    inversion: Inversion | None = None

    # -- the three formulas -------------------------------------------------

    def dg(self) -> float:
        return -self.f_p / self.f_x

    def _braces(self):
        a = 2.0 * self.f_p * self.f_xp
        b = self.f_x * self.f_pp
        c = self.f_p**2 * self.f_xx / self.f_x
        return a, b, c

    def d2g(self) -> float:
        a, b, c = self._braces()
        return (a - b - c) / self.f_x**2

    def d2g_remark(self) -> float:
        """Half the x-derivative of ``(f_p/f_x)^2`` minus the p-derivative of ``f_p/f_x``."""
        r = self.f_p / self.f_x
        dr_dx = (self.f_xp * self.f_x - self.f_p * self.f_xx) / self.f_x**2
        dr_dp = (self.f_pp * self.f_x - self.f_p * self.f_xp) / self.f_x**2
        return r * dr_dx - dr_dp

    def d2log(self) -> float:
        x = self.x
        a, b, c = self._braces()
        return (x * (a - b - c) - self.f_p**2) / (x * self.f_x) ** 2

    def d2log_remark(self) -> float:
        x = self.x
        r = self.f_p / self.f_x
        return self.d2g_remark() / x - (r / x) ** 2

    # -- error propagation --------------------------------------------------

    def dg_err(self) -> float:
        return abs(self.f_p_err / self.f_x) + 2 * _EPS * abs(self.dg())

    def d2g_err(self) -> float:
        a, b, c = self._braces()
        fx2 = self.f_x**2
        dfp = abs(2.0 * self.f_xp - 2.0 * self.f_p * self.f_xx / self.f_x) / fx2
        rnd = 8 * _EPS * (abs(a) + abs(b) + abs(c)) / fx2
        return dfp * self.f_p_err + self.f_pp_err / abs(self.f_x) + rnd

    def d2log_err(self) -> float:
        x = self.x
        a, b, c = self._braces()
        den = (x * self.f_x) ** 2
        dfp = abs(x * (2.0 * self.f_xp - 2.0 * self.f_p * self.f_xx / self.f_x) - 2.0 * self.f_p) / den
        rnd = 8 * _EPS * (x * (abs(a) + abs(b) + abs(c)) + self.f_p**2) / den
        return dfp * self.f_p_err + self.f_pp_err / abs(x * self.f_x) + rnd

    def shifted(self, bundle: KernelBundle, dx: float) -> "LemmaTerms":
        """Terms at ``x + dx`` with the integrals advanced to first order."""
        x2 = self.x + dx
        c2 = None if self.c is None else self.c - dx
        arr = np.array([x2])
        sarr = None if c2 is None else np.array([c2])
        p = self.p
        return replace(
            self,
            x=x2,
            c=c2,
            f_x=float(bundle.f_x(p, arr, sarr)[0]),
            f_xx=float(bundle.f_xx(p, arr, sarr)[0]),
            f_xp=float(bundle.f_xp(p, arr, sarr)[0]),
            f_p=self.f_p + self.f_xp * dx,
            f_pp=self.f_pp + self.f_pp_at_x * dx,
            f_pp_at_x=float(bundle.f_pp_integrand(p, arr, sarr)[0]),
        )


def lemma_terms(bundle: KernelBundle, p, x: float, c: float | None = None,
                cfg: QuadratureConfig | None = None, inversion: Inversion | None = None) -> LemmaTerms:
    """Evaluate the kernel bundle at ``x`` (complement ``c`` for sin/tanh)."""
    pv = as_parameter(p).p
    if bundle.unit:
        c = 1.0 - x if c is None else c
    else:
        c = None
    dcfg = _deriv_cfg(cfg)

    def k1(t, s):
        return bundle.f_p_integrand(pv, t, s)

    def k2(t, s):
        return bundle.f_pp_integrand(pv, t, s)

    i1 = integral_from_zero(k1, x, c, dcfg)
    i2 = integral_from_zero(k2, x, c, dcfg)
    arr = np.array([x])
    sarr = None if c is None else np.array([c])
    return LemmaTerms(
        p=pv,
        x=x,
        c=c,
        f_x=float(bundle.f_x(pv, arr, sarr)[0]),
        f_xx=float(bundle.f_xx(pv, arr, sarr)[0]),
        f_xp=float(bundle.f_xp(pv, arr, sarr)[0]),
        f_p=i1.value,
        f_pp=i2.value,
        f_p_err=i1.err_estimate,
        f_pp_err=i2.err_estimate,
        f_pp_at_x=float(bundle.f_pp_integrand(pv, arr, sarr)[0]),
        inversion=inversion,
    )


def _principal_y_check(family: FunctionKind, p, y: float):
    if not (math.isfinite(y) and y >= 0):
        raise DomainError(f"derivatives are taken on the principal branch y >= 0, got {y}")
    if family in (FunctionKind.SIN, FunctionKind.TAN, FunctionKind.COS):
        half = 0.5 * pi_p(p)
        if y >= half:
            raise DomainError(f"y={y} outside the principal domain [0, {half})")


def _terms_at_y(bundle: KernelBundle, p, y: float, cfg) -> LemmaTerms | None:
    p = as_parameter(p)
    y = float(y)
    _principal_y_check(bundle.family, p, y)
    if y == 0.0:
        return None
    inv = invert(bundle.family, p, y, cfg)
    if bundle.family is FunctionKind.SIN and inv.c < BOUNDARY_PROXIMITY:
        raise BoundaryProximity(f"sin_p({y}) is within {inv.c:.1e} of 1")
    if inv.x == 0.0:
        raise DomainError(f"inverse value underflows at y={y}")
    return lemma_terms(bundle, p, inv.x, inv.c, cfg, inv)


def inverse_dp(bundle: KernelBundle, p, y: float, cfg: QuadratureConfig | None = None) -> float:
    """``d g / d p = -f_p / f_x`` at ``x = g(p, y)``."""
    terms = _terms_at_y(bundle, p, y, cfg)
    return 0.0 if terms is None else terms.dg()


def inverse_d2p(bundle: KernelBundle, p, y: float, cfg: QuadratureConfig | None = None) -> float:
    terms = _terms_at_y(bundle, p, y, cfg)
    return 0.0 if terms is None else terms.d2g()


def inverse_d2p_remark(bundle: KernelBundle, p, y: float, cfg: QuadratureConfig | None = None) -> float:
    """Second p-derivative through the quotient form ``r r_x - r_p`` with ``r = f_p/f_x``."""
    terms = _terms_at_y(bundle, p, y, cfg)
    return 0.0 if terms is None else terms.d2g_remark()


def inverse_d2p_log(bundle: KernelBundle, p, y: float, cfg: QuadratureConfig | None = None) -> float:
    terms = _terms_at_y(bundle, p, y, cfg)
    if terms is None:
        raise DomainError("log g is undefined at y = 0")
    return terms.d2log()


@dataclass(frozen=True)
class DerivativeReport:
    """``g`` and its p-derivatives at one ``(p, y)``, with error bounds.

    ``quad_err`` bounds ``d2logg_dp2``; the other fields carry their own
    bounds.  ``root_err`` is the part of each bound that comes from the
    inversion residual (already included).
    """

    kind: FunctionKind
    p: float
    y: float
    g: float
    dg_dp: float
    d2g_dp2: float
    d2logg_dp2: float
    quad_err: float
    dg_err: float = 0.0
    d2g_err: float = 0.0
    root_err: float = 0.0

    @property
    def d2log_err(self) -> float:
        return self.quad_err


def _root_spill(bundle, terms: LemmaTerms):
    """Map the inversion residual through local slopes of d2g and d2log in y."""
    inv = terms.inversion
    if inv is None or not math.isfinite(inv.slope):
        return 0.0, 0.0
    dy = abs(inv.residual) + inv.quad_err
    if dy == 0.0:
        return 0.0, 0.0
    h = 1e-7 * terms.x
    if terms.c is not None:
        h = min(h, 0.5 * terms.c)
    other = terms.shifted(bundle, h)
    s2 = abs(other.d2g() - terms.d2g()) / h / terms.f_x
    sl = abs(other.d2log() - terms.d2log()) / h / terms.f_x
    return s2 * dy, sl * dy


def _report_from_terms(kind, p, y, bundle, terms) -> DerivativeReport:
    s2, sl = _root_spill(bundle, terms)
    c = terms.c
    g = terms.x
    return DerivativeReport(
        kind=kind,
        p=float(p),
        y=y,
        g=g,
        dg_dp=terms.dg(),
        d2g_dp2=terms.d2g(),
        d2logg_dp2=terms.d2log(),
        quad_err=terms.d2log_err() + sl,
        dg_err=terms.dg_err(),
        d2g_err=terms.d2g_err() + s2,
        root_err=max(s2, sl),
    )


def derivative_report(kind, p, y: float, cfg: QuadratureConfig | None = None) -> DerivativeReport:
    """g, dg/dp, d2g/dp2 and d2(log g)/dp2 of ``p -> kind_p(y)``.

    cos and cosh use ``log cos = log sin - log tan`` and
    ``log cosh = log sinh - log tanh``.
    """
    kind = FunctionKind.parse(kind)
    p = as_parameter(p)
    y = float(y)
    if kind in (FunctionKind.COS, FunctionKind.COSH):
        num, den = (
            (FunctionKind.SIN, FunctionKind.TAN)
            if kind is FunctionKind.COS
            else (FunctionKind.SINH, FunctionKind.TANH)
        )
        _principal_y_check(kind, p, y)
        if y == 0.0:
            return DerivativeReport(kind, p.p, y, 1.0, 0.0, 0.0, 0.0, 0.0)
        a = derivative_report(num, p, y, cfg)
        b = derivative_report(den, p, y, cfg)
        g = a.g / b.g
        dlog = a.dg_dp / a.g - b.dg_dp / b.g
        d2log = a.d2logg_dp2 - b.d2logg_dp2
        d2log_err = a.quad_err + b.quad_err + 4 * _EPS * (abs(a.d2logg_dp2) + abs(b.d2logg_dp2))
        dlog_err = a.dg_err / a.g + b.dg_err / b.g
        d2g = g * (d2log + dlog**2)
        return DerivativeReport(
            kind=kind,
            p=p.p,
            y=y,
            g=g,
            dg_dp=g * dlog,
            d2g_dp2=d2g,
            d2logg_dp2=d2log,
            quad_err=d2log_err,
            dg_err=abs(g) * dlog_err,
            d2g_err=abs(g) * (d2log_err + 2 * abs(dlog) * dlog_err) + 4 * _EPS * abs(d2g),
            root_err=a.root_err + b.root_err,
        )
    bundle = make_bundle(kind)
    terms = _terms_at_y(bundle, p, y, cfg)
    if terms is None:
        return DerivativeReport(kind, p.p, y, 0.0, 0.0, 0.0, 0.0, 0.0)
    return _report_from_terms(kind, p.p, y, bundle, terms)
