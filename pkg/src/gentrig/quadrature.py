"""Double-exponential (tanh-sinh) quadrature with nested step halving.

All integrands are called with numpy arrays of abscissae and must be
vectorised.  Nodes are generated together with their exact distance to the
nearer endpoint, so no node is ever placed on an endpoint and algebraic or
logarithmic endpoint singularities are integrated without special casing.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import InvalidInterval, NonConvergence, NonIntegrable

__all__ = [
    "QuadratureConfig",
    "QuadResult",
    "DEFAULT_CONFIG",
    "integrate",
    "integrate_singular_upper",
    "integrate_unit",
]

# Beyond this the distance to the endpoint underflows (~1e-300).
_TAU_MAX = 6.1
_MIN_LEVEL = 3
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerance targets for every integral in the package.

    A result is accepted once ``err_estimate <= max(rel_tol*|value|, abs_tol)``.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-14
    max_levels: int = 12

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if int(self.max_levels) != self.max_levels or self.max_levels < 1:
            raise ValueError("max_levels must be an integer >= 1")

    def bound(self, value: float) -> float:
        return max(self.rel_tol * abs(value), self.abs_tol)


DEFAULT_CONFIG = QuadratureConfig()


@dataclass(frozen=True)
class QuadResult:
    value: float
    err_estimate: float
    levels_used: int
    converged: bool = True

    def check(self) -> "QuadResult":
        """Return self, or raise :class:`NonConvergence` if the target was missed."""
        if not self.converged:
            raise NonConvergence(
                f"quadrature error estimate {self.err_estimate:.3e} above tolerance",
                self,
            )
        return self

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.err_estimate + other.err_estimate,
            max(self.levels_used, other.levels_used),
            self.converged and other.converged,
        )


@functools.lru_cache(maxsize=None)
def _level_nodes(level: int):
    """Nodes added at ``level`` for the rule on [0, 1].

    Returns ``(v, vc, w)`` with ``v`` the abscissa, ``vc = 1 - v`` computed
    without cancellation, and ``w`` the weight including the step ``h``.
    """
    h = 2.0**-level
    n = int(math.floor(_TAU_MAX / h))
    k = np.arange(-n, n + 1)
    if level > 0:
        k = k[k % 2 != 0]
    tau = k * h
    u = 0.5 * math.pi * np.sinh(tau)
    e = np.exp(-2.0 * np.abs(u))
    # distance of the node to the nearer endpoint of [0, 1]
    r = e / (1.0 + e)
    w = h * 0.5 * math.pi * np.cosh(tau) * 4.0 * e / (1.0 + e) ** 2 * 0.5
    left = tau < 0
    v = np.where(left, r, 1.0 - r)
    vc = np.where(left, 1.0 - r, r)
    keep = (r > 0) & (w > 0)
    out = (v[keep], vc[keep], w[keep])
    for arr in out:
        arr.setflags(write=False)
    return out


def _as_vector_fn(fn):
    def call(*args):
        val = fn(*args)
        val = np.asarray(val, dtype=float)
        if val.shape != np.shape(args[0]):
            val = np.broadcast_to(val, np.shape(args[0])).astype(float)
        return val

    return call


def integrate_unit(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    cfg: QuadratureConfig | None = None,
) -> QuadResult:
    """Integrate ``g(v, 1 - v)`` over ``v`` in (0, 1).

    ``g`` receives both the abscissa and its complement, each accurate to
    full relative precision, which lets callers resolve singularities at
    either end.  This is the engine behind :func:`integrate` and
    :func:`integrate_singular_upper`.
    """
    cfg = cfg or DEFAULT_CONFIG
    g = _as_vector_fn(g)
    total = 0.0
    abs_total = 0.0
    prev = None
    value = 0.0
    err = math.inf
    level = 0
    for level in range(0, cfg.max_levels + 1):
        v, vc, w = _level_nodes(level)
        with np.errstate(all="ignore"):
            fv = g(v, vc)
        contrib = w * fv
        bad = ~np.isfinite(contrib)
        if bad.any():
            # tails closer than 1e-15 to an endpoint carry no resolvable mass
            tail = np.minimum(v, vc) < 1e-15
            if (bad & ~tail).any():
                return QuadResult(math.nan, math.inf, level, False)
            contrib = np.where(bad, 0.0, contrib)
        s = float(np.sum(contrib))
        a = float(np.sum(np.abs(contrib)))
        if level == 0:
            total, abs_total = s, a
        else:
            total = 0.5 * total + s
            abs_total = 0.5 * abs_total + a
        value = total
        if prev is not None:
            diff = abs(value - prev)
            noise = 8.0 * _EPS * abs_total
            err = diff + noise
            if level >= min(_MIN_LEVEL, cfg.max_levels) and (
                err <= cfg.bound(value) or diff <= noise
            ):
                # the second test stops at the rounding floor of a cancelling sum
                return QuadResult(value, err, level, True)
        prev = value
    return QuadResult(value, err, level, False)


def integrate(
    kernel: Callable[[np.ndarray], np.ndarray],
    lower: float,
    upper: float,
    cfg: QuadratureConfig | None = None,
) -> QuadResult:
    """Integrate ``kernel`` over ``[lower, upper]``.

    Integrable singularities at either endpoint are allowed; the kernel is
    never evaluated at an endpoint.

    >>> round(integrate(lambda t: 1 / (1 + t), 0.0, 1.0).value, 12)
    0.69314718056
    """
    lower, upper = float(lower), float(upper)
    if not (lower < upper) or not (math.isfinite(lower) and math.isfinite(upper)):
        raise InvalidInterval(f"need finite lower < upper, got [{lower}, {upper}]")
    length = upper - lower
    kernel = _as_vector_fn(kernel)

    def g(v, vc):
        t = np.where(v <= 0.5, lower + length * v, upper - length * vc)
        inside = (t > lower) & (t < upper)
        out = np.zeros_like(t)
        out[inside] = kernel(t[inside])
        return length * out

    return integrate_unit(g, cfg)


def integrate_singular_upper(
    kernel: Callable[[np.ndarray], np.ndarray],
    lower: float,
    upper: float,
    singularity_exponent: float,
    cfg: QuadratureConfig | None = None,
    *,
    from_upper: bool = False,
) -> QuadResult:
    """Integrate a kernel behaving like ``C*(upper - t)**(-a)`` near ``upper``.

    The substitution ``upper - t = L*v**m`` with ``m = 1/(1 - a)`` removes
    the singularity before the tanh-sinh rule is applied.  Nodes closer to
    ``upper`` than one ulp are evaluated at the nearest representable point
    and rescaled by the leading factor ``(upper - t)**(-a)``.  When
    ``from_upper`` is true the kernel is called with the distance
    ``upper - t`` instead of ``t``; use it when the mass sits closer to the
    endpoint than double precision can resolve in ``t``.
    """
    a = float(singularity_exponent)
    if not a < 1.0:
        raise NonIntegrable(f"singularity exponent {a} >= 1 is not integrable")
    if a < 0.0:
        raise ValueError("singularity exponent must be non-negative")
    lower, upper = float(lower), float(upper)
    if not (lower < upper) or not (math.isfinite(lower) and math.isfinite(upper)):
        raise InvalidInterval(f"need finite lower < upper, got [{lower}, {upper}]")
    length = upper - lower
    m = 1.0 / (1.0 - a)
    kernel = _as_vector_fn(kernel)

    def g(v, vc):
        # v -> 0 is the singular end
        with np.errstate(all="ignore"):
            d = length * v**m
            far = np.where(v > 0.5, length * -np.expm1(m * np.log1p(-vc)), length - d)
        ok = (d > 0) & (far > 0)
        out = np.zeros_like(v)
        if from_upper:
            out[ok] = kernel(d[ok])
        else:
            dk = d[ok]
            t = np.where(v > 0.5, lower + far, upper - d)[ok]
            t = np.where(t < upper, t, np.nextafter(upper, -math.inf))
            t = np.maximum(t, np.nextafter(lower, math.inf))
            # the node sits at the representable t; rescale by the leading
            # singular factor to recover the value at the exact distance
            out[ok] = kernel(t) * ((upper - t) / dk) ** a
        return out * length * m * v ** (m - 1.0)

    return integrate_unit(g, cfg)
