"""Coefficients of the generating function

    sum_m f(m+alpha, m; mu, nu) / ((m+alpha)! m!) z^m
        = exp(-(mu+nu) z/(1-z) + b* z) F_alpha(wsq) / (1-z)^{1+2/beta+alpha},

with wsq = 4 mu nu z / (1-z)^2 and F_alpha(w) = (w/2)^{-alpha} I_alpha(w).
Coefficients are extracted either from power series in mpmath or by the
trapezoid rule on a circle |z| = r.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import DomainError, PrecisionError, SingularityError, ValidationError
from .logcomplex import LogComplex
from .series import PowerSeries
from .specfun.bessel import default_precision, log_bessel_i_ratio

GUARD_TERMS = 16
MAX_PRECISION_BITS = 1 << 16
_REL_TOL_BITS = 60


@dataclass(frozen=True)
class GfParams:
    alpha: int
    beta: int
    b_star: float
    mu: float
    nu: float

    def __post_init__(self):
        if int(self.alpha) != self.alpha or self.alpha < 0:
            raise ValidationError("alpha must be a nonnegative integer")
        if self.beta not in (1, 2):
            raise ValidationError("beta must be 1 or 2")
        object.__setattr__(self, "alpha", int(self.alpha))

    @property
    def power(self) -> float:
        """Exponent c in (1 - z)^{-c}."""
        return 1.0 + 2.0 / self.beta + self.alpha

    def swapped(self) -> "GfParams":
        return GfParams(self.alpha, self.beta, self.b_star, self.nu, self.mu)


@dataclass(frozen=True)
class Estimate:
    """value * exp(log_scale), with absolute error error * exp(log_scale)."""

    value: float
    error: float
    log_scale: float = 0.0

    def __float__(self):
        return float(self.value * math.exp(self.log_scale)) if self.value else 0.0

    def log(self) -> LogComplex:
        return LogComplex.from_complex(self.value) * LogComplex.from_log(self.log_scale)

    @property
    def rel_error(self) -> float:
        return self.error / abs(self.value) if self.value else math.inf


def log_gf_rhs(p: GfParams, z, one_minus_z=None) -> np.ndarray:
    """Vectorised log of the right-hand side at z (any branch of log).

    ``one_minus_z`` may be passed when 1 - z is known more accurately than
    the rounded difference, e.g. near z = 1 on a contour.
    """
    z = np.asarray(z, dtype=np.complex128)
    omz = 1.0 - z if one_minus_z is None else np.asarray(one_minus_z, dtype=np.complex128)
    if np.any(omz == 0):
        raise SingularityError("the generating function is singular at z = 1")
    ratio = z / omz
    wsq = 4.0 * p.mu * p.nu * ratio / omz
    out = -(p.mu + p.nu) * ratio + p.b_star * z - p.power * np.log(omz)
    return out + log_bessel_i_ratio(p.alpha, wsq)


def gf_rhs(p: GfParams, z) -> LogComplex:
    z = complex(z)
    if z == 1:
        raise SingularityError("the generating function is singular at z = 1")
    return LogComplex.from_log(complex(log_gf_rhs(p, np.array([z]))[0]))


def _coefficient(p: GfParams, m: int, order: int, absolute: bool):
    """[z^m] of the product, at the current mpmath precision.

    With ``absolute`` every input coefficient is replaced by its modulus,
    which gives a majorant for the rounding error of the signed sum.
    """
    s = -(mpmath.mpf(p.mu) + p.nu)
    bs = mpmath.mpf(p.b_star)
    prod_mn = mpmath.mpf(p.mu) * p.nu
    if absolute:
        s, bs, prod_mn = abs(s), abs(bs), abs(prod_mn)
    expo = PowerSeries.geometric_shift(order).scale(s) + PowerSeries([0, bs], order)
    left = expo.exp() * PowerSeries.binomial(mpmath.mpf(p.power), order)
    # [z^k] F_alpha(wsq(z)) = sum_j (mu nu)^j / (j! (j+alpha)!) C(k+j-1, k-j)
    bess = [1 / mpmath.factorial(p.alpha)] + [mpmath.mpf(0)] * m
    cj = [1 / mpmath.factorial(p.alpha)]
    for j in range(1, m + 1):
        cj.append(cj[-1] * prod_mn / (j * (j + p.alpha)))
    for k in range(1, m + 1):
        bess[k] = mpmath.fsum(cj[j] * mpmath.binomial(k + j - 1, k - j) for j in range(1, k + 1))
    return mpmath.fsum(left[m - k] * bess[k] for k in range(m + 1))


def gf_coefficient_series(p: GfParams, m: int, precision_bits: int | None = None,
                          abs_tol: float = 0.0, guard_terms: int = GUARD_TERMS):
    """f(m+alpha, m; mu, nu) / ((m+alpha)! m!) as an mpmath number.

    The rounding error is bounded with a majorant series (all coefficients
    replaced by their moduli).  When ``precision_bits`` is given the sum is
    done at exactly that precision and PrecisionError is raised if the bound
    exceeds 2^-60 relative (or ``abs_tol``); otherwise precision starts at the
    default and is raised until the bound is met, or until an exact zero is
    reproduced at a second precision.
    """
    if m < 0:
        raise ValidationError("m must be nonnegative")
    strict = precision_bits is not None
    prec = int(precision_bits) if strict else default_precision()
    order = m + guard_terms
    with mpmath.workprec(64):
        major = _coefficient(p, m, m, absolute=True)
    prev = None
    while True:
        with mpmath.workprec(prec):
            val = _coefficient(p, m, order if prec == precision_bits else m, absolute=False)
            val = +val
        bound = major * (4 * order + 8) * mpmath.mpf(2) ** (-prec)
        target = max(abs(val) * mpmath.mpf(2) ** (-_REL_TOL_BITS), mpmath.mpf(abs_tol))
        if bound <= target:
            return val
        if not strict and val == 0 and prev == 0:
            # an exact cancellation reproduced at two precisions; no relative
            # target exists, and the absolute bound still holds
            return val
        prev = val
        if strict or prec >= MAX_PRECISION_BITS:
            raise PrecisionError(
                f"coefficient m={m} needs more than {prec} bits "
                f"(error bound {mpmath.nstr(bound, 3)}, value {mpmath.nstr(val, 6)})",
                estimate=val, bound=float(bound) if bound < mpmath.mpf(1e300) else math.inf)
        if target > 0:
            need = prec + int(mpmath.ceil(mpmath.log(bound / target, 2))) + 16
            prec = min(MAX_PRECISION_BITS, max(need, prec + 32))
        else:
            prec = min(MAX_PRECISION_BITS, 2 * prec)


def default_cauchy_radius(p: GfParams, m: int) -> float:
    return min(0.9, max(0.1, m / (m + p.alpha + 2.0)))


def _trapezoid(p, m, radius, nodes):
    theta = 2 * np.pi * np.arange(nodes) / nodes
    z = radius * np.exp(1j * theta)
    lg = log_gf_rhs(p, z) - m * np.log(z)
    return lg


def gf_coefficient_cauchy(p: GfParams, m: int, radius: float | None = None,
                          nodes: int | None = None, rtol: float = 1e-12,
                          max_nodes: int = 1 << 18) -> Estimate:
    """[z^m] of the generating function by the trapezoid rule on |z| = radius.

    The error estimate is the change from nodes/2 to nodes.  Without
    ``nodes`` the count doubles from 64 until the estimate drops below
    ``rtol`` relative.
    """
    if m < 0:
        raise ValidationError("m must be nonnegative")
    if radius is None:
        radius = default_cauchy_radius(p, m)
    if not 0 < radius < 1:
        raise DomainError("Cauchy radius must lie in (0, 1)")
    if nodes is not None and (nodes < 8 or nodes % 2):
        raise ValidationError("need an even number of nodes, at least 8")
    K = nodes if nodes is not None else 64
    while True:
        lg = _trapezoid(p, m, radius, K)
        scale = float(np.max(lg.real))
        terms = np.exp(lg - scale)
        full = math.fsum(terms.real) / K
        half = math.fsum(terms[::2].real) / (K // 2)
        roundoff = 16 * np.finfo(float).eps * float(np.sum(np.abs(terms))) / K
        diff = abs(full - half)
        est = Estimate(full, max(diff, roundoff), scale)
        if nodes is not None:
            return est
        if diff <= max(rtol * abs(full), 2 * roundoff):
            return est
        if K >= max_nodes:
            raise PrecisionError(f"Cauchy sum unresolved at {K} nodes", estimate=est, bound=diff)
        K *= 2
