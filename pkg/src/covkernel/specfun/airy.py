"""Airy function Ai and its derivative on the real line.

Small arguments use the Maclaurin series, summed in mpmath with enough
guard bits to absorb the cancellation between the two fundamental series.
Large arguments use the standard asymptotic expansions.  The switch point
depends on the requested precision: the expansions are used only where
their optimally truncated error, roughly exp(-2*zeta), is below target.
"""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath
import numpy as np

from ..errors import DomainError

AIRY_MAX = 1.0e6
"""Largest |x| accepted; beyond this the phase of Ai(-x) is meaningless in doubles."""

_SQRT_PI = math.sqrt(math.pi)


def _u_coeffs(n):
    u = [Fraction(1)]
    for k in range(1, n):
        u.append(u[-1] * (6 * k - 5) * (6 * k - 3) * (6 * k - 1) / ((2 * k - 1) * 216 * k))
    return u


_U_EXACT = _u_coeffs(60)
_V_EXACT = [Fraction(1)] + [-Fraction(6 * k + 1, 6 * k - 1) * _U_EXACT[k] for k in range(1, 60)]
_U = [float(c) for c in _U_EXACT]
_V = [float(c) for c in _V_EXACT]


def _coeffs(prec):
    if prec <= 53:
        return _U, _V
    return ([mpmath.mpf(c.numerator) / c.denominator for c in _U_EXACT],
            [mpmath.mpf(c.numerator) / c.denominator for c in _V_EXACT])


def _zeta(x):
    return 2.0 / 3.0 * abs(x) ** 1.5


def _use_asymptotic(x, prec):
    return 2.0 * _zeta(x) > (prec + 12) * math.log(2.0)


def _maclaurin(x, prec):
    """(Ai, Ai') by the Maclaurin series, correctly rounded to ~prec bits."""
    zeta = _zeta(x)
    guard = int((2.0 * zeta if x > 0 else zeta) / math.log(2.0)) + 24
    with mpmath.workprec(prec + guard):
        x = mpmath.mpf(x)
        c1 = 1 / (mpmath.cbrt(9) * mpmath.gamma(mpmath.mpf(2) / 3))
        c2 = 1 / (mpmath.cbrt(3) * mpmath.gamma(mpmath.mpf(1) / 3))
        x3 = x ** 3
        tol = mpmath.mpf(2) ** (-(prec + guard + 4))
        a = mpmath.mpf(1)  # x^{3k} coefficient of f
        b = mpmath.mpf(1)  # x^{3k+1} coefficient of g
        f, g = mpmath.mpf(1), x
        fp, gp = mpmath.mpf(0), mpmath.mpf(1)
        p = mpmath.mpf(1)  # x^{3k}
        k = 0
        while True:
            k += 1
            a = a / ((3 * k - 1) * (3 * k))
            b = b / ((3 * k) * (3 * k + 1))
            pm1 = p * x * x  # x^{3k-1}
            p = p * x3
            tf = a * p
            tg = b * p * x
            f += tf
            g += tg
            fp += 3 * k * a * pm1
            gp += (3 * k + 1) * b * p
            if k > 3 and abs(tf) + abs(tg) <= tol * (abs(f) + abs(g)) and abs(3 * k * a * pm1) <= tol * (abs(fp) + abs(gp) + 1):
                break
        ai = c1 * f - c2 * g
        aip = c1 * fp - c2 * gp
    return ai, aip


def _asymptotic_pos(x, prec):
    """(Ai(x) e^zeta, Ai'(x) e^zeta, zeta) for large positive x."""
    zeta = _zeta(x)
    mp = prec > 53
    if mp:
        zeta = mpmath.mpf(2) / 3 * mpmath.mpf(x) ** 1.5
    U, V = _coeffs(prec)
    su, sv = 0, 0
    term_prev = math.inf
    tol = 2.0 ** -(prec + 4)
    zk = 1
    for k in range(len(U)):
        tu = U[k] / zk
        if abs(tu) > term_prev or abs(tu) < tol:
            break
        su += (-1) ** k * tu
        sv += (-1) ** k * V[k] / zk
        term_prev = abs(tu)
        zk = zk * zeta
    if mp:
        x = mpmath.mpf(x)
        q = x ** mpmath.mpf(0.25)
        return su / (2 * mpmath.sqrt(mpmath.pi) * q), -q * sv / (2 * mpmath.sqrt(mpmath.pi)), zeta
    q = x ** 0.25
    return su / (2.0 * _SQRT_PI * q), -q * sv / (2.0 * _SQRT_PI), zeta


def _asymptotic_neg(x, prec):
    """(Ai(x), Ai'(x)) for large negative x."""
    y = -x
    mp = prec > 53
    if mp:
        y = mpmath.mpf(y)
        zeta = mpmath.mpf(2) / 3 * y ** 1.5
        c, s = mpmath.cos(zeta - mpmath.pi / 4), mpmath.sin(zeta - mpmath.pi / 4)
        rpi = mpmath.sqrt(mpmath.pi)
        q = y ** mpmath.mpf(0.25)
    else:
        zeta = _zeta(y)
        c, s = math.cos(zeta - math.pi / 4), math.sin(zeta - math.pi / 4)
        rpi = _SQRT_PI
        q = y ** 0.25
    U, V = _coeffs(prec)
    eu, ou, ev, ov = 0, 0, 0, 0
    tol = 2.0 ** -(prec + 4)
    zk = 1
    prev = math.inf
    for k in range(len(U)):
        tu = U[k] / zk
        if abs(tu) > prev or abs(tu) < tol:
            break
        prev = abs(tu)
        sign = (-1) ** (k // 2)
        if k % 2 == 0:
            eu += sign * tu
            ev += sign * V[k] / zk
        else:
            ou += sign * tu
            ov += sign * V[k] / zk
        zk = zk * zeta
    ai = (c * eu + s * ou) / (rpi * q)
    aip = q * (s * ev - c * ov) / rpi
    return ai, aip


def _check(x):
    if not math.isfinite(x) or abs(x) > AIRY_MAX:
        raise DomainError(f"Airy argument {x!r} outside [-{AIRY_MAX:g}, {AIRY_MAX:g}]")


def airy_pair(x, prec: int = 53, method: str = "auto"):
    """(Ai(x), Ai'(x)) to about ``prec`` bits.

    Returns floats for ``prec == 53`` and mpmath numbers otherwise.
    ``method`` may force ``"series"`` or ``"asymptotic"`` (for overlap checks).
    """
    x = float(x) if prec <= 53 else x
    _check(float(x))
    if method == "auto":
        method = "asymptotic" if _use_asymptotic(float(x), prec) else "series"
    if method == "series":
        ai, aip = _maclaurin(x, prec)
    elif float(x) > 0:
        ai, aip, zeta = _asymptotic_pos(float(x), prec)
        if prec > 53:
            e = mpmath.exp(-zeta)
            ai, aip = ai * e, aip * e
        else:
            e = math.exp(-zeta)
            ai, aip = ai * e, aip * e
    else:
        ai, aip = _asymptotic_neg(float(x), prec)
    if prec <= 53:
        return float(ai), float(aip)
    return +ai, +aip


def airy_scaled(x: float):
    """(Ai(x) e^z, Ai'(x) e^z, z) with z = (2/3) x^{3/2} for x > 0, z = 0 otherwise.

    Used where Ai underflows but its logarithm is still needed.
    """
    x = float(x)
    _check(x)
    if x > 0 and _use_asymptotic(x, 53):
        return _asymptotic_pos(x, 53)
    ai, aip = airy_pair(x)
    if x > 0:
        z = _zeta(x)
        e = math.exp(z)
        return ai * e, aip * e, z
    return ai, aip, 0.0


def _vectorize(fn):
    def wrapper(x):
        if np.ndim(x) == 0:
            return fn(float(x))
        arr = np.asarray(x, dtype=float)
        return np.array([fn(v) for v in arr.ravel()]).reshape(arr.shape)

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_vectorize
def airy_ai(x):
    """Ai(x) for real x (scalar or array)."""
    return airy_pair(x)[0]


@_vectorize
def airy_ai_prime(x):
    """Ai'(x) for real x (scalar or array)."""
    return airy_pair(x)[1]
