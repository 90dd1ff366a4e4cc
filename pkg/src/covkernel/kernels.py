"""The four limiting kernels, with Taylor expansions on the diagonal.

Near x = y each formula is a difference quotient that loses about
k log10(1/|x-y|) digits (k = 1 for the sine and Airy kernels, 3 for the
real-case variants).  Off the diagonal the quotient is therefore formed in
mpmath with enough guard bits; within ``DIAG_RADIUS`` a degree-6 Taylor
expansion in d = x - y about the midpoint is used instead.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from .errors import ValidationError
from .specfun.airy import airy_pair

DIAG_RADIUS = 1e-3
TAYLOR_DEGREE = 6


class KernelId(enum.Enum):
    SINE = "sine"
    SINE_TILDE = "sine-tilde"
    AIRY = "airy"
    AIRY_TILDE = "airy-tilde"

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        key = str(name).lower().replace("_", "-")
        for k in cls:
            if k.value == key:
                return k
        raise ValidationError(f"unknown kernel {name!r}; choose from {[k.value for k in cls]}")


@dataclass(frozen=True)
class KernelPoint:
    kernel: KernelId
    x: float
    y: float
    value: float
    diagonal: bool


def _sine_taylor(d):
    x2 = (math.pi * d) ** 2
    return math.fsum((-1) ** k * x2 ** k / math.factorial(2 * k + 1)
                     for k in range(TAYLOR_DEGREE // 2 + 1))


def _sine_tilde_taylor(d):
    # 2 pi^2 (sin x / x^3 - cos x / x^2) = 2 pi^2 sum_{k>=1} (-1)^{k+1} 2k x^{2k-2} / (2k+1)!
    x2 = (math.pi * d) ** 2
    s = math.fsum((-1) ** (k + 1) * 2 * k * x2 ** (k - 1) / math.factorial(2 * k + 1)
                  for k in range(1, TAYLOR_DEGREE // 2 + 2))
    return 2 * math.pi ** 2 * s


def _airy_derivatives(c, n):
    """Ai^{(k)}(c) for k < n, from y'' = c y and y^{(k+2)} = c y^{(k)} + k y^{(k-1)}."""
    ai, aip = airy_pair(c)
    der = [ai, aip]
    for k in range(n - 2):
        der.append(c * der[k] + (k * der[k - 1] if k >= 1 else 0.0))
    return der


def _shifted(der, sign, n):
    """Coefficients in d of f(c + sign d/2) given f^{(k)}(c)."""
    return np.array([der[k] * (sign * 0.5) ** k / math.factorial(k) for k in range(n)])


def _polymul(a, b, n):
    return np.convolve(a, b)[:n]


def _airy_numerators(c, n):
    """Polynomials in d for Ai(x), Ai'(x), Ai(y), Ai'(y) with x, y = c +- d/2."""
    der = _airy_derivatives(c, n + 2)
    ax = _shifted(der, 1, n)
    ay = _shifted(der, -1, n)
    apx = _shifted(der[1:], 1, n)
    apy = _shifted(der[1:], -1, n)
    return ax, apx, ay, apy


def _airy_taylor(x, y):
    c, d = 0.5 * (x + y), x - y
    n = TAYLOR_DEGREE + 2
    ax, apx, ay, apy = _airy_numerators(c, n)
    num = _polymul(ax, apy, n) - _polymul(apx, ay, n)
    coeffs = num[1:TAYLOR_DEGREE + 2]
    return float(np.polyval(coeffs[::-1], d))


def _airy_tilde_taylor(x, y):
    c, d = 0.5 * (x + y), x - y
    n = TAYLOR_DEGREE + 4
    ax, apx, ay, apy = _airy_numerators(c, n)
    p1 = 2 * (_polymul(ax, apy, n) - _polymul(apx, ay, n))
    p2 = 2 * c * _polymul(ax, ay, n) - 2 * _polymul(apx, apy, n)
    num = p1.copy()
    num[1:] += p2[:-1]
    coeffs = num[3:TAYLOR_DEGREE + 4]
    return float(np.polyval(coeffs[::-1], d))


def _guard_bits(d, power):
    ad = abs(d)
    return 0 if ad >= 1 else int(power * math.log2(1 / ad)) + 10


def _sine_formula(d):
    with mpmath.workprec(53 + _guard_bits(d, 1)):
        x = mpmath.pi * mpmath.mpf(d)
        return float(mpmath.sin(x) / x)


def _sine_tilde_formula(d):
    with mpmath.workprec(53 + _guard_bits(d, 3)):
        d = mpmath.mpf(d)
        x = mpmath.pi * d
        return float(2 * mpmath.sin(x) / (mpmath.pi * d ** 3) - 2 * mpmath.cos(x) / d ** 2)


def _airy_formula(x, y, tilde):
    d = x - y
    prec = 53 + _guard_bits(d, 3 if tilde else 1)
    with mpmath.workprec(prec):
        ax, apx = airy_pair(x, prec)
        ay, apy = airy_pair(y, prec)
        ax, apx, ay, apy = (mpmath.mpf(v) for v in (ax, apx, ay, apy))
        dd = mpmath.mpf(x) - mpmath.mpf(y)
        if not tilde:
            return float((ax * apy - apx * ay) / dd)
        s = mpmath.mpf(x) + mpmath.mpf(y)
        return float(2 * (ax * apy - apx * ay) / dd ** 3 + (s * ax * ay - 2 * apx * apy) / dd ** 2)


def kernel_point(kernel, x: float, y: float, diag_radius: float = DIAG_RADIUS) -> KernelPoint:
    kid = KernelId.parse(kernel)
    x, y = float(x), float(y)
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValidationError("kernel arguments must be finite")
    # symmetric in (x, y): evaluate with the ordered pair so K(x, y) == K(y, x) exactly
    x, y = max(x, y), min(x, y)
    d = x - y
    diag = abs(d) < diag_radius
    if kid is KernelId.SINE:
        v = _sine_taylor(d) if diag else _sine_formula(d)
    elif kid is KernelId.SINE_TILDE:
        v = _sine_tilde_taylor(d) if diag else _sine_tilde_formula(d)
    elif kid is KernelId.AIRY:
        v = _airy_taylor(x, y) if diag else _airy_formula(x, y, False)
    else:
        v = _airy_tilde_taylor(x, y) if diag else _airy_formula(x, y, True)
    return KernelPoint(kid, x, y, v, diag)


def kernel_eval(kernel, x: float, y: float, diag_radius: float = DIAG_RADIUS) -> float:
    """Value of the sine, sine-tilde, Airy or Airy-tilde kernel at (x, y)."""
    return kernel_point(kernel, x, y, diag_radius).value
