"""Integer-order Bessel functions: exact series, fast log-space values,
and the leading uniform large-order approximations.

``F_alpha(w) = (w/2)^{-alpha} I_alpha(w)`` is even and entire in ``w``, so it
is parametrised here by ``wsq = w^2`` and no square-root branch is taken.
"""
from __future__ import annotations

import cmath
import math
import os

import mpmath
import numpy as np
from scipy import special

from .. import _accel
from ..errors import DomainError, PrecisionError
from ..logcomplex import LogComplex
from .airy import AIRY_MAX, airy_scaled
from .conformal import (DEFAULT_EPSILON, Region, UniformBesselRegion, eta_map,
                        turning_prefactor, zeta_map)

DEFAULT_PRECISION_BITS = 256
# |w| below which the double series is used directly
_SMALL_W = 4.0
# AMOS results smaller than this are treated as underflowed
_TINY = 1e-280
# series cancellation above which the double sum is redone in mpmath
_MAX_SERIES_LOSS = 1e6


def default_precision() -> int:
    """Default mantissa bits; ``COVKERNEL_PRECISION_BITS`` overrides."""
    env = os.environ.get("COVKERNEL_PRECISION_BITS")
    return int(env) if env else DEFAULT_PRECISION_BITS


def bessel_i_ratio_mp(alpha: int, wsq, prec: int | None = None, max_terms: int = 2_000_000):
    """F_alpha as an mpmath number, summed at ``prec`` bits.

    Raises PrecisionError if cancellation in the series leaves fewer than
    about 50 correct bits.
    """
    alpha = int(alpha)
    if alpha < 0:
        raise DomainError("alpha must be a nonnegative integer")
    prec = prec or default_precision()
    with mpmath.workprec(prec):
        q = mpmath.mpmathify(wsq) / 4
        qa = abs(q)
        t = 1 / mpmath.factorial(alpha)
        s = t
        sabs = abs(t)
        eps = mpmath.mpf(2) ** (-prec - 8)
        k = 0
        while True:
            k += 1
            t = t * q / (k * (k + alpha))
            s += t
            at = abs(t)
            sabs += at
            if k * (k + alpha) > qa and at <= eps * sabs:
                break
            if k >= max_terms:
                raise PrecisionError(f"series for F_{alpha} did not converge in {max_terms} terms",
                                     estimate=s)
        if s == 0:
            bound = mpmath.inf
        else:
            bound = sabs / abs(s) * mpmath.mpf(2) ** (-prec)
        if bound > mpmath.mpf(2) ** -50:
            raise PrecisionError(
                f"F_{alpha}({mpmath.nstr(wsq, 6)}) lost too many digits at {prec} bits",
                estimate=s, bound=float(bound))
        return +s


def bessel_i_ratio(alpha: int, wsq, prec: int | None = None) -> LogComplex:
    """F_alpha(w) = sum_k (wsq/4)^k / (k! (k+alpha)!) in log-scaled form."""
    return LogComplex.from_mp(bessel_i_ratio_mp(alpha, wsq, prec))


def _mp_fallback(alpha, wsq):
    prec = 64
    while True:
        try:
            return complex(mpmath.log(bessel_i_ratio_mp(alpha, complex(wsq), prec)))
        except PrecisionError:
            prec *= 2
            if prec > 1 << 16:
                raise


def log_bessel_i_ratio(alpha: int, wsq) -> np.ndarray:
    """Vectorised log F_alpha(wsq) in double precision.

    Small arguments and the underflow region of the AMOS routines use the
    power series; everything else uses ``scipy.special.ive``.  Series sums
    with heavy cancellation are repeated in mpmath.
    """
    alpha = int(alpha)
    wsq = np.asarray(wsq, dtype=np.complex128)
    shape = wsq.shape
    wsq = wsq.ravel()
    out = np.empty(wsq.shape, dtype=np.complex128)
    w = np.sqrt(wsq)
    aw = np.abs(w)
    small = aw <= _SMALL_W
    big = ~small
    if big.any():
        wb = w[big]
        with np.errstate(all="ignore"):
            v = special.ive(alpha, wb)
            res = np.log(v) + wb.real - alpha * np.log(wb / 2)
        bad = ~np.isfinite(res) | (np.abs(v) < _TINY)
        out[big] = res
        small[np.nonzero(big)[0][bad]] = True
    if small.any():
        idx = np.nonzero(small)[0]
        vals, loss = _accel.log_bessel_series(alpha, wsq[idx])
        out[idx] = vals
        for j in np.nonzero(~(loss <= _MAX_SERIES_LOSS))[0]:
            out[idx[j]] = _mp_fallback(alpha, wsq[idx[j]])
    return out.reshape(shape)


def log_bessel_i(alpha: int, w) -> np.ndarray:
    """log I_alpha(w) for integer alpha and complex w (vectorised)."""
    w = np.asarray(w, dtype=np.complex128)
    with np.errstate(divide="ignore"):
        return log_bessel_i_ratio(alpha, w * w) + alpha * np.log(w / 2)


def bessel_i_exact(alpha: int, z, prec: int | None = None) -> LogComplex:
    """I_alpha(alpha z) from the exact series (oracle for the uniform forms)."""
    z = complex(z)
    w = alpha * z
    f = bessel_i_ratio(alpha, w * w, prec)
    return f * LogComplex.from_complex(w / 2) ** alpha


def bessel_j_exact(alpha: int, x, prec: int | None = None) -> LogComplex:
    """J_alpha(alpha x) from the exact series, J_a(y) = (y/2)^a F_a(-y^2)."""
    y = alpha * complex(x)
    prec = prec or default_precision()
    while True:
        try:
            f = bessel_i_ratio(alpha, -y * y, prec)
            break
        except PrecisionError:
            prec *= 2
    return f * LogComplex.from_complex(y / 2) ** alpha


def bessel_i_uniform(alpha: int, z, epsilon: float = DEFAULT_EPSILON) -> LogComplex:
    """Leading uniform approximation of I_alpha(alpha z) in |arg z| <= pi/2 - eps.

    exp(alpha eta) / (sqrt(2 pi alpha) (1+z^2)^{1/4}); relative error O(1/alpha).
    """
    alpha = int(alpha)
    if alpha < 1:
        raise DomainError("uniform approximation needs alpha >= 1")
    z = complex(z)
    UniformBesselRegion(Region.POSITIVE_SECTOR, epsilon).require(z)
    eta = eta_map(z).value
    logval = alpha * eta - 0.5 * math.log(2 * math.pi * alpha) - 0.25 * cmath.log(1 + z * z)
    return LogComplex.from_log(logval)


def bessel_j_uniform_airy(alpha: int, z, epsilon: float = DEFAULT_EPSILON) -> LogComplex:
    """Airy-type uniform approximation of J_alpha(alpha z) in |arg z| <= pi - eps.

    Returns the leading term (4 zeta/(1-z^2))^{1/4} Ai(alpha^{2/3} zeta) / alpha^{1/3}.
    The Ai' correction is only known up to an O(1/(1+|zeta|^{1/2})) factor, so it
    is not added; see ``airy_correction_bound``.
    """
    alpha = int(alpha)
    if alpha < 1:
        raise DomainError("uniform approximation needs alpha >= 1")
    z = complex(z)
    UniformBesselRegion(Region.AIRY_TRANSITION, epsilon).require(z)
    zeta = zeta_map(z, epsilon).value
    pref = turning_prefactor(z)
    arg = alpha ** (2.0 / 3.0) * zeta
    log_front = cmath.log(pref) - math.log(alpha) / 3.0
    if zeta.imag == 0.0 and z.imag == 0.0:
        x = arg.real
        if abs(x) > AIRY_MAX:
            raise PrecisionError(f"Airy argument {x:g} outside the supported range")
        ai_s, _, scale = airy_scaled(x)
        if ai_s == 0.0:
            return LogComplex.zero()
        return LogComplex.from_log(log_front + cmath.log(ai_s) - scale)
    if abs(arg) > AIRY_MAX:
        raise PrecisionError(f"Airy argument {arg!r} outside the supported range")
    ai = mpmath.airyai(mpmath.mpc(arg.real, arg.imag))
    return LogComplex.from_log(log_front) * LogComplex.from_mp(ai)


def airy_correction_bound(alpha: int, x: float) -> float:
    """|(4 zeta/(1-x^2))^{1/4} Ai'(alpha^{2/3} zeta)| / (alpha^{5/3} (1+|zeta|^{1/2})).

    The size of the second term of the Airy-type expansion, up to its
    unspecified bounded factor.
    """
    zeta = zeta_map(x).value.real
    _, aip_s, scale = airy_scaled(alpha ** (2.0 / 3.0) * zeta)
    pref = abs(turning_prefactor(x))
    return pref * abs(aip_s) * math.exp(-scale) / (alpha ** (5.0 / 3.0) * (1 + abs(zeta) ** 0.5))
