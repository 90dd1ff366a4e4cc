"""The maps eta(z) and zeta(z) of the uniform Bessel expansions.

eta(z)   = sqrt(1+z^2) + log(z / (1 + sqrt(1+z^2)))       (I-Bessel, right half plane)
(2/3) zeta^{3/2} = log((1 + sqrt(1-z^2)) / z) - sqrt(1-z^2)  (J-Bessel, Airy type)

Logs of quotients are split into differences of principal logs, so both
maps are analytic in the plane cut along the negative real axis.
"""
from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from ..errors import DomainError

DEFAULT_EPSILON = 0.05

_C13 = 2.0 ** (1.0 / 3.0)
# zeta(1 - t) and (4 zeta / (1 - z^2))^{1/4} as power series in t = 1 - z
_ZETA_SERIES = [0.0, 1.0, 3 / 10, 32 / 175, 1037 / 7875, 103727 / 1010625,
                33060241 / 394143750, 4393499056 / 62077640625, 15356175508 / 251266640625]
_PHI_SERIES = [1.0, 1 / 5, 3 / 35, 73 / 1575, 35209 / 1212750, 380069 / 18768750,
               1897703867 / 124155281250, 25770486389 / 2110639781250]
_TURNING_RADIUS = 0.05


class Region(enum.Enum):
    POSITIVE_SECTOR = "positive_sector"  # |arg z| <= pi/2 - eps
    AIRY_TRANSITION = "airy_transition"  # |arg z| <= pi - eps


class Branch(enum.Enum):
    PRINCIPAL_ETA = "principal_eta"
    PRINCIPAL_ZETA = "principal_zeta"


@dataclass(frozen=True)
class UniformBesselRegion:
    kind: Region
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainError("sector margin must be positive")

    @property
    def max_arg(self) -> float:
        half = math.pi / 2 if self.kind is Region.POSITIVE_SECTOR else math.pi
        return half - self.epsilon

    def contains(self, z) -> bool:
        z = complex(z)
        return z != 0 and abs(cmath.phase(z)) <= self.max_arg + 1e-15

    def require(self, z):
        if not self.contains(z):
            raise DomainError(
                f"z={complex(z)!r} outside |arg z| <= {self.max_arg:.6g} ({self.kind.value})")


@dataclass(frozen=True)
class BranchedValue:
    value: complex
    branch_note: Branch

    def __complex__(self):
        return complex(self.value)


def _poly(coeffs, t):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _sqrt_one_plus_sq(z: complex) -> complex:
    """sqrt(1+z^2), continuous from the open right half plane onto its boundary."""
    s = cmath.sqrt(1 + z * z)
    if z.real == 0.0 and abs(z.imag) > 1.0:
        s = complex(0.0, math.copysign(math.sqrt(z.imag * z.imag - 1.0), z.imag))
    return s


def eta_map(z) -> BranchedValue:
    """eta(z) on the closed right half plane (z != 0)."""
    z = complex(z)
    if z == 0:
        raise DomainError("eta is singular at z = 0")
    if z.real < 0:
        raise DomainError("eta_map is defined for Re z >= 0 (|arg z| <= pi/2)")
    s = _sqrt_one_plus_sq(z)
    return BranchedValue(s + cmath.log(z) - cmath.log(1 + s), Branch.PRINCIPAL_ETA)


def xi_map(z) -> complex:
    """(2/3) zeta(z)^{3/2}, i.e. the right side of the zeta definition."""
    z = complex(z)
    if z == 0:
        raise DomainError("zeta is singular at z = 0")
    s = cmath.sqrt(1 - z * z)
    return cmath.log(1 + s) - cmath.log(z) - s


def zeta_map(z, epsilon: float = DEFAULT_EPSILON) -> BranchedValue:
    """zeta(z), real and decreasing on (0, inf) with zeta(1) = 0."""
    z = complex(z)
    UniformBesselRegion(Region.AIRY_TRANSITION, epsilon).require(z)
    t = 1 - z
    if abs(t) < _TURNING_RADIUS:
        return BranchedValue(_C13 * _poly(_ZETA_SERIES, t), Branch.PRINCIPAL_ZETA)
    if z.imag == 0.0:
        x = z.real
        if x < 1:
            q = 1.5 * (math.log((1 + math.sqrt(1 - x * x)) / x) - math.sqrt(1 - x * x))
            val = q ** (2.0 / 3.0)
        else:
            r = math.sqrt(x * x - 1)
            val = -((1.5 * (r - math.acos(1 / x))) ** (2.0 / 3.0))
        return BranchedValue(complex(val, 0.0), Branch.PRINCIPAL_ZETA)
    q = 1.5 * xi_map(z)
    mod = abs(q) ** (2.0 / 3.0)
    base = cmath.phase(q)
    # upper half z-plane maps into the lower half zeta-plane and vice versa
    lo, hi = (-math.pi, 0.0) if z.imag > 0 else (0.0, math.pi)
    for k in (0, -1, 1):
        arg = 2.0 / 3.0 * (base + 2 * math.pi * k)
        if lo <= arg <= hi:
            return BranchedValue(cmath.rect(mod, arg), Branch.PRINCIPAL_ZETA)
    raise DomainError(f"no admissible zeta branch at z={z!r}")  # pragma: no cover


def turning_prefactor(z) -> complex:
    """(4 zeta / (1 - z^2))^{1/4}, with its removable singularity at z = 1 filled in."""
    z = complex(z)
    t = 1 - z
    if abs(t) < _TURNING_RADIUS:
        return _C13 * _poly(_PHI_SERIES, t)
    zeta = zeta_map(z, epsilon=1e-12).value
    r = 4 * zeta / (1 - z * z)
    if z.imag == 0.0 and z.real > 0:
        return complex(r.real ** 0.25, 0.0)
    return r ** 0.25
