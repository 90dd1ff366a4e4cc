"""Complex numbers stored as (log-magnitude, phase).

Normalising factors and factorials in this package overflow double
precision long before the quantities of interest do, so intermediate
values are carried in this form and exponentiated at the end.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath

_TWO_PI = 2.0 * math.pi


def _wrap(phase: float) -> float:
    """Reduce a phase to (-pi, pi]."""
    p = math.remainder(phase, _TWO_PI)
    return math.pi if p == -math.pi else p


@dataclass(frozen=True)
class LogComplex:
    """``exp(log_abs + 1j*phase)``; ``log_abs = -inf`` encodes zero."""

    log_abs: float
    phase: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "log_abs", float(self.log_abs))
        object.__setattr__(self, "phase", _wrap(float(self.phase)) if math.isfinite(self.phase) else 0.0)

    @classmethod
    def zero(cls) -> "LogComplex":
        return cls(-math.inf, 0.0)

    @classmethod
    def from_complex(cls, z) -> "LogComplex":
        z = complex(z)
        if z == 0:
            return cls.zero()
        # cmath.phase flags a range error when the angle underflows
        return cls(math.log(abs(z)), math.atan2(z.imag, z.real))

    @classmethod
    def from_log(cls, logz) -> "LogComplex":
        """From a (complex) logarithm, any branch."""
        logz = complex(logz)
        return cls(logz.real, logz.imag)

    @classmethod
    def from_mp(cls, z) -> "LogComplex":
        """From an mpmath number, without leaving arbitrary-exponent arithmetic."""
        z = mpmath.mpmathify(z)
        if z == 0:
            return cls.zero()
        return cls(float(mpmath.log(abs(z))), float(mpmath.arg(z)))

    @property
    def is_zero(self) -> bool:
        return self.log_abs == -math.inf

    def log(self) -> complex:
        return complex(self.log_abs, self.phase)

    def to_complex(self) -> complex:
        if self.is_zero:
            return 0j
        return cmath.rect(math.exp(self.log_abs), self.phase) if self.log_abs < 709.7 else complex(
            math.copysign(math.inf, math.cos(self.phase)), math.copysign(math.inf, math.sin(self.phase)))

    def to_mp(self):
        if self.is_zero:
            return mpmath.mpc(0)
        return mpmath.exp(mpmath.mpc(self.log_abs, self.phase))

    @property
    def real(self) -> float:
        return self.to_complex().real

    def __complex__(self):
        return self.to_complex()

    def __mul__(self, other):
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        return LogComplex(self.log_abs + other.log_abs, self.phase + other.phase)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, LogComplex):
            other = LogComplex.from_complex(other)
        if other.is_zero:
            raise ZeroDivisionError("division by LogComplex zero")
        return LogComplex(self.log_abs - other.log_abs, self.phase - other.phase)

    def __pow__(self, k: int):
        return LogComplex(self.log_abs * k, self.phase * k)

    def conjugate(self) -> "LogComplex":
        return LogComplex(self.log_abs, -self.phase)

    def isclose(self, other: "LogComplex", rel_tol: float = 1e-12) -> bool:
        """Relative closeness, insensitive to overflow of either operand."""
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        d = (self / other).log()
        return abs(cmath.exp(d) - 1.0) <= rel_tol
