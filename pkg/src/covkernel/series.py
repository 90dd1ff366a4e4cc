"""Truncated formal power series over mpmath numbers."""
from __future__ import annotations

import mpmath


class PowerSeries:
    """sum_{k<=order} coeffs[k] z^k, arithmetic exact through ``order``.

    Coefficients are mpmath numbers; the caller controls the working
    precision with ``mpmath.workprec``.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs, order: int | None = None):
        coeffs = [mpmath.mpmathify(c) for c in coeffs]
        if order is None:
            order = len(coeffs) - 1
        coeffs = coeffs[: order + 1]
        coeffs += [mpmath.mpf(0)] * (order + 1 - len(coeffs))
        self.coeffs = coeffs
        self.order = order

    @classmethod
    def constant(cls, c, order):
        return cls([c], order)

    @classmethod
    def geometric_shift(cls, order):
        """z/(1-z) = z + z^2 + ..."""
        return cls([0] + [1] * order, order)

    @classmethod
    def binomial(cls, c, order):
        """(1 - z)^{-c} = sum_k (c)_k / k! z^k."""
        c = mpmath.mpmathify(c)
        out = [mpmath.mpf(1)]
        for k in range(1, order + 1):
            out.append(out[-1] * (c + k - 1) / k)
        return cls(out, order)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __len__(self):
        return self.order + 1

    def _coerce(self, other):
        if isinstance(other, PowerSeries):
            return other
        return PowerSeries.constant(other, self.order)

    def __add__(self, other):
        other = self._coerce(other)
        M = min(self.order, other.order)
        return PowerSeries([a + b for a, b in zip(self.coeffs[: M + 1], other.coeffs[: M + 1])], M)

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def scale(self, c):
        c = mpmath.mpmathify(c)
        return PowerSeries([c * a for a in self.coeffs], self.order)

    def __mul__(self, other):
        if not isinstance(other, PowerSeries):
            return self.scale(other)
        M = min(self.order, other.order)
        a, b = self.coeffs, other.coeffs
        out = [mpmath.fsum(a[i] * b[k - i] for i in range(k + 1)) for k in range(M + 1)]
        return PowerSeries(out, M)

    __rmul__ = __mul__

    def exp(self):
        """exp of the series via g' = f' g, i.e. k g_k = sum_j j f_j g_{k-j}."""
        f = self.coeffs
        g = [mpmath.exp(f[0])]
        for k in range(1, self.order + 1):
            g.append(mpmath.fsum(j * f[j] * g[k - j] for j in range(1, k + 1)) / k)
        return PowerSeries(g, self.order)

    def compose(self, inner: "PowerSeries"):
        """self(inner(z)); ``inner`` must have zero constant term."""
        if inner.coeffs[0] != 0:
            raise ValueError("inner series must vanish at 0")
        M = min(self.order, inner.order)
        out = PowerSeries.constant(self.coeffs[M], M)
        for c in reversed(self.coeffs[:M]):
            out = out * inner + c
        return out

    def compose_shift(self):
        """self(z/(1-z)), using [z^n] (z/(1-z))^j = C(n-1, j-1)."""
        M = self.order
        f = self.coeffs
        out = [f[0]]
        for n in range(1, M + 1):
            out.append(mpmath.fsum(f[j] * mpmath.binomial(n - 1, j - 1) for j in range(1, n + 1)))
        return PowerSeries(out, M)

    def __repr__(self):
        head = ", ".join(mpmath.nstr(c, 8) for c in self.coeffs[:6])
        return f"PowerSeries([{head}{', ...' if self.order > 5 else ''}], order={self.order})"
