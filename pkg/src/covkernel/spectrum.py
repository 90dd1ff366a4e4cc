"""Marchenko-Pastur geometry: density, edges and the bulk exponent h_inf."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


def _check_gamma(gamma):
    if not 0 < gamma <= 1:
        raise DomainError(f"gamma must lie in (0, 1], got {gamma}")


@dataclass(frozen=True)
class SpectrumGeometry:
    gamma: float
    xi_lower: float
    xi_upper: float

    def residuals(self):
        """Left side of xi^2 - 2(1+gamma) xi + (1-gamma)^2 = 0 at both edges."""
        g = self.gamma
        return tuple(x * x - 2 * (1 + g) * x + (1 - g) ** 2 for x in (self.xi_lower, self.xi_upper))

    def interior(self, xi) -> bool:
        return self.xi_lower < xi < self.xi_upper

    def which_edge(self, xi, rtol=1e-9):
        """'upper', 'lower' or None."""
        if abs(xi - self.xi_upper) <= rtol * self.xi_upper:
            return "upper"
        if abs(xi - self.xi_lower) <= rtol * max(self.xi_upper, 1.0):
            return "lower"
        return None


def spectrum_edges(gamma: float) -> SpectrumGeometry:
    _check_gamma(gamma)
    r = math.sqrt(gamma)
    return SpectrumGeometry(gamma, (1 - r) ** 2, (1 + r) ** 2)


def mp_density(xi: float, gamma: float) -> float:
    """Marchenko-Pastur density g(xi) for parameter gamma."""
    geo = spectrum_edges(gamma)
    if not geo.xi_lower < xi < geo.xi_upper:
        return 0.0
    return math.sqrt((xi - geo.xi_lower) * (geo.xi_upper - xi)) / (2 * math.pi * gamma * xi)


def h_inf(xi: float, gamma: float) -> float:
    """-xi/4 + (1+gamma)/2 - (1-gamma)^2/(4 xi); zero at the spectral edges."""
    if xi <= 0:
        raise DomainError("xi must be positive")
    return -0.25 * xi + 0.5 * (1 + gamma) - 0.25 * (1 - gamma) ** 2 / xi
