"""Rescaling factors of the bulk and edge limit theorems and the harness
comparing rescaled correlation functions with their kernel limits."""
from __future__ import annotations

import csv
import enum
import io
import math
import warnings
from dataclasses import asdict, dataclass

import mpmath

from .contour import ContourSpec, contour_correlation
from .ensembles import EnsembleSpec, mc_correlation
from .errors import ValidationError
from .genfun import GfParams, gf_coefficient_cauchy, gf_coefficient_series
from .kernels import KernelId, kernel_eval
from .logcomplex import LogComplex
from .spectrum import SpectrumGeometry, h_inf, mp_density, spectrum_edges

__all__ = [
    "Method", "Regime", "ScalingPlan", "SpectrumGeometry", "TheoremCheck", "convergence_table",
    "h_inf", "mp_density", "rescale_log", "spectrum_edges", "table_to_csv", "verify_theorem",
]


class Regime(enum.Enum):
    BULK = "bulk"
    EDGE_UPPER = "edge-upper"
    EDGE_LOWER = "edge-lower"

    @property
    def is_edge(self):
        return self is not Regime.BULK


class Method(enum.Enum):
    SERIES = "series"
    CAUCHY = "cauchy"
    CONTOUR = "contour"
    MC = "mc"

    @classmethod
    def parse(cls, v):
        return v if isinstance(v, cls) else cls(str(v).lower())


def round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


@dataclass(frozen=True)
class ScalingPlan:
    regime: Regime
    N: int
    m: int
    gamma: float
    xi: float
    mu: float
    nu: float

    @classmethod
    def build(cls, regime, N, gamma, mu=0.0, nu=0.0, xi=None, m=None):
        """Plan with m = round(N gamma); edge regimes default xi to the edge."""
        regime = Regime(regime)
        geo = spectrum_edges(gamma)
        if regime is Regime.EDGE_LOWER and gamma == 1:
            raise ValidationError("the lower edge is a soft edge only for gamma < 1")
        if xi is None:
            if regime is Regime.BULK:
                raise ValidationError("bulk plans need xi")
            xi = geo.xi_upper if regime is Regime.EDGE_UPPER else geo.xi_lower
        if m is None:
            m = round_half_up(N * gamma)
        elif regime.is_edge and abs(m - N * gamma) > 1:
            warnings.warn(f"|m - N gamma| = {abs(m - N * gamma):.3g} is not plausibly o(N^(1/3))",
                          stacklevel=2)
        return cls(regime, int(N), int(m), float(gamma), float(xi), float(mu), float(nu))

    def __post_init__(self):
        if not 0 <= self.m <= self.N:
            raise ValidationError(f"need 0 <= m <= N, got m={self.m}, N={self.N}")
        geo = spectrum_edges(self.gamma)
        if self.regime is Regime.BULK and not geo.interior(self.xi):
            raise ValidationError(f"xi={self.xi} outside the bulk ({geo.xi_lower}, {geo.xi_upper})")
        if self.regime is Regime.EDGE_LOWER and self.gamma == 1:
            raise ValidationError("the lower edge is a soft edge only for gamma < 1")
        if self.regime.is_edge:
            want = "upper" if self.regime is Regime.EDGE_UPPER else "lower"
            if geo.which_edge(self.xi) != want:
                raise ValidationError(f"xi={self.xi} is not the {want} edge for gamma={self.gamma}")

    def with_N(self, N):
        return ScalingPlan.build(self.regime, N, self.gamma, self.mu, self.nu, self.xi)

    @property
    def alpha(self) -> int:
        return self.N - self.m

    @property
    def hat_factor(self) -> float:
        if self.regime is Regime.BULK:
            return 1.0 / (self.gamma * mp_density(self.xi, self.gamma))
        return self.xi ** (2 / 3) * self.gamma ** (-1 / 6)

    @property
    def hat_mu(self) -> float:
        return self.hat_factor * self.mu

    @property
    def hat_nu(self) -> float:
        return self.hat_factor * self.nu

    def arguments(self):
        """The spectral arguments at which f is evaluated."""
        N, xi = self.N, self.xi
        if self.regime is Regime.BULK:
            return N * xi + self.hat_mu, N * xi + self.hat_nu
        sg = 1.0 if self.regime is Regime.EDGE_UPPER else -1.0
        s = N ** (1 / 3)
        return xi * N + sg * self.hat_mu * s, xi * N + sg * self.hat_nu * s

    def gf_params(self, beta, b_star) -> GfParams:
        mu_f, nu_f = self.arguments()
        return GfParams(self.alpha, int(beta), b_star, mu_f, nu_f)

    def kernel(self, beta) -> KernelId:
        if self.regime is Regime.BULK:
            return KernelId.SINE if int(beta) == 2 else KernelId.SINE_TILDE
        return KernelId.AIRY if int(beta) == 2 else KernelId.AIRY_TILDE


def _log_prefactor(plan: ScalingPlan, beta) -> float:
    g, xi, N = plan.gamma, plan.xi, plan.N
    if plan.regime is Regime.BULK:
        dens = math.log(g * mp_density(xi, g))
        return -dens if int(beta) == 2 else -math.log(N) - math.log(xi) - 3 * dens
    if int(beta) == 2:
        return (2 / 3) * math.log(xi) - math.log(g) / 6 + math.log(N) / 3
    return math.log(xi) - 0.5 * math.log(g)


def rescale_log(plan: ScalingPlan, beta) -> LogComplex:
    """log of prefactor * Z_N, the factor multiplying f/(n! m!) in the limit theorems.

    Z_N = (mu_N nu_N)^{alpha/2} exp(-(mu_N + nu_N)/2) where mu_N, nu_N are the
    full spectral arguments; this is the stated polynomial form factored.
    """
    if int(beta) not in (1, 2):
        raise ValidationError("beta must be 1 or 2")
    mu_f, nu_f = plan.arguments()
    log_z = 0.5 * plan.alpha * (LogComplex.from_complex(mu_f).log() + LogComplex.from_complex(nu_f).log())
    log_z += -0.5 * (mu_f + nu_f) + _log_prefactor(plan, beta)
    if plan.alpha == 0:
        log_z = -0.5 * (mu_f + nu_f) + _log_prefactor(plan, beta)
    return LogComplex.from_log(log_z)


@dataclass(frozen=True)
class TheoremCheck:
    N: int
    lhs: float
    rhs: float
    abs_err: float
    method: str
    lhs_error: float = 0.0


def verify_theorem(plan: ScalingPlan, spec: EnsembleSpec, method="contour", *,
                   a: float | None = None, reps: int = 100_000, seed: int = 0,
                   precision_bits: int | None = None) -> TheoremCheck:
    """Rescaled f/(n! m!) against e^{b*} K(mu, nu) for the plan's regime."""
    method = Method.parse(method)
    beta = int(spec.beta)
    p = plan.gf_params(beta, spec.b_star)
    scale = rescale_log(plan, beta)
    m = plan.m
    if method is Method.SERIES:
        val = LogComplex.from_mp(gf_coefficient_series(p, m, precision_bits))
        lhs = (val * scale).to_complex().real
        lhs_err = 0.0
    elif method is Method.CAUCHY:
        est = gf_coefficient_cauchy(p, m)
        lhs = (est.log() * scale).to_complex().real
        lhs_err = abs(lhs) * est.rel_error
    elif method is Method.CONTOUR:
        cs = (ContourSpec.edge if plan.regime.is_edge else ContourSpec.bulk)(
            plan.N, *(() if a is None else (a,)))
        est = contour_correlation(p, m, cs)
        lhs = (est.log() * scale).to_complex().real
        lhs_err = (LogComplex.from_complex(est.error) * LogComplex.from_log(est.log_scale)
                   * scale).to_complex().real
    else:
        mu_f, nu_f = plan.arguments()
        est, err = mc_correlation(spec, plan.N, m, mu_f, nu_f, reps, seed)
        norm = LogComplex.from_log(-math.lgamma(plan.N + 1) - math.lgamma(m + 1)) * scale
        f = norm.to_complex().real
        lhs, lhs_err = est * f, err * abs(f)
    rhs = math.exp(spec.b_star) * kernel_eval(plan.kernel(beta), plan.mu, plan.nu)
    return TheoremCheck(plan.N, float(lhs), rhs, abs(float(lhs) - rhs), method.value, float(lhs_err))


def convergence_table(base_plan: ScalingPlan, spec: EnsembleSpec, method, N_list, **options):
    """One TheoremCheck per N, in the order given."""
    return [verify_theorem(base_plan.with_N(N), spec, method, **options) for N in N_list]


def is_decreasing(rows) -> bool:
    errs = [r.abs_err for r in rows]
    return all(b < a for a, b in zip(errs, errs[1:]))


def table_to_csv(rows, header=("N", "lhs", "rhs", "abs_err")) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        d = asdict(r)
        w.writerow([d[k] if k == "N" else repr(float(d[k])) for k in header])
    return buf.getvalue()
