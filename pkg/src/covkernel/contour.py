"""The contour integral over sigma and the limiting integrals S(a), A(a).

sigma consists of an inner arc sigma_0 of radius 1 - N^-eta and angular
half-width a N^-eta, two radial pieces sigma_{+-1} joining it to the unit
circle, and the remaining unit-circle arcs sigma_{+-2}.  Every piece has
1 - z computed in closed form so the integrand is accurate near z = 1.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import DomainError, PrecisionError, SingularityError, ValidationError
from .genfun import Estimate, GfParams, log_gf_rhs
from .logcomplex import LogComplex
from .quadrature import DEFAULT_RTOL, LogSegment, integrate, integrate_log
from .spectrum import h_inf, spectrum_edges

SEGMENT_IDS = (-2, -1, 0, 1, 2)
DEFAULT_A = 8.0
_MAX_HALF_ANGLE = 0.9 * math.pi
# results with a larger relative error estimate are reported as failures
MAX_REL_ERROR = 1e-6


@dataclass(frozen=True)
class ContourSpec:
    """Geometry of sigma.  ``segments`` maps segment id to an initial panel
    count; None lets the integrator choose from the parameters."""

    N: int
    eta_exponent: float
    a: float
    segments: tuple = tuple((i, None) for i in SEGMENT_IDS)

    def __post_init__(self):
        if self.N < 1:
            raise ValidationError("N must be positive")
        if self.a <= 1:
            raise ValidationError("a must exceed 1")
        if self.eta_exponent not in (1, 1.0, 1 / 3):
            raise ValidationError("eta must be 1 (bulk) or 1/3 (edge)")
        if self.half_angle >= math.pi:
            raise ValidationError(f"a N^-eta = {self.half_angle:.3g} must stay below pi")
        if sorted(i for i, _ in self.segments) != list(SEGMENT_IDS):
            raise ValidationError("segments must list ids -2..2 once each")

    @classmethod
    def bulk(cls, N, a=DEFAULT_A):
        return cls(N, 1.0, _clip_a(a, N ** 1.0))

    @classmethod
    def edge(cls, N, a=DEFAULT_A):
        return cls(N, 1 / 3, _clip_a(a, N ** (1 / 3)))

    @property
    def scale(self) -> float:
        return self.N ** self.eta_exponent

    @property
    def delta(self) -> float:
        return 1.0 / self.scale

    @property
    def radius(self) -> float:
        return 1.0 - self.delta

    @property
    def half_angle(self) -> float:
        return self.a / self.scale

    def panels(self, seg_id):
        return dict(self.segments)[seg_id]

    def winding_number(self, samples=4000) -> int:
        """Winding number about 0, from the sampled closed path."""
        pts = np.concatenate([_param(self, i, np.linspace(*_range(self, i), samples))[0]
                              for i in SEGMENT_IDS])
        ang = np.unwrap(np.angle(np.append(pts, pts[0])))
        return int(round((ang[-1] - ang[0]) / (2 * math.pi)))


def _clip_a(a, scale):
    return min(float(a), _MAX_HALF_ANGLE * scale)


def _range(spec, seg):
    if seg == 0:
        return (-spec.half_angle, spec.half_angle)
    if seg == -1:
        return (0.0, 1.0)
    if seg == 1:
        return (-1.0, 0.0)
    return (0.0, 1.0 / math.tan(spec.half_angle / 2))


def _param(spec, seg, t):
    """z, 1 - z and dz/dt on segment ``seg``; sigma_{+-2} use s = cot(|t|/2)."""
    t = np.asarray(t, dtype=float)
    d, R, phi = spec.delta, spec.radius, spec.half_angle
    if seg == 0:
        e = np.exp(1j * t)
        z = R * e
        omz = d + R * (2 * np.sin(t / 2) ** 2 - 1j * np.sin(t))
        return z, omz, 1j * z
    if abs(seg) == 1:
        sg = 1.0 if seg == 1 else -1.0
        e = cmath.exp(1j * sg * phi)
        one_minus_e = 2 * math.sin(phi / 2) ** 2 - 1j * sg * math.sin(phi)
        z = (1 + sg * t * d) * e
        omz = one_minus_e - sg * t * d * e
        return z, omz, sg * d * e * np.ones_like(t)
    s = t
    q = 1 + s * s
    if seg == 2:
        z = (s * s - 1 + 2j * s) / q
        omz = 2 * (1 - 1j * s) / q
        return z, omz, -2j * z / q
    z = (s * s - 1 - 2j * s) / q
    omz = 2 * (1 + 1j * s) / q
    return z, omz, 2j * z / q


# sigma_{+2} runs from s = s_max down to 0
_SIGNS = {-2: 1.0, -1: 1.0, 0: 1.0, 1: 1.0, 2: -1.0}


def _auto_panels(p: GfParams, m, spec, seg):
    if seg == 0:
        return 16 + int(4 * spec.a)
    if abs(seg) == 1:
        return 16
    smax = _range(spec, seg)[1]
    freq = 0.5 * abs(p.mu + p.nu) + math.sqrt(abs(p.mu * p.nu)) + abs(p.b_star) + m + 1
    return 8 + int(freq * smax / (2 * math.pi))


def _evaluation_noise(p, m, spec):
    """Relative rounding noise of one integrand value.

    The log of the integrand is a sum of terms as large as
    (|mu+nu| + 2 sqrt|mu nu|) / |1 - z| which cancel to O(1); each carries a
    relative rounding error of a few ulps.
    """
    big = (abs(p.mu + p.nu) + 2 * math.sqrt(abs(p.mu * p.nu))) / spec.delta
    big += (m + p.alpha + 3) * abs(math.log(spec.delta)) + abs(p.b_star)
    return 4 * np.finfo(float).eps * big


def _log_integrand(p, m, z, omz):
    return log_gf_rhs(p, z, omz) - (m + 1) * np.log(z)


def integrand_log(p: GfParams, m: int, z) -> LogComplex:
    """log of gf_rhs(z) / z^{m+1}."""
    z = complex(z)
    if z == 0 or z == 1:
        raise SingularityError(f"integrand singular at z = {z}")
    return LogComplex.from_log(complex(_log_integrand(p, m, np.array([z]), np.array([1 - z]))[0]))


@dataclass(frozen=True)
class ContourResult(Estimate):
    """f/(n! m!) = value * exp(log_scale); ``segments`` holds each piece's
    contribution in the same units, ``residual`` the imaginary part."""

    residual: float = 0.0
    segments: dict = field(default_factory=dict)
    evaluations: int = 0


def contour_correlation(p: GfParams, m: int, spec: ContourSpec | None = None,
                        rtol: float = DEFAULT_RTOL) -> ContourResult:
    """(1/2 pi i) int_sigma gf_rhs(z) z^{-m-1} dz by adaptive Gauss-Legendre."""
    if m < 0:
        raise ValidationError("m must be nonnegative")
    if spec is None:
        # N >= 4 keeps sigma_0 well away from the pole at z = 0
        spec = ContourSpec.bulk(max(4, m + p.alpha))
    segs = []
    for seg, panels in spec.segments:
        lo, hi = _range(spec, seg)

        def log_f(t, seg=seg):
            z, omz, dz = _param(spec, seg, t)
            return _log_integrand(p, m, z, omz) + np.log(dz)

        segs.append(LogSegment(str(seg), log_f, lo, hi,
                               panels or _auto_panels(p, m, spec, seg), _SIGNS[seg]))
    res = integrate_log(segs, rtol=rtol, noise=_evaluation_noise(p, m, spec))
    # divide by 2 pi i
    val = res.value / (2j * math.pi)
    parts = {int(k): v / (2j * math.pi) for k, v in res.segments.items()}
    err = res.error / (2 * math.pi)
    out = ContourResult(val.real, err, res.log_scale, val.imag, parts, res.evaluations)
    if not err <= MAX_REL_ERROR * abs(val.real):
        # cancellation along sigma exceeds double precision; a larger N or
        # the series route is needed
        raise PrecisionError(
            f"contour value {float(out):.6g} has relative error {out.rel_error:.2g}",
            estimate=out, bound=out.rel_error)
    return out


# ---------------------------------------------------------------------------
# limiting integrals

@dataclass(frozen=True)
class LimitIntegral:
    value: float
    residual: float
    error: float


def _line_integral(exponent, prefactor, a, panels, rtol):
    def f(u):
        w = 1 - 1j * u
        return np.exp(exponent(w) - 1.5 * np.log(w))

    res = integrate(f, -a, a, panels=panels, rtol=rtol, atol=1e-300)
    val = prefactor * res.unscaled
    return LimitIntegral(val.real, val.imag, prefactor * res.error * math.exp(res.log_scale))


def _bulk_prefactor(xi, b_star):
    return math.exp(b_star) / (4 * math.pi ** 1.5 * math.sqrt(xi))


def limit_integral_bulk(xi, gamma, b_star, mu, nu, a, rtol=1e-12) -> LimitIntegral:
    """S(a) for finite a by quadrature; a = inf by Talbot inversion."""
    geo = spectrum_edges(gamma)
    if not geo.interior(xi):
        raise DomainError(f"xi={xi} is not inside ({geo.xi_lower}, {geo.xi_upper})")
    if a < 1:
        raise ValidationError("a must be at least 1")
    h = h_inf(xi, gamma)
    c = 0.25 * (mu - nu) ** 2 / xi
    if math.isinf(a):
        # substituting z = 1 - iu turns S(inf) into a Bromwich integral
        val = _bulk_prefactor(xi, b_star) * 2 * math.pi * laplace_inverse_talbot(c, h)
        return LimitIntegral(val, 0.0, 1e-14 * abs(val))
    panels = 16 + int(2 * (h + c) * a / math.pi)
    return _line_integral(lambda w: h * w - c / w, _bulk_prefactor(xi, b_star), a, panels, rtol)


def limit_bulk_closed_form(xi, gamma, b_star, mu, nu) -> float:
    """(1/pi) e^{b*} (h/xi)^{1/2} sinc((mu - nu)(h/xi)^{1/2})."""
    k = math.sqrt(h_inf(xi, gamma) / xi)
    x = (mu - nu) * k
    sinc = math.sin(x) / x if x else 1.0
    return math.exp(b_star) * k * sinc / math.pi


def laplace_inverse_talbot(c, t, prec=80):
    """(1/2 pi i) int_{1-i inf}^{1+i inf} e^{tz} e^{-c/z} z^{-3/2} dz by Talbot's method."""
    with mpmath.workprec(prec):
        val = mpmath.invertlaplace(lambda s: mpmath.exp(-c / s) * s ** mpmath.mpf(-1.5),
                                   mpmath.mpf(t), method="talbot")
    return float(val)


def laplace_identity_rhs(a, t) -> float:
    """2 sin(a sqrt t) / (sqrt(pi) a), the closed form of the inversion with c = a^2/4."""
    if a == 0:
        return 2 * math.sqrt(t / math.pi)
    return 2 * math.sin(a * math.sqrt(t)) / (math.sqrt(math.pi) * a)


def limit_integral_edge(xi, gamma, b_star, mu, nu, a, rtol=1e-12, edge_rtol=1e-9) -> LimitIntegral:
    """A(a); the integrand decays like exp(-gamma u^2 / (4 xi))."""
    geo = spectrum_edges(gamma)
    if geo.which_edge(xi, edge_rtol) is None:
        raise DomainError(f"xi={xi} is not a spectral edge for gamma={gamma}")
    if xi <= 0:
        raise DomainError("the lower edge degenerates to 0 when gamma = 1")
    if a < 1:
        raise ValidationError("a must be at least 1")
    sg = math.sqrt(gamma)
    s, d = mu + nu, 0.25 * (mu - nu) ** 2

    def expo(w):
        return (gamma * w ** 3 / 12 - 0.5 * s * sg * w - d / w) / xi

    # beyond this |u| the integrand is below e^-80 of its size at u = 0
    cut = math.sqrt(4 * xi * 80 / gamma + 4 * abs(s) * sg / gamma * 2) + 2
    a_eff = min(a, cut)
    phase_rate = gamma * a_eff ** 2 / (4 * xi) + 0.5 * abs(s) * sg / xi + 1
    panels = 16 + int(phase_rate * a_eff / math.pi)
    return _line_integral(expo, _bulk_prefactor(xi, b_star), a_eff, panels, rtol)


def airy_reduction(xi, gamma, b_star, mu, nu, a=100.0) -> LimitIntegral:
    """c A(a) evaluated at (c mu, c nu), c = xi^{2/3} gamma^{-1/6}; tends to e^{b*} Ai-kernel(mu, nu)."""
    c = xi ** (2 / 3) * gamma ** (-1 / 6)
    r = limit_integral_edge(xi, gamma, b_star, c * mu, c * nu, a)
    return LimitIntegral(c * r.value, c * r.residual, c * r.error)
