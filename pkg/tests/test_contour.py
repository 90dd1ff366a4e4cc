import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from covkernel.asymptotics import Regime, ScalingPlan
from covkernel.contour import (SEGMENT_IDS, ContourSpec, _param, _range, airy_reduction,
                               contour_correlation, integrand_log, laplace_identity_rhs,
                               laplace_inverse_talbot, limit_bulk_closed_form,
                               limit_integral_bulk, limit_integral_edge)
from covkernel.errors import DomainError, PrecisionError, SingularityError, ValidationError
from covkernel.genfun import GfParams, gf_coefficient_cauchy, gf_coefficient_series, gf_rhs
from covkernel.specfun import airy_ai_prime


@pytest.mark.parametrize("spec", [ContourSpec.bulk(10), ContourSpec.bulk(400), ContourSpec.edge(50),
                                  ContourSpec.edge(800, a=3)])
def test_winding_number(spec):
    assert spec.winding_number() == 1


@pytest.mark.parametrize("spec", [ContourSpec.bulk(40), ContourSpec.edge(100)])
def test_segment_geometry(spec):
    R, phi = spec.radius, spec.half_angle
    for seg in SEGMENT_IDS:
        lo, hi = _range(spec, seg)
        t = np.linspace(lo, hi, 9)
        z, omz, dz = _param(spec, seg, t)
        np.testing.assert_allclose(omz, 1 - z, atol=1e-15)
        h = 1e-6 * (hi - lo)
        zp, _, _ = _param(spec, seg, t[1:-1] + h)
        zm, _, _ = _param(spec, seg, t[1:-1] - h)
        np.testing.assert_allclose((zp - zm) / (2 * h), dz[1:-1], rtol=1e-6)
    # sigma_0 on radius R, sigma_{+-2} on the unit circle, ends joined
    z0 = _param(spec, 0, np.array(_range(spec, 0)))[0]
    np.testing.assert_allclose(np.abs(z0), R)
    assert z0[1] == pytest.approx(R * cmath.exp(1j * phi))
    assert _param(spec, 1, np.array([-1.0]))[0][0] == pytest.approx(z0[1])
    assert _param(spec, 1, np.array([0.0]))[0][0] == pytest.approx(cmath.exp(1j * phi))
    s_end = _range(spec, 2)[1]
    assert _param(spec, 2, np.array([s_end]))[0][0] == pytest.approx(cmath.exp(1j * phi))
    assert _param(spec, 2, np.array([0.0]))[0][0] == pytest.approx(-1)
    assert _param(spec, -2, np.array([0.0]))[0][0] == pytest.approx(-1)
    arc = _param(spec, 2, np.linspace(0, s_end, 50))[0]
    np.testing.assert_allclose(np.abs(arc), 1, atol=1e-15)


def test_spec_validation():
    with pytest.raises(ValidationError):
        ContourSpec(10, 0.5, 4.0)
    with pytest.raises(ValidationError):
        ContourSpec(10, 1.0, 0.5)
    with pytest.raises(ValidationError):
        ContourSpec(2, 1.0, 8.0)
    assert ContourSpec.bulk(2).half_angle < math.pi


def test_integrand_consistency():
    p = GfParams(2, 2, -1.0, 0.8, -0.4)
    for z in (0.3 + 0.2j, -0.7, 0.9j):
        val = cmath.exp(integrand_log(p, 5, z).log())
        ref = gf_rhs(p, z).to_complex() * z ** -6
        assert val == pytest.approx(ref, rel=1e-12)
    with pytest.raises(SingularityError):
        integrand_log(p, 5, 1)
    assert math.isfinite(integrand_log(p, 5, -0.5).log_abs)


def test_integrand_growth_near_one():
    # for mu + nu < 0 the factor exp(-(mu+nu) z/(1-z)) blows up towards z = 1;
    # with mu = nu = -1 the Bessel factor adds exp(2 sqrt z/(1-z)), so log|f| ~ 4/(1-z)
    p = GfParams(0, 2, 0.0, -1.0, -1.0)
    mags = [integrand_log(p, 0, 1 - d).log_abs for d in (1e-1, 1e-2, 1e-3)]
    assert mags[2] > mags[1] > mags[0]
    assert mags[2] * 1e-3 == pytest.approx(4.0, rel=1e-2)


def test_m0_and_small_values():
    for alpha in (0, 1, 4):
        p = GfParams(alpha, 2, -1.0, 0.3, 0.2)
        assert float(contour_correlation(p, 0)) == pytest.approx(1 / math.factorial(alpha), rel=1e-9)
    p = GfParams(1, 2, -1.0, 0.0, 0.0)
    assert float(contour_correlation(p, 1)) == pytest.approx(2.0, rel=1e-9)


def test_bulk_scaled_against_cauchy():
    plan = ScalingPlan.build(Regime.BULK, 30, 0.5, 0.5, -0.5, xi=1.5)
    p = plan.gf_params(2, 0.0)
    c = contour_correlation(p, plan.m, ContourSpec.bulk(30))
    k = gf_coefficient_cauchy(p, plan.m)
    assert float(c) == pytest.approx(float(k), rel=1e-6)
    assert abs(c.residual) < 1e-8 * abs(c.value)


@settings(max_examples=10)
@given(st.floats(2.0, 10.0))
def test_invariance_in_a(a):
    plan = ScalingPlan.build(Regime.BULK, 20, 0.5, 0.5, -0.5, xi=1.5)
    p = plan.gf_params(2, -1.0)
    ref = gf_coefficient_series(p, plan.m)
    c = contour_correlation(p, plan.m, ContourSpec.bulk(20, a=a))
    assert float(c) == pytest.approx(float(ref), rel=1e-8)


def test_unresolvable_cancellation_raises():
    # mu + nu < 0 at small N: the integrand near z = 1 exceeds the answer by e^50
    p = GfParams(5, 2, 0.0, -3.0, 2.0)
    with pytest.raises(PrecisionError) as info:
        contour_correlation(p, 15, ContourSpec.bulk(20, a=4))
    assert info.value.exit_code == 3
    assert info.value.estimate.rel_error > 1e-6


def test_segments_sum_to_total():
    p = GfParams(3, 1, -2.0, 1.0, 0.5)
    c = contour_correlation(p, 8)
    assert set(c.segments) == set(SEGMENT_IDS)
    assert sum(c.segments.values()).real == pytest.approx(c.value, rel=1e-12)


def test_outer_segments_shrink_as_a_grows():
    plan = ScalingPlan.build(Regime.BULK, 200, 0.5, 0.0, 0.0, xi=1.5)
    p = plan.gf_params(2, 0.0)
    ratios = []
    for a in (2.0, 4.0, 8.0, 16.0):
        c = contour_correlation(p, plan.m, ContourSpec.bulk(200, a=a))
        outer = sum(abs(c.segments[i]) for i in (-2, -1, 1, 2))
        ratios.append(outer / abs(c.segments[0]))
    assert all(x > y for x, y in zip(ratios, ratios[1:]))


def test_bulk_limit_closed_form_and_symmetry():
    xi, gamma = 1.5, 0.5
    for mu, nu in ((0.3, 0.3), (1.0, -0.5)):
        ref = limit_bulk_closed_form(xi, gamma, -1.0, mu, nu)
        assert limit_integral_bulk(xi, gamma, -1.0, mu, nu, math.inf).value == pytest.approx(ref, rel=1e-12)
    r = limit_integral_bulk(xi, gamma, 0.0, 0.4, 0.4, 50.0)
    assert abs(r.residual) < 1e-10
    # sinc factor is 1 on the diagonal
    k = math.sqrt(h_inf_ratio(xi, gamma))
    assert limit_bulk_closed_form(xi, gamma, 0.0, 0.7, 0.7) == pytest.approx(k / math.pi, rel=1e-15)


def h_inf_ratio(xi, gamma):
    from covkernel.spectrum import h_inf
    return h_inf(xi, gamma) / xi


def test_bulk_limit_approaches_closed_form():
    xi, gamma = 1.5, 0.5
    ref = limit_bulk_closed_form(xi, gamma, 0.0, 0.2, -0.1)
    errs = [abs(limit_integral_bulk(xi, gamma, 0.0, 0.2, -0.1, a).value - ref) for a in (25, 50, 100, 200)]
    assert all(x > y for x, y in zip(errs, errs[1:]))


def test_limit_domain_checks():
    with pytest.raises(DomainError):
        limit_integral_bulk(3.5, 0.5, 0.0, 0, 0, 10)
    with pytest.raises(DomainError):
        limit_integral_edge(1.5, 0.5, 0.0, 0, 0, 10)


def test_laplace_identity():
    assert abs(laplace_inverse_talbot(1.0, math.pi ** 2 / 4)) < 1e-8
    for a, t in ((1.0, 0.7), (3.0, 2.0), (0.0, 1.3)):
        assert laplace_inverse_talbot(a * a / 4, t) == pytest.approx(laplace_identity_rhs(a, t), rel=1e-12, abs=1e-15)


def test_airy_reduction_gamma_one():
    r = airy_reduction(4.0, 1.0, 0.0, 0.0, 0.0, a=100)
    assert r.value == pytest.approx(airy_ai_prime(0.0) ** 2, abs=1e-4)
    assert abs(r.residual) < 1e-10


def test_edge_limit_stable_in_a():
    a20 = limit_integral_edge(4.0, 1.0, 0.0, 0.3, -0.2, 20).value
    a40 = limit_integral_edge(4.0, 1.0, 0.0, 0.3, -0.2, 40).value
    assert abs(a20 - a40) < 1e-6
