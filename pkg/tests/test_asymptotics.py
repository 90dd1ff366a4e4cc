import math
import warnings

import mpmath
import pytest

from covkernel.asymptotics import (Method, Regime, ScalingPlan, TheoremCheck, convergence_table,
                                   is_decreasing, rescale_log, round_half_up, table_to_csv,
                                   verify_theorem)
from covkernel.ensembles import ensemble
from covkernel.errors import ValidationError
from covkernel.kernels import KernelId
from covkernel.spectrum import mp_density, spectrum_edges


def test_round_half_up():
    assert round_half_up(2.5) == 3 and round_half_up(3.5) == 4 and round_half_up(2.49) == 2


def test_plan_bulk():
    plan = ScalingPlan.build("bulk", 101, 0.5, 0.4, -0.2, xi=1.5)
    assert plan.m == 51 and plan.alpha == 50
    g = mp_density(1.5, 0.5)
    assert plan.hat_mu == pytest.approx(0.4 / (0.5 * g))
    mu_f, nu_f = plan.arguments()
    assert mu_f == pytest.approx(101 * 1.5 + 0.4 / (0.5 * g))
    assert plan.kernel(2) is KernelId.SINE and plan.kernel(1) is KernelId.SINE_TILDE
    assert plan.with_N(200).m == 100


def test_plan_edges():
    geo = spectrum_edges(0.5)
    up = ScalingPlan.build(Regime.EDGE_UPPER, 64, 0.5, 1.0, 0.0)
    lo = ScalingPlan.build(Regime.EDGE_LOWER, 64, 0.5, 1.0, 0.0)
    assert up.xi == geo.xi_upper and lo.xi == geo.xi_lower
    c = geo.xi_upper ** (2 / 3) * 0.5 ** (-1 / 6)
    assert up.arguments()[0] == pytest.approx(64 * geo.xi_upper + c * 4)
    c = geo.xi_lower ** (2 / 3) * 0.5 ** (-1 / 6)
    assert lo.arguments()[0] == pytest.approx(64 * geo.xi_lower - c * 4)
    assert up.kernel(1) is KernelId.AIRY_TILDE


def test_plan_validation():
    with pytest.raises(ValidationError):
        ScalingPlan.build("bulk", 100, 0.5, xi=3.5)
    with pytest.raises(ValidationError):
        ScalingPlan.build("bulk", 100, 0.5)
    with pytest.raises(ValidationError):
        ScalingPlan.build("edge-lower", 100, 1.0)
    with pytest.raises(ValidationError):
        ScalingPlan.build("edge-upper", 100, 0.5, xi=2.0)
    with pytest.warns(UserWarning):
        ScalingPlan.build("edge-upper", 100, 0.5, m=40)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        ScalingPlan.build("edge-upper", 100, 0.5, m=50)


@pytest.mark.parametrize("regime,xi", [("bulk", 1.5), ("edge-upper", None), ("edge-lower", None)])
@pytest.mark.parametrize("beta", [1, 2])
def test_rescale_matches_direct_formula(regime, xi, beta):
    plan = ScalingPlan.build(regime, 80, 0.5, 0.3, -0.7, xi=xi)
    mu_f, nu_f = plan.arguments()
    N, g, x = plan.N, plan.gamma, plan.xi
    with mpmath.workdps(40):
        z = (mpmath.mpf(mu_f) * nu_f) ** (mpmath.mpf(plan.alpha) / 2) * mpmath.exp(-(mpmath.mpf(mu_f) + nu_f) / 2)
        if regime == "bulk":
            gg = g * mp_density(x, g)
            pre = 1 / gg if beta == 2 else 1 / (N * x * gg ** 3)
        else:
            pre = x ** (2 / 3) * g ** (-1 / 6) * N ** (1 / 3) if beta == 2 else x * g ** -0.5
        ref = mpmath.log(z * pre)
    assert rescale_log(plan, beta).log_abs == pytest.approx(float(ref), rel=1e-12)


def test_methods_agree_small_N():
    spec = ensemble("complex-gaussian")
    plan = ScalingPlan.build("bulk", 40, 0.5, 0.5, -0.5, xi=1.5)
    vals = {m: verify_theorem(plan, spec, m) for m in ("series", "cauchy", "contour")}
    ref = vals["series"].lhs
    for r in vals.values():
        assert r.lhs == pytest.approx(ref, rel=1e-8)
        assert r.rhs == pytest.approx(math.sin(math.pi) / math.pi, abs=1e-15)


@pytest.mark.parametrize("name", ["complex-gaussian", "real-gaussian"])
def test_mc_method_consistent(name):
    spec = ensemble(name)
    plan = ScalingPlan.build("bulk", 6, 0.5, 0.2, 0.0, xi=1.5)
    mc = verify_theorem(plan, spec, Method.MC, reps=40000, seed=2)
    ex = verify_theorem(plan, spec, Method.SERIES)
    assert abs(mc.lhs - ex.lhs) < 5 * mc.lhs_error


def test_table_and_csv():
    spec = ensemble("complex-gaussian")
    plan = ScalingPlan.build("bulk", 20, 0.5, 0.0, 0.0, xi=1.5)
    rows = convergence_table(plan, spec, "series", [20, 40, 80])
    assert [r.N for r in rows] == [20, 40, 80]
    text = table_to_csv(rows)
    lines = text.split("\n")
    assert lines[0] == "N,lhs,rhs,abs_err" and "\r" not in text and lines[-1] == ""
    assert float(lines[1].split(",")[1]) == rows[0].lhs
    assert is_decreasing([TheoremCheck(1, 0, 0, 3.0, "x", 0), TheoremCheck(2, 0, 0, 1.0, "x", 0)])
    assert not is_decreasing([TheoremCheck(1, 0, 0, 1.0, "x", 0), TheoremCheck(2, 0, 0, 1.0, "x", 0)])
