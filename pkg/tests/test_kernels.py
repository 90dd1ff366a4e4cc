import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from covkernel.errors import ValidationError
from covkernel.kernels import DIAG_RADIUS, KernelId, kernel_eval, kernel_point

AT0 = 0.030629383078988444


def mp_kernel(kid, x, y, dps=60):
    """Independent oracle: the defining formulas with mpmath's Airy functions at high precision."""
    with mpmath.workdps(dps):
        x, y = +mpmath.mpf(x), +mpmath.mpf(y)
        d = x - y
        if kid is KernelId.SINE:
            return mpmath.sin(mpmath.pi * d) / (mpmath.pi * d)
        if kid is KernelId.SINE_TILDE:
            return 2 * mpmath.sin(mpmath.pi * d) / (mpmath.pi * d ** 3) - 2 * mpmath.cos(mpmath.pi * d) / d ** 2
        ax, apx = mpmath.airyai(x), mpmath.airyai(x, 1)
        ay, apy = mpmath.airyai(y), mpmath.airyai(y, 1)
        w = ax * apy - apx * ay
        if kid is KernelId.AIRY:
            return w / d
        return 2 * w / d ** 3 + ((x + y) * ax * ay - 2 * apx * apy) / d ** 2


def mp_diag(kid, x):
    # approach the diagonal at 1e-25 with 120 digits
    with mpmath.workdps(120):
        return mp_kernel(kid, mpmath.mpf(x) + mpmath.mpf("1e-25"), x, dps=120)


def test_parse():
    assert KernelId.parse("airy_tilde") is KernelId.AIRY_TILDE
    assert KernelId.parse(KernelId.SINE) is KernelId.SINE
    with pytest.raises(ValidationError):
        KernelId.parse("bessel")
    with pytest.raises(ValidationError):
        kernel_eval("sine", math.nan, 0)


def test_named_values():
    assert kernel_eval("sine", 0.3, 0.3) == 1.0
    assert kernel_eval("sine", 0.5, 0.0) == pytest.approx(2 / math.pi, rel=1e-15)
    assert kernel_eval("sine-tilde", 0.0, 0.0) == pytest.approx(2 * math.pi ** 2 / 3, rel=1e-15)
    assert kernel_eval("sine-tilde", 0.5, -0.5) == pytest.approx(2.0, rel=1e-14)
    assert kernel_eval("airy-tilde", 0.0, 0.0) == pytest.approx(AT0, rel=1e-14)


@pytest.mark.parametrize("x", [-6.0, -1.3, 0.0, 0.7, 2.5, 5.0])
def test_airy_diagonal(x):
    ai, aip = float(mpmath.airyai(x)), float(mpmath.airyai(x, 1))
    assert kernel_eval("airy", x, x) == pytest.approx(aip ** 2 - x * ai ** 2, rel=1e-13, abs=1e-300)


@pytest.mark.parametrize("kid", list(KernelId))
@pytest.mark.parametrize("x", [-3.0, 0.0, 1.5])
def test_diagonal_against_oracle(kid, x):
    ref = float(mp_diag(kid, x))
    assert kernel_eval(kid, x, x) == pytest.approx(ref, rel=1e-13)


@pytest.mark.parametrize("kid", list(KernelId))
@given(st.floats(-8, 4), st.floats(-8, 4))
def test_off_diagonal_against_oracle(kid, x, y):
    if x == y:
        return
    ref = float(mp_kernel(kid, x, y)) if abs(x - y) > 1e-20 else float(mp_diag(kid, y))
    got = kernel_eval(kid, x, y)
    scale = 1.0 if kid in (KernelId.SINE, KernelId.SINE_TILDE) else abs(ref) + 1e-3
    assert abs(got - ref) <= 1e-12 * scale


@pytest.mark.parametrize("kid", list(KernelId))
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_symmetric(kid, x, y):
    assert kernel_eval(kid, x, y) == kernel_eval(kid, y, x)


@pytest.mark.parametrize("kid", list(KernelId))
@pytest.mark.parametrize("x", [-2.0, 0.4])
def test_branch_continuity(kid, x):
    # formula branch (diag_radius = 0) and Taylor branch agree at h = 1e-4
    h = 1e-4
    formula = kernel_eval(kid, x + h, x, diag_radius=0.0)
    taylor = kernel_eval(kid, x + h, x, diag_radius=1.0)
    assert abs(formula - taylor) < 1e-8
    for h in (DIAG_RADIUS * 0.999, DIAG_RADIUS * 1.001):
        assert abs(kernel_eval(kid, x + h, x) - float(mp_kernel(kid, x + h, x))) < 1e-12
    assert kernel_point(kid, x + 1e-5, x).diagonal
    assert not kernel_point(kid, x + 1e-2, x).diagonal


def test_sine_zero_set():
    for k in (1, 2, 5, -3):
        assert abs(kernel_eval("sine", k + 0.25, 0.25)) < 1e-14
    assert abs(kernel_eval("sine", 0.75, 0.25)) > 0.1


def test_airy_decay():
    xs = np.linspace(2, 12, 41)
    vals = [kernel_eval("airy", x, x) for x in xs]
    assert all(a > b > 0 for a, b in zip(vals, vals[1:]))
    assert vals[-1] < 1e-14
