import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from randaztec.jets import Jet, Jet1, Jet2, JetError, from_function_derivatives

coeffs = st.lists(st.floats(-1, 1), min_size=6, max_size=6)


def _jet(cs, c0=1.0):
    return Jet1(np.array([c0] + list(cs[1:]), dtype=complex))


def test_exp_derivatives():
    u = Jet1.variable(5)
    assert u.exp().derivative(5) == pytest.approx(1)


def test_geometric_series():
    u = Jet1.variable(7)
    f = 1 / (1 - u)
    for l in range(8):
        assert f.derivative(l) == pytest.approx(math.factorial(l))


def test_mixed_derivative():
    x1, x2 = Jet2.variables(3, 3)
    assert ((x1 * x2) ** 3).mixed_derivative(3, 3) == pytest.approx(36)
    with pytest.raises(JetError):
        (x1 * x2).mixed_derivative(4, 0)


@given(coeffs)
def test_exp_log_identity(cs):
    f = _jet(cs)
    assert np.allclose(f.log().exp().c, f.c, atol=1e-12)


@given(coeffs)
def test_pow_identities(cs):
    f = _jet(cs)
    assert np.allclose(f.pow_real(1.0).c, f.c, atol=1e-13)
    assert np.allclose((f ** 3).c, (f * f * f).c, atol=1e-13)
    assert np.allclose(f.pow_real(0.5).pow_real(2.0).c, f.c, atol=1e-12)
    assert np.allclose((f * f.reciprocal()).c, Jet1.constant(1.0, 5).c, atol=1e-12)


def test_binomial_derivative():
    u = Jet1.variable(1, value=1.0)
    for k in (1, 2, 5):
        assert u.pow_real(float(k)).derivative(1) == pytest.approx(k)


def test_branch_and_zero_errors():
    u = Jet1.variable(3, value=-1.0)
    with pytest.raises(JetError):
        u.pow_real(0.5)
    with pytest.raises(JetError):
        Jet1.variable(3).reciprocal()
    with pytest.raises(JetError):
        Jet1.variable(2).derivative(3)


def test_mismatched_orders():
    with pytest.raises(JetError):
        Jet1.variable(2) + Jet1.variable(3)


def test_batched_mean():
    vals = np.array([0.5, 2.0])
    x = Jet.variable(0, (3,), value=0.0)
    b = Jet.constant(vals, (3,))
    f = (1 + b * x).reciprocal().mean([0.25, 0.75])
    for l in range(4):
        expect = sum(w * (-v) ** l for w, v in zip([0.25, 0.75], vals)) * math.factorial(l)
        assert f.partial((l,)) == pytest.approx(expect)


def test_from_function_derivatives_sine():
    u = Jet1.variable(6, value=0.3)
    s = from_function_derivatives(u, [math.sin(0.3), math.cos(0.3), -math.sin(0.3),
                                      -math.cos(0.3), math.sin(0.3), math.cos(0.3),
                                      -math.sin(0.3)])
    assert s.derivative(4) == pytest.approx(math.sin(0.3))


def test_cauchy_cross_check():
    """Taylor coefficients of a composite vs a contour-integral evaluation."""
    f = lambda z: np.exp(z) / (2 - z) ** 1.5  # noqa: E731
    u = Jet1.variable(6)
    jet = u.exp() * (2 - u).pow_real(-1.5)
    th = 2 * np.pi * np.arange(256) / 256
    z = 0.5 * np.exp(1j * th)
    for n in range(7):
        cauchy = np.mean(f(z) / z ** n)
        assert jet.coeff((n,)) == pytest.approx(cauchy, abs=1e-13)
