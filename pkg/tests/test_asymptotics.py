import math

import numpy as np
import pytest

from darboux import asymptotics as asy
from darboux.data import polynomial_data, zero_data
from darboux.errors import DomainError, MissingDerivative
from darboux.goursat import SolutionField
from darboux.oracle import khan_penrose, khan_penrose_AB, khan_penrose_expansion


def test_c_examples():
    assert [asy.c_constant(j) for j in range(4)] == [1.0, 0.5, 0.75, 1.875]
    with pytest.raises(ValueError):
        asy.c_constant(-1)


def test_c_recurrence_to_twelve():
    for j in range(1, 13):
        assert asy.c_constant(j) == pytest.approx(asy.c_constant(j - 1) * (2 * j - 1) / 2, rel=4e-16)


def test_c_is_kernel_derivative():
    # d^2/dt^2 (1 - t)^(-1/2) at 0, by a 5-point stencil
    k = lambda t: (1 - t) ** -0.5
    h = 1e-3
    fd = (-k(2 * h) + 16 * k(h) - 30 * k(0) + 16 * k(-h) - k(-2 * h)) / (12 * h * h)
    assert fd == pytest.approx(asy.c_constant(2), abs=1e-6)


def test_universal_constants_closed_forms():
    uc = asy.universal_constants(1)
    assert uc.tail_k0[0] == pytest.approx(math.log(4), abs=1e-12)
    assert uc.tail_k1[0] == pytest.approx(math.log(4), abs=1e-12)
    assert uc.tail_k0[1] == pytest.approx(0.5 - math.log(2), abs=1e-12)
    assert uc.tail_k1[1] == pytest.approx(math.log(2) - 0.5, abs=1e-12)
    assert asy.universal_constants(1) is uc


def test_h_function_khan_penrose(kp_field):
    for k in (0.1, 0.5, 0.9):
        assert asy.h_function(kp_field, "h0", k) == pytest.approx(-math.pi, rel=1e-12)
        assert asy.h_function(kp_field, "h1", k) == pytest.approx(-math.pi, rel=1e-12)
        assert abs(asy.h_function(kp_field, "h0", k, 1)) < 1e-10


def test_h_function_linear_trace():
    f = SolutionField(polynomial_data([1.0], [0.0]))
    for k in (0.2, 0.7):
        assert asy.h_function(f, "h0", k) == pytest.approx(2 * math.sqrt(k) * math.sqrt(1 - k), rel=1e-12)
    with pytest.raises(ValueError):
        asy.h_function(f, "h2", 0.3)


def test_h1_is_reflected_side_one():
    # V_1 = y: h_1(k) = sqrt(k) * 2 sqrt(1 - k)
    f = SolutionField(polynomial_data([0.0], [1.0]))
    k = 0.3
    assert asy.h_function(f, "h1", k) == pytest.approx(2 * math.sqrt(k) * math.sqrt(1 - k), rel=1e-12)
    d = (asy.h_function(f, "h1", k + 1e-5) - asy.h_function(f, "h1", k - 1e-5)) / 2e-5
    assert asy.h_function(f, "h1", k, 1) == pytest.approx(d, rel=1e-7)


def test_taylor_remainder(kp_field):
    assert np.max(np.abs(asy.taylor_remainder(kp_field, "h0", 0.4, np.linspace(0.05, 0.9, 6), 2))) < 1e-10
    f = SolutionField(polynomial_data([1.0]))
    assert asy.taylor_remainder(f, "h0", 0.5, 0.5, 0) == 0.0
    for which in ("h0", "h1"):
        ratios = [abs(asy.taylor_remainder(f, which, 0.5, 0.5 + d, 1)) / d**2 for d in (1e-1, 1e-2, 1e-3)]
        assert max(ratios) < 10 * min(ratios)


@pytest.mark.parametrize("x", [0.25, 0.5, 0.75])
def test_khan_penrose_A_B(kp_field, x):
    ref = khan_penrose_AB(x)
    for j in range(3):
        assert asy.coefficient_A(kp_field, j, x) == pytest.approx(ref["A"][j], abs=1e-8)
        assert asy.coefficient_B(kp_field, j, x) == pytest.approx(ref["B"][j], abs=1e-8)


def test_khan_penrose_A_closed_forms():
    x = 0.3
    ab = khan_penrose_AB(x)
    assert ab["A"] == pytest.approx([-math.pi * (math.log(x) + math.log(4)), math.pi / (2 * x), 3 * math.pi / (16 * x * x)])
    assert ab["B"][1] == pytest.approx(math.pi / (2 * (1 - x)))


@pytest.mark.parametrize("x", [0.25, 0.5, 0.75])
def test_khan_penrose_expansion(kp_field, x):
    t = asy.expansion(kp_field, x, 2)
    ref = khan_penrose_expansion(x)
    assert np.allclose(t.f, ref["f"], atol=1e-8, rtol=0)
    assert np.allclose(t.g, ref["g"], atol=1e-8, rtol=0)
    # symmetric data: the swapped table coincides
    assert np.allclose(t.g_swapped, t.g, atol=1e-10)


def test_zero_data_expansion():
    t = asy.expansion(SolutionField(zero_data()), 0.4, 3)
    assert not any(t.f) and not any(t.g) and not any(t.g_swapped)
    assert asy.evaluate_expansion(t, 1e-3) == 0.0


def test_half_value(kp_field):
    t = asy.expansion(kp_field, 0.5, 2)
    want = 2 * math.log(1e-3) - math.log(4) + 1.5e-6
    assert asy.evaluate_expansion(t, 1e-3) == pytest.approx(want, abs=1e-10)


def test_expansion_argument_checks(kp_field):
    with pytest.raises(DomainError):
        asy.expansion(kp_field, 1.0, 1)
    with pytest.raises(ValueError):
        asy.expansion(kp_field, 0.5, asy.J_CAP + 1)
    t = asy.expansion(kp_field, 0.5, 0)
    with pytest.raises(DomainError):
        asy.evaluate_expansion(t, 0.5)


def test_expansion_needs_smoothness():
    from dataclasses import replace

    d = polynomial_data([0, 1])
    short = replace(d, v0=replace(d.v0, derivatives=d.v0.derivatives[:2]))
    with pytest.raises(MissingDerivative):
        asy.expansion(SolutionField(short), 0.5, 1)


def test_swap_consistency(lopsided_data):
    t1 = asy.expansion(SolutionField(lopsided_data), 0.4, 2)
    t2 = asy.expansion(SolutionField(lopsided_data.swapped()), 0.4, 2)
    assert np.allclose(t1.g_swapped, t2.g, atol=1e-10, rtol=0)
    assert np.allclose(t1.f_swapped, t2.f, atol=1e-10, rtol=0)
    assert asy.swapped_coefficients(SolutionField(lopsided_data), 0.4, 2) == (t1.f_swapped, t1.g_swapped)


def test_horizontal_expansion_uses_swapped_coefficients(lopsided_data):
    """Along fixed y the coefficients are those of the swapped data at y."""
    field = SolutionField(lopsided_data, eps_min=1e-12)
    y, J = 0.3, 2
    fs, gs = asy.swapped_coefficients(field, y, J)
    for eps in (1e-3, 3e-3):
        series = sum((fs[j] * math.log(eps) + gs[j]) * eps**j for j in range(J + 1))
        direct = field.evaluate((1 - y - eps, y))
        assert abs(direct - series) < 20 * eps**3 * abs(math.log(eps))


def test_low_order_forms(kp_field, poly_field):
    for field in (kp_field, poly_field):
        for x in (0.3, 0.5, 0.7):
            t = asy.expansion(field, x, 1)
            h0 = [asy.h_function(field, "h0", x, j) for j in (0, 1)]
            h1 = [asy.h_function(field, "h1", x, j) for j in (0, 1)]
            assert t.f[0] == pytest.approx(-(h0[0] + h1[0]) / math.pi, abs=1e-12)
            assert t.f[1] == pytest.approx(-(h0[1] + h1[1]) / (2 * math.pi), abs=1e-12)


def test_remainder_constant(kp_field):
    t = asy.expansion(kp_field, 0.5, 2)
    for eps in np.geomspace(1e-3, 1e-2, 5):
        r = khan_penrose((0.5, 0.5 - eps)) - asy.evaluate_expansion(t, eps)
        assert abs(r) <= 10 * eps**3 * abs(math.log(eps))


@pytest.mark.parametrize("J", [0, 1, 2])
def test_order_fit_generic_point(kp_field, J):
    fit = asy.remainder_order_fit(kp_field, 0.25, J)
    assert fit.status == "fit"
    assert J + 0.85 <= fit.slope <= J + 1.2


@pytest.mark.parametrize("J", [2, 3])
def test_remainder_bound_polynomial_data(poly_field, J):
    # f ln(eps) + g partly cancel over one decade, so bound |R_J| rather than fit a slope
    t = asy.expansion(poly_field, 0.4, J)
    for eps in (1e-3, 3e-3, 1e-2):
        r = poly_field.evaluate((0.4, 0.6 - eps)) - asy.evaluate_expansion(t, eps)
        assert abs(r) <= 5 * eps ** (J + 1) * abs(math.log(eps))


def test_order_fit_zero_data():
    fit = asy.remainder_order_fit(SolutionField(zero_data()), 0.5, 1)
    assert fit.status == "noise_floor"
    assert math.isnan(fit.slope)


def test_order_fit_arguments(kp_field):
    with pytest.raises(ValueError):
        asy.remainder_order_fit(kp_field, 0.5, 1, samples=3)
    with pytest.raises(ValueError):
        asy.remainder_order_fit(kp_field, 0.5, 1, (1e-3, 0.2))
