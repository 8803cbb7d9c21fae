import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.special import beta, gamma

from darboux.quadrature import (
    DEFAULT,
    EndpointExponents,
    InvalidExponent,
    NonConvergence,
    QuadratureConfig,
    integrate_singular,
    integrate_smooth,
    integrate_subtracted_tail,
    integrate_weighted,
)

# closed forms of the subtracted tails, from exact antiderivatives
K1_TAILS = [math.log(4), 0.5 + math.log(2), 0.75 * math.log(2) + 9 / 16]
K0_TAILS = [-0.37645281291919543, 0.27401284408650267, -0.22511641425142452]


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=-1)
    with pytest.raises(ValueError):
        QuadratureConfig(max_subdivisions=0)
    with pytest.raises(ValueError):
        QuadratureConfig(base_nodes=1)


def test_env_override(monkeypatch):
    monkeypatch.setenv("DARBOUX_QUAD_RTOL", "1e-7")
    assert QuadratureConfig.from_env().rel_tol == 1e-7
    monkeypatch.delenv("DARBOUX_QUAD_RTOL")
    assert QuadratureConfig.from_env().rel_tol == DEFAULT.rel_tol


def test_exponent_bounds():
    with pytest.raises(InvalidExponent):
        EndpointExponents(1.0, 0.0)
    with pytest.raises(InvalidExponent):
        EndpointExponents(0.0, 1.5)


def test_beta_half_half():
    got = integrate_singular(lambda k: k**-0.5 * (1 - k) ** -0.5, 0, 1, EndpointExponents(0.5, 0.5))
    assert got == pytest.approx(math.pi, rel=1e-12)


def test_right_sqrt():
    got = integrate_singular(lambda k: (1 - k) ** -0.5, 0, 1, EndpointExponents(0, 0.5))
    assert got == pytest.approx(2.0, rel=1e-12)


def test_beta_with_gamma_oracle():
    a, x = 0.3, 0.5
    want = x ** (0.5 - a) * gamma(1 - a) * gamma(0.5) / gamma(1.5 - a)
    got = integrate_singular(lambda k: k**-a * (x - k) ** -0.5, 0, x, EndpointExponents(a, 0.5))
    assert got == pytest.approx(want, rel=1e-11)


@pytest.mark.parametrize("a", np.round(np.arange(0, 1, 0.1), 1))
@pytest.mark.parametrize("x", [0.1, 0.5, 0.9])
def test_beta_identity_matrix(a, x):
    got = integrate_weighted(lambda k: np.ones_like(k), 0, x, EndpointExponents(a, 0.5))
    assert got == pytest.approx(x ** (0.5 - a) * beta(1 - a, 0.5), rel=DEFAULT.rel_tol)


def test_smooth_examples():
    assert integrate_smooth(lambda t: np.ones_like(t), 0, 1) == pytest.approx(1.0, rel=1e-14)
    assert integrate_smooth(lambda t: t, 0, 2) == pytest.approx(2.0, rel=1e-14)


def test_log_integrand():
    # ln(4t) is only log-singular; declare nothing and let bisection cope
    got = integrate_smooth(lambda t: np.log(4 * t), 0, 1)
    assert got == pytest.approx(math.log(4) - 1, abs=1e-9)


@pytest.mark.parametrize("j", [0, 1, 2])
def test_tail_k1(j):
    assert integrate_subtracted_tail(j, "K1_like") == pytest.approx(K1_TAILS[j], abs=1e-12)


@pytest.mark.parametrize("j", [0, 1, 2])
def test_tail_k0(j):
    assert integrate_subtracted_tail(j, "K0_like") == pytest.approx(K0_TAILS[j], abs=1e-12)


def test_tail_k0_plus_head_is_ln4():
    head = integrate_weighted(lambda v: 1 / np.sqrt(1 + v), 0, 1, EndpointExponents(0.5, 0))
    assert head == pytest.approx(2 * math.log(1 + math.sqrt(2)), rel=1e-13)
    assert head + integrate_subtracted_tail(0, "K0") == pytest.approx(math.log(4), abs=1e-12)


def test_unknown_kernel():
    with pytest.raises(ValueError):
        integrate_subtracted_tail(0, "K7")


def test_nonconvergence_reported():
    cfg = QuadratureConfig(rel_tol=1e-15, abs_tol=1e-300, max_subdivisions=2, base_nodes=2)
    with pytest.raises(NonConvergence):
        integrate_smooth(lambda t: np.sin(200 * t), 0, 1, cfg)


def test_batch_matches_scalar():
    f = lambda t: np.stack([np.cos(t), t**3])
    got = integrate_weighted(f, 0, 1, EndpointExponents(0.5, 0))
    one = integrate_weighted(lambda t: np.cos(t), 0, 1, EndpointExponents(0.5, 0))
    two = integrate_weighted(lambda t: t**3, 0, 1, EndpointExponents(0.5, 0))
    assert got[0] == pytest.approx(one, rel=1e-12)
    assert got[1] == pytest.approx(two, rel=1e-12)


smooth_coeffs = st.floats(-5, 5, allow_nan=False)


@given(smooth_coeffs, smooth_coeffs, st.floats(0, 0.9), st.floats(0, 0.9))
def test_linearity(c, d, mu, nu):
    exps = EndpointExponents(mu, nu)
    f = lambda t: np.exp(t)
    g = lambda t: 1 + t * t
    both = integrate_weighted(lambda t: c * f(t) + g(t), 0, 1, exps)
    sep = c * integrate_weighted(f, 0, 1, exps) + integrate_weighted(g, 0, 1, exps)
    assert abs(both - sep) <= 2 * DEFAULT.rel_tol * (abs(c) * 10 + 10)


@given(st.floats(0.1, 0.9))
def test_additivity(split):
    f = lambda t: np.cos(3 * t)
    whole = integrate_smooth(f, 0, 1)
    parts = integrate_smooth(f, 0, split) + integrate_smooth(f, split, 1)
    assert abs(whole - parts) <= 2 * DEFAULT.rel_tol


@given(st.floats(0.0, 0.95), st.floats(0.01, 2.0))
def test_determinism(a, b):
    f = lambda t: np.sqrt(t + b)
    r1 = integrate_weighted(f, 0, 1, EndpointExponents(a, 0.5))
    r2 = integrate_weighted(f, 0, 1, EndpointExponents(a, 0.5))
    assert r1 == r2
