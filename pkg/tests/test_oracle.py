import math

import numpy as np
import pytest

from darboux import oracle
from darboux.asymptotics import coefficient_A
from darboux.data import khan_penrose_data, polynomial_data, zero_data
from darboux.errors import DomainError
from darboux.goursat import SolutionField


def test_khan_penrose_values():
    assert oracle.khan_penrose((0.0, 0.0)) == 0.0
    for x in (0.1, 0.5, 0.9):
        s = math.sqrt(x)
        assert oracle.khan_penrose((x, 0.0)) == pytest.approx(-math.log((1 + s) / (1 - s)), rel=1e-14)


def test_khan_penrose_slope_on_axis():
    for x in (0.2, 0.7):
        assert oracle.khan_penrose((x, 0.0), (1, 0)) == pytest.approx(-1 / (math.sqrt(x) * (1 - x)), rel=1e-12)


@pytest.mark.parametrize("d", [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)])
def test_khan_penrose_derivatives_by_differences(d):
    x, y, h = 0.3, 0.25, 1e-4
    f = lambda a, b: oracle.khan_penrose((a, b))
    g = lambda a, b: oracle.khan_penrose((a, b), (d[0] - 1, d[1]) if d[0] else (d[0], d[1] - 1))
    fd = (g(x + h, y) - g(x - h, y)) / (2 * h) if d[0] else (g(x, y + h) - g(x, y - h)) / (2 * h)
    assert oracle.khan_penrose((x, y), d) == pytest.approx(fd, rel=1e-6)


def test_khan_penrose_diagonal_error():
    with pytest.raises(DomainError):
        oracle.khan_penrose((0.5, 0.5))


def test_khan_penrose_stable_near_diagonal():
    eps = 2.0**-33  # 0.5 - eps is exact
    v = oracle.khan_penrose((0.5, 0.5 - eps))
    assert v == pytest.approx(2 * math.log(eps) - math.log(4), abs=1e-8)


def test_printed_expansion():
    e = oracle.khan_penrose_expansion(0.5)
    assert e["f"] == [2.0, 0.0, 0.0]
    assert e["g"][0] == pytest.approx(-math.log(4))
    assert e["g"][1] == 0.0
    assert e["g"][2] == pytest.approx(1.5)
    assert oracle.khan_penrose_expansion(0.25)["g"][1] == pytest.approx(-4 / 3)
    for x in (0.1, 0.9):
        assert oracle.khan_penrose_expansion(x)["f"][0] == 2.0


def test_brute_force_zero():
    assert oracle.brute_force_solution(zero_data(), (0.3, 0.3)) == 0.0


def test_brute_force_khan_penrose():
    got = oracle.brute_force_solution(khan_penrose_data(), (0.2, 0.3))
    assert got == pytest.approx(oracle.khan_penrose((0.2, 0.3)), abs=1e-7)


def test_brute_force_polynomial(poly_data, poly_field):
    got = oracle.brute_force_solution(poly_data, (0.3, 0.4))
    assert got == pytest.approx(poly_field.evaluate((0.3, 0.4)), abs=1e-7)


def test_brute_force_refuses_diagonal():
    with pytest.raises(DomainError):
        oracle.brute_force_solution(zero_data(), (0.5, 0.49999))


def test_oracle_coherence_grid():
    data = khan_penrose_data()
    ticks = np.linspace(0.05, 0.8, 5)
    pts = [(x, y) for x in ticks for y in ticks if x + y <= 0.9]
    worst = max(abs(oracle.brute_force_solution(data, p) - oracle.khan_penrose(p)) for p in pts)
    assert worst <= 1e-7


def test_residual_of_closed_form():
    rep = oracle.residual_check(lambda x, y: oracle.khan_penrose((x, y)), oracle.interior_grid(7))
    assert rep.fd.max_rel <= 1e-6
    assert rep.passed


def test_residual_of_non_solution():
    rep = oracle.residual_check(lambda x, y: x + y, [(0.25, 0.25)], derivatives=lambda x, y: (1.0, 1.0, 0.0))
    assert rep.derivative.residuals[0] == pytest.approx(-2.0)
    assert rep.fd.residuals[0] == pytest.approx(-2.0, rel=1e-8)
    assert not rep.passed


def test_residual_report_pass_flag():
    rep = oracle.ResidualReport("x", [(0.1, 0.1)], [1e-3], [1e-3], 1e-3)
    assert rep.passed
    rep = oracle.ResidualReport("x", [(0.1, 0.1)], [1e-3], [2e-3], 1e-3)
    assert not rep.passed


def test_residual_of_computed_field(kp_field):
    rep = oracle.residual_check(lambda x, y: kp_field.evaluate((x, y)), oracle.interior_grid(4))
    assert rep.fd.max_rel <= 1e-5


def test_fd_one_sided_near_axis():
    vx, vy, vxy = oracle.fd_derivatives(lambda x, y: x * x * y + y, 1e-4, 0.3)
    assert vx == pytest.approx(2e-4 * 0.3, abs=1e-10)
    assert vy == pytest.approx(1 + 1e-8, rel=1e-9)
    assert vxy == pytest.approx(2e-4, abs=1e-8)


def test_log_potential_is_A0(poly_data):
    f = SolutionField(poly_data)
    phi1, _ = oracle.log_potential_derivatives(f, 0, 0.4)
    assert phi1 == pytest.approx(coefficient_A(f, 0, 0.4), abs=1e-9)
