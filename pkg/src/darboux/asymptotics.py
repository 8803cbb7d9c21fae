"""All-orders expansion of V(x, 1-x-eps) as eps -> 0:

    V = sum_j f_j(x) eps^j ln(eps) + sum_j g_j(x) eps^j + O(eps^(J+1) ln eps),

    f_j = -c_j (h_0^(j)(x) + h_1^(j)(x)) / (pi (j!)^2),
    g_j = ((-1)^j A_j(x) + B_j(x)) / pi.

h_1(k) equals hh(1-k), where hh is built from V_1 exactly as h_0 is built
from V_0. Under k -> 1-k the bracketed finite-part terms of B_j at x become
those of A_j for hh at 1-x, so one routine (:func:`_finite_part`) serves both.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .data import BoundaryData
from .errors import DegenerateFit, DomainError
from .goursat import SolutionField
from .quadrature import (
    DEFAULT,
    EndpointExponents,
    QuadratureConfig,
    integrate_subtracted_tail,
    integrate_weighted,
)

J_CAP = 6
EPS_WINDOW = (1e-4, 1e-2)


def c_constant(j: int) -> float:
    """c_j = 2^-j prod_{l<j} (2l + 1)."""
    if j < 0:
        raise ValueError("j must be >= 0")
    out = 1.0
    for l in range(j):
        out *= 2 * l + 1
    return out / 2.0**j


@dataclass(frozen=True)
class UniversalConstants:
    """Data-independent constants entering A_j and B_j.

    ``tail_k0[j]`` = int_0^1 v^j K_0(v,1) dv + subtracted tail of K_0
                     + sum_{l<j} (-1)^l c_l / (l! (l-j));
    ``tail_k1[j]`` = subtracted tail of K_1 + sum_{l<j} c_l / (l! (l-j)).
    """

    c: tuple[float, ...]
    tail_k0: tuple[float, ...]
    tail_k1: tuple[float, ...]


@lru_cache(maxsize=32)
def universal_constants(J: int, cfg: QuadratureConfig = DEFAULT) -> UniversalConstants:
    c = tuple(c_constant(j) for j in range(J + 1))
    k0, k1 = [], []
    for j in range(J + 1):
        head = integrate_weighted(lambda v: v**j / np.sqrt(1.0 + v), 0.0, 1.0, EndpointExponents(0.5, 0.0), cfg)
        s0 = sum((-1) ** l * c[l] / (math.factorial(l) * (l - j)) for l in range(j))
        s1 = sum(c[l] / (math.factorial(l) * (l - j)) for l in range(j))
        k0.append(head + integrate_subtracted_tail(j, "K0", cfg) + s0)
        k1.append(integrate_subtracted_tail(j, "K1", cfg) + s1)
    return UniversalConstants(c, tuple(k0), tuple(k1))


def _field(data, cfg) -> SolutionField:
    if isinstance(data, SolutionField):
        return data
    return SolutionField(data, cfg)


def _check_x(x: float) -> None:
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x}")


def h_function(data, which: str, k: float, j: int = 0, cfg: QuadratureConfig = DEFAULT) -> float:
    """h_0^(j)(k) or h_1^(j)(k)."""
    field = _field(data, cfg)
    if which == "h0":
        return float(field.h_derivatives(0, [k], j)[j, 0])
    if which == "h1":
        return (-1) ** j * float(field.h_derivatives(1, [1.0 - k], j)[j, 0])
    raise ValueError(f"which must be 'h0' or 'h1', got {which!r}")


def taylor_remainder(data, which: str, x: float, k, j: int, cfg: QuadratureConfig = DEFAULT):
    """H^j(x, k): h(k) minus its degree-j Taylor polynomial about x."""
    field = _field(data, cfg)
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if which == "h0":
        hk = field.h_derivatives(0, k, 0)[0]
        hx = field.h_derivatives(0, [x], j)[:, 0]
        d = x - k
        poly = sum(hx[l] * (-1) ** l * d**l / math.factorial(l) for l in range(j + 1))
    elif which == "h1":
        hk = field.h_derivatives(1, 1.0 - k, 0)[0]
        hx = field.h_derivatives(1, [1.0 - x], j)[:, 0] * (-1.0) ** np.arange(j + 1)
        d = k - x
        poly = sum(hx[l] * d**l / math.factorial(l) for l in range(j + 1))
    else:
        raise ValueError(which)
    out = hk - poly
    return out if out.size > 1 else float(out[0])


def _finite_part(field: SolutionField, side: int, x: float, j: int, hx: np.ndarray) -> float:
    """int_0^x H^j(x,k) (x-k)^(-j-1) dk + sum_{l<j} (-1)^l h^(l) x^(l-j) / (l!(l-j))
    + (-1)^j h^(j)(x) ln(x) / j!  for the side's h.

    ``hx`` holds h^(0..j+1)(x). The integral is split at x/2: near x the
    ratio H^j / (x-k)^(j+1) is the Taylor remainder in integral form,
    ((-1)^(j+1)/j!) int_0^1 h^(j+1)(x - s tau) (1-tau)^j dtau with s = x-k.
    """
    cfg = field.cfg
    half = 0.5 * x
    jf = math.factorial(j)

    def remainder_ratio(s):
        def inner(tau):
            pts = x - np.multiply.outer(s, tau)
            vals = field.h_derivatives(side, pts.ravel(), j + 1)[j + 1]
            return vals.reshape(pts.shape)

        # (1 - tau)^j is the Jacobi weight at tau = 1
        return (-1) ** (j + 1) / jf * integrate_weighted(inner, 0.0, 1.0, EndpointExponents(0.0, -float(j)), cfg)

    near = integrate_weighted(remainder_ratio, 0.0, half, EndpointExponents(), cfg)

    power = field.h_power(side)

    def far_integrand(k):
        return field.h_derivatives(side, k, 0)[0] * k ** (-power) * (x - k) ** (-j - 1.0)

    far = integrate_weighted(far_integrand, 0.0, half, EndpointExponents(-power, 0.0), cfg)
    for l in range(j + 1):
        q = l - j
        moment = math.log(2.0) if q == 0 else (x**q - half**q) / q
        far -= hx[l] * (-1) ** l / math.factorial(l) * moment

    rational = sum((-1) ** l * hx[l] * x ** (l - j) / (math.factorial(l) * (l - j)) for l in range(j))
    return near + far + rational + (-1) ** j * hx[j] * math.log(x) / jf


def _AB(field: SolutionField, side_a: int, side_b: int, j: int, x: float, uc: UniversalConstants):
    jf = math.factorial(j)
    ha = field.h_derivatives(side_a, [x], j + 1)[:, 0]
    hb = field.h_derivatives(side_b, [1.0 - x], j + 1)[:, 0]
    cj = c_constant(j)
    A = cj / jf * _finite_part(field, side_a, x, j, ha) + ha[j] / jf * uc.tail_k0[j]
    B = cj / jf * _finite_part(field, side_b, 1.0 - x, j, hb) + (-1) ** j * hb[j] / jf * uc.tail_k1[j]
    return A, B, ha[j], (-1) ** j * hb[j]


def coefficient_A(data, j: int, x: float, cfg: QuadratureConfig = DEFAULT) -> float:
    _check_x(x)
    field = _field(data, cfg)
    return _AB(field, 0, 1, j, x, universal_constants(j, field.cfg))[0]


def coefficient_B(data, j: int, x: float, cfg: QuadratureConfig = DEFAULT) -> float:
    _check_x(x)
    field = _field(data, cfg)
    return _AB(field, 0, 1, j, x, universal_constants(j, field.cfg))[1]


@dataclass(frozen=True)
class ExpansionTable:
    """Coefficients of V(x, 1-x-eps) to order J.

    ``f_swapped``/``g_swapped`` are the coefficients for the data with V_0
    and V_1 interchanged, at the same abscissa.
    """

    x: float
    J: int
    f: tuple[float, ...]
    g: tuple[float, ...]
    f_swapped: tuple[float, ...]
    g_swapped: tuple[float, ...]
    A: tuple[float, ...]
    B: tuple[float, ...]


def _fg(field, sides, x, J, uc):
    f, g, A, B = [], [], [], []
    for j in range(J + 1):
        a, b, h0j, h1j = _AB(field, sides[0], sides[1], j, x, uc)
        f.append(-uc.c[j] * (h0j + h1j) / (math.pi * math.factorial(j) ** 2))
        g.append(((-1) ** j * a + b) / math.pi)
        A.append(a)
        B.append(b)
    return f, g, A, B


def expansion(data, x: float, J: int, cfg: QuadratureConfig = DEFAULT) -> ExpansionTable:
    _check_x(x)
    if not 0 <= J <= J_CAP:
        raise ValueError(f"J must lie in [0, {J_CAP}]")
    field = _field(data, cfg)
    if field.data.order < J + 2:
        from .errors import MissingDerivative

        raise MissingDerivative(f"order-{J} expansion needs V^({J + 2})")
    uc = universal_constants(J, field.cfg)
    f, g, A, B = _fg(field, (0, 1), x, J, uc)
    fs, gs, _, _ = _fg(field, (1, 0), x, J, uc)
    return ExpansionTable(x, J, tuple(f), tuple(g), tuple(fs), tuple(gs), tuple(A), tuple(B))


def swapped_coefficients(data, x: float, J: int, cfg: QuadratureConfig = DEFAULT):
    """(f, g) of the data with V_0 and V_1 interchanged, at abscissa x.

    These are the coefficients of V(1-x-eps, x) for the original data, i.e.
    the expansion along a horizontal line y = x.
    """
    _check_x(x)
    field = _field(data, cfg)
    f, g, _, _ = _fg(field, (1, 0), x, J, universal_constants(J, field.cfg))
    return tuple(f), tuple(g)


def evaluate_expansion(table: ExpansionTable, eps: float) -> float:
    if not 0.0 < eps < 1.0 - table.x:
        raise DomainError(f"eps must lie in (0, 1-x), got {eps}")
    L = math.log(eps)
    return sum((fj * L + gj) * eps**j for j, (fj, gj) in enumerate(zip(table.f, table.g)))


@dataclass(frozen=True)
class OrderFit:
    J: int
    x: float
    slope: float
    eps: tuple[float, ...]
    remainders: tuple[float, ...]
    noise_floor: float
    status: str  # "fit" or "noise_floor"


def remainder_order_fit(
    data,
    x: float,
    J: int,
    eps_range=(1e-3, 1e-2),
    cfg: QuadratureConfig = DEFAULT,
    samples: int = 7,
    reference=None,
    noise_floor: float | None = None,
) -> OrderFit:
    """Least-squares slope of ln|R_J(eps)| against ln(eps).

    R_J = V(x, 1-x-eps) minus the order-J expansion. ``reference`` is an
    optional callable (x, y) -> V; by default the direct evaluator is used.
    Samples whose remainder lies under ``noise_floor`` are dropped; with
    fewer than three left the fit reports status ``"noise_floor"``.
    """
    lo, hi = eps_range
    if samples < 5 or not (0 < lo < hi <= 0.05):
        raise ValueError("need >= 5 samples within (0, 0.05]")
    field = _field(data, cfg)
    table = expansion(field, x, J, cfg)
    if reference is None:
        direct = SolutionField(field.data, field.cfg, eps_min=min(field.eps_min, lo / 10))
        reference = lambda xx, yy: direct.evaluate((xx, yy))
    eps = np.geomspace(lo, hi, samples)
    vals = np.array([reference(x, (1.0 - x) - e) for e in eps])
    rem = vals - np.array([evaluate_expansion(table, e) for e in eps])
    floor = noise_floor if noise_floor is not None else 100 * field.cfg.abs_tol * (1.0 + np.max(np.abs(vals)))
    keep = np.abs(rem) > floor
    if keep.sum() < 3:
        return OrderFit(J, x, math.nan, tuple(eps), tuple(rem), float(floor), "noise_floor")
    slope = float(np.polyfit(np.log(eps[keep]), np.log(np.abs(rem[keep])), 1)[0])
    return OrderFit(J, x, slope, tuple(eps), tuple(rem), float(floor), "fit")
