"""Ground truth and independent checks.

* the closed-form Khan-Penrose solution with analytic derivatives,
* its printed near-diagonal expansion,
* a brute-force evaluator of the Abel representation built on
  ``scipy.integrate.quad`` after trigonometric/quadratic substitutions
  (no code shared with :mod:`darboux.goursat`),
* a PDE residual checker using the evaluator's own derivatives and,
  separately, 5-point finite differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .data import BoundaryData
from .errors import DomainError, NonConvergence

# -- Khan-Penrose -------------------------------------------------------------


def _kp_parts(x: float, y: float):
    if not (x >= 0 and y >= 0 and x + y < 1):
        raise DomainError(f"({x}, {y}) outside D")
    sx, sy = math.sqrt(x), math.sqrt(y)
    cx, cy = math.sqrt(1 - x), math.sqrt(1 - y)
    s = sx * cy + sy * cx
    # 1 - s^2 = eps^2 / (cx cy + sx sy)^2, exact near the diagonal
    eps = (1.0 - x) - y
    q = cx * cy + sx * sy
    one_m_s2 = (eps / q) ** 2
    return s, one_m_s2, eps, q, sx, sy, cx, cy


def khan_penrose(p, derivative: tuple[int, int] = (0, 0)) -> float:
    """Closed-form V = -ln((1+s)/(1-s)), s = sqrt(x(1-y)) + sqrt(y(1-x)).

    ``derivative`` is a multi-index (i, j) with i + j <= 2 for d^i/dx^i d^j/dy^j.
    """
    x, y = (p.x, p.y) if hasattr(p, "x") else p
    i, j = derivative
    s, w, eps, q, sx, sy, cx, cy = _kp_parts(x, y)
    if (i, j) == (0, 0):
        if eps <= 0:
            raise DomainError("diagonal")
        return 2.0 * math.log(eps) - 2.0 * math.log(q) - 2.0 * math.log1p(s)
    if eps <= 0 or (i and x == 0) or (j and y == 0):
        raise DomainError(f"derivative {derivative} of the closed form is singular at ({x}, {y})")
    s_x = cy / (2 * sx) - sy / (2 * cx) if i else 0.0
    s_y = cx / (2 * sy) - sx / (2 * cy) if j else 0.0
    if i + j == 1:
        ds = s_x if i else s_y
        return -2.0 * ds / w
    if (i, j) == (2, 0):
        d1, d2 = s_x, -cy / (4 * x * sx) - sy / (4 * (1 - x) * cx)
        return -2.0 * (d2 * w + 2 * s * d1 * d1) / (w * w)
    if (i, j) == (0, 2):
        d1, d2 = s_y, -cx / (4 * y * sy) - sx / (4 * (1 - y) * cy)
        return -2.0 * (d2 * w + 2 * s * d1 * d1) / (w * w)
    if (i, j) == (1, 1):
        s_xy = -1.0 / (4 * sx * cy) - 1.0 / (4 * sy * cx)
        return -2.0 * (s_xy * w + 2 * s * s_x * s_y) / (w * w)
    raise ValueError(f"unsupported derivative {derivative}")


def khan_penrose_expansion(x: float, J: int = 2) -> dict[str, list[float]]:
    """Printed near-diagonal coefficients of V(x, 1-x-eps), orders 0..J <= 2."""
    if not 0 < x < 1:
        raise DomainError("x must lie in (0, 1)")
    if J > 2:
        raise ValueError("the closed-form expansion is available up to J = 2")
    f = [2.0, 0.0, 0.0]
    g = [
        -math.log(16 * (1 - x) * x),
        -(1 - 2 * x) / (2 * (1 - x) * x),
        3 * (1 - 2 * x + 2 * x * x) / (16 * (1 - x) ** 2 * x**2),
    ]
    return {"f": f[: J + 1], "g": g[: J + 1]}


def khan_penrose_AB(x: float) -> dict[str, list[float]]:
    """The coefficient table A_0..A_2, B_0..B_2 for constant h = -pi."""
    pi = math.pi
    return {
        "A": [-pi * (math.log(x) + math.log(4)), pi / (2 * x), 3 * pi / (16 * x * x)],
        "B": [-pi * (math.log(1 - x) + math.log(4)), pi / (2 * (1 - x)), 3 * pi / (16 * (1 - x) ** 2)],
    }


# -- brute force ----------------------------------------------------------------


@dataclass(frozen=True)
class FineConfig:
    epsabs: float = 1e-14
    epsrel: float = 1e-13
    limit: int = 400


def _quad(f, a, b, cfg: FineConfig) -> float:
    val, err = integrate.quad(f, a, b, epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit)
    if not math.isfinite(val):
        raise NonConvergence("brute-force quadrature produced a non-finite value")
    return val


def _brute_term(slope: Callable, a: float, b: float, cfg: FineConfig) -> float:
    if a == 0.0:
        return 0.0
    eps = (1.0 - a) - b

    def abel_slope(k):
        # t = k sin^2(theta): int_0^k V'(t) (k-t)^(-1/2) dt = 2 sqrt(k) int V'(k sin^2) sin
        g = lambda th: float(slope(np.array([k * math.sin(th) ** 2]))[0]) * math.sin(th)
        return 2.0 * math.sqrt(k) * _quad(g, 0.0, 0.5 * math.pi, cfg)

    def outer(u):
        # k = a - u^2 removes (a-k)^(-1/2)
        k = a - u * u
        if k <= 0.0:
            return 0.0
        return 2.0 * math.sqrt(1.0 - k) * abel_slope(k) / math.sqrt(eps + u * u)

    return _quad(outer, 0.0, math.sqrt(a), cfg) / math.pi


def brute_force_solution(data: BoundaryData, p, fine_cfg: FineConfig = FineConfig()) -> float:
    x, y = (p.x, p.y) if hasattr(p, "x") else p
    if not (x >= 0 and y >= 0 and 1 - x - y >= 1e-4):
        raise DomainError(f"brute force needs 1-x-y >= 1e-4, got ({x}, {y})")
    s0 = data.slope(0).func
    s1 = data.slope(1).func
    return _brute_term(s0, x, y, fine_cfg) + _brute_term(s1, y, x, fine_cfg)


# -- residuals ----------------------------------------------------------------


@dataclass
class ResidualReport:
    method: str
    points: list[tuple[float, float]]
    residuals: list[float]
    relative: list[float]
    threshold: float
    max_abs: float = field(init=False)
    max_rel: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.max_abs = max((abs(r) for r in self.residuals), default=0.0)
        self.max_rel = max(self.relative, default=0.0)
        self.passed = bool(self.max_rel <= self.threshold)


@dataclass
class ResidualCheck:
    fd: ResidualReport
    derivative: ResidualReport | None

    @property
    def passed(self) -> bool:
        return self.fd.passed and (self.derivative is None or self.derivative.passed)


_CENTRAL = (np.array([-2, -1, 1, 2]), np.array([1, -8, 8, -1]) / 12.0)
_FORWARD = (np.array([0, 1, 2, 3, 4]), np.array([-25, 48, -36, 16, -3]) / 12.0)


def _stencil(pos: float, h: float):
    offs, w = _CENTRAL if pos - 2 * h > 0 else _FORWARD
    return offs * h, w / h


def fd_derivatives(V: Callable[[float, float], float], x: float, y: float, h: float = 1e-4):
    """(V_x, V_y, V_xy) from 4th-order stencils; one-sided next to an axis."""
    ox, wx = _stencil(x, h)
    oy, wy = _stencil(y, h)
    vx = sum(w * V(x + o, y) for o, w in zip(ox, wx))
    vy = sum(w * V(x, y + o) for o, w in zip(oy, wy))
    vxy = sum(a * b * V(x + o1, y + o2) for o1, a in zip(ox, wx) for o2, b in zip(oy, wy))
    return vx, vy, vxy


def _residual(x, y, vx, vy, vxy):
    r = vxy - (vx + vy) / (2.0 * (1.0 - x - y))
    return r, abs(r) / (1.0 + abs(vxy))


def residual_check(
    V: Callable[[float, float], float],
    points: Sequence[tuple[float, float]],
    threshold: float = 1e-5,
    derivatives: Callable[[float, float], tuple[float, float, float]] | None = None,
    derivative_threshold: float = 1e-6,
    h: float = 1e-4,
) -> ResidualCheck:
    """Euler-Darboux residual on ``points``.

    ``V`` gives values for finite differences; ``derivatives`` optionally
    returns the evaluator's own (V_x, V_y, V_xy).
    """
    pts = [(float(x), float(y)) for x, y in points]
    fd_r, fd_rel = [], []
    for x, y in pts:
        r, rel = _residual(x, y, *fd_derivatives(V, x, y, h))
        fd_r.append(r)
        fd_rel.append(rel)
    fd = ResidualReport("finite_difference", pts, fd_r, fd_rel, threshold)
    if derivatives is None:
        return ResidualCheck(fd, None)
    d_r, d_rel = [], []
    for x, y in pts:
        r, rel = _residual(x, y, *derivatives(x, y))
        d_r.append(r)
        d_rel.append(rel)
    return ResidualCheck(fd, ResidualReport("derivative", pts, d_r, d_rel, derivative_threshold))


def interior_grid(n: int = 7, lo: float = 0.05, diag: float = 0.9) -> list[tuple[float, float]]:
    """n x n points on [lo, diag-lo]^2 restricted to x + y <= diag."""
    ticks = np.linspace(lo, diag - lo, n)
    return [(float(x), float(y)) for x in ticks for y in ticks if x + y <= diag + 1e-12]


# -- low-order expansion through logarithmic potentials -------------------------


def _log_potential_derivatives(hfun, q: float, x: float, cfg: FineConfig) -> tuple[float, float]:
    """First two derivatives of Phi(x) = int_0^x h(k) ln(4(x-k)) dk.

    ``hfun(k, n)`` returns h^(n)(k); h behaves like k^q at 0. The integral
    is split at x/2 so that the logarithm only meets smooth factors.
    """
    half = 0.5 * x
    kw = dict(epsabs=cfg.epsabs, epsrel=cfg.epsrel, limit=cfg.limit)

    def reg(k):
        return hfun(k, 0) * k ** (-q) if k > 0 else 0.0

    near1 = integrate.quad(lambda k: reg(k) / (x - k), 0.0, half, weight="alg", wvar=(q, 0.0), **kw)[0]
    near2 = integrate.quad(lambda k: reg(k) / (x - k) ** 2, 0.0, half, weight="alg", wvar=(q, 0.0), **kw)[0]

    def log_part(n):
        plain = integrate.quad(lambda s: hfun(x - s, n), 0.0, half, **kw)[0]
        logged = integrate.quad(lambda s: hfun(x - s, n), 0.0, half, weight="alg-loga", wvar=(0.0, 0.0), **kw)[0]
        return math.log(4.0) * plain + logged

    d1 = near1 + hfun(half, 0) * math.log(2 * x) + log_part(1)
    d2 = 2 * hfun(half, 0) / x - near2 + hfun(half, 1) * math.log(2 * x) + log_part(2)
    return d1, d2


_LOG_CFG = FineConfig(1e-13, 1e-11, 200)


def _side_h(field, side: int):
    return lambda k, n: float(field.h_derivatives(side, [k], n)[n, 0])


def log_potential_derivatives(field, side: int, x: float, cfg: FineConfig = _LOG_CFG) -> tuple[float, float]:
    """(Phi', Phi'') at x for the h-function of one data side.

    For side 0, Phi'(x) equals A_0(x).
    """
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x}")
    return _log_potential_derivatives(_side_h(field, side), field.h_power(side), x, cfg)


def log_potential_coefficients(field, x: float, cfg: FineConfig = _LOG_CFG) -> dict[str, float]:
    """f_0, f_1, g_0, g_1 from derivatives of logarithmic potentials of h_0, h_1.

    Uses only h and its first two derivatives from ``field`` and plain
    adaptive quadrature, none of the Taylor-remainder or subtracted-tail
    machinery of :mod:`darboux.asymptotics`.
    """
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x}")

    h0, h1 = _side_h(field, 0), _side_h(field, 1)
    p0 = log_potential_derivatives(field, 0, x, cfg)
    p1 = log_potential_derivatives(field, 1, 1.0 - x, cfg)
    # h_1(k) = hh(1-k) where hh is the side-1 h-function
    return {
        "f0": -(h0(x, 0) + h1(1 - x, 0)) / math.pi,
        "f1": -(h0(x, 1) - h1(1 - x, 1)) / (2 * math.pi),
        "g0": (p0[0] + p1[0]) / math.pi,
        "g1": (p0[1] - p1[1]) / (2 * math.pi),
    }
