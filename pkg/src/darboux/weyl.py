"""Weyl scalars of the colliding-wave spacetime built on V.

Null coordinates enter through the profiles f(u) = 1/2 - (c1 u)^n1 and
g(v) = 1/2 - (c2 v)^n2 with x = 1/2 - g, y = 1/2 - f, so that
|f'(u)| = c1 n1 y^(1-1/n1) and |g'(v)| = c2 n2 x^(1-1/n2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

from .asymptotics import J_CAP, expansion, swapped_coefficients
from .errors import DomainError
from .goursat import SolutionField, TrianglePoint, _point
from .quadrature import DEFAULT, QuadratureConfig


@dataclass(frozen=True)
class WaveProfile:
    c1: float = 1.0
    c2: float = 1.0
    n1: float = 1.0
    n2: float = 1.0

    def __post_init__(self):
        for name in ("c1", "c2", "n1", "n2"):
            val = getattr(self, name)
            if not (math.isfinite(val) and val > 0):
                raise ValueError(f"{name} must be positive, got {val}")

    def f_rate(self, y: float) -> float:
        """-f'(u) expressed through y."""
        return self.c1 * self.n1 * y ** (1.0 - 1.0 / self.n1)

    def g_rate(self, x: float) -> float:
        """-g'(v) expressed through x."""
        return self.c2 * self.n2 * x ** (1.0 - 1.0 / self.n2)

    def swapped(self) -> "WaveProfile":
        return WaveProfile(self.c2, self.c1, self.n2, self.n1)


@dataclass(frozen=True)
class WeylComponents:
    psi0: float
    psi2: float
    psi4: float


def map_coordinates(p, profile: WaveProfile) -> tuple[float, float, float, float]:
    """(u, v, f, g) for a point of D."""
    p = _point(p)
    g = 0.5 - p.x
    f = 0.5 - p.y
    u = p.y ** (1.0 / profile.n1) / profile.c1 if p.y > 0 else 0.0
    v = p.x ** (1.0 / profile.n2) / profile.c2 if p.x > 0 else 0.0
    return u, v, f, g


def inverse_map(u: float, v: float, profile: WaveProfile) -> TrianglePoint:
    if u < 0 or v < 0:
        raise DomainError("null coordinates must be non-negative")
    return TrianglePoint((profile.c2 * v) ** profile.n2, (profile.c1 * u) ** profile.n1)


def weyl_from_derivatives(x, y, vx, vy, vxx, vyy, profile: WaveProfile) -> WeylComponents:
    eps = 1.0 - x - y
    a = profile.g_rate(x)
    b = profile.f_rate(y)
    psi0 = a * a / 4.0 * (2.0 * vxx - 3.0 * vx / eps + eps * vx**3)
    psi2 = a * b * (vx * vy - 1.0 / eps**2)
    psi4 = b * b / 4.0 * (2.0 * vyy - 3.0 * vy / eps + eps * vy**3)
    return WeylComponents(psi0, psi2, psi4)


def weyl_direct(field: SolutionField, p, profile: WaveProfile) -> WeylComponents:
    p = _point(p)
    if not p.interior:
        raise DomainError(f"Weyl scalars need an interior point, got ({p.x}, {p.y})")
    d = field.evaluate_all(p)
    return weyl_from_derivatives(p.x, p.y, d["Vx"], d["Vy"], d["Vxx"], d["Vyy"], profile)


def _gamma_G(f, g):
    gamma = tuple(j * gj + fj for j, (fj, gj) in enumerate(zip(f, g)))
    G = tuple((j - 1) * cj + j * fj for j, (fj, cj) in enumerate(zip(f, gamma)))
    return gamma, G


def _normal_bracket(f, gamma, G, eps: float) -> float:
    """2V_ss - 3V_s/eps + eps V_s^3 along a line where eps is the only variable."""
    L = math.log(eps)
    lin = sum((2 * Gj + 3 * cj + j * (2 * j + 1) * fj * L) * eps ** (j - 2) for j, (fj, cj, Gj) in enumerate(zip(f, gamma, G)))
    inner = sum((j * fj * L + cj) * eps ** (j - 1) for j, (fj, cj) in enumerate(zip(f, gamma)))
    return lin - eps * inner**3


def _cross_bracket(f, gamma, ft, gamma_t, eps: float) -> float:
    """V_x V_y - 1/eps^2 as truncated Cauchy products; the eps^-2 pieces are merged."""
    N = len(f) - 1
    L = math.log(eps)
    out = (gamma[0] * gamma_t[0] - 1.0) / eps**2
    for j in range(N + 1):
        plain = sum(gamma[k] * gamma_t[j - k] for k in range(j + 1)) if j else 0.0
        logs = sum(k * f[k] * gamma_t[j - k] + k * ft[k] * gamma[j - k] for k in range(j + 1))
        logs2 = sum(k * (j - k) * f[k] * ft[j - k] for k in range(j + 1))
        out += (plain + logs * L + logs2 * L * L) * eps ** (j - 2)
    return out


@dataclass
class WeylSeries:
    """Near-diagonal series of the Weyl scalars along the vertical line at x.

    ``f``, ``gamma`` and ``G`` describe V(x, 1-x-eps). The tilde arrays
    describe V(1-y-eps, y) at the limit point y = 1-x; :meth:`components`
    recomputes them at the actual y = 1-x-eps.
    """

    x: float
    J: int
    profile: WaveProfile
    f: tuple[float, ...]
    gamma: tuple[float, ...]
    G: tuple[float, ...]
    f_t: tuple[float, ...]
    gamma_t: tuple[float, ...]
    G_t: tuple[float, ...]
    _field: SolutionField = dc_field(repr=False, compare=False, default=None)
    _tilde_cache: dict = dc_field(repr=False, compare=False, default_factory=dict)

    def tilde_at(self, y: float):
        hit = self._tilde_cache.get(y)
        if hit is None:
            ft, gt = swapped_coefficients(self._field, y, self.J)
            hit = (ft, *_gamma_G(ft, gt))
            self._tilde_cache[y] = hit
        return hit

    def components(self, eps: float) -> WeylComponents:
        if not 0.0 < eps < 1.0 - self.x:
            raise DomainError(f"eps must lie in (0, 1-x), got {eps}")
        y = 1.0 - self.x - eps
        ft, gamma_t, G_t = self.tilde_at(y)
        a = self.profile.g_rate(self.x)
        b = self.profile.f_rate(y)
        return WeylComponents(
            psi0=a * a / 4.0 * _normal_bracket(ft, gamma_t, G_t, eps),
            psi2=a * b * _cross_bracket(self.f, self.gamma, ft, gamma_t, eps),
            psi4=b * b / 4.0 * _normal_bracket(self.f, self.gamma, self.G, eps),
        )


def weyl_series(data, x: float, J: int, profile: WaveProfile, cfg: QuadratureConfig = DEFAULT) -> WeylSeries:
    if not 1 <= J <= J_CAP:
        raise ValueError(f"series order must lie in [1, {J_CAP}]")
    field = data if isinstance(data, SolutionField) else SolutionField(data, cfg)
    table = expansion(field, x, J)
    gamma, G = _gamma_G(table.f, table.g)
    ws = WeylSeries(x, J, profile, table.f, gamma, G, (), (), (), field)
    ft, gamma_t, G_t = ws.tilde_at(1.0 - x)
    ws.f_t, ws.gamma_t, ws.G_t = ft, gamma_t, G_t
    return ws
