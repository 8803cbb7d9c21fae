"""Solution of the Goursat problem on D = {x, y >= 0, x + y < 1} for

    V_xy - (V_x + V_y) / (2 (1 - x - y)) = 0

through the two-term Abel representation

    V(x, y) = T_0(x, y) + T_1(y, x),
    T(a, b) = (1/pi) int_0^a h(k) (1-b-k)^(-1/2) (a-k)^(-1/2) dk,
    h(k)    = sqrt(1-k) A V'(k),

where T_0 uses V_0 and T_1 uses V_1 (the second term after k -> 1-k).
Derivatives in ``a`` go through the Abel recursion, derivatives in ``b``
act on the kernel, whose mixed derivatives are
d_b^p d_k^r (1-b-k)^(-1/2) = c_{p+r} (1-b-k)^(-1/2-p-r).
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .abel import derivative_coefficients, transform_many
from .data import BoundaryData
from .errors import DomainError, MissingDerivative
from .quadrature import DEFAULT, EndpointExponents, QuadratureConfig, integrate_weighted

EPS_MIN = 1e-6


def _kernel_constant(j: int) -> float:
    # d^j/dk^j (1-b-k)^(-1/2) = c_j (1-b-k)^(-1/2-j)
    out = 1.0
    for l in range(j):
        out *= (2 * l + 1) / 2.0
    return out


def _falling(a: float, n: int) -> float:
    out = 1.0
    for i in range(n):
        out *= a - i
    return out


@dataclass(frozen=True)
class TrianglePoint:
    x: float
    y: float

    def __post_init__(self):
        if not (self.x >= 0.0 and self.y >= 0.0 and self.x + self.y < 1.0):
            raise DomainError(f"({self.x}, {self.y}) is not in D")

    @property
    def interior(self) -> bool:
        return self.x > 0.0 and self.y > 0.0


def _point(p) -> TrianglePoint:
    return p if isinstance(p, TrianglePoint) else TrianglePoint(*p)


@dataclass(frozen=True)
class GridSpec:
    x_min: float = 0.05
    x_max: float = 0.85
    nx: int = 10
    y_min: float = 0.05
    y_max: float = 0.85
    ny: int = 10
    eps_min: float = EPS_MIN

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid counts must be positive")

    def nodes(self) -> Iterator[tuple[float, float]]:
        xs = np.linspace(self.x_min, self.x_max, self.nx) if self.nx > 1 else np.array([self.x_min])
        ys = np.linspace(self.y_min, self.y_max, self.ny) if self.ny > 1 else np.array([self.y_min])
        for x in xs:
            for y in ys:
                yield float(x), float(y)


@dataclass(frozen=True)
class GridRow:
    x: float
    y: float
    v: float
    vx: float
    vy: float
    vxy: float = math.nan
    note: str = ""


# components of one term: name -> (b-derivative order p, a-derivative order j)
_LEVELS = {
    0: {"T": (0, 0)},
    1: {"T": (0, 0), "Ta": (0, 1), "Tb": (1, 0)},
    2: {"T": (0, 0), "Ta": (0, 1), "Tb": (1, 0), "Taa": (0, 2), "Tab": (1, 1), "Tbb": (2, 0)},
}


class SolutionField:
    """Evaluator of V and its partial derivatives on D for fixed data.

    Immutable apart from a memo of h-derivatives at quadrature nodes, which
    never changes a result.
    """

    def __init__(self, data: BoundaryData, cfg: QuadratureConfig = DEFAULT, eps_min: float = EPS_MIN):
        self.data = data
        self.cfg = cfg
        self.eps_min = eps_min
        self._slopes = (data.slope(0), data.slope(1))
        self._memo: dict = {}

    # -- h = sqrt(1-k) A V'(k) and derivatives ---------------------------------
    def h_power(self, side: int) -> float:
        """Exponent q with h(k) ~ k^q at k = 0."""
        return self._slopes[side].power + 0.5

    def h_derivatives(self, side: int, ks, order: int) -> np.ndarray:
        """Rows h^(0..order)(k) for the given data side."""
        ks = np.atleast_1d(np.asarray(ks, dtype=float))
        key = (side, order, ks.tobytes())
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        slope = self._slopes[side]
        if order > slope.order:
            raise MissingDerivative(f"h^({order}) needs V^({order + 1}) of side {side}")
        F = transform_many(slope, ks, tuple(range(order + 1)), self.cfg)
        out = np.empty_like(F)
        for i in range(order + 1):
            acc = np.zeros_like(ks)
            for m in range(i + 1):
                q = i - m
                acc = acc + math.comb(i, m) * _falling(0.5, q) * (-1.0) ** q * (1.0 - ks) ** (0.5 - q) * F[m]
            out[i] = acc
        if len(self._memo) > 4096:
            self._memo.clear()
        self._memo[key] = out
        return out

    def term(self, side: int, a: float, b: float, level: int = 0) -> dict[str, float]:
        """T and its partials in (a, b) up to total order ``level``."""
        comps = _LEVELS[level]
        if a == 0.0:
            return {name: 0.0 for name in comps}
        eps = (1.0 - a) - b
        power = self.h_power(side)
        coeffs = {name: [float(c) for c in derivative_coefficients(j)] for name, (_, j) in comps.items()}
        cs = [_kernel_constant(m) for m in range(2 * level + 1)]

        def regular(s):
            k = a - s
            e = eps + s
            h = self.h_derivatives(side, k, level)
            rows = []
            for name, (p, j) in comps.items():
                acc = np.zeros_like(s)
                for r, ar in enumerate(coeffs[name]):
                    if not ar:
                        continue
                    g = np.zeros_like(s)
                    for i in range(r + 1):
                        g = g + math.comb(r, i) * h[i] * cs[p + r - i] * e ** (-0.5 - p - r + i)
                    acc = acc + ar * k**r * g
                rows.append(acc * k ** (-power))
            return np.stack(rows)

        # weight s^(-1/2) at the kernel end, k^power at the corner end
        raw = integrate_weighted(regular, 0.0, a, EndpointExponents(0.5, -power), self.cfg)
        return {name: float(v) * a ** (-j) / math.pi for (name, (_, j)), v in zip(comps.items(), raw)}

    # -- public evaluation -----------------------------------------------------
    def _check(self, p: TrianglePoint) -> None:
        if 1.0 - p.x - p.y < self.eps_min:
            raise DomainError(
                f"({p.x}, {p.y}) lies within {self.eps_min} of the diagonal; use the asymptotic expansion"
            )

    def evaluate(self, p) -> float:
        p = _point(p)
        if p.y == 0.0:
            return float(np.asarray(self.data.v0.func(np.array([p.x])))[0])
        if p.x == 0.0:
            return float(np.asarray(self.data.v1.func(np.array([p.y])))[0])
        self._check(p)
        return self.term(0, p.x, p.y)["T"] + self.term(1, p.y, p.x)["T"]

    def _interior(self, p) -> TrianglePoint:
        p = _point(p)
        if not p.interior:
            raise DomainError(f"derivatives need an interior point, got ({p.x}, {p.y})")
        self._check(p)
        return p

    def evaluate_gradient(self, p) -> tuple[float, float]:
        p = self._interior(p)
        t0 = self.term(0, p.x, p.y, 1)
        t1 = self.term(1, p.y, p.x, 1)
        return t0["Ta"] + t1["Tb"], t0["Tb"] + t1["Ta"]

    def evaluate_second(self, p) -> tuple[float, float, float]:
        """(V_xx, V_xy, V_yy)."""
        p = self._interior(p)
        if self.data.order < 3:
            raise MissingDerivative("second derivatives need V_0''' and V_1'''")
        t0 = self.term(0, p.x, p.y, 2)
        t1 = self.term(1, p.y, p.x, 2)
        return t0["Taa"] + t1["Tbb"], t0["Tab"] + t1["Tab"], t0["Tbb"] + t1["Taa"]

    def evaluate_all(self, p) -> dict[str, float]:
        """V with first and second partials from one pass per term."""
        p = self._interior(p)
        t0 = self.term(0, p.x, p.y, 2)
        t1 = self.term(1, p.y, p.x, 2)
        return {
            "V": t0["T"] + t1["T"],
            "Vx": t0["Ta"] + t1["Tb"],
            "Vy": t0["Tb"] + t1["Ta"],
            "Vxx": t0["Taa"] + t1["Tbb"],
            "Vxy": t0["Tab"] + t1["Tab"],
            "Vyy": t0["Tbb"] + t1["Taa"],
        }


def evaluate(field: SolutionField, p) -> float:
    return field.evaluate(p)


def evaluate_gradient(field: SolutionField, p) -> tuple[float, float]:
    return field.evaluate_gradient(p)


def evaluate_second(field: SolutionField, p) -> tuple[float, float, float]:
    return field.evaluate_second(p)


def _grid_row(field: SolutionField, x: float, y: float, eps_min: float, second: bool) -> GridRow:
    nan = math.nan
    if x < 0 or y < 0 or x + y >= 1.0 - eps_min:
        return GridRow(x, y, nan, nan, nan, nan, "skipped_diagonal")
    if x == 0.0 or y == 0.0:
        return GridRow(x, y, field.evaluate((x, y)), nan, nan, nan, "axis_no_derivatives")
    try:
        if second:
            r = field.evaluate_all((x, y))
            return GridRow(x, y, r["V"], r["Vx"], r["Vy"], r["Vxy"])
        v = field.evaluate((x, y))
        vx, vy = field.evaluate_gradient((x, y))
        return GridRow(x, y, v, vx, vy)
    except ArithmeticError as exc:
        return GridRow(x, y, nan, nan, nan, nan, f"numerical_failure: {exc}")


def evaluate_grid(field: SolutionField, grid: GridSpec, second: bool = False, threads: int = 1) -> list[GridRow]:
    """Rows in grid iteration order; failures are flagged per row."""
    nodes = list(grid.nodes())
    if threads <= 1:
        return [_grid_row(field, x, y, grid.eps_min, second) for x, y in nodes]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda n: _grid_row(field, n[0], n[1], grid.eps_min, second), nodes))
