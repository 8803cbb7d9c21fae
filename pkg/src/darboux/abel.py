"""Abel transform A h(x) = int_0^x h(k) (x-k)^(-1/2) dk and its calculus.

Derivatives never difference quadrature output. With M = k d/dk the identity
d/dx A h = x^-1 A((1/2 + M) h) iterates to

    (d/dx)^j A h = x^-j A( prod_{i<j} (M + 1/2 - i) h ),

and M^m = sum_r S(m, r) k^r d^r/dk^r (Stirling numbers of the second kind),
so the j-th derivative is a single transform of sum_r a[j][r] k^r h^(r).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import DiagonalBlowup, MissingDerivative
from .quadrature import DEFAULT, EndpointExponents, QuadratureConfig, integrate_weighted

Func = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SingularFunction:
    """A function on (0, b) with an integrable algebraic corner singularity.

    ``alpha`` is the corner exponent: k^alpha h(k) extends continuously to 0.
    ``power`` is the leading power used to weight quadrature nodes
    (h ~ k^power near 0); it defaults to -alpha and may be larger, e.g. 1/2
    for a square-root onset. ``derivatives[j-1]`` is h^(j).
    """

    func: Func
    alpha: float = 0.0
    derivatives: tuple[Func, ...] = ()
    power: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError(f"alpha must lie in [0, 1), got {self.alpha}")
        object.__setattr__(self, "derivatives", tuple(self.derivatives))
        if self.power is None:
            object.__setattr__(self, "power", -self.alpha)
        if not self.power > -1.0:
            raise ValueError("power must exceed -1 for integrability")

    @property
    def order(self) -> int:
        return len(self.derivatives)

    def derivative(self, j: int) -> Func:
        if j == 0:
            return self.func
        if j > self.order:
            raise MissingDerivative(f"derivative of order {j} requested, only {self.order} supplied")
        return self.derivatives[j - 1]

    def __call__(self, k):
        return self.func(k)

    def check_corner(self, ks: Sequence[float] = (1e-3, 1e-6), growth: float = 10.0) -> None:
        """Spot-check that k^(alpha+j) h^(j)(k) stays bounded near 0.

        Bounded means no growth by more than ``growth`` between the probe
        points (ordered from far to near); an unbounded power shows up as a
        large ratio.
        """
        k = np.asarray(ks, dtype=float)
        for j in range(self.order + 1):
            vals = np.abs(k ** (self.alpha + j) * np.asarray(self.derivative(j)(k), dtype=float))
            if not np.all(np.isfinite(vals)) or vals[-1] > growth * max(vals[0], 1.0):
                raise ValueError(f"k^(alpha+{j}) h^({j}) is not bounded near 0: {vals}")


def constant(value: float) -> SingularFunction:
    c = float(value)
    zero = lambda k: np.zeros_like(np.asarray(k, dtype=float))
    return SingularFunction(lambda k: np.full_like(np.asarray(k, dtype=float), c), 0.0, (zero, zero, zero))


@lru_cache(maxsize=None)
def _stirling2(m: int, r: int) -> int:
    if m == r:
        return 1
    if r == 0 or r > m:
        return 0
    return r * _stirling2(m - 1, r) + _stirling2(m - 1, r - 1)


@lru_cache(maxsize=None)
def derivative_coefficients(j: int) -> tuple[Fraction, ...]:
    """Coefficients a_r with (d/dx)^j A h = x^-j A(sum_r a_r k^r h^(r))."""
    poly = [Fraction(1)]  # coefficients of M^m
    for i in range(j):
        shift = Fraction(1, 2) - i
        new = [Fraction(0)] * (len(poly) + 1)
        for m, c in enumerate(poly):
            new[m] += c * shift
            new[m + 1] += c
        poly = new
    return tuple(
        sum((c * _stirling2(m, r) for m, c in enumerate(poly)), Fraction(0)) for r in range(j + 1)
    )


def _derivative_integrand(h: SingularFunction, j: int):
    """psi = sum_r a[j][r] k^r h^(r), returned with sum_r |a[j][r] k^r h^(r)|.

    For h close to a pure power the terms cancel to leading order, so the
    magnitude is what sets the attainable accuracy.
    """
    coeffs = [float(a) for a in derivative_coefficients(j)]
    derivs = [h.derivative(r) for r in range(j + 1)]

    def psi(k):
        term = coeffs[0] * derivs[0](k)
        out, mag = term, np.abs(term)
        for r in range(1, j + 1):
            if coeffs[r]:
                term = coeffs[r] * k**r * derivs[r](k)
                out = out + term
                mag = mag + np.abs(term)
        return out, mag

    return psi


def transform_many(
    h: SingularFunction,
    xs,
    orders: Sequence[int] = (0,),
    cfg: QuadratureConfig = DEFAULT,
) -> np.ndarray:
    """(d/dx)^j A h at every x in ``xs`` for each j in ``orders``.

    Returns shape (len(orders), len(xs)). All values share one adaptive
    partition of the substituted variable u = k/x.
    """
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if xs.size == 0:
        return np.zeros((len(orders), 0))
    if np.any(xs <= 0):
        raise ValueError("Abel transform points must be positive")
    for j in orders:
        if j > h.order:
            raise MissingDerivative(f"order-{j} derivative of A h needs h^({j}), have {h.order}")
    psis = [_derivative_integrand(h, j) for j in orders]
    p = h.power

    def regular(u):
        k = np.multiply.outer(xs, u)
        scale = u ** (-p)
        parts = [psi(k) for psi in psis]
        return np.stack([v * scale for v, _ in parts]), np.stack([m * scale for _, m in parts])

    # A psi(x) = sqrt(x) int_0^1 psi(ux) (1-u)^(-1/2) du; u^p absorbed in the weight
    raw = integrate_weighted(regular, 0.0, 1.0, EndpointExponents(-p, 0.5), cfg)
    jj = np.asarray(orders, dtype=float)[:, None]
    return raw * np.sqrt(xs) * xs ** (-jj)


def transform(h: SingularFunction, x: float, cfg: QuadratureConfig = DEFAULT) -> float:
    return float(transform_many(h, [x], (0,), cfg)[0, 0])


def transform_derivative(h: SingularFunction, x: float, j: int, cfg: QuadratureConfig = DEFAULT) -> float:
    if j < 0:
        raise ValueError("derivative order must be >= 0")
    return float(transform_many(h, [x], (j,), cfg)[0, 0])


def transform_derivative_split(
    h: SingularFunction, x: float, delta: float | None = None, cfg: QuadratureConfig = DEFAULT
) -> float:
    """First derivative from the split form at 0 < delta < x.

    h(d)/sqrt(x-d) - 1/2 int_0^d h (x-k)^(-3/2) dk + int_d^x h'(k) (x-k)^(-1/2) dk.
    Used only to cross-validate :func:`transform_many`.
    """
    d = 0.5 * x if delta is None else delta
    if not 0.0 < d < x:
        raise ValueError("need 0 < delta < x")
    h1 = h.derivative(1)
    p = h.power
    near = integrate_weighted(
        lambda k: h.func(k) * k ** (-p) * (x - k) ** -1.5, 0.0, d, EndpointExponents(-p, 0.0), cfg
    )
    # h' on (d, x) is regular; keep the (x-k)^(-1/2) weight
    far = integrate_weighted(lambda s: h1(x - s), 0.0, x - d, EndpointExponents(0.5, 0.0), cfg)
    hd = float(np.asarray(h.func(np.array([d])))[0])
    return hd / math.sqrt(x - d) - 0.5 * near + far


def invert(f: SingularFunction, k: float, cfg: QuadratureConfig = DEFAULT) -> float:
    """Recover h from f = A h via h(k) = (1/pi) d/dk A f(k).

    The outer derivative uses the transform recursion on f, so ``f`` must
    carry its first derivative.
    """
    return transform_derivative(f, k, 1, cfg) / math.pi


def transform_with_parameter(
    h: SingularFunction,
    g: Callable[[float, np.ndarray], np.ndarray],
    x: float,
    y: float,
    cfg: QuadratureConfig = DEFAULT,
) -> float:
    """f(x, y) = int_0^x g(y, k) h(k) (x-k)^(-1/2) dk for (x, y) in Int D."""
    if not 1.0 - x - y > 0.0:
        raise DiagonalBlowup(f"1 - x - y must be positive at ({x}, {y})")
    if x <= 0.0:
        return 0.0
    p = h.power

    def regular(u):
        k = x * u
        return g(y, k) * h.func(k) * u ** (-p)

    return math.sqrt(x) * integrate_weighted(regular, 0.0, 1.0, EndpointExponents(-p, 0.5), cfg)


def transformed(h: SingularFunction, order: int = 1, cfg: QuadratureConfig = DEFAULT) -> SingularFunction:
    """A h as a SingularFunction with derivatives from the recursion."""

    def make(j):
        return lambda x: transform_many(h, np.atleast_1d(x), (j,), cfg)[0]

    return SingularFunction(
        make(0),
        alpha=max(0.0, h.alpha - 0.5),
        derivatives=tuple(make(j) for j in range(1, order + 1)),
        power=h.power + 0.5,
    )
