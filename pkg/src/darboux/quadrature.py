"""Adaptive Gauss-Jacobi quadrature for weakly singular integrands.

Every integral is written as

    int_a^b g(t) (t - a)^(-mu) (b - t)^(-nu) dt

with ``g`` regular. Panels touching a singular endpoint use Gauss-Jacobi
nodes carrying that endpoint's weight; interior panels use Gauss-Legendre.
The error of a panel is estimated from the difference between an n-point
and a 2n-point rule, and the panel with the largest estimate is bisected
until the global estimate meets the tolerance.

Integrands are vectorised: ``g(t)`` receives a 1-D array of nodes and
returns an array whose last axis matches ``t``. Leading axes are treated as
independent components (a batch) sharing one adaptive partition.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

__all__ = [
    "QuadratureConfig",
    "EndpointExponents",
    "NonConvergence",
    "InvalidExponent",
    "integrate_weighted",
    "integrate_singular",
    "integrate_smooth",
    "integrate_subtracted_tail",
]

_EPS = np.finfo(float).eps
_MAX_PANELS_PER_LEVEL = 64


class NonConvergence(ArithmeticError):
    """The error estimate stayed above tolerance at maximal refinement."""


class InvalidExponent(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_subdivisions: int = 24
    base_nodes: int = 32

    def __post_init__(self):
        if not self.rel_tol > 0 or not self.abs_tol > 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")
        if self.base_nodes < 2:
            raise ValueError("base_nodes must be >= 2")

    @classmethod
    def from_env(cls, **overrides) -> "QuadratureConfig":
        """Default config, with ``DARBOUX_QUAD_RTOL`` overriding rel_tol."""
        cfg = cls(**overrides)
        rtol = os.environ.get("DARBOUX_QUAD_RTOL")
        if rtol:
            cfg = replace(cfg, rel_tol=float(rtol))
        return cfg

    def tightened(self, factor: float) -> "QuadratureConfig":
        return replace(self, rel_tol=self.rel_tol * factor, abs_tol=self.abs_tol * factor)


DEFAULT = QuadratureConfig()


@dataclass(frozen=True)
class EndpointExponents:
    """Integrand behaves like (t-a)^(-left) and (b-t)^(-right)."""

    left: float = 0.0
    right: float = 0.0

    def __post_init__(self):
        if not (self.left < 1 and self.right < 1):
            raise InvalidExponent(
                f"endpoint exponents must be < 1, got ({self.left}, {self.right})"
            )


_REGULAR = EndpointExponents()


@lru_cache(maxsize=256)
def _reference_rule(n: int, mu: float, nu: float) -> tuple[np.ndarray, np.ndarray]:
    # weight (1+s)^(-mu) (1-s)^(-nu) on [-1, 1]
    if mu == 0.0 and nu == 0.0:
        s, w = roots_legendre(n)
    else:
        s, w = roots_jacobi(n, -nu, -mu)
    s.setflags(write=False)
    w.setflags(write=False)
    return s, w


@dataclass
class _Panel:
    lo: float
    hi: float
    depth: int
    value: np.ndarray
    error: np.ndarray
    l1: np.ndarray


def _panel(g, lo, hi, depth, a, b, exps, n):
    """Integrate one panel with n- and 2n-point rules."""
    mu = exps.left if lo == a else 0.0
    nu = exps.right if hi == b else 0.0
    half = 0.5 * (hi - lo)
    results = []
    for m in (n, 2 * n):
        s, w = _reference_rule(m, mu, nu)
        t = lo + half * (1.0 + s)
        # distances measured from the panel ends avoid cancellation near b
        wt = w * half ** (1.0 - mu - nu)
        if lo != a and exps.left != 0.0:
            wt = wt * (t - a) ** (-exps.left)
        if hi != b and exps.right != 0.0:
            wt = wt * (b - t) ** (-exps.right)
        out = g(t)
        if isinstance(out, tuple):
            vals, mags = (np.asarray(o, dtype=float) for o in out)
        else:
            vals = np.asarray(out, dtype=float)
            mags = np.abs(vals)
        results.append((vals @ wt, mags @ np.abs(wt)))
    (q1, _), (q2, l1) = results
    return _Panel(lo, hi, depth, q2, np.abs(q2 - q1), l1)


def integrate_weighted(
    g: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    exps: EndpointExponents = _REGULAR,
    cfg: QuadratureConfig = DEFAULT,
):
    """Integrate ``g(t) (t-a)^(-left) (b-t)^(-right)`` over (a, b).

    Returns a float for scalar-valued ``g`` and an array otherwise. ``g``
    may instead return ``(values, magnitudes)``, where magnitudes bound the
    summands that cancelled into values; the roundoff floor then uses them.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a}, b={b}")
    if not isinstance(exps, EndpointExponents):
        exps = EndpointExponents(*exps)
    n = cfg.base_nodes
    panels = [_panel(g, a, b, 0, a, b, exps, n)]
    max_panels = _MAX_PANELS_PER_LEVEL * cfg.max_subdivisions
    while True:
        value = sum(p.value for p in panels)
        error = sum(p.error for p in panels)
        l1 = sum(p.l1 for p in panels)
        tol = np.maximum(np.maximum(cfg.abs_tol, cfg.rel_tol * np.abs(value)), 50 * _EPS * l1)
        if np.all(error <= tol):
            break
        scores = [np.max(p.error / tol) if p.depth < cfg.max_subdivisions else -1.0 for p in panels]
        worst = int(np.argmax(scores))
        if scores[worst] < 0 or len(panels) >= max_panels:
            raise NonConvergence(
                f"quadrature on ({a}, {b}) stalled at error {np.max(error):.3e} "
                f"> tolerance {np.min(tol):.3e} after {len(panels)} panels"
            )
        p = panels.pop(worst)
        mid = 0.5 * (p.lo + p.hi)
        panels.append(_panel(g, p.lo, mid, p.depth + 1, a, b, exps, n))
        panels.append(_panel(g, mid, p.hi, p.depth + 1, a, b, exps, n))
    if np.ndim(value) == 0:
        return float(value)
    return value


def integrate_singular(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    exps: EndpointExponents,
    cfg: QuadratureConfig = DEFAULT,
):
    """Improper integral of ``f`` over (a, b) given its endpoint exponents.

    ``f`` is the full integrand; its regular part ``f (t-a)^left (b-t)^right``
    is formed internally and must be bounded.
    """
    if not isinstance(exps, EndpointExponents):
        exps = EndpointExponents(*exps)

    def regular(t):
        return f(t) * (t - a) ** exps.left * (b - t) ** exps.right

    return integrate_weighted(regular, a, b, exps, cfg)


def integrate_smooth(f, a: float, b: float, cfg: QuadratureConfig = DEFAULT):
    return integrate_weighted(f, a, b, _REGULAR, cfg)


def _binomial_half(lmax: int) -> np.ndarray:
    # coefficients of (1 - t)^(-1/2): C(2l, l) / 4^l
    out = np.empty(lmax + 1)
    out[0] = 1.0
    for l in range(1, lmax + 1):
        out[l] = out[l - 1] * (2 * l - 1) / (2 * l)
    return out


_SERIES_SWITCH = 0.5
_SERIES_TERMS = 80


def _tail_remainder(t: np.ndarray, j: int, sign: float) -> np.ndarray:
    """(1 + sign*t)^(-1/2) minus its Taylor polynomial of degree j."""
    b = _binomial_half(j + _SERIES_TERMS)
    coef = b * (-sign) ** np.arange(b.size)
    out = np.empty_like(t)
    small = t < _SERIES_SWITCH
    ts = t[small]
    # tail of the series, summed from the far end for accuracy
    acc = np.zeros_like(ts)
    for l in range(b.size - 1, j, -1):
        acc = acc * ts + coef[l]
    out[small] = acc * ts ** (j + 1)
    tl = t[~small]
    poly = np.zeros_like(tl)
    for l in range(j, -1, -1):
        poly = poly * tl + coef[l]
    out[~small] = (1.0 + sign * tl) ** -0.5 - poly
    return out


def integrate_subtracted_tail(j: int, kernel_id: str, cfg: QuadratureConfig = DEFAULT) -> float:
    """Convergent integral over (1, inf) of v^j times a kernel minus its
    first j+1 inverse powers.

    ``kernel_id`` is ``"K0"`` for 1/(sqrt(v) sqrt(v+1)) or ``"K1"`` for
    1/(sqrt(v-1) sqrt(v)). The substitution v = 1/t maps the range to (0, 1),
    where the integrand is t^(-j-1) times the Taylor remainder of
    (1 +- t)^(-1/2).
    """
    if j < 0:
        raise ValueError("j must be >= 0")
    kid = kernel_id.upper().replace("_LIKE", "")
    if kid == "K0":
        return integrate_smooth(lambda t: _tail_remainder(t, j, 1.0) * t ** (-j - 1.0), 0.0, 1.0, cfg)
    if kid == "K1":
        # series on (0, 1/2); on (1/2, 1) the (1-t)^(-1/2) part carries the
        # Jacobi weight and the subtracted polynomial is integrated apart
        b = _binomial_half(j)
        head = integrate_smooth(
            lambda t: _tail_remainder(t, j, -1.0) * t ** (-j - 1.0), 0.0, _SERIES_SWITCH, cfg
        )
        singular = integrate_weighted(
            lambda t: t ** (-j - 1.0), _SERIES_SWITCH, 1.0, EndpointExponents(0.0, 0.5), cfg
        )
        poly = 0.0
        for l in range(j + 1):
            p = l - j
            poly += b[l] * (-math.log(_SERIES_SWITCH) if p == 0 else (1.0 - _SERIES_SWITCH**p) / p)
        return head + singular - poly
    raise ValueError(f"unknown kernel {kernel_id!r}")
