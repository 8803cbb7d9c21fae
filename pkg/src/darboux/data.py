"""Boundary data {V_0, V_1} for the Goursat problem, plus builtin families."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .abel import SingularFunction

Func = Callable[[np.ndarray], np.ndarray]

MAX_ORDER = 8


def _falling(a: float, n: int) -> float:
    out = 1.0
    for i in range(n):
        out *= a - i
    return out


@dataclass(frozen=True)
class BoundaryData:
    """Traces V(x, 0) = V_0(x) and V(0, y) = V_1(y) with derivatives.

    ``v0`` and ``v1`` hold the traces; their ``derivatives`` supply V_0',
    V_0'', ... in order. ``alpha`` is the corner exponent of the slopes
    (x^alpha V_0' bounded), shared or given per side.
    """

    v0: SingularFunction
    v1: SingularFunction
    alpha: float | tuple[float, float] = 0.0
    name: str = "custom"

    @property
    def order(self) -> int:
        return min(self.v0.order, self.v1.order)

    def side_alpha(self, side: int) -> float:
        if isinstance(self.alpha, tuple):
            return self.alpha[side]
        return self.alpha

    def trace(self, side: int) -> SingularFunction:
        return self.v0 if side == 0 else self.v1

    def slope(self, side: int) -> SingularFunction:
        """V_0' (side 0) or V_1' (side 1) as a singular function."""
        tr = self.trace(side)
        if tr.order < 1:
            raise ValueError("boundary data must supply at least one derivative")
        return SingularFunction(
            tr.derivatives[0],
            alpha=self.side_alpha(side),
            derivatives=tr.derivatives[1:],
            power=tr.power - 1.0,
        )

    def swapped(self) -> "BoundaryData":
        alpha = self.alpha[::-1] if isinstance(self.alpha, tuple) else self.alpha
        return BoundaryData(self.v1, self.v0, alpha, f"swap({self.name})")

    def combine(self, a: float, other: "BoundaryData", b: float) -> "BoundaryData":
        """The data a*self + b*other."""

        def lin(f, g):
            return lambda t: a * f(t) + b * g(t)

        def mix(s, o):
            n = min(s.order, o.order)
            return SingularFunction(
                lin(s.func, o.func),
                0.0,
                tuple(lin(s.derivative(j), o.derivative(j)) for j in range(1, n + 1)),
                power=min(s.power, o.power),
            )

        alpha = (
            max(self.side_alpha(0), other.side_alpha(0)),
            max(self.side_alpha(1), other.side_alpha(1)),
        )
        return BoundaryData(mix(self.v0, other.v0), mix(self.v1, other.v1), alpha, f"{a}*{self.name}+{b}*{other.name}")

    def validate(self, tol: float = 1e-8) -> None:
        """Check V_0(0) = V_1(0) = 0 and the weighted corner bounds."""
        for side in (0, 1):
            tr = self.trace(side)
            v = float(np.asarray(tr.func(np.array([0.0])))[0])
            if not abs(v) <= tol:
                raise ValueError(f"V_{side}(0) = {v} must vanish")
            sl = self.slope(side)
            head = SingularFunction(sl.func, sl.alpha, sl.derivatives[:1], sl.power)
            try:
                head.check_corner()
            except ValueError as exc:
                raise ValueError(f"V_{side}: {exc}") from None


def _trace(funcs: Sequence[Func], power: float) -> SingularFunction:
    return SingularFunction(funcs[0], 0.0, tuple(funcs[1:]), power=power)


def _zero(t):
    return np.zeros_like(np.asarray(t, dtype=float))


def zero_data() -> BoundaryData:
    tr = _trace([_zero] * (MAX_ORDER + 1), 1.0)
    return BoundaryData(tr, tr, 0.0, "zero")


def _poly_trace(coeffs: Sequence[float]) -> SingularFunction:
    """V(t) = sum_i coeffs[i] t^(i+1)."""
    p = np.polynomial.Polynomial([0.0, *coeffs])
    funcs = []
    for j in range(MAX_ORDER + 1):
        q = p.deriv(j) if j else p
        funcs.append(lambda t, q=q: q(np.asarray(t, dtype=float)))
    return _trace(funcs, 1.0)


def polynomial_data(c0: Sequence[float], c1: Sequence[float] | None = None) -> BoundaryData:
    """V_0(x) = sum c0[i] x^(i+1), V_1(y) = sum c1[i] y^(i+1); alpha = 0."""
    c1 = c0 if c1 is None else c1
    return BoundaryData(_poly_trace(c0), _poly_trace(c1), 0.0, f"poly:{list(c0)}|{list(c1)}")


def _power_trace(alpha: float, coeffs: Sequence[float]) -> SingularFunction:
    """V(t) = sum_i coeffs[i] t^(i + 1 - alpha)."""
    exps = [i + 1.0 - alpha for i in range(len(coeffs))]
    funcs = []
    for j in range(MAX_ORDER + 1):
        facs = [c * _falling(e, j) for c, e in zip(coeffs, exps)]

        def f(t, facs=facs, j=j):
            t = np.asarray(t, dtype=float)
            out = np.zeros_like(t)
            for c, e in zip(facs, exps):
                if c:
                    out = out + c * t ** (e - j)
            return out

        funcs.append(f)
    return _trace(funcs, 1.0 - alpha)


def power_data(alpha: float, c0: Sequence[float], c1: Sequence[float] | None = None) -> BoundaryData:
    """Traces sum c[i] t^(i+1-alpha); the slopes blow up like t^(-alpha)."""
    c1 = c0 if c1 is None else c1
    return BoundaryData(_power_trace(alpha, c0), _power_trace(alpha, c1), alpha, f"power:{alpha}:{list(c0)}|{list(c1)}")


def _khan_penrose_trace() -> SingularFunction:
    # V(t) = -ln((1+sqrt t)/(1-sqrt t)),  V'(t) = -t^(-1/2) (1-t)^(-1)
    def value(t):
        r = np.sqrt(np.asarray(t, dtype=float))
        return -2.0 * np.arctanh(r)

    def deriv(m):
        # m-th derivative of V' by Leibniz on t^(-1/2) * (1-t)^(-1)
        terms = [(math.comb(m, i) * _falling(-0.5, i) * math.factorial(m - i), i) for i in range(m + 1)]

        def f(t):
            t = np.asarray(t, dtype=float)
            out = np.zeros_like(t)
            for c, i in terms:
                out = out + c * t ** (-0.5 - i) * (1.0 - t) ** (-1.0 - (m - i))
            return -out

        return f

    return _trace([value] + [deriv(m) for m in range(MAX_ORDER)], 0.5)


def khan_penrose_data() -> BoundaryData:
    """Traces of the Khan-Penrose solution; alpha = 1/2."""
    tr = _khan_penrose_trace()
    return BoundaryData(tr, tr, 0.5, "khan_penrose")


_EXPR_CHARS = re.compile(r"[0-9A-Za-z_+\-*/^(). eE]*")


def expression_data(expr0: str, expr1: str, alpha: float, order: int = MAX_ORDER) -> BoundaryData:
    """Data from arithmetic expressions in ``x`` (sqrt, ln, exp, ^ allowed).

    The corner exponent must be declared; it is not inferred.
    """
    import sympy as sp

    x = sp.Symbol("x", positive=True)
    allowed = {"x": x, "sqrt": sp.sqrt, "ln": sp.log, "log": sp.log, "exp": sp.exp, "pi": sp.pi}

    def build(src: str) -> SingularFunction:
        bad = set(re.findall(r"[A-Za-z_]+", src)) - set(allowed)
        if bad or not _EXPR_CHARS.fullmatch(src):
            raise ValueError(f"expression {src!r} uses unsupported tokens {sorted(bad)}")
        expr = sp.sympify(src.replace("^", "**"), locals=allowed)
        if expr.free_symbols - {x}:
            raise ValueError(f"unknown symbols in {src!r}: {expr.free_symbols - {x}}")
        funcs = []
        for j in range(order + 1):
            fn = sp.lambdify(x, sp.diff(expr, x, j) if j else expr, "numpy")
            funcs.append(lambda t, fn=fn: np.broadcast_to(fn(np.asarray(t, dtype=float)), np.shape(t)).astype(float))
        return _trace(funcs, 1.0 - alpha)

    return BoundaryData(build(expr0), build(expr1), alpha, f"expr:{expr0}|{expr1}")
