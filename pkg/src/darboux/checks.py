"""Named verification suites shared by the CLI and the test-suite.

Each check reports a measured value against a threshold; a check passes
when value <= threshold (or, for boolean checks, when value is 1).
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np
from scipy.special import beta as beta_fn

from . import abel, asymptotics, oracle
from .abel import SingularFunction
from .data import khan_penrose_data, polynomial_data, power_data, zero_data
from .goursat import GridSpec, SolutionField, evaluate_grid
from .quadrature import DEFAULT, QuadratureConfig
from .weyl import WaveProfile, inverse_map, map_coordinates, weyl_direct, weyl_from_derivatives, weyl_series


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    threshold: float
    passed: bool

    def as_json(self) -> dict:
        d = asdict(self)
        d["pass"] = d.pop("passed")
        for key in ("value", "threshold"):
            if not math.isfinite(d[key]):
                d[key] = repr(d[key])
        return d


def _le(name: str, value: float, threshold: float) -> Check:
    value = float(value)
    return Check(name, value, threshold, bool(math.isfinite(value) and value <= threshold))


def _flag(name: str, ok: bool) -> Check:
    return Check(name, 1.0 if ok else 0.0, 1.0, bool(ok))


def _rel(a, b) -> float:
    a, b = np.asarray(a, float), np.asarray(b, float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def power_function(alpha: float) -> SingularFunction:
    """k^(-alpha) with two derivatives."""
    return SingularFunction(
        lambda k: k ** (-alpha),
        alpha,
        (lambda k: -alpha * k ** (-alpha - 1), lambda k: alpha * (alpha + 1) * k ** (-alpha - 2)),
    )


# -- abel ---------------------------------------------------------------------


def abel_suite(cfg: QuadratureConfig = DEFAULT) -> list[Check]:
    out = []
    worst = 0.0
    for a in (0.0, 0.25, 0.5, 0.75):
        xs = np.array([0.1, 0.5, 0.9])
        got = abel.transform_many(power_function(a), xs, (0,), cfg)[0]
        want = beta_fn(1 - a, 0.5) * xs ** (0.5 - a)
        worst = max(worst, _rel(got, want))
    out.append(_le("abel.beta_identity", worst, 1e-9))

    h = SingularFunction(lambda k: 1 + k * k, 0.0, (lambda k: 2 * k, lambda k: 2 + 0 * k, lambda k: 0 * k))
    f = abel.transformed(h, 1, cfg)
    ks = np.linspace(0.05, 0.95, 10)
    err = max(abs(abel.invert(f, k, cfg) - (1 + k * k)) for k in ks)
    out.append(_le("abel.inversion_roundtrip", err, 1e-7))

    worst = 0.0
    step = 1e-4
    for a in (0.0, 0.25):
        hf = power_function(a)
        for x in (0.3, 0.6):
            d = abel.transform_derivative(hf, x, 1, cfg)
            vals = abel.transform_many(hf, [x - 2 * step, x - step, x + step, x + 2 * step], (0,), cfg)[0]
            fd = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * step)
            worst = max(worst, abs(d - fd) / abs(d))
    out.append(_le("abel.derivative_vs_fd", worst, 1e-5))
    return out


# -- goursat ------------------------------------------------------------------


def khan_penrose_grid_error(cfg: QuadratureConfig = DEFAULT, threads: int = 1) -> float:
    field = SolutionField(khan_penrose_data(), cfg)
    grid = GridSpec(0.05, 0.85, 10, 0.05, 0.85, 10, eps_min=0.1 - 1e-12)
    rows = [r for r in evaluate_grid(field, grid, threads=threads) if r.x + r.y <= 0.9 + 1e-12]
    return max(abs(r.v - oracle.khan_penrose((r.x, r.y))) for r in rows)


def _derivative_triple(field: SolutionField):
    def triple(x, y):
        d = field.evaluate_all((x, y))
        return d["Vx"], d["Vy"], d["Vxy"]

    return triple


def goursat_suite(cfg: QuadratureConfig = DEFAULT, threads: int = 1) -> list[Check]:
    out = [_le("goursat.khan_penrose_grid_max_abs", khan_penrose_grid_error(cfg, threads), 1e-8)]

    poly = polynomial_data([0, 1], [0, 0, 1])
    pf = SolutionField(poly, cfg, eps_min=1e-12)
    xs = np.linspace(0.0, 0.9, 10)
    axis = max(abs(pf.evaluate((x, 0.0)) - x * x) for x in xs)
    out.append(_le("goursat.trace_on_axis", axis, 0.0))
    near = max(abs(pf.evaluate((x, 1e-9)) - x * x) for x in xs)
    out.append(_le("goursat.trace_near_axis", near, 1e-6))

    pts = oracle.interior_grid(7)
    for label, data in (("khan_penrose", khan_penrose_data()), ("polynomial", poly)):
        field = SolutionField(data, cfg)
        rep = oracle.residual_check(lambda x, y: field.evaluate((x, y)), pts, derivatives=_derivative_triple(field))
        out.append(_le(f"goursat.residual_fd.{label}", rep.fd.max_rel, 1e-5))
        out.append(_le(f"goursat.residual_derivative.{label}", rep.derivative.max_rel, 1e-6))

    worst = max(abs(pf.evaluate(p) - oracle.brute_force_solution(poly, p)) for p in [(0.3, 0.4), (0.1, 0.6), (0.5, 0.2)])
    out.append(_le("goursat.brute_force_polynomial", worst, 1e-7))

    a, b = 1.7, -0.4
    kp = khan_penrose_data()
    mix = SolutionField(kp.combine(a, poly, b), cfg)
    kf = SolutionField(kp, cfg)
    lin = max(abs(mix.evaluate(p) - a * kf.evaluate(p) - b * pf.evaluate(p)) for p in [(0.2, 0.3), (0.6, 0.1)])
    out.append(_le("goursat.superposition", lin, 1e-10))

    asym = power_data(0.5, [1.0, 0.3], [0.0, -0.5, 1.0])
    f1, f2 = SolutionField(asym, cfg), SolutionField(asym.swapped(), cfg)
    sw = max(abs(f1.evaluate((x, y)) - f2.evaluate((y, x))) for x, y in [(0.2, 0.3), (0.6, 0.1), (0.05, 0.7)])
    out.append(_le("goursat.swap_symmetry", sw, 1e-10))
    return out


# -- asymptotics --------------------------------------------------------------


def asymptotics_suite(cfg: QuadratureConfig = DEFAULT) -> list[Check]:
    out = []
    kp = SolutionField(khan_penrose_data(), cfg, eps_min=1e-9)
    worst_fg = worst_ab = 0.0
    for x in (0.25, 0.5, 0.75):
        tb = asymptotics.expansion(kp, x, 2, cfg)
        ref = oracle.khan_penrose_expansion(x)
        ab = oracle.khan_penrose_AB(x)
        worst_fg = max(worst_fg, np.max(np.abs(np.r_[tb.f, tb.g] - np.r_[ref["f"], ref["g"]])))
        worst_ab = max(worst_ab, np.max(np.abs(np.r_[tb.A, tb.B] - np.r_[ab["A"], ab["B"]])))
    out.append(_le("asymptotics.khan_penrose_coefficients", worst_fg, 1e-8))
    out.append(_le("asymptotics.khan_penrose_AB", worst_ab, 1e-8))

    rec = max(
        abs(asymptotics.c_constant(j) - asymptotics.c_constant(j - 1) * (2 * j - 1) / 2) / asymptotics.c_constant(j)
        for j in range(1, 13)
    )
    out.append(_le("asymptotics.c_recurrence", rec, 4e-16))

    worst = 0.0
    for data in (khan_penrose_data(), polynomial_data([0, 1], [0, 0, 1])):
        field = SolutionField(data, cfg)
        for x in (0.3, 0.5, 0.7):
            lp = oracle.log_potential_coefficients(field, x)
            tb = asymptotics.expansion(field, x, 1, cfg)
            worst = max(worst, abs(lp["f0"] - tb.f[0]), abs(lp["f1"] - tb.f[1]), abs(lp["g0"] - tb.g[0]), abs(lp["g1"] - tb.g[1]))
    out.append(_le("asymptotics.log_potential_cross_check", worst, 1e-7))

    asym = power_data(0.5, [1.0, 0.3], [0.0, -0.5, 1.0])
    t1 = asymptotics.expansion(SolutionField(asym, cfg), 0.4, 2, cfg)
    t2 = asymptotics.expansion(SolutionField(asym.swapped(), cfg), 0.4, 2, cfg)
    sw = max(np.max(np.abs(np.subtract(t1.g_swapped, t2.g))), np.max(np.abs(np.subtract(t1.f_swapped, t2.f))))
    out.append(_le("asymptotics.swap_consistency", sw, 1e-10))

    tb = asymptotics.expansion(kp, 0.5, 2, cfg)
    const = 0.0
    for e in np.geomspace(1e-3, 1e-2, 5):
        r = oracle.khan_penrose((0.5, 0.5 - e)) - asymptotics.evaluate_expansion(tb, e)
        const = max(const, abs(r) / (e**3 * abs(math.log(e))))
    out.append(_le("asymptotics.remainder_constant_J2", const, 10.0))

    # at x = 1/4 none of the Khan-Penrose g_j vanish, so the slope is J+1
    ref = lambda x, y: oracle.khan_penrose((x, y))
    for J in (0, 1, 2):
        fit = asymptotics.remainder_order_fit(kp, 0.25, J, (1e-3, 1e-2), cfg, reference=ref)
        dev = abs(fit.slope - (J + 1)) if fit.status == "fit" else 0.0
        out.append(_le(f"asymptotics.remainder_order_J{J}_x0.25", dev, 0.15))
    return out


# -- weyl -----------------------------------------------------------------------


def _kp_weyl(p, profile):
    d = lambda i, j: oracle.khan_penrose(p, (i, j))
    return weyl_from_derivatives(p[0], p[1], d(1, 0), d(0, 1), d(2, 0), d(0, 2), profile)


def _rel_components(a, b) -> float:
    return max(abs(u - v) / abs(v) for u, v in ((a.psi0, b.psi0), (a.psi2, b.psi2), (a.psi4, b.psi4)))


def series_gaps(x: float = 0.5, eps=(1e-2, 3e-3, 1e-3), cfg: QuadratureConfig = DEFAULT) -> list[float]:
    profile = WaveProfile(1.0, 1.0, 2.0, 2.0)
    field = SolutionField(khan_penrose_data(), cfg, eps_min=1e-9)
    ws = weyl_series(field, x, 2, profile, cfg)
    return [_rel_components(ws.components(e), weyl_direct(field, (x, 1 - x - e), profile)) for e in eps]


def weyl_suite(cfg: QuadratureConfig = DEFAULT) -> list[Check]:
    out = []
    profile = WaveProfile(1.0, 1.0, 2.0, 2.0)
    field = SolutionField(khan_penrose_data(), cfg)
    pts = [(0.3, 0.3), (0.1, 0.5), (0.6, 0.2), (0.2, 0.2), (0.45, 0.4)]
    out.append(_le("weyl.direct_vs_khan_penrose", max(_rel_components(weyl_direct(field, p, profile), _kp_weyl(p, profile)) for p in pts), 1e-6))

    gaps = series_gaps(cfg=cfg)
    out.append(_le("weyl.series_gap_eps1e-3", gaps[-1], 1e-2))
    out.append(_flag("weyl.series_gap_decreasing", all(b <= a * 1.05 for a, b in zip(gaps, gaps[1:]))))

    asym = power_data(0.5, [1.0, 0.3], [0.0, -0.5, 1.0])
    ws = weyl_series(SolutionField(asym, cfg), 0.4, 4, profile, cfg)
    tb = asymptotics.expansion(SolutionField(asym, cfg), 0.4, 4, cfg)
    rec = max(
        max(abs(ws.gamma[j] - (j * tb.g[j] + tb.f[j])), abs(ws.G[j] - ((j - 1) * ws.gamma[j] + j * tb.f[j])))
        for j in range(5)
    )
    rec = max(rec, abs(ws.gamma[0] - tb.f[0]), abs(ws.G[0] + tb.f[0]))
    out.append(_le("weyl.gamma_G_recurrences", rec, 1e-12))

    prof = WaveProfile(1.3, 0.7, 2.0, 3.0)
    w1 = weyl_direct(SolutionField(asym, cfg), (0.2, 0.35), prof)
    w2 = weyl_direct(SolutionField(asym.swapped(), cfg), (0.35, 0.2), prof.swapped())
    ex = max(abs(w1.psi0 - w2.psi4), abs(w1.psi4 - w2.psi0), abs(w1.psi2 - w2.psi2)) / max(abs(w1.psi0), abs(w1.psi2), abs(w1.psi4))
    out.append(_le("weyl.exchange_symmetry", ex, 1e-9))

    zf = SolutionField(zero_data(), cfg)
    zw = weyl_direct(zf, (0.3, 0.4), WaveProfile())
    out.append(_le("weyl.zero_data_psi2", max(abs(zw.psi2 + 1 / 0.3**2), abs(zw.psi0), abs(zw.psi4)), 1e-12))

    rt = 0.0
    for p in [(0.1, 0.2), (0.4, 0.5), (0.7, 0.05)]:
        u, v, f, g = map_coordinates(p, prof)
        q = inverse_map(u, v, prof)
        rt = max(rt, abs(q.x - p[0]), abs(q.y - p[1]), abs((f + g) - (1 - p[0] - p[1])))
    out.append(_le("weyl.coordinate_roundtrip", rt, 1e-12))
    return out


SUITES: dict[str, Callable[..., list[Check]]] = {
    "abel": abel_suite,
    "goursat": goursat_suite,
    "asymptotics": asymptotics_suite,
    "weyl": weyl_suite,
}


def run_suite(name: str, cfg: QuadratureConfig = DEFAULT, threads: int = 1) -> dict:
    if name != "all" and name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    names = list(SUITES) if name == "all" else [name]
    start = time.perf_counter()
    checks: list[Check] = []
    for n in names:
        fn = SUITES[n]
        checks.extend(fn(cfg, threads) if n == "goursat" else fn(cfg))
    return {
        "suite": name,
        "passed": all(c.passed for c in checks),
        "elapsed_s": round(time.perf_counter() - start, 3),
        "checks": [c.as_json() for c in checks],
    }
