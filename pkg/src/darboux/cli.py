"""Command-line front end.

    darboux evaluate --config run.cfg --out grid.csv
    darboux expand   --config run.cfg --format json
    darboux weyl     --config run.cfg
    darboux verify   --suite all

Configuration files hold ``section.field = value`` lines; ``#`` starts a
comment. Unset fields keep their defaults. Exit codes: 0 success,
1 verification failure, 2 usage or configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
import typing
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from . import asymptotics, checks
from .data import BoundaryData, expression_data, khan_penrose_data, polynomial_data, power_data, zero_data
from .goursat import GridSpec, SolutionField, evaluate_grid
from .quadrature import QuadratureConfig
from .weyl import WaveProfile, weyl_direct, weyl_series

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class DataSpec:
    """kind: zero | khan_penrose | poly | power | expr.

    poly:  v0/v1 are comma-separated c_i with V = sum c_i t^(i+1)
    power: same, V = sum c_i t^(i+1-alpha)
    expr:  v0/v1 are expressions in x; alpha must be given
    """

    kind: str = "khan_penrose"
    v0: str = ""
    v1: str = ""
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in ("zero", "khan_penrose", "poly", "power", "expr"):
            raise ValueError(f"unknown data kind {self.kind!r}")

    def build(self) -> BoundaryData:
        if self.kind == "zero":
            return zero_data()
        if self.kind == "khan_penrose":
            return khan_penrose_data()
        if self.kind == "expr":
            return expression_data(self.v0 or "0", self.v1 or self.v0 or "0", self.alpha)
        c0 = _floats(self.v0) or (0.0,)
        c1 = _floats(self.v1) if self.v1 else c0
        if self.kind == "poly":
            return polynomial_data(c0, c1)
        return power_data(self.alpha, c0, c1)


@dataclass(frozen=True)
class ExpandSpec:
    x: tuple[float, ...] = (0.5,)
    J: int = 2
    eps: tuple[float, ...] = ()


@dataclass(frozen=True)
class WeylSpec:
    x: tuple[float, ...] = (0.5,)
    eps: tuple[float, ...] = (1e-2, 1e-3)
    J: int = 2
    method: str = "both"

    def __post_init__(self):
        if self.method not in ("direct", "series", "both"):
            raise ValueError(f"method must be direct, series or both, got {self.method!r}")


@dataclass(frozen=True)
class VerifySpec:
    suite: str = "all"


@dataclass(frozen=True)
class OutputSpec:
    path: str = ""
    format: str = "csv"

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")


@dataclass(frozen=True)
class RunConfig:
    data: DataSpec = field(default_factory=DataSpec)
    grid: GridSpec = field(default_factory=GridSpec)
    expand: ExpandSpec = field(default_factory=ExpandSpec)
    weyl: WeylSpec = field(default_factory=WeylSpec)
    profile: WaveProfile = field(default_factory=WaveProfile)
    quad: QuadratureConfig = field(default_factory=QuadratureConfig)
    verify: VerifySpec = field(default_factory=VerifySpec)
    output: OutputSpec = field(default_factory=OutputSpec)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(t) for t in text.split(",") if t.strip())


def _convert(kind, raw: str):
    if kind is float:
        return float(raw)
    if kind is int:
        return int(raw)
    if kind is str:
        return raw
    if typing.get_origin(kind) is tuple:
        return _floats(raw)
    raise TypeError(f"unsupported field type {kind}")


def _format(value) -> str:
    if isinstance(value, tuple):
        return ",".join(repr(float(v)) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def parse_config(text: str) -> RunConfig:
    sections = {f.name: f for f in fields(RunConfig)}
    values: dict[str, dict[str, str]] = {}
    first_line: dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'section.field = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        section, _, name = key.partition(".")
        if section not in sections or not name:
            raise ConfigError(f"line {lineno}: unknown section in {key!r}; sections are {', '.join(sections)}")
        cls = sections[section].default_factory
        hints = typing.get_type_hints(cls)
        if name not in hints:
            raise ConfigError(f"line {lineno}: field {key!r} does not exist; {section} has {', '.join(hints)}")
        try:
            values.setdefault(section, {})[name] = _convert(hints[name], raw)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: field {key!r}: cannot parse {raw!r} ({exc})") from None
        first_line.setdefault(section, lineno)
    built = {}
    for section, vals in values.items():
        try:
            built[section] = sections[section].default_factory(**vals)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"line {first_line[section]}: section {section!r}: {exc}") from None
    return RunConfig(**built)


def serialize_config(cfg: RunConfig) -> str:
    lines = []
    for sec in fields(cfg):
        obj = getattr(cfg, sec.name)
        for f in fields(obj):
            lines.append(f"{sec.name}.{f.name} = {_format(getattr(obj, f.name))}")
    return "\n".join(lines) + "\n"


def load_config(path: str | None) -> RunConfig:
    if not path:
        return RunConfig()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


# -- output -------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def render(rows: list[dict], fmt: str) -> str:
    if fmt == "json":
        clean = [{k: (v if not isinstance(v, float) or math.isfinite(v) else repr(v)) for k, v in r.items()} for r in rows]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    if rows:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(rows[0].keys())
        for r in rows:
            w.writerow(_cell(v) for v in r.values())
    return buf.getvalue()


def _emit(text: str, path: str) -> None:
    if path:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _quad(cfg: RunConfig) -> QuadratureConfig:
    return QuadratureConfig.from_env(**dataclasses.asdict(cfg.quad))


def _map(fn, items, threads: int):
    if threads <= 1:
        return [fn(i) for i in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# -- commands -------------------------------------------------------------------


def cmd_evaluate(cfg: RunConfig, threads: int = 1) -> tuple[list[dict], list[str]]:
    data = cfg.data.build()
    field_ = SolutionField(data, _quad(cfg), eps_min=cfg.grid.eps_min)
    second = data.order >= 3
    rows, failures = [], []
    for r in evaluate_grid(field_, cfg.grid, second=second, threads=threads):
        note = r.note
        if not note and not second:
            note = "vxy_unavailable"
        if note.startswith("numerical_failure"):
            failures.append(f"({r.x!r}, {r.y!r}): {note}")
        rows.append({"x": r.x, "y": r.y, "V": r.v, "Vx": r.vx, "Vy": r.vy, "Vxy": r.vxy, "notes": note})
    return rows, failures


def cmd_expand(cfg: RunConfig, threads: int = 1) -> tuple[list[dict], list[dict]]:
    field_ = SolutionField(cfg.data.build(), _quad(cfg), eps_min=1e-12)
    tables = _map(lambda x: asymptotics.expansion(field_, x, cfg.expand.J), cfg.expand.x, threads)
    coeffs = [
        {"x": t.x, "j": j, "f_j": t.f[j], "g_j": t.g[j], "g_swapped_j": t.g_swapped[j]}
        for t in tables
        for j in range(t.J + 1)
    ]
    evals = []
    for t in tables:
        for e in cfg.expand.eps:
            series = asymptotics.evaluate_expansion(t, e)
            direct = field_.evaluate((t.x, (1.0 - t.x) - e))
            evals.append({"x": t.x, "eps": e, "V_expansion": series, "V_direct": direct, "difference": direct - series})
    return coeffs, evals


def cmd_weyl(cfg: RunConfig, threads: int = 1) -> list[dict]:
    spec = cfg.weyl
    field_ = SolutionField(cfg.data.build(), _quad(cfg), eps_min=1e-12)

    def one_x(x):
        rows = []
        series = weyl_series(field_, x, spec.J, cfg.profile) if spec.method != "direct" else None
        for e in spec.eps:
            y = (1.0 - x) - e
            if spec.method != "series":
                w = weyl_direct(field_, (x, y), cfg.profile)
                rows.append({"x": x, "y": y, "psi0": w.psi0, "psi2": w.psi2, "psi4": w.psi4, "method": "direct"})
            if series is not None:
                w = series.components(e)
                rows.append({"x": x, "y": y, "psi0": w.psi0, "psi2": w.psi2, "psi4": w.psi4, "method": "series"})
        return rows

    return [r for rows in _map(one_x, spec.x, threads) for r in rows]


def cmd_verify(cfg: RunConfig, suite: str, threads: int = 1) -> dict:
    return checks.run_suite(suite, _quad(cfg), threads)


# -- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--threads", type=int, default=1, help="worker threads")
    common.add_argument("--seed", type=int, default=None, help="reserved; all algorithms are deterministic")
    parser = argparse.ArgumentParser(prog="darboux", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("evaluate", parents=[common], help="solution and derivatives on a grid")
    sub.add_parser("expand", parents=[common], help="near-diagonal expansion coefficients")
    sub.add_parser("weyl", parents=[common], help="Weyl scalars, direct and/or series")
    v = sub.add_parser("verify", parents=[common], help="run verification suites (JSON report)")
    v.add_argument("--suite", choices=("abel", "goursat", "asymptotics", "weyl", "all"))
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        out = args.out if args.out is not None else cfg.output.path
        fmt = args.format or cfg.output.format
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.command == "evaluate":
            rows, failures = cmd_evaluate(cfg, args.threads)
            _emit(render(rows, fmt), out)
            if failures:
                print("numerical failure at " + "; ".join(failures), file=sys.stderr)
                return EXIT_NUMERIC
        elif args.command == "expand":
            coeffs, evals = cmd_expand(cfg, args.threads)
            if fmt == "json":
                _emit(json.dumps({"coefficients": coeffs, "evaluations": evals}, indent=1) + "\n", out)
            else:
                _emit(render(coeffs, fmt), out)
                if evals:
                    extra = str(Path(out).with_suffix(".eps.csv")) if out else ""
                    if not out:
                        sys.stdout.write("\n")
                    _emit(render(evals, fmt), extra)
        elif args.command == "weyl":
            _emit(render(cmd_weyl(cfg, args.threads), fmt), out)
        else:
            report = cmd_verify(cfg, args.suite or cfg.verify.suite, args.threads)
            _emit(json.dumps(report, indent=1) + "\n", out)
            return EXIT_OK if report["passed"] else EXIT_VERIFY
    except (ConfigError, ValueError, LookupError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ArithmeticError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
