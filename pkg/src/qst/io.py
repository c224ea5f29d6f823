"""Flat ``key = value`` run configuration and fixed-point CSV output."""

from __future__ import annotations

import ast
import math
import operator
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .dynamics import IntegratorConfig, Trajectory
from .model import DecoherenceRates, ModelParams

RATE_KEYS = ("kappa_a", "kappa_b", "gamma_1", "Gamma_1", "gamma_2", "Gamma_2")
TRAJECTORY_HEADER = ("t", "t_over_2pi", "P1", "P2", "P3", "P4", "F", "trace_dev")
SWEEP_HEADER = ("axis_value", "t_star", "F_star", "regime")
ORACLE_HEADER = ("t", "t_over_2pi", "p1", "p2", "p3", "p4")


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        where = f"{source or 'config'}:{line}: " if line is not None else ""
        super().__init__(where + message)


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}
_NAMES = {"pi": math.pi}
_FUNCS = {"sqrt": math.sqrt}


def parse_number(text: str) -> float:
    """Evaluate a plain number or a small arithmetic expression such as ``pi/4`` or ``2/sqrt(3)``."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) \
                and not isinstance(node.value, bool):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id in _NAMES:
            return _NAMES[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.UAdd, ast.USub)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id in _FUNCS \
                and len(node.args) == 1 and not node.keywords:
            return _FUNCS[node.func.id](ev(node.args[0]))
        raise ValueError(f"not a number: {text!r}")

    try:
        value = ev(ast.parse(text.strip(), mode="eval"))
    except (SyntaxError, ZeroDivisionError, OverflowError, TypeError) as exc:
        raise ValueError(f"not a number: {text!r}") from exc
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text!r}")
    return value


@dataclass(frozen=True)
class RunConfig:
    g1: float = 1.0
    g2: float = 1.0
    j: float = 1.16
    theta: float = math.pi / 4
    xi: float | None = None
    zeta: float | None = None
    kappa_a: float | None = None
    kappa_b: float | None = None
    gamma_1: float | None = None
    Gamma_1: float | None = None
    gamma_2: float | None = None
    Gamma_2: float | None = None
    fock_dim: int = 2
    dt: float = 0.002
    t_max: float | None = None
    record_every: int | None = None
    output_path: str | None = None

    @property
    def explicit_rates(self) -> bool:
        return any(getattr(self, k) is not None for k in RATE_KEYS)

    def rates(self) -> DecoherenceRates:
        if self.explicit_rates:
            return DecoherenceRates(**{k: getattr(self, k) or 0.0 for k in RATE_KEYS})
        xi = 0.03 if self.xi is None else self.xi
        zeta = 0.001 if self.zeta is None else self.zeta
        return DecoherenceRates.uniform(xi, zeta)

    def model_params(self) -> ModelParams:
        return ModelParams(g1=self.g1, g2=self.g2, J=self.j, theta=self.theta,
                           rates=self.rates(), fock_dim=self.fock_dim)

    def integrator(self, default_t_max: float) -> IntegratorConfig:
        t_max = default_t_max if self.t_max is None else self.t_max
        return IntegratorConfig(t_max=t_max, dt=self.dt, record_every=self.record_every)

    def items(self) -> list[tuple[str, object]]:
        """Explicitly relevant settings in canonical order, for echoing."""
        out = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is not None:
                out.append((f.name, value))
        return out


_INT_KEYS = {"fock_dim", "record_every"}
_STR_KEYS = {"output_path"}
_KEYS = {f.name for f in fields(RunConfig)}


def parse_config(text: str, source: str | None = None) -> RunConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment. Unknown or repeated keys are errors."""
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno, source)
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in _KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno, source)
        if key in values:
            raise ConfigError(f"duplicate key {key!r}", lineno, source)
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno, source)
        try:
            if key in _STR_KEYS:
                parsed: object = value
            elif key in _INT_KEYS:
                parsed = int(value)
            else:
                parsed = parse_number(value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {exc}", lineno, source) from None
        values[key] = parsed
        lines[key] = lineno
    explicit = [k for k in RATE_KEYS if k in values]
    shorthand = [k for k in ("xi", "zeta") if k in values]
    if explicit and shorthand:
        raise ConfigError("per-channel rates and the xi/zeta shorthand are mutually exclusive",
                          max(lines[k] for k in explicit + shorthand), source)
    cfg = RunConfig(**values)
    try:
        cfg.model_params()
        cfg.integrator(1.0)
    except ValueError as exc:
        raise ConfigError(str(exc), None, source) from None
    return cfg


def read_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", None, str(path)) from None
    return parse_config(text, str(path))


def format_value(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_config(cfg: RunConfig) -> str:
    return "".join(f"{k} = {format_value(v)}\n" for k, v in cfg.items())


def write_summary(path, cfg: RunConfig, results: dict) -> None:
    """Echo the resolved configuration, then the results under a ``# results`` marker."""
    body = "# parameters\n" + render_config(cfg) + "# results\n"
    body += "".join(f"{k} = {format_value(v)}\n" for k, v in results.items())
    Path(path).write_text(body)


def read_summary(path) -> tuple[RunConfig, dict[str, str]]:
    text = Path(path).read_text()
    head, _, tail = text.partition("# results\n")
    results = {}
    for line in tail.splitlines():
        if line.strip():
            k, _, v = (s.strip() for s in line.partition("="))
            results[k] = v
    return parse_config(head, str(path)), results


def fmt(x: float) -> str:
    """Fixed-point, six decimals, never ``-0.000000``."""
    return f"{round(float(x), 6) + 0.0:.6f}"


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(v if isinstance(v, str) else fmt(v) for v in row) + "\n")


def trajectory_rows(traj: Trajectory):
    for k in range(len(traj)):
        t = traj.times[k]
        yield (t, t / (2 * np.pi), *traj.populations[k], traj.fidelity[k], traj.trace_dev[k])


def write_trajectory(path, traj: Trajectory) -> None:
    write_csv(path, TRAJECTORY_HEADER, trajectory_rows(traj))


def write_sweep(path, result) -> None:
    write_csv(path, SWEEP_HEADER, ((p.value, p.t_star, p.F_star, p.regime) for p in result.points))


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    lines = Path(path).read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]
