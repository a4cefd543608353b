"""
Run configurations, figure presets and the deterministic result tables.

A :class:`RunConfig` describes a grid of independent simulations, one per
``(theta[, theta2], topology)`` point. Each point is a sequential walk in
``t``; points may be farmed out to worker processes and the results are
merged back in a fixed order, so the output does not depend on the number
of workers.

Tables have the fixed columns ``t, theta, theta2, quantity, value, units``
and rows sorted by ``t`` first, then ``theta``, ``theta2``, then the order
in which quantities are emitted.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .fisher import (
    DetectorWindow,
    classical_fi,
    full_qfi,
    limited_fi,
    position_qfi_exact,
    position_qfi_paper,
    probability_derivative,
    reduce_position,
)
from .interference import mu_field
from .tangent import new_tangent, split_step_with_tangent, step_with_tangent
from .walk import (
    Bounded,
    InitialSpin,
    SplitStepSpec,
    Unbounded,
    new_walk,
    probability,
    split_step,
    std_dev,
    step,
)

__all__ = [
    "SCHEMA_VERSION",
    "ConfigError",
    "RunConfig",
    "ResultTable",
    "run",
    "figure_recipes",
    "recipes_for",
    "parse_angle",
    "parse_grid",
    "parse_window",
]

SCHEMA_VERSION = 1
OUTPUTS = ("distribution", "stddev", "qfi", "fi", "interference")
COLUMNS = ("t", "theta", "theta2", "quantity", "value", "units")
FI_UNITS = "rad^-2"


class ConfigError(ValueError):
    """Invalid run configuration; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


@dataclass(frozen=True)
class RunConfig:
    name: str = "run"
    walk: str = "standard"
    # each entry: 0 for unbounded, a > 0 for bounded on [-a, a]
    bounds: tuple[int, ...] = (0,)
    alpha: complex = 1 / math.sqrt(2)
    beta: complex = 1 / math.sqrt(2)
    thetas: tuple[float, ...] = (math.pi / 4,)
    theta2s: tuple[float, ...] = ()
    t_max: int = 100
    # report only at these steps; empty means every step 1..t_max
    times: tuple[int, ...] = ()
    windows: tuple[tuple[int, int], ...] = ()
    outputs: tuple[str, ...] = ("distribution",)
    # split-step only: which parameters to differentiate
    tags: tuple[str, ...] = ("theta1", "theta2")
    exact_qfi: bool = False
    out: str | None = None
    format: str = "csv"
    workers: int = 1

    def validate(self) -> "RunConfig":
        if self.walk not in ("standard", "split-step"):
            raise ConfigError("walk", f"expected 'standard' or 'split-step', got {self.walk!r}")
        if not isinstance(self.t_max, int) or self.t_max < 1:
            raise ConfigError("t_max", "must be an integer >= 1")
        _check_grid("thetas", self.thetas)
        if self.walk == "split-step":
            _check_grid("theta2s", self.theta2s)
            if any(b != 0 for b in self.bounds):
                raise ConfigError("bounds", "split-step walks are unbounded only")
            if not set(self.tags) <= {"theta1", "theta2"} or not self.tags:
                raise ConfigError("tags", "expected a subset of {'theta1', 'theta2'}")
            if "interference" in self.outputs:
                raise ConfigError("outputs", "interference is defined for standard walks only")
        elif self.theta2s:
            raise ConfigError("theta2s", "only used by split-step walks")
        if not self.bounds or any(b < 0 for b in self.bounds):
            raise ConfigError("bounds", "need at least one entry, each 0 or a positive half-width")
        if not self.outputs or not set(self.outputs) <= set(OUTPUTS):
            raise ConfigError("outputs", f"expected a non-empty subset of {OUTPUTS}")
        if any(not 1 <= t <= self.t_max for t in self.times):
            raise ConfigError("times", f"every entry must lie in [1, {self.t_max}]")
        for lo, hi in self.windows:
            if lo > hi:
                raise ConfigError("windows", f"empty window {lo}:{hi}")
        if self.format not in ("csv", "json"):
            raise ConfigError("format", "expected 'csv' or 'json'")
        if self.workers < 1:
            raise ConfigError("workers", "must be >= 1")
        try:
            InitialSpin(self.alpha, self.beta)
        except ValueError as exc:
            raise ConfigError("alpha", str(exc)) from None
        return self

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["schema"] = SCHEMA_VERSION
        d["alpha"] = [self.alpha.real, self.alpha.imag] if isinstance(self.alpha, complex) else self.alpha
        d["beta"] = [self.beta.real, self.beta.imag] if isinstance(self.beta, complex) else self.beta
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        data = dict(data)
        schema = data.pop("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ConfigError("schema", f"unsupported schema version {schema!r}")
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown field")
        for key in ("alpha", "beta"):
            if isinstance(data.get(key), (list, tuple)):
                re_, im = data[key]
                data[key] = complex(re_, im)
        for key in ("bounds", "thetas", "theta2s", "times", "outputs", "tags"):
            if key in data:
                data[key] = tuple(data[key])
        if "windows" in data:
            data["windows"] = tuple(tuple(w) for w in data["windows"])
        return cls(**data)


def _check_grid(name: str, grid: Sequence[float]) -> None:
    if len(grid) == 0:
        raise ConfigError(name, "grid must not be empty")
    arr = np.asarray(grid, dtype=float)
    if np.any(np.diff(arr) <= 0):
        raise ConfigError(name, "grid must be strictly increasing")
    if arr[0] < 0 or arr[-1] > math.pi:
        raise ConfigError(name, "grid values must lie in [0, pi]")


_ANGLE = re.compile(r"^\s*(?:([0-9.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*([0-9.eE+-]+))?\s*$")


def parse_angle(text: str) -> float:
    """A float, or a multiple of pi such as ``pi/4``, ``3pi/8`` or ``3*pi/8``."""
    try:
        return float(text)
    except ValueError:
        pass
    m = _ANGLE.match(text)
    if not m:
        raise ValueError(f"cannot parse angle {text!r}")
    num = float(m.group(1)) if m.group(1) else 1.0
    den = float(m.group(2)) if m.group(2) else 1.0
    return num * math.pi / den


def parse_grid(text: str) -> tuple[float, ...]:
    """``start:stop:count`` (inclusive, like ``numpy.linspace``)."""
    try:
        start, stop, count = text.split(":")
        grid = np.linspace(parse_angle(start), parse_angle(stop), int(count))
    except ValueError:
        raise ConfigError("grid", f"expected start:stop:count, got {text!r}") from None
    return tuple(float(x) for x in grid)


def parse_window(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError:
        raise ConfigError("window", f"expected lo:hi, got {text!r}") from None
    if lo > hi:
        raise ConfigError("window", f"empty window {text!r}")
    return lo, hi


@dataclass
class ResultTable:
    rows: list[tuple[int, float, float | None, str, float, str]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def select(self, quantity: str, theta: float | None = None, theta2: float | None = None):
        """``(t, value)`` pairs for one quantity, optionally at one grid point."""
        return [
            (r[0], r[4])
            for r in self.rows
            if r[3] == quantity
            and (theta is None or r[1] == theta)
            and (theta2 is None or r[2] == theta2)
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for t, th, th2, q, v, u in self.rows:
            w.writerow([t, _fmt(th), "" if th2 is None else _fmt(th2), q, _fmt(v), u])
        return buf.getvalue()

    def to_json(self) -> str:
        records = [dict(zip(COLUMNS, r)) for r in self.rows]
        return json.dumps({"columns": list(COLUMNS), "rows": records}, indent=1, allow_nan=True)

    def write(self, path: str | Path, format: str = "csv") -> None:
        text = self.to_csv() if format == "csv" else self.to_json()
        Path(path).write_text(text)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _topology(bound: int, t_max: int):
    return Unbounded(t_max) if bound == 0 else Bounded(bound)


def _suffix(bound: int) -> str:
    return "" if bound == 0 else f"@a={bound}"


def _point_rows(args) -> list[tuple]:
    """All rows for one grid point; runs in a worker process."""
    cfg, theta, theta2, bound = args
    init = InitialSpin(cfg.alpha, cfg.beta)
    topo = _topology(bound, cfg.t_max)
    report = set(cfg.times) if cfg.times else None
    sfx = _suffix(bound)
    rows: list[tuple] = []
    windows = [DetectorWindow.interval(lo, hi) for lo, hi in cfg.windows]
    wanted = set(cfg.outputs)
    needs_tangent = bool(wanted & {"qfi", "fi"})

    def emit(t, name, value, units):
        rows.append((t, theta, theta2, name + sfx, float(value), units))

    if cfg.walk == "standard":
        ts = new_tangent(init, topo) if needs_tangent else None
        state = new_walk(init, topo)
        for t in range(1, cfg.t_max + 1):
            if "interference" in wanted and (report is None or t in report):
                mu = mu_field(state, theta)
                for x, m in zip(topo.sites, mu):
                    emit(t, f"mu(x={x})", m, "1")
            if ts is not None:
                ts = step_with_tangent(ts, theta)
                state = ts.base
            else:
                state = step(state, theta)
            if report is not None and t not in report:
                continue
            _standard_rows(emit, t, state, ts, wanted, windows, cfg.exact_qfi)
    else:
        spec = SplitStepSpec(theta, theta2)
        tangents = {tag: new_tangent(init, topo, tag=tag) for tag in cfg.tags} if needs_tangent else {}
        state = new_walk(init, topo)
        for t in range(1, cfg.t_max + 1):
            if tangents:
                tangents = {tag: split_step_with_tangent(ts, spec) for tag, ts in tangents.items()}
                state = next(iter(tangents.values())).base
            else:
                state = split_step(state, spec)
            if report is not None and t not in report:
                continue
            dist = probability(state)
            if "distribution" in wanted:
                for x, p in zip(dist.sites, dist.probs):
                    emit(t, f"P(x={x})", p, "1")
            if "stddev" in wanted or "distribution" in wanted:
                emit(t, "sigma", std_dev(dist), "sites")
            for tag, ts in tangents.items():
                _estimation_rows(emit, t, ts, wanted, windows, cfg.exact_qfi, f"[{tag}]")
    return rows


def _standard_rows(emit, t, state, ts, wanted, windows, exact):
    dist = probability(state)
    if "distribution" in wanted:
        for x, p in zip(dist.sites, dist.probs):
            emit(t, f"P(x={x})", p, "1")
    if "stddev" in wanted or "distribution" in wanted:
        emit(t, "sigma", std_dev(dist), "sites")
    if ts is not None:
        _estimation_rows(emit, t, ts, wanted, windows, exact, "")


def _estimation_rows(emit, t, ts, wanted, windows, exact, tag):
    hf = full_qfi(ts)
    pd = reduce_position(ts)
    hw = position_qfi_paper(pd)
    he = position_qfi_exact(pd) if exact else None
    if "qfi" in wanted:
        emit(t, "H_f" + tag, hf, FI_UNITS)
        emit(t, "H_w_paper" + tag, hw, FI_UNITS)
        if he is not None:
            emit(t, "H_w_exact" + tag, he, FI_UNITS)
        emit(t, "H_w_paper/H_f" + tag, _ratio(hw, hf), "1")
        if he is not None:
            emit(t, "H_w_exact/H_f" + tag, _ratio(he, hf), "1")
    if "fi" in wanted:
        dist = probability(ts.base)
        ddist = probability_derivative(ts)
        fx = classical_fi(dist, ddist)
        emit(t, "F_x" + tag, fx, FI_UNITS)
        for w, (lo, hi) in zip(windows, _window_bounds(windows)):
            emit(t, f"F_xl[{lo}:{hi}]" + tag, limited_fi(dist, ddist, w), FI_UNITS)
        emit(t, "F_x/H_f" + tag, _ratio(fx, hf), "1")
        emit(t, "F_x/H_w_paper" + tag, _ratio(fx, hw), "1")
        if he is not None:
            emit(t, "F_x/H_w_exact" + tag, _ratio(fx, he), "1")


def _window_bounds(windows: Iterable[DetectorWindow]):
    return [(min(w.sites), max(w.sites)) for w in windows]


def _ratio(num: float, den: float) -> float:
    # 0/0 happens at t = 1 from |+>, where every information measure vanishes
    return num / den if abs(den) > 1e-12 else math.nan


def _grid_points(cfg: RunConfig):
    theta2s = cfg.theta2s if cfg.walk == "split-step" else (None,)
    return [
        (cfg, th, th2, b)
        for b in cfg.bounds
        for th in cfg.thetas
        for th2 in theta2s
    ]


def run(config: RunConfig) -> ResultTable:
    """Evaluate every grid point of ``config`` and merge into one table.

    Writes ``config.out`` when it is set.
    """
    config.validate()
    points = _grid_points(config)
    if config.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_point_rows, points))
    else:
        chunks = [_point_rows(p) for p in points]

    # stable merge: t major, then theta, theta2; quantity order kept per point
    keyed = []
    for ip, rows in enumerate(chunks):
        for ir, row in enumerate(rows):
            th2 = row[2] if row[2] is not None else -1.0
            keyed.append(((row[0], row[1], th2, ip, ir), row))
    keyed.sort(key=lambda kv: kv[0])
    table = ResultTable([row for _, row in keyed])
    if config.out:
        table.write(config.out, config.format)
    return table


PI = math.pi
THIRDS = (PI / 8, PI / 4, 3 * PI / 8)
# multiples of pi/64 on [0, pi/2]; contains every value in THIRDS exactly
HALF_GRID = tuple(k * PI / 64 for k in range(33))


def _uniform(lo: float, hi: float, n: int) -> tuple[float, ...]:
    return tuple(float(x) for x in np.linspace(lo, hi, n))


def figure_recipes() -> list[RunConfig]:
    """Presets that regenerate the data behind each figure.

    The walker always starts in ``|+> ⊗ |0>``. Sweeps over [0, pi] use a
    64-point uniform grid; split-step sweeps over [0, pi/2] use steps of
    pi/64 so that pi/8, pi/4 and 3pi/8 are grid points.
    """
    both = (0, 50)
    return [
        RunConfig(name="fig1", bounds=both, thetas=THIRDS, t_max=200, times=(200,),
                  outputs=("distribution",)),
        RunConfig(name="fig2", bounds=both, thetas=THIRDS, t_max=200, outputs=("qfi",)),
        RunConfig(name="fig3", bounds=both, thetas=THIRDS, t_max=200, outputs=("qfi",)),
        RunConfig(name="fig4", bounds=both, thetas=THIRDS, t_max=200, outputs=("interference",)),
        RunConfig(name="fig5", bounds=(0,), thetas=THIRDS, t_max=200, outputs=("qfi",),
                  exact_qfi=True),
        RunConfig(name="fig6", bounds=both, thetas=_uniform(0, PI, 64), t_max=200,
                  times=(50, 100, 150, 200), outputs=("qfi",)),
        RunConfig(name="fig6b", bounds=(0,), thetas=_uniform(0, PI, 64), t_max=200,
                  outputs=("qfi",)),
        RunConfig(name="fig7", bounds=(0,), thetas=THIRDS, t_max=200,
                  windows=((-25, 25), (-50, 50)), outputs=("fi",)),
        RunConfig(name="fig8", walk="split-step", thetas=HALF_GRID,
                  theta2s=THIRDS, t_max=100, times=(100,), outputs=("stddev",)),
        RunConfig(name="fig9", walk="split-step", thetas=HALF_GRID,
                  theta2s=HALF_GRID, t_max=100, times=(100,), outputs=("qfi",)),
    ]


def recipes_for(name: str) -> RunConfig:
    for cfg in figure_recipes():
        if cfg.name == name:
            return cfg
    names = ", ".join(c.name for c in figure_recipes())
    raise ConfigError("figure", f"unknown figure {name!r}; choose from {names}")


def with_overrides(cfg: RunConfig, **overrides) -> RunConfig:
    return replace(cfg, **{k: v for k, v in overrides.items() if v is not None})
