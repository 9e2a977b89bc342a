"""Parameter sweeps over the cycle vertices and plot-ready output."""

from __future__ import annotations

import csv
import io
import json
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from geophase import evolution, nmr
from geophase.evolution import CycleError, CycleParams
from geophase.geometry import GeometryError
from geophase.quadrature import QuadratureConfig, QuadratureError
from geophase.statespace import wrap_angle


class ConfigError(ValueError):
    pass


_PI_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)\s*\*?\s*pi(?:\s*/\s*(\d+\.?\d*))?$")


def parse_angle(text: str) -> float:
    """Parse '0.25pi', 'pi/4', '-pi', '3*pi/8' or a plain number of radians."""
    s = str(text).strip().lower().replace("π", "pi")
    m = _PI_RE.match(s)
    if m:
        coef = m.group(1)
        if coef in ("", "+"):
            val = 1.0
        elif coef == "-":
            val = -1.0
        else:
            val = float(coef)
        val *= math.pi
        if m.group(2):
            val /= float(m.group(2))
        return val
    try:
        return float(s)
    except ValueError:
        raise ConfigError(f"cannot parse angle {text!r}") from None


@dataclass(frozen=True)
class SweepConfig:
    theta: float = math.pi / 4
    varphi: float = 0.0
    s1_0: float = 0.0
    s2_0: float = math.pi / 3
    sweep_var: str = "s1_0"
    start: float = 0.0
    stop: float = math.pi / 2
    count: int = 17
    mode: str = "ideal"
    quad_tolerance: float = 1e-10
    threshold: float = 1e-6
    output: str | None = None
    format: str = "csv"
    workers: int = 1

    def __post_init__(self):
        if self.sweep_var not in ("s1_0", "s2_0"):
            raise ConfigError(f"sweep_var must be s1_0 or s2_0, got {self.sweep_var!r}")
        eps = 1e-12
        for name in ("start", "stop"):
            val = getattr(self, name)
            if not -eps <= val <= math.pi / 2 + eps:
                raise ConfigError(f"{name} = {val!r} outside [0, pi/2]")
        if self.count < 2:
            raise ConfigError("count must be >= 2")
        if self.mode not in ("ideal", "pulse"):
            raise ConfigError(f"mode must be ideal or pulse, got {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if not self.quad_tolerance > 0 or not self.threshold > 0:
            raise ConfigError("tolerances must be positive")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def grid(self) -> np.ndarray:
        pts = np.linspace(self.start, self.stop, self.count)
        return np.clip(pts, 0.0, math.pi / 2)


_ANGLE_KEYS = {"theta", "varphi", "s1_0", "s2_0", "start", "stop"}
_FLOAT_KEYS = {"quad_tolerance", "threshold"}
_INT_KEYS = {"count", "workers"}
_STR_KEYS = {"sweep_var", "mode", "output", "format"}


def parse_config(text: str) -> SweepConfig:
    """Read ``key = value`` lines ('#' starts a comment)."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else (":" if ":" in line else None)
        if sep is None:
            raise ConfigError(f"line {lineno}: expected key = value")
        key, val = (part.strip() for part in line.split(sep, 1))
        try:
            if key in _ANGLE_KEYS:
                values[key] = parse_angle(val)
            elif key in _FLOAT_KEYS:
                values[key] = float(val)
            elif key in _INT_KEYS:
                values[key] = int(val)
            elif key in _STR_KEYS:
                values[key] = val
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"line {lineno}: bad value for {key}: {val!r}") from None
    return SweepConfig(**values)


def load_config(path) -> SweepConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


@dataclass(frozen=True)
class SweepRecord:
    s1_0: float
    s2_0: float
    theta: float
    varphi: float
    beta_formula: float
    beta_bargmann: float
    beta_quadrature: float
    beta_sim: float
    duration_ms: float
    max_pairwise_dev: float
    flag: str = ""


FIELDS = tuple(f.name for f in fields(SweepRecord))
NUMERIC_FIELDS = FIELDS[:-1]


def circular_distance(a: float, b: float) -> float:
    return abs(wrap_angle(a - b))


def max_pairwise_dev(values: Iterable[float]) -> float:
    vals = [v for v in values if not math.isnan(v)]
    if len(vals) < 2:
        return math.nan
    return max(circular_distance(a, b) for i, a in enumerate(vals) for b in vals[i + 1:])


def evaluate_point(s1_0: float, s2_0: float, theta: float, varphi: float,
                   mode: str = "ideal", quad: QuadratureConfig = QuadratureConfig()) -> SweepRecord:
    nan = math.nan
    try:
        c = CycleParams(s1_0, s2_0, theta, varphi)
    except CycleError:
        return SweepRecord(s1_0, s2_0, theta, varphi, nan, nan, nan, nan, nan, nan,
                           "beta-undefined")
    try:
        formula = evolution.beta_predicted(c)
        try:
            barg = evolution.beta_bargmann(c)
        except GeometryError:
            # a vertex is orthogonal to its neighbour: the invariant vanishes
            barg = nan
        quad_beta = evolution.run_cycle(c, quad).geometric
        sim = nmr.full_experiment(c, mode).beta
        duration = nmr.cycle_sequence(c, "pulse").total_duration * 1e3
    except (CycleError, QuadratureError, nmr.DecompositionError) as exc:
        flag = "closure-failed" if isinstance(exc, CycleError) else type(exc).__name__
        return SweepRecord(s1_0, s2_0, theta, varphi, nan, nan, nan, nan, nan, nan, flag)
    dev = max_pairwise_dev([formula, barg, quad_beta, sim])
    return SweepRecord(s1_0, s2_0, theta, varphi, formula, barg, quad_beta, sim, duration, dev)


def _evaluate_args(args) -> SweepRecord:
    return evaluate_point(*args)


def run_sweep(cfg: SweepConfig) -> list[SweepRecord]:
    quad = QuadratureConfig(tolerance=cfg.quad_tolerance)
    jobs = []
    for x in cfg.grid():
        s1, s2 = (float(x), cfg.s2_0) if cfg.sweep_var == "s1_0" else (cfg.s1_0, float(x))
        jobs.append((s1, s2, cfg.theta, cfg.varphi, cfg.mode, quad))
    if cfg.workers == 1:
        return [_evaluate_args(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
        # map preserves grid order
        return list(pool.map(_evaluate_args, jobs))


@dataclass(frozen=True)
class SweepSummary:
    points: int
    flagged: int
    max_dev: float
    rms_sim_vs_formula_deg: float

    def passed(self, threshold: float) -> bool:
        return self.flagged == 0 and not (self.max_dev >= threshold)

    def line(self) -> str:
        return (f"points={self.points} flagged={self.flagged} "
                f"max_pairwise_dev={self.max_dev:.3e} rad "
                f"rms(beta_sim-beta_formula)={self.rms_sim_vs_formula_deg:.3e} deg")


def summarize(records: Sequence[SweepRecord]) -> SweepSummary:
    ok = [r for r in records if not r.flag]
    devs = [r.max_pairwise_dev for r in ok if not math.isnan(r.max_pairwise_dev)]
    diffs = [math.degrees(circular_distance(r.beta_sim, r.beta_formula)) for r in ok]
    rms = math.sqrt(math.fsum(d * d for d in diffs) / len(diffs)) if diffs else math.nan
    return SweepSummary(
        points=len(records),
        flagged=len(records) - len(ok),
        max_dev=max(devs) if devs else 0.0,
        rms_sim_vs_formula_deg=rms,
    )


def _fmt(x: float) -> str:
    # adding 0.0 turns -0.0 into 0.0
    return f"{x + 0.0:.12g}"


def _round12(x: float) -> float | None:
    return None if math.isnan(x) else float(_fmt(x))


def render(records: Sequence[SweepRecord], fmt: str = "csv") -> str:
    if not records:
        raise ValueError("no records to emit")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(FIELDS)
        for r in records:
            row = asdict(r)
            writer.writerow([_fmt(row[k]) for k in NUMERIC_FIELDS] + [r.flag])
        return buf.getvalue()
    if fmt == "json":
        rows = []
        for r in records:
            row = asdict(r)
            rows.append({k: (_round12(row[k]) if k in NUMERIC_FIELDS else row[k]) for k in FIELDS})
        return json.dumps({"fields": list(FIELDS), "records": rows}, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit(records: Sequence[SweepRecord], fmt: str, path) -> Path:
    path = Path(path)
    path.write_text(render(records, fmt))
    return path


def parse_records(text: str, fmt: str = "csv") -> list[SweepRecord]:
    """Read back the output of ``render``."""
    if fmt == "csv":
        rows = list(csv.DictReader(io.StringIO(text)))
        return [SweepRecord(**{k: float(row[k]) for k in NUMERIC_FIELDS}, flag=row["flag"])
                for row in rows]
    if fmt == "json":
        data = json.loads(text)
        out = []
        for row in data["records"]:
            nums = {k: (math.nan if row[k] is None else float(row[k])) for k in NUMERIC_FIELDS}
            out.append(SweepRecord(**nums, flag=row["flag"]))
        return out
    raise ValueError(f"unknown format {fmt!r}")


# two configurations of the figure: a curve and a triangle on the octant
DEMO_CONFIGS = {
    "fig4a": SweepConfig(theta=math.pi / 4, varphi=0.0, s2_0=math.pi / 3, sweep_var="s1_0"),
    "fig4b": SweepConfig(theta=math.pi / 4, varphi=math.pi / 4, s2_0=math.pi / 3, sweep_var="s1_0"),
}


def demo_configs(**overrides) -> dict[str, SweepConfig]:
    return {name: replace(cfg, **overrides) for name, cfg in DEMO_CONFIGS.items()}
