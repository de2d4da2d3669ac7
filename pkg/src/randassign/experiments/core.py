"""Configuration, summary statistics and report documents shared by all experiments."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from ..distributions import DistributionSpec
from ..evt import EULER_GAMMA

METHODS = ("solver", "sandwich", "both")


@dataclass(frozen=True)
class ExperimentConfig:
    spec: DistributionSpec
    schedule: tuple[tuple[int, int], ...]
    trials: int = 1000
    seed: int = 0
    method: str = "solver"
    workers: int = 1

    def __post_init__(self):
        schedule = tuple((int(n), int(m)) for n, m in self.schedule)
        if not schedule:
            raise ValueError("schedule must contain at least one (n, m) point")
        for n, m in schedule:
            if n < 1 or m < n:
                raise ValueError(f"schedule point (n={n}, m={m}) needs 1 <= n <= m")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        object.__setattr__(self, "schedule", schedule)

    def describe(self) -> dict:
        # workers is an execution detail: reports must not depend on it
        return {
            "dist": str(self.spec),
            "schedule": ";".join(f"{n}x{m}" for n, m in self.schedule),
            "trials": self.trials,
            "seed": self.seed,
            "method": self.method,
        }


@dataclass(frozen=True)
class SummaryStats:
    mean: float
    variance: float
    std_error: float
    count: int
    min: float
    max: float

    @classmethod
    def of(cls, values) -> SummaryStats:
        values = np.asarray(values, dtype=np.float64)
        count = values.size
        if count == 0:
            raise ValueError("no values to summarise")
        mean = float(values.mean())
        variance = float(values.var(ddof=1)) if count > 1 else 0.0
        return cls(mean, variance, math.sqrt(variance / count), count,
                   float(values.min()), float(values.max()))


@dataclass(frozen=True)
class TailEstimate:
    """Finite-``n`` view of one tail probability against its rate-function bounds.

    ``bound_upper``/``bound_lower`` bracket ``log_rate`` as the asymptotic
    limsup/liminf bounds do; ``log_rate`` is ``None`` when no trial hit.
    """

    n: int
    m: int
    r: float
    threshold: float
    p_hat: float
    log_rate: float | None
    std_error_log: float | None
    bound_upper: float
    bound_lower: float
    is_weighted: bool
    side: str = "upper_dev"
    hits: int = 0
    trials: int = 0
    epsilon: float = 0.0
    std_error: float = 0.0
    notes: tuple[str, ...] = ()

    def within(self, slack: float) -> bool:
        if self.log_rate is None:
            return False
        return self.bound_lower - slack <= self.log_rate <= self.bound_upper + slack


def bootstrap_se(values, stat, rng: np.random.Generator, resamples: int = 200) -> float | None:
    """Standard deviation of ``stat`` over ``resamples`` bootstrap resamples.

    Resamples on which ``stat`` is undefined (returns ``None``) are dropped.
    """
    values = np.asarray(values)
    size = values.shape[0]
    out = []
    for _ in range(resamples):
        idx = rng.integers(0, size, size)
        v = stat(values[idx])
        if v is not None and math.isfinite(v):
            out.append(v)
    if len(out) < 2:
        return None
    return float(np.std(out, ddof=1))


# -------------------------------------------------------------- documents


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


@dataclass
class Report:
    """Tabular experiment output that carries its own effective configuration."""

    kind: str
    config: dict
    columns: Sequence[str]
    rows: list[dict]
    notes: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# experiment: {self.kind}\n")
        buf.write("# config: " + json.dumps(_jsonable(self.config), sort_keys=True) + "\n")
        for note in self.notes:
            buf.write(f"# note: {note}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "experiment": self.kind,
            "config": _jsonable(self.config),
            "columns": list(self.columns),
            "rows": [{c: _jsonable(row.get(c)) for c in self.columns} for row in self.rows],
            "notes": list(self.notes),
        }
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown report format {fmt!r}")


def harmonic(n: int) -> float:
    """``H_n = sum_{k<=n} 1/k``."""
    if n < 1:
        return 0.0
    return math.fsum(1.0 / k for k in range(1, n + 1))


def inverse_square_sum(n: int) -> float:
    """``sum_{k<=n} k**-2``, the exact mean minimum for exponential(1) square matrices."""
    return math.fsum(1.0 / (k * k) for k in range(1, n + 1))


def is_standard_exponential(spec: DistributionSpec) -> bool:
    return spec.family == "exponential" and spec.params == (1.0,)


def exact_max_mean(spec: DistributionSpec, n: int) -> float | None:
    """``E M_n`` where it has a closed form."""
    if spec.family == "exponential":
        return harmonic(n) / spec.params[0]
    if spec.family == "gumbel":
        loc, scale = spec.params
        return loc + scale * (math.log(n) + EULER_GAMMA)
    if spec.family == "constant":
        return spec.params[0]
    return None


def stats_dict(prefix: str, stats: SummaryStats | None) -> dict[str, Any]:
    if stats is None:
        return {f"{prefix}_mean": None, f"{prefix}_std_error": None}
    return {f"{prefix}_mean": stats.mean, f"{prefix}_std_error": stats.std_error}
