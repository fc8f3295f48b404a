"""Monte-Carlo simulation of row maxima with parallel-safe random streams.

Every replicate of every row draws from its own Philox stream keyed by
``(master_seed, n, replicate)``, so the output does not depend on how
replicates are scheduled across workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .conditions import SequenceSpec
from .extremes import gumbel_cdf, norming_constants
from .groups import GroupDescriptor
from .statistics import (
    CapExceededError,
    Moments,
    Pmf,
    Stat,
    eulerian_pmf,
    mahonian_pmf,
    moments,
    sample,
)

__all__ = [
    "PMF_MEMORY_BUDGET",
    "SimConfig",
    "SimReport",
    "SimRow",
    "exact_row_max_cdf",
    "ks_statistic",
    "run_simulation",
    "simulate_row_max",
    "stream",
]

# Largest PMF (in cells) materialized for the inverse-CDF sampler.
PMF_MEMORY_BUDGET = 20_000_000


def stream(master_seed: int, *keys: int) -> np.random.Generator:
    """Independent Philox generator for the key path ``keys``."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in keys))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class SimConfig:
    spec: SequenceSpec
    stat: Stat
    rows: tuple[int, ...]
    replicates: int
    master_seed: int
    method: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "stat", Stat(self.stat))
        object.__setattr__(self, "rows", tuple(int(n) for n in self.rows))
        if not self.rows:
            raise ValueError("rows must be nonempty")
        if any(n < 1 for n in self.rows):
            raise ValueError("row sizes must be >= 1")
        if self.replicates < 1:
            raise ValueError("replicates must be >= 1")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")


@dataclass
class _Row:
    n: int
    group: GroupDescriptor
    moments: Moments
    a: float
    b: float
    method: str
    pmf: Pmf | None


def _norming(n: int, m: Moments) -> tuple[float, float]:
    # A row of one draw is just a standardized sample.
    if n == 1:
        return math.sqrt(m.var_f), m.mean_f
    norm = norming_constants(n, m)
    return norm.a, norm.b


def _prepare(config: SimConfig, n: int) -> _Row:
    g = config.spec.materialize(n)
    m = moments(g, config.stat)
    a, b = _norming(n, m)
    method = config.method
    pmf = None
    if method in (None, "inverse_cdf"):
        cells = g.reflection_count + 1 if config.stat is Stat.inv else g.rank + 1
        if cells <= PMF_MEMORY_BUDGET:
            pmf = mahonian_pmf(g) if config.stat is Stat.inv else eulerian_pmf(g)
        if pmf is None and method == "inverse_cdf":
            raise CapExceededError(f"cannot materialize the PMF of {g} for inverse_cdf")
        method = "inverse_cdf" if pmf is not None else "decomposition"
        if pmf is not None:
            pmf.cdf  # noqa: B018 - build the cached CDF before threads share it
    return _Row(n, g, m, a, b, method, pmf)


def _row_maxima(config: SimConfig, row: _Row) -> np.ndarray:
    R = config.replicates
    out = np.empty(R, dtype=np.int64)

    def work(rs: range) -> None:
        for r in rs:
            rng = stream(config.master_seed, row.n, r)
            out[r] = sample(row.group, config.stat, row.n, rng,
                            method=row.method, pmf=row.pmf).max()

    chunks = [range(lo, min(lo + 256, R)) for lo in range(0, R, 256)]
    if config.workers == 1:
        for c in chunks:
            work(c)
    else:
        with ThreadPoolExecutor(config.workers) as pool:
            list(pool.map(work, chunks))
    return out


def simulate_row_max(config: SimConfig, n: int) -> list[float]:
    """Normalized maxima ``(M_n - b_n) / a_n`` of ``config.replicates`` rows."""
    row = _prepare(config, n)
    return list((_row_maxima(config, row) - row.b) / row.a)


def ks_statistic(samples, cdf, cdf_left=None) -> float:
    """Kolmogorov-Smirnov distance between the samples and ``cdf``.

    ``cdf_left(x)`` is the left limit ``P(X < x)``; pass it for a discrete
    law so that ties are compared against the jump correctly.  It defaults
    to ``cdf`` (continuous law).
    """
    x = np.sort(np.asarray(samples, dtype=np.float64))
    R = len(x)
    if R == 0:
        raise ValueError("ks_statistic needs at least one sample")
    values, first = np.unique(x, return_index=True)
    last = np.append(first[1:], R)
    F = np.array([cdf(v) for v in values], dtype=np.float64)
    FL = F if cdf_left is None else np.array([cdf_left(v) for v in values], dtype=np.float64)
    upper = np.abs(last / R - F)
    lower = np.abs(first / R - FL)
    return float(max(upper.max(), lower.max()))


def exact_row_max_cdf(pmf: Pmf, n: int):
    """Vectorized ``k -> P(M_n <= k)`` on integers, from the upper tail."""
    tail = pmf.tail_above
    K = pmf.support_max

    def F(k) -> float:
        k = int(k)
        if k < 0:
            return 0.0
        if k >= K:
            return 1.0
        return math.exp(n * math.log1p(-tail[k])) if tail[k] < 1.0 else 0.0

    return F


@dataclass
class SimRow:
    n: int
    group: str
    a: float
    b: float
    method: str
    maxima: list[int]
    normalized: list[float]
    ks_gumbel: float
    ks_exact: float | None
    wall_time: float


@dataclass
class SimReport:
    config: SimConfig
    rows: list[SimRow] = field(default_factory=list)

    def to_json(self, include_values: bool = False) -> str:
        rows = []
        for r in self.rows:
            d = {k: getattr(r, k) for k in
                 ("n", "group", "a", "b", "method", "ks_gumbel", "ks_exact", "wall_time")}
            if include_values:
                d["normalized"] = r.normalized
            rows.append(d)
        c = self.config
        return json.dumps({
            "sequence": str(c.spec), "stat": c.stat.value, "replicates": c.replicates,
            "master_seed": c.master_seed, "rows": rows,
        })

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "replicate", "value"])
        for r in self.rows:
            for i, v in enumerate(r.normalized):
                w.writerow([r.n, i, repr(v)])
        return buf.getvalue()


def run_simulation(config: SimConfig) -> SimReport:
    """Simulate every row and compare with Gumbel and, when known, the exact law."""
    report = SimReport(config)
    for n in config.rows:
        t0 = time.perf_counter()
        row = _prepare(config, n)
        maxima = _row_maxima(config, row)
        z = (maxima - row.b) / row.a
        ks_g = ks_statistic(z, gumbel_cdf)
        ks_e = None
        if row.pmf is not None:
            F = exact_row_max_cdf(row.pmf, n)
            ks_e = ks_statistic(maxima, F, lambda k: F(k - 1))
        report.rows.append(SimRow(
            n=n, group=str(row.group), a=row.a, b=row.b, method=row.method,
            maxima=maxima.tolist(), normalized=z.tolist(), ks_gumbel=ks_g, ks_exact=ks_e,
            wall_time=time.perf_counter() - t0,
        ))
    return report
