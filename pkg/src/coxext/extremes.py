"""Gumbel asymptotics of row maxima.

For ``n`` i.i.d. copies of a statistic with mean ``mu`` and standard
deviation ``s`` the row maximum ``M_n`` is compared with the Gumbel law
through the affine norming ``a_n = s / alpha_n``, ``b_n = mu + s * beta_n``
with the standard-normal constants

    alpha_n = sqrt(2 log n)
    beta_n  = alpha_n - (log log n + log 4 pi) / (2 alpha_n)

The scale is ``s / alpha_n``: the maximum of ``n`` standard normals sits at
``beta_n`` with fluctuations of order ``1 / alpha_n``.  Scaling by
``s * alpha_n`` instead would send every ``P(M_n <= a_n x + b_n)`` to a step
at ``x = 0``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np

from .statistics import Moments, Pmf, Stat, eulerian_pmf, mahonian_pmf, moments

__all__ = [
    "ConvergenceReport",
    "ConvergenceRow",
    "convergence_report",
    "GumbelNorm",
    "TailRatio",
    "exact_max_cdf",
    "exact_max_cdf_array",
    "grid_points",
    "gumbel_cdf",
    "gumbel_sup_error",
    "norming_constants",
    "normal_sf",
    "std_normal_cdf",
    "tail_ratio",
]

DEFAULT_GRID = (-3.0, 6.0, 0.01)
_SQRT2 = math.sqrt(2.0)
_LOG_4PI = math.log(4.0 * math.pi)

_erfc = np.vectorize(math.erfc, otypes=[float])


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-x / _SQRT2)


def normal_sf(x: float) -> float:
    """Upper tail ``1 - Phi(x)`` computed directly (no cancellation for x > 0)."""
    return 0.5 * math.erfc(x / _SQRT2)


def gumbel_cdf(x):
    """``exp(-exp(-x))``; accepts scalars or arrays."""
    if np.ndim(x) == 0:
        x = float(x)
        if x == -math.inf:
            return 0.0
        if -x > 709.0:
            return 1.0 if x > 0 else 0.0
        return math.exp(-math.exp(-x))
    x = np.asarray(x, dtype=np.float64)
    with np.errstate(over="ignore"):
        return np.exp(-np.exp(-x))


@dataclass(frozen=True)
class GumbelNorm:
    n: int
    alpha: float
    beta: float
    a: float
    b: float
    mu: float
    s: float


def norming_constants(n: int, m: Moments | None = None, *, mu: float | None = None,
                      s: float | None = None) -> GumbelNorm:
    """Norming constants for row size ``n`` from moments (or ``mu``/``s`` directly)."""
    if n < 2:
        raise ValueError(f"norming constants need n >= 2, got {n}")
    if m is not None:
        mu, s = m.mean_f, math.sqrt(m.var_f)
    if mu is None or s is None:
        raise TypeError("pass Moments or both mu and s")
    if not s > 0:
        raise ValueError("variance must be positive")
    ln = math.log(n)
    alpha = math.sqrt(2.0 * ln)
    beta = alpha - (math.log(ln) + _LOG_4PI) / (2.0 * alpha)
    return GumbelNorm(n=n, alpha=alpha, beta=beta, a=s / alpha, b=mu + s * beta,
                      mu=mu, s=s)


def _max_cdf_from_tail(tail: np.ndarray | float, n: int):
    tail = np.asarray(tail, dtype=np.float64)
    out = np.zeros_like(tail)
    ok = tail < 1.0
    out[ok] = np.exp(n * np.log1p(-tail[ok]))
    return out


def exact_max_cdf_array(pmf: Pmf, n: int, t) -> np.ndarray:
    """``P(max of n i.i.d. draws <= t)`` evaluated at ``floor(t)``, vectorized."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    k = np.floor(t)
    K = pmf.support_max
    tail = np.empty_like(t)
    below = k < 0
    above = k >= K
    mid = ~(below | above)
    tail[below] = 1.0
    tail[above] = 0.0
    tail[mid] = pmf.tail_above[k[mid].astype(np.int64)]
    return _max_cdf_from_tail(tail, n)


def exact_max_cdf(pmf: Pmf, n: int, t: float) -> float:
    """``P(M_n <= t) = F(floor(t))**n`` with the upper tail summed from the top.

    Computed as ``exp(n * log1p(-T))`` where ``T`` is the mass strictly
    above ``floor(t)``; this keeps full accuracy in the regime
    ``F = 1 - O(1/n)``.
    """
    return float(exact_max_cdf_array(pmf, n, [t])[0])


def grid_points(grid: tuple[float, float, float]) -> np.ndarray:
    lo, hi, step = grid
    if step <= 0 or hi < lo:
        raise ValueError(f"bad grid {grid}")
    count = int(round((hi - lo) / step)) + 1
    return np.linspace(lo, lo + (count - 1) * step, count)


def gumbel_sup_error(pmf: Pmf, m: Moments, n: int,
                     grid: tuple[float, float, float] = DEFAULT_GRID,
                     norm: GumbelNorm | None = None) -> tuple[float, float]:
    """``sup_x |P(M_n <= a x + b) - exp(-exp(-x))|`` over the grid and its argmax."""
    if norm is None:
        norm = norming_constants(n, m)
    xs = grid_points(grid)
    diff = np.abs(exact_max_cdf_array(pmf, n, norm.a * xs + norm.b) - gumbel_cdf(xs))
    i = int(np.argmax(diff))
    return float(diff[i]), float(xs[i])


@dataclass
class ConvergenceRow:
    n: int
    N_n: int
    a: float
    b: float
    sup_error: float
    argmax_x: float


@dataclass
class ConvergenceReport:
    rows: list[ConvergenceRow]
    grid: tuple[float, float, float] = DEFAULT_GRID
    meta: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "N_n", "a", "b", "sup_error", "argmax_x"])
        for r in self.rows:
            w.writerow([r.n, r.N_n, repr(r.a), repr(r.b), repr(r.sup_error), repr(r.argmax_x)])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({"grid": list(self.grid), "rows": [asdict(r) for r in self.rows],
                           **self.meta})


def convergence_report(spec, stat: Stat | str, ns,
                       grid: tuple[float, float, float] = DEFAULT_GRID) -> ConvergenceReport:
    """Exact sup-error against Gumbel for each row size ``n``.

    ``spec`` is anything with a ``materialize(n) -> GroupDescriptor`` method.
    """
    stat = Stat(stat)
    rows = []
    for n in ns:
        g = spec.materialize(int(n))
        pmf = mahonian_pmf(g) if stat is Stat.inv else eulerian_pmf(g)
        m = moments(g, stat)
        norm = norming_constants(int(n), m)
        sup, arg = gumbel_sup_error(pmf, m, int(n), grid, norm)
        rows.append(ConvergenceRow(int(n), g.rank, norm.a, norm.b, sup, arg))
    return ConvergenceReport(rows, tuple(grid), {"sequence": str(spec), "stat": stat.value})


@dataclass(frozen=True)
class TailRatio:
    x: float
    ratio: float
    numerator: float
    denominator: float

    @property
    def underflow(self) -> bool:
        return self.numerator == 0.0


def tail_ratio(pmf: Pmf, m: Moments, xs, summands: int | None = None,
               c: float = 2.0) -> list[TailRatio]:
    """``P(X > mu + s x) / (1 - Phi(x))`` for each ``x``.

    ``summands`` (default: the group's rank) sets the moderate-deviation
    scale; a warning is issued for ``x`` outside ``(0, c * summands**(1/6)]``.
    A numerator that underflows to zero yields ``ratio = nan`` and
    ``underflow = True``.
    """
    mu, s = m.mean_f, math.sqrt(m.var_f)
    if summands is None and pmf.group is not None:
        summands = pmf.group.rank
    out = []
    for x in xs:
        x = float(x)
        if summands is not None and not 0.0 < x <= c * summands ** (1.0 / 6.0):
            warnings.warn(
                f"x={x} is outside the moderate-deviation range (0, {c}*N^(1/6)] "
                f"for N={summands}", stacklevel=2)
        num = pmf.sf(mu + s * x)
        den = normal_sf(x)
        ratio = num / den if num > 0.0 else math.nan
        out.append(TailRatio(x, ratio, num, den))
    return out
