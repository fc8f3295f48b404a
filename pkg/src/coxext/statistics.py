"""Inversion (Mahonian) and descent (Eulerian) distributions on finite Coxeter groups.

Both generating functions factor over the group:

* the inversion count is a sum of independent uniforms on ``{0, ..., d-1}``,
  one per degree ``d``;
* the descent count is a sum of independent Bernoulli variables with
  success probabilities ``1/(1+q)``, where ``-q`` runs over the (real,
  negative) roots of the Eulerian polynomial.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache

import numpy as np

from .groups import GroupDescriptor, IrreducibleFactor, Kind
from .polynomials import IntPolynomial, convolve_uniform
from .roots import DEFAULT_REL_TOL, isolate_negative_real_roots

__all__ = [
    "BernoulliParams",
    "CapExceededError",
    "InvariantViolation",
    "Moments",
    "Pmf",
    "SamplerUnavailableError",
    "Stat",
    "descent_bernoulli_params",
    "eulerian_pmf",
    "eulerian_polynomial",
    "mahonian_pmf",
    "moments",
    "sample",
]

MAHONIAN_EXACT_CAP = 10**5
EULERIAN_EXACT_CAP = 10**4
EULERIAN_FLOAT_THRESHOLD = 300
ROOT_RANK_CAP = 300


class Stat(str, enum.Enum):
    inv = "inv"
    des = "des"


class CapExceededError(ValueError):
    """A requested exact computation exceeds its configured size cap."""


class SamplerUnavailableError(ValueError):
    """The requested sampling method cannot run at the current caps."""


class InvariantViolation(AssertionError):
    """A hard internal invariant failed (e.g. descent mean != rank/2)."""


@dataclass(eq=False)
class Pmf:
    """Probability mass function on ``{0, ..., K}``.

    ``exact_counts``, when present, are the integer coefficients of the
    generating function; ``mass`` is always the normalized floating view.
    """

    mass: np.ndarray
    statistic: Stat
    group: GroupDescriptor | None = None
    exact_counts: list[int] | None = None

    def __post_init__(self) -> None:
        self.mass = np.asarray(self.mass, dtype=np.float64)
        self.mass.setflags(write=False)
        self.statistic = Stat(self.statistic)

    @classmethod
    def from_counts(cls, counts: list[int], statistic: Stat,
                    group: GroupDescriptor | None = None) -> Pmf:
        total = sum(counts)
        mass = np.array([c / total for c in counts], dtype=np.float64)
        return cls(mass, statistic, group, list(counts))

    @property
    def support_max(self) -> int:
        return len(self.mass) - 1

    @cached_property
    def cdf(self) -> np.ndarray:
        """``cdf[k] = P(X <= k)``, normalized so the last entry is exactly 1."""
        c = np.cumsum(self.mass)
        c /= c[-1]
        c.setflags(write=False)
        return c

    @cached_property
    def tail_above(self) -> np.ndarray:
        """``tail_above[k] = P(X > k)``, accumulated from the top of the support."""
        from_top = np.cumsum(self.mass[::-1])[::-1]
        t = np.empty_like(from_top)
        t[:-1] = from_top[1:]
        t[-1] = 0.0
        t.setflags(write=False)
        return t

    def sf(self, t: float) -> float:
        """``P(X > t)`` for real ``t`` (step-function semantics)."""
        k = math.floor(t)
        if k < 0:
            return 1.0
        if k >= self.support_max:
            return 0.0
        return float(self.tail_above[k])

    def cdf_at(self, t: float) -> float:
        k = math.floor(t)
        if k < 0:
            return 0.0
        if k >= self.support_max:
            return 1.0
        return float(self.cdf[k])

    @property
    def total_mass(self) -> float:
        return math.fsum(self.mass)

    @property
    def mean(self) -> float:
        k = np.arange(len(self.mass))
        return float(np.dot(k, self.mass) / self.mass.sum())

    @property
    def variance(self) -> float:
        k = np.arange(len(self.mass)) - self.mean
        return float(np.dot(k * k, self.mass) / self.mass.sum())

    def exact_moments(self) -> tuple[Fraction, Fraction]:
        if self.exact_counts is None:
            raise ValueError("no exact counts available")
        total = sum(self.exact_counts)
        m1 = Fraction(sum(k * c for k, c in enumerate(self.exact_counts)), total)
        m2 = Fraction(sum(k * k * c for k, c in enumerate(self.exact_counts)), total)
        return m1, m2 - m1 * m1

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if self.exact_counts is not None:
            w.writerow(["k", "count", "mass"])
            for k, (c, m) in enumerate(zip(self.exact_counts, self.mass)):
                w.writerow([k, c, repr(float(m))])
        else:
            w.writerow(["k", "mass"])
            for k, m in enumerate(self.mass):
                w.writerow([k, repr(float(m))])
        return buf.getvalue()

    def to_dict(self) -> dict:
        out = {
            "group": str(self.group) if self.group is not None else None,
            "stat": self.statistic.value,
            "support": [0, self.support_max],
            "mass": [float(m) for m in self.mass],
        }
        if self.exact_counts is not None:
            # Strings keep arbitrary-precision counts intact in any JSON reader.
            out["counts"] = [str(c) for c in self.exact_counts]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class Moments:
    mean: Fraction
    variance: Fraction

    @property
    def mean_f(self) -> float:
        return float(self.mean)

    @property
    def var_f(self) -> float:
        return float(self.variance)

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


@dataclass
class BernoulliParams:
    """Success probabilities of the descent decomposition, ascending."""

    p: list[float]
    residual: float = 0.0
    q: list[float] = field(default_factory=list)

    @property
    def mean(self) -> float:
        return math.fsum(self.p)

    @property
    def variance(self) -> float:
        return math.fsum(x * (1.0 - x) for x in self.p)


# ---------------------------------------------------------------------------
# Mahonian distribution


def mahonian_pmf(g: GroupDescriptor, exact: bool = False,
                 cap: int = MAHONIAN_EXACT_CAP) -> Pmf:
    """Inversion-count distribution from the degree product formula."""
    ds = g.degrees
    if exact:
        if g.reflection_count > cap:
            raise CapExceededError(
                f"exact Mahonian distribution needs {g.reflection_count} cells; cap is {cap}"
            )
        poly = IntPolynomial.one()
        for d in ds:
            poly = poly.times_geometric(d)
        return Pmf.from_counts(list(poly.coeffs), Stat.inv, g)
    mass = np.ones(1)
    for d in ds:
        mass = convolve_uniform(mass, d)
    return Pmf(mass, Stat.inv, g)


# ---------------------------------------------------------------------------
# Eulerian polynomials, exact


@lru_cache(maxsize=None)
def _eulerian_sym(m: int) -> IntPolynomial:
    """Descent polynomial of the symmetric group on ``m`` letters."""
    row = [1]
    for n in range(2, m + 1):
        new = [0] * n
        for k in range(n):
            a = row[k] if k < len(row) else 0
            b = row[k - 1] if k >= 1 else 0
            new[k] = (k + 1) * a + (n - k) * b
        row = new
    return IntPolynomial(row)


@lru_cache(maxsize=None)
def _eulerian_b(n: int) -> IntPolynomial:
    row = [1, 1]
    for m in range(2, n + 1):
        new = [0] * (m + 1)
        for k in range(m + 1):
            a = row[k] if k < len(row) else 0
            b = row[k - 1] if k >= 1 else 0
            new[k] = (2 * k + 1) * a + (2 * (m - k) + 1) * b
        row = new
    return IntPolynomial(row)


@lru_cache(maxsize=None)
def _eulerian_d(n: int) -> IntPolynomial:
    # D_n(t) = B_n(t) - n 2^(n-1) t E_{n-1}(t), E_{n-1} over S_{n-1}.
    return _eulerian_b(n) - (_eulerian_sym(n - 1) * (n * 2 ** (n - 1))).shift(1)


@lru_cache(maxsize=None)
def factor_eulerian_polynomial(f: IrreducibleFactor) -> IntPolynomial:
    if f.kind is Kind.A:
        return _eulerian_sym(f.param + 1)
    if f.kind is Kind.B:
        return _eulerian_b(f.param)
    if f.kind is Kind.D:
        return _eulerian_d(f.param)
    return IntPolynomial([1, 2 * f.param - 2, 1])


def eulerian_polynomial(g: GroupDescriptor, cap: int = EULERIAN_EXACT_CAP) -> IntPolynomial:
    """Descent generating function of ``g`` with exact integer coefficients."""
    for f in g.factors:
        if f.rank > cap:
            raise CapExceededError(f"factor {f} has rank {f.rank}; exact cap is {cap}")
    poly = IntPolynomial.one()
    for f in g.factors:
        poly = poly * factor_eulerian_polynomial(f)
    return poly


# ---------------------------------------------------------------------------
# Eulerian distribution, normalized floating


@lru_cache(maxsize=64)
def _sym_mass(m: int) -> np.ndarray:
    """Normalized descent law on ``m`` letters via the divided recurrence."""
    row = np.ones(1)
    for n in range(2, m + 1):
        k = np.arange(n, dtype=np.float64)
        new = np.zeros(n)
        new[:-1] += (k[:-1] + 1.0) * row
        new[1:] += (n - k[1:]) * row
        row = new / n
    row.setflags(write=False)
    return row


@lru_cache(maxsize=64)
def _b_mass(n: int) -> np.ndarray:
    row = np.array([0.5, 0.5])
    for m in range(2, n + 1):
        k = np.arange(m + 1, dtype=np.float64)
        new = np.zeros(m + 1)
        new[:-1] += (2.0 * k[:-1] + 1.0) * row
        new[1:] += (2.0 * (m - k[1:]) + 1.0) * row
        row = new / (2.0 * m)
    row.setflags(write=False)
    return row


def _d_mass(n: int) -> np.ndarray:
    # |D_n| = |B_n| / 2 and n 2^(n-1) (n-1)! / |D_n| = 1.
    out = 2.0 * _b_mass(n)
    out[1:n] -= _sym_mass(n - 1)
    np.maximum(out, 0.0, out=out)
    return out


def _factor_des_mass(f: IrreducibleFactor) -> np.ndarray:
    if f.rank <= EULERIAN_FLOAT_THRESHOLD:
        poly = factor_eulerian_polynomial(f)
        total = poly.value_at_one()
        return np.array([c / total for c in poly.coeffs])
    if f.kind is Kind.A:
        return _sym_mass(f.param + 1)
    if f.kind is Kind.B:
        return _b_mass(f.param)
    if f.kind is Kind.D:
        return _d_mass(f.param)
    m = f.param
    return np.array([1.0, 2.0 * m - 2.0, 1.0]) / (2.0 * m)


def eulerian_pmf(g: GroupDescriptor,
                 exact_threshold: int = EULERIAN_FLOAT_THRESHOLD) -> Pmf:
    """Descent-count distribution.

    Exact counts are attached when the total rank is at most
    ``exact_threshold``; above it the law is built in normalized floating
    form and far-tail cells may underflow to zero.
    """
    if g.rank <= exact_threshold:
        return Pmf.from_counts(list(eulerian_polynomial(g).coeffs), Stat.des, g)
    mass = np.ones(1)
    for f in g.factors:
        mass = np.convolve(mass, _factor_des_mass(f))
    return Pmf(mass, Stat.des, g)


@lru_cache(maxsize=None)
def _factor_roots(f: IrreducibleFactor, rel_tol: float) -> tuple[tuple[float, ...], float]:
    rl = isolate_negative_real_roots(factor_eulerian_polynomial(f), rel_tol)
    return tuple(rl.q), rl.residual


def descent_bernoulli_params(g: GroupDescriptor, rel_tol: float = DEFAULT_REL_TOL,
                             cap: int = ROOT_RANK_CAP) -> BernoulliParams:
    """Bernoulli parameters ``1/(1+q)`` of the descent decomposition.

    Roots are extracted per irreducible factor (the Eulerian polynomial of a
    product is the product of the factors' polynomials); ``cap`` bounds the
    rank of each factor.
    """
    qs: list[float] = []
    residual = 0.0
    for f in g.factors:
        if f.rank > cap:
            raise CapExceededError(f"root extraction for {f} exceeds rank cap {cap}")
        q, res = _factor_roots(f, rel_tol)
        qs.extend(q)
        residual = max(residual, res)
    qs.sort()
    p = sorted(1.0 / (1.0 + q) for q in qs)
    return BernoulliParams(p=p, residual=residual, q=qs)


# ---------------------------------------------------------------------------
# moments


def _inv_factor_moments(f: IrreducibleFactor) -> tuple[Fraction, Fraction]:
    """``(sum(d-1), sum(d^2-1))`` over the degrees of one factor."""
    n = f.param
    if f.kind is Kind.A:
        s1 = n * (n + 1) // 2
        s2 = (n + 1) * (n + 2) * (2 * n + 3) // 6 - 1 - n
    elif f.kind is Kind.B:
        s1 = n * n
        s2 = 4 * n * (n + 1) * (2 * n + 1) // 6 - n
    elif f.kind is Kind.D:
        m = n - 1
        s1 = m * m + (n - 1)
        s2 = 4 * m * (m + 1) * (2 * m + 1) // 6 - m + n * n - 1
    else:
        s1 = n
        s2 = n * n + 2
    return Fraction(s1), Fraction(s2)


def _sym_des(m: int) -> tuple[Fraction, Fraction]:
    """Mean and variance of descents on ``m`` letters."""
    if m <= 1:
        return Fraction(0), Fraction(0)
    return Fraction(m - 1, 2), Fraction(m + 1, 12)


def _des_factor_moments(f: IrreducibleFactor) -> tuple[Fraction, Fraction]:
    n = f.param
    if f.kind is Kind.A:
        return _sym_des(n + 1)
    if f.kind is Kind.B:
        return Fraction(n, 2), Fraction(n + 1, 12)
    if f.kind is Kind.I2:
        return Fraction(1), Fraction(1, n)
    # Type D from D_n = B_n - n 2^(n-1) t E_{n-1}; after dividing by |D_n|
    # the two terms carry total weights 2 and 1.
    mb, vb = Fraction(n, 2), Fraction(n + 1, 12)
    me, ve = _sym_des(n - 1)
    fact_b = vb + mb * mb - mb
    fact_e = ve + me * me - me
    m1 = 2 * mb - (1 + me)
    f2 = 2 * fact_b - (2 * me + fact_e)
    return m1, f2 + m1 - m1 * m1


def closed_form_moments(g: GroupDescriptor, stat: Stat | str) -> Moments:
    """Moments summed over factors from closed forms (no distribution needed)."""
    stat = Stat(stat)
    mean = Fraction(0)
    var = Fraction(0)
    for f in g.factors:
        if stat is Stat.inv:
            s1, s2 = _inv_factor_moments(f)
            mean += s1 / 2
            var += s2 / 12
        else:
            m, v = _des_factor_moments(f)
            mean += m
            var += v
    return Moments(mean, var)


def moments(g: GroupDescriptor, stat: Stat | str,
            exact_threshold: int = EULERIAN_FLOAT_THRESHOLD) -> Moments:
    """Exact mean and variance of the statistic on ``g``.

    Inversions use the degree formulas.  Descents are computed from the
    exact Eulerian coefficients when the rank is at most
    ``exact_threshold`` and from per-factor closed forms otherwise; in both
    cases the mean must equal ``rank/2``.
    """
    stat = Stat(stat)
    if stat is Stat.inv:
        return closed_form_moments(g, stat)
    if g.rank <= exact_threshold:
        poly = eulerian_polynomial(g)
        total = poly.value_at_one()
        m1 = Fraction(sum(k * c for k, c in enumerate(poly.coeffs)), total)
        m2 = Fraction(sum(k * k * c for k, c in enumerate(poly.coeffs)), total)
        out = Moments(m1, m2 - m1 * m1)
    else:
        out = closed_form_moments(g, stat)
    if out.mean != Fraction(g.rank, 2):
        raise InvariantViolation(f"descent mean {out.mean} != rank/2 for {g}")
    return out


# ---------------------------------------------------------------------------
# sampling


def _sample_decomposition(g: GroupDescriptor, stat: Stat, count: int,
                          rng: np.random.Generator) -> np.ndarray:
    out = np.zeros(count, dtype=np.int64)
    if stat is Stat.inv:
        for d in g.degrees:
            if d > 1:
                out += rng.integers(0, d, size=count)
        return out
    try:
        params = descent_bernoulli_params(g)
    except CapExceededError as exc:
        raise SamplerUnavailableError(f"decomposition sampler unavailable: {exc}") from None
    for p in params.p:
        out += rng.random(count) < p
    return out


def _sample_inverse_cdf(pmf: Pmf, count: int, rng: np.random.Generator) -> np.ndarray:
    u = rng.random(count)
    idx = np.searchsorted(pmf.cdf, u, side="right")
    np.minimum(idx, pmf.support_max, out=idx)
    return idx.astype(np.int64)


def sample(g: GroupDescriptor, stat: Stat | str, count: int, rng: np.random.Generator,
           method: str | None = None, pmf: Pmf | None = None) -> np.ndarray:
    """Draw ``count`` i.i.d. values of the statistic.

    ``method`` is ``"decomposition"`` (one uniform per degree or one
    Bernoulli per root) or ``"inverse_cdf"`` (binary search in the CDF of a
    materialized PMF).  The default is ``inverse_cdf`` when ``pmf`` is given
    and ``decomposition`` otherwise.
    """
    stat = Stat(stat)
    if method is None:
        method = "inverse_cdf" if pmf is not None else "decomposition"
    if method == "decomposition":
        return _sample_decomposition(g, stat, count, rng)
    if method == "inverse_cdf":
        if pmf is None:
            pmf = mahonian_pmf(g) if stat is Stat.inv else eulerian_pmf(g)
        return _sample_inverse_cdf(pmf, count, rng)
    raise ValueError(f"unknown sampling method {method!r}")
