"""Growth and variance conditions on sequences of groups, as trend diagnostics.

A sequence is a family of descriptors indexed by ``n`` (the row size of the
triangular array) together with a rank map ``n -> N``.  Each condition is
turned into a ratio sequence ``r(n)`` and judged by the least-squares slope
of ``log r`` against ``log n``.  This is a heuristic: asymptotic relations
cannot be decided from finitely many points, so verdicts are labelled
``satisfied``, ``violated`` or ``inconclusive`` and nothing more.

Quantities that can be astronomically large (dihedral orders ``2**i``) are
kept as Python integers or fractions and compared through logarithms.
"""

from __future__ import annotations

import csv
import enum
import io
import json
import math
import re
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .groups import DescriptorError, GroupDescriptor, IrreducibleFactor, Kind, parse_descriptor
from .statistics import Stat, closed_form_moments

__all__ = [
    "CONDITIONS",
    "ConditionReport",
    "Family",
    "RankMap",
    "SequenceProfile",
    "SequenceSpec",
    "Verdict",
    "check_growth",
    "norm_form_check",
    "parse_sequence",
    "profile_sequence",
]

SLOPE_THRESHOLD = 0.05
MIN_R_SQUARED = 0.9
MIN_POINTS = 4
MIN_DECADES = 2.0


class Verdict(str, enum.Enum):
    satisfied = "satisfied"
    violated = "violated"
    inconclusive = "inconclusive"


class Family(str, enum.Enum):
    A = "A"
    B = "B"
    D = "D"
    dihedral_power = "dihedral_power"
    schedule = "schedule"
    template = "template"


# ---------------------------------------------------------------------------
# rank maps


@dataclass(frozen=True)
class RankMap:
    """``n -> N``: identity, ``ceil(log(n)**power) + offset``, or a table."""

    kind: str = "identity"
    power: int = 3
    offset: int = 0
    table: tuple[tuple[int, int], ...] = ()

    @classmethod
    def parse(cls, text: str) -> RankMap:
        t = text.replace(" ", "")
        if t in ("n", "N=n", "identity"):
            return cls()
        m = re.fullmatch(r"(?:N=)?(?:ceil\()?log(?:\(n\))?\^(\d+)\)?(?:\+(\d+))?", t)
        if m:
            return cls("log", int(m.group(1)), int(m.group(2) or 0))
        m = re.fullmatch(r"table\((.*)\)", t)
        if m:
            body = m.group(1)
            path = Path(body)
            if ":" not in body and path.exists():
                body = ",".join(path.read_text().split())
            pairs = []
            for item in filter(None, body.split(",")):
                k, _, v = item.partition(":")
                pairs.append((int(k), int(v)))
            return cls("table", table=tuple(sorted(pairs)))
        raise ValueError(f"unrecognized rank map {text!r}")

    def __call__(self, n: int) -> int:
        if self.kind == "identity":
            return n
        if self.kind == "log":
            if n < 1:
                raise ValueError(f"log rank map needs n >= 1, got {n}")
            return math.ceil(math.log(n) ** self.power) + self.offset
        lookup = dict(self.table)
        if n not in lookup:
            raise ValueError(f"rank table has no entry for n={n}")
        return lookup[n]

    def __str__(self) -> str:
        if self.kind == "identity":
            return "n"
        if self.kind == "log":
            return f"log^{self.power}" + (f"+{self.offset}" if self.offset else "")
        return "table(" + ",".join(f"{k}:{v}" for k, v in self.table) + ")"


# ---------------------------------------------------------------------------
# sequences


@dataclass(frozen=True)
class SequenceSpec:
    """A family of groups ``W_n`` with rank (or factor count) ``rank_map(n)``.

    * ``A``/``B``/``D``: the irreducible group of rank ``N``.
    * ``dihedral_power``: ``I2(m)**N``.
    * ``schedule``: ``I2(m_1) x ... x I2(m_N)`` with the first ``N`` orders.
    * ``template``: a descriptor with ``{N}`` substituted, e.g.
      ``"A{N} x I2(7)^{N}"``.
    """

    family: Family
    rank_map: RankMap = field(default_factory=RankMap)
    m: int = 0
    schedule: tuple[int, ...] = ()
    template: str = ""

    def materialize(self, n: int) -> GroupDescriptor:
        N = self.rank_map(n)
        try:
            if self.family in (Family.A, Family.B, Family.D):
                return GroupDescriptor.of(IrreducibleFactor(Kind(self.family.value), N))
            if self.family is Family.dihedral_power:
                if N < 1:
                    raise DescriptorError(f"need at least one factor, got {N}")
                return GroupDescriptor((IrreducibleFactor(Kind.I2, self.m),) * N)
            if self.family is Family.schedule:
                if not 1 <= N <= len(self.schedule):
                    raise DescriptorError(
                        f"row n={n} needs {N} dihedral orders; schedule has {len(self.schedule)}")
                return GroupDescriptor(tuple(IrreducibleFactor(Kind.I2, m)
                                             for m in self.schedule[:N]))
            return parse_descriptor(self.template.replace("{N}", str(N)))
        except DescriptorError as exc:
            raise DescriptorError(f"cannot materialize {self} at n={n}: {exc}") from None

    def __str__(self) -> str:
        if self.family in (Family.A, Family.B, Family.D):
            head = self.family.value
        elif self.family is Family.dihedral_power:
            head = f"I2({self.m})"
        elif self.family is Family.schedule:
            head = f"schedule[{len(self.schedule)}]"
        else:
            head = f"template({self.template})"
        return f"{head}@{self.rank_map}"


def parse_sequence(text: str) -> SequenceSpec:
    """Parse ``FAMILY[@RANKMAP]``.

    Families: ``A``, ``B``, ``D``, ``I2(m)``, ``schedule(PATH)`` (one order
    per line), ``schedule(m1,m2,...)`` and ``template(DESCRIPTOR)``.  Rank
    maps: ``n``, ``log^p[+c]``, ``table(n:N,...)`` or ``table(PATH)``.
    """
    head, sep, tail = text.strip().rpartition("@")
    if not sep or head.count("(") != head.count(")"):
        head, tail = text.strip(), "n"
    rank_map = RankMap.parse(tail)
    h = head.strip()
    if h in ("A", "B", "D", "An", "Bn", "Dn"):
        return SequenceSpec(Family(h[0]), rank_map)
    m = re.fullmatch(r"I2\((\d+)\)", h.replace(" ", ""))
    if m:
        order = int(m.group(1))
        IrreducibleFactor(Kind.I2, order)
        return SequenceSpec(Family.dihedral_power, rank_map, m=order)
    m = re.fullmatch(r"schedule\((.*)\)", h)
    if m:
        return SequenceSpec(Family.schedule, rank_map, schedule=read_schedule(m.group(1)))
    m = re.fullmatch(r"template\((.*)\)", h)
    if m:
        if "{N}" not in m.group(1):
            raise ValueError("template needs a {N} placeholder")
        return SequenceSpec(Family.template, rank_map, template=m.group(1))
    raise ValueError(f"unrecognized sequence family {head!r}")


def read_schedule(source: str) -> tuple[int, ...]:
    """Dihedral orders from a file (one per line) or a comma list."""
    if re.fullmatch(r"[\d,\s]+", source):
        values = [int(v) for v in source.split(",") if v.strip()]
    else:
        lines = [ln.strip() for ln in Path(source).read_text().splitlines()]
        values = [int(ln) for ln in lines if ln and not ln.startswith("#")]
    for v in values:
        IrreducibleFactor(Kind.I2, v)
    return tuple(values)


# ---------------------------------------------------------------------------
# profiles


def _log(x: int | Fraction) -> float:
    """Natural log of a positive integer or fraction of any size."""
    x = Fraction(x)
    return math.log(x.numerator) - math.log(x.denominator)


def _exp(x: float) -> float:
    return math.exp(x) if x < 709.0 else math.inf


def _max_degree(f: IrreducibleFactor) -> int:
    n = f.param
    if f.kind is Kind.A:
        return n + 1
    if f.kind is Kind.B:
        return 2 * n
    if f.kind is Kind.D:
        return max(2 * n - 2, n)
    return n


@dataclass
class SequenceProfile:
    n: int
    stat: str
    N_n: int
    k_n: int
    R_n: int
    n_max: int
    m_max: int
    rank_cubes: int
    m_squares: int
    m_n: Fraction
    mean: Fraction
    variance: Fraction
    d_max: int

    @property
    def log_s(self) -> float:
        return 0.5 * _log(self.variance)

    @property
    def s_n(self) -> float:
        return _exp(self.log_s)

    @property
    def lam(self) -> float:
        """Largest centred summand over ``s_n``."""
        if Stat(self.stat) is Stat.inv:
            return _exp(math.log((self.d_max - 1) / 2) - self.log_s) if self.d_max > 1 else 0.0
        return _exp(-self.log_s)

    def to_dict(self) -> dict:
        out = asdict(self)
        for key in ("m_n", "mean", "variance"):
            out[key] = str(out[key])
        out.update(s_n=self.s_n, lam=self.lam)
        return out


def profile_group(g: GroupDescriptor, n: int, stat: Stat | str) -> SequenceProfile:
    stat = Stat(stat)
    classical = g.classical
    dihedral = [f.param for f in g.dihedral]
    mom = closed_form_moments(g, stat)
    if mom.variance <= 0:
        raise ValueError(f"degenerate variance for {g}")
    N = sum(f.rank for f in classical)
    prof = SequenceProfile(
        n=n, stat=stat.value, N_n=N, k_n=len(dihedral), R_n=N + 2 * len(dihedral),
        n_max=max((f.rank for f in classical), default=0),
        m_max=max(dihedral, default=0),
        rank_cubes=sum(f.rank ** 3 for f in classical),
        m_squares=sum(m * m for m in dihedral),
        m_n=sum((Fraction(1, m) for m in dihedral), Fraction(0)),
        mean=mom.mean, variance=mom.variance,
        d_max=max(_max_degree(f) for f in g.factors),
    )
    if prof.R_n != g.rank:
        raise AssertionError(f"profile rank {prof.R_n} != descriptor rank {g.rank}")
    return prof


def profile_sequence(spec: SequenceSpec, ns, stat: Stat | str) -> list[SequenceProfile]:
    """Closed-form profile of ``W_n`` for each ``n`` (no distributions built)."""
    return [profile_group(spec.materialize(int(n)), int(n), stat) for n in ns]


# ---------------------------------------------------------------------------
# conditions
#
# Each entry returns log r(n) for a profile; -inf encodes r = 0.


def _safe_log(x: int | Fraction) -> float:
    return _log(x) if x > 0 else -math.inf


def _rank_growth(p: SequenceProfile) -> float:
    if p.n < 2:
        raise ValueError("rank_growth needs n >= 2")
    return 3 * math.log(math.log(p.n)) - math.log(p.R_n)


def _inv_classical_31(p: SequenceProfile) -> float:
    return _safe_log(p.n_max) + 0.5 * _safe_log(p.N_n) - p.log_s


def _des_32(p: SequenceProfile) -> float:
    return 0.5 * _safe_log(p.N_n) - p.log_s


def _des_32_row(p: SequenceProfile) -> float:
    return 0.5 * math.log(p.n) - p.log_s


def _inv_products_43(p: SequenceProfile) -> float:
    return _safe_log(p.n_max) + 0.5 * _safe_log(p.N_n) - 0.5 * _safe_log(p.rank_cubes)


def _inv_dihedral_45(p: SequenceProfile) -> float:
    return (_safe_log(max(p.n_max, p.m_max)) + 0.5 * math.log(p.R_n)
            - 0.5 * _log(p.rank_cubes + p.m_squares))


def _des_dihedral_47(p: SequenceProfile) -> float:
    return 0.5 * math.log(p.R_n) - _log(p.N_n + p.m_n)


def _cor48_inv(p: SequenceProfile) -> float:
    if p.k_n == 0:
        return -math.inf
    return _log(p.m_max) + 0.5 * math.log(p.k_n) - 0.5 * _log(p.m_squares)


def _cor48_des(p: SequenceProfile) -> float:
    if p.k_n == 0:
        return -math.inf
    return math.log(p.k_n) - _log(p.m_n)


CONDITIONS = {
    "rank_growth": _rank_growth,
    "inv_classical_31": _inv_classical_31,
    "des_32": _des_32,
    "inv_products_43": _inv_products_43,
    "inv_dihedral_45": _inv_dihedral_45,
    "des_dihedral_47": _des_dihedral_47,
    "cor48_inv": _cor48_inv,
    "cor48_des": _cor48_des,
}

# Conditions whose ratio must tend to zero rather than stay bounded.
_VANISHING = {"rank_growth"}


@dataclass
class ConditionReport:
    condition_id: str
    ns: list[int]
    ratios: list[float]
    verdict: Verdict
    slope: float
    r_squared: float
    alternate: dict[str, list[float]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "ratio", "verdict"])
        for n, r in zip(self.ns, self.ratios):
            w.writerow([n, repr(r), self.verdict.value])
        return buf.getvalue()

    def to_json(self) -> str:
        d = asdict(self)
        d["verdict"] = self.verdict.value
        return json.dumps(d)


def _fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Least-squares slope and R^2 of ``y`` on ``x``."""
    if len(x) < 2:
        return 0.0, 1.0
    xc = x - x.mean()
    yc = y - y.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ yc) / sxx
    syy = float(yc @ yc)
    if syy <= 1e-24 * max(1.0, float(y @ y)):
        return 0.0 if abs(slope) < 1e-12 else slope, 1.0
    resid = yc - slope * xc
    return slope, 1.0 - float(resid @ resid) / syy


def check_growth(profiles: list[SequenceProfile], condition_id: str) -> ConditionReport:
    """Ratio sequence and verdict for one condition.

    Bounded conditions are ``satisfied`` when the log-log slope is at most
    +0.05, ``violated`` when it exceeds +0.05 with R^2 >= 0.9, and
    ``inconclusive`` otherwise.  ``rank_growth`` demands strict decrease
    with slope below -0.05 and is otherwise ``violated``.
    """
    if condition_id not in CONDITIONS:
        raise ValueError(f"unknown condition {condition_id!r}; choose from {sorted(CONDITIONS)}")
    profiles = sorted(profiles, key=lambda p: p.n)
    ns = [p.n for p in profiles]
    if len(set(ns)) < MIN_POINTS:
        raise ValueError(f"need at least {MIN_POINTS} distinct n values, got {len(set(ns))}")
    if math.log10(ns[-1] / ns[0]) < MIN_DECADES:
        raise ValueError(f"n values must span at least {MIN_DECADES:g} decades")
    fn = CONDITIONS[condition_id]
    logs = np.array([fn(p) for p in profiles])
    ratios = [_exp(v) if v > -math.inf else 0.0 for v in logs]
    finite = np.isfinite(logs)
    x = np.log(np.array(ns, dtype=float))
    slope, r2 = _fit(x[finite], logs[finite])
    notes: list[str] = []
    alternate: dict[str, list[float]] = {}

    if condition_id in _VANISHING:
        decreasing = all(b < a for a, b in zip(logs[:-1], logs[1:]))
        verdict = Verdict.satisfied if decreasing and slope < -SLOPE_THRESHOLD else Verdict.violated
    elif not finite.all() and (logs == math.inf).any():
        verdict = Verdict.violated
    elif slope <= SLOPE_THRESHOLD:
        verdict = Verdict.satisfied
    elif r2 >= MIN_R_SQUARED:
        verdict = Verdict.violated
    else:
        verdict = Verdict.inconclusive

    if condition_id == "des_32":
        alt = [_exp(_des_32_row(p)) for p in profiles]
        alternate["sqrt_n_over_s"] = alt
        alt_slope, alt_r2 = _fit(x, np.log(alt))
        alt_ok = alt_slope <= SLOPE_THRESHOLD or alt_r2 < MIN_R_SQUARED
        notes.append("verdict uses sqrt(N_n)/s_n; the row-size reading sqrt(n)/s_n has "
                     f"slope {alt_slope:.3f} ({'bounded' if alt_ok else 'unbounded'})")
    if condition_id not in _VANISHING and not finite.all():
        notes.append("zero ratios (condition vacuous at those n) excluded from the fit")
    return ConditionReport(condition_id, ns, ratios, verdict, slope, r2, alternate, notes)


def norm_form_check(m_vector) -> tuple[int, float, float]:
    """``(max m_i, ||m||_2 / sqrt(k), ratio)``; the ratio is never below 1."""
    ms = [int(m) for m in m_vector]
    if not ms:
        raise ValueError("empty vector of dihedral orders")
    k = len(ms)
    lhs = max(ms)
    sq = sum(m * m for m in ms)
    try:
        rhs = math.sqrt(sq / k)
        ratio = lhs / rhs
    except OverflowError:
        half = 0.5 * (_log(sq) - math.log(k))
        rhs = _exp(half)
        ratio = _exp(_log(lhs) - half)
    if lhs * lhs * k >= sq:
        ratio = max(ratio, 1.0)
    return lhs, rhs, ratio
