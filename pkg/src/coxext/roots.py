"""Negative real roots of real-rooted integer polynomials.

The polynomial ``p`` is assumed to have positive coefficients and only
real roots, hence only negative ones.  We work with ``f(x) = p(-x)`` whose
roots ``q`` are positive.  All derivatives of a real-rooted polynomial with
simple roots are real-rooted with simple roots, and the roots of ``f^(j)``
strictly interlace those of ``f^(j+1)``.  Starting from the linear
derivative, each level's roots therefore give one sign-change bracket per
root of the level above.  Signs are evaluated exactly (floats are dyadic
rationals), so brackets are never corrupted by cancellation.

Repeated roots are handled by square-free decomposition before isolation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .polynomials import IntPolynomial

__all__ = [
    "RootClusterError",
    "RootError",
    "RootList",
    "RootNotConvergedError",
    "isolate_negative_real_roots",
    "square_free_decomposition",
]

DEFAULT_REL_TOL = 1e-12
MAX_ITER = 400


class RootError(ArithmeticError):
    """Root isolation failed."""


class RootNotConvergedError(RootError):
    """Bracketing or refinement did not converge.

    Either the iteration budget ran out or an expected sign change was
    missing, which means the polynomial is not real-rooted as assumed.
    """


class RootClusterError(RootError):
    """Distinct roots closer than the requested tolerance."""

    def __init__(self, message: str, cluster_size: int) -> None:
        super().__init__(message)
        self.cluster_size = cluster_size


@dataclass
class RootList:
    """Negatives ``q`` of the roots, ascending, repeated by multiplicity."""

    q: list[float]
    residual: float
    multiplicity: dict[float, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.q)

    def __iter__(self):
        return iter(self.q)


# ---------------------------------------------------------------------------
# exact helpers


def _primitive(cs: list[int]) -> list[int]:
    g = 0
    for c in cs:
        g = math.gcd(g, c)
    if g == 0:
        return cs
    if cs[-1] < 0:
        g = -g
    return [c // g for c in cs]


def _trim(cs: list) -> list:
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return cs


def _pseudo_rem(a: list[int], b: list[int]) -> list[int]:
    """Remainder of ``lead(b)**k * a`` divided by ``b`` (integer arithmetic)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and any(r):
        shift = len(r) - 1 - db
        lr = r[-1]
        r = [c * lb for c in r]
        for i, bc in enumerate(b):
            r[i + shift] -= lr * bc
        r.pop()
        _trim(r)
        if len(r) == 1 and r[0] == 0:
            break
    return _trim(r) if r else [0]


def _gcd(a: list[int], b: list[int]) -> list[int]:
    a, b = _primitive(list(a)), _primitive(list(b))
    while not (len(b) == 1 and b[0] == 0):
        r = _pseudo_rem(a, b)
        a, b = b, (_primitive(r) if any(r) else [0])
    return _primitive(a)


def _exact_div(a: list, b: list) -> list[Fraction]:
    """Exact quotient ``a / b`` over the rationals; ``b`` must divide ``a``."""
    r = [Fraction(c) for c in a]
    db = len(b) - 1
    q = [Fraction(0)] * (len(a) - db)
    for k in range(len(q) - 1, -1, -1):
        coef = r[k + db] / b[-1]
        q[k] = coef
        for i, bc in enumerate(b):
            r[k + i] -= coef * bc
    if any(r[:db]):
        raise ArithmeticError("inexact polynomial division")
    return q


def _to_primitive_int(cs: list) -> list[int]:
    den = math.lcm(*(Fraction(c).denominator for c in cs))
    return _primitive([int(Fraction(c) * den) for c in cs])


def _deriv(cs: list) -> list:
    return [k * v for k, v in enumerate(cs)][1:] or [0]


def _is_zero(cs: list) -> bool:
    return all(c == 0 for c in cs)


def square_free_decomposition(p: IntPolynomial) -> list[tuple[IntPolynomial, int]]:
    """Yun's algorithm: ``p = c * prod(a_i ** i)`` with square-free ``a_i``.

    Returns the nonconstant ``(a_i, i)`` pairs, each ``a_i`` primitive with
    positive leading coefficient.
    """
    f = list(p.coeffs)
    if len(f) <= 2:
        return [(IntPolynomial(_primitive(f)), 1)] if len(f) == 2 else []
    df = _deriv(f)
    a0 = _gcd(f, df)
    b = _exact_div(f, a0)
    c = _exact_div(df, a0)
    out = []
    i = 1
    while len(b) > 1:
        db = _deriv(b)
        n = max(len(c), len(db))
        d = _trim([(c[k] if k < len(c) else 0) - (db[k] if k < len(db) else 0)
                   for k in range(n)])
        if _is_zero(d):
            out.append((IntPolynomial(_to_primitive_int(b)), i))
            break
        a = _gcd(_to_primitive_int(b), _to_primitive_int(d))
        if len(a) > 1:
            out.append((IntPolynomial(a), i))
        b = _exact_div(b, a)
        c = _exact_div(d, a)
        i += 1
    return out


# ---------------------------------------------------------------------------
# evaluation of f(x) = p(-x) at dyadic x


class _Level:
    """``f^(j)`` with coefficients in the variable ``x`` (``p(-x)`` convention)."""

    def __init__(self, coeffs: list[int]) -> None:
        self.c = coeffs
        self.deg = len(coeffs) - 1

    def scaled_value(self, num: int, den: int) -> int:
        """``den**deg * f(num/den)`` as an exact integer."""
        c = self.c
        acc = c[-1]
        pw = den
        for k in range(self.deg - 1, -1, -1):
            acc = acc * num + c[k] * pw
            pw *= den
        return acc

    def sign(self, x: float) -> int:
        num, den = x.as_integer_ratio()
        v = self.scaled_value(num, den)
        return (v > 0) - (v < 0)


def _mid(lo: float, hi: float) -> float:
    if lo > 0.0 and hi / lo > 4.0:
        return math.sqrt(lo) * math.sqrt(hi)
    return lo + 0.5 * (hi - lo)


def _width(lo: float, hi: float) -> float:
    return math.log(hi / lo) if lo > 0.0 else hi - lo


def _refine(f: _Level, df: _Level, lo: float, hi: float, s_lo: int,
            rel_tol: float) -> float:
    """Root of ``f`` in ``(lo, hi)`` given the sign ``s_lo`` of ``f(lo)``.

    Newton steps are taken only inside the current bracket, and a bisection
    step is forced whenever two iterations fail to halve the bracket.
    """
    x = _mid(lo, hi)
    last_width = _width(lo, hi)
    stalls = 0
    for _ in range(MAX_ITER):
        num, den = x.as_integer_ratio()
        fv = f.scaled_value(num, den)
        if fv == 0:
            return x
        s = 1 if fv > 0 else -1
        if s == s_lo:
            lo = x
        else:
            hi = x
        if hi - lo <= rel_tol * lo:
            return _mid(lo, hi)
        width = _width(lo, hi)
        if width > 0.5 * last_width:
            stalls += 1
        else:
            stalls = 0
            last_width = width
        cand = None
        dv = df.scaled_value(num, den) if stalls < 2 else 0
        if dv != 0:
            # f/f' = (fv / den**d) / (dv / den**(d-1))
            step = fv / (dv * den)
            cand = x - step
            if not (lo < cand < hi) or not math.isfinite(cand):
                cand = None
            elif abs(step) <= 0.25 * rel_tol * cand:
                # Newton has settled; confirm with a tight bracket.
                a = cand * (1.0 - 0.5 * rel_tol)
                b = cand * (1.0 + 0.5 * rel_tol)
                sa, sb = f.sign(a), f.sign(b)
                if sa == 0:
                    return a
                if sb == 0:
                    return b
                if sa != sb:
                    return cand
                if sa == s_lo:
                    lo = max(lo, b)
                else:
                    hi = min(hi, a)
                cand = None
        if cand is None:
            stalls = 0
            last_width = _width(lo, hi)
            cand = _mid(lo, hi)
        x = cand
    raise RootNotConvergedError(
        f"root refinement in ({lo:.17g}, {hi:.17g}) did not converge in {MAX_ITER} steps"
    )


def _simple_roots(poly: IntPolynomial, rel_tol: float) -> list[float]:
    """Positive roots ``q`` of ``poly(-x)`` for square-free real-rooted ``poly``."""
    n = poly.degree
    fx = [c if k % 2 == 0 else -c for k, c in enumerate(poly.coeffs)]
    # All q are positive, so sum(q) and sum(1/q) bound the extreme roots;
    # these also enclose the roots of every derivative.
    c = poly.coeffs
    bound = float(Fraction(c[-2], c[-1])) * (1.0 + 1e-9)
    floor = float(Fraction(c[0], c[1])) * (1.0 - 1e-9)
    levels = [_Level(fx)]
    for _ in range(n - 1):
        prev = levels[-1].c
        levels.append(_Level([k * c for k, c in enumerate(prev)][1:]))
    # levels[j] is f^(j); the last one is linear.
    lin = levels[-1].c
    roots = [float(Fraction(-lin[0], lin[1]))]
    for j in range(n - 2, -1, -1):
        f, df = levels[j], levels[j + 1]
        edges = [floor] + roots + [bound]
        new = []
        for a, b in zip(edges[:-1], edges[1:]):
            sa, sb = f.sign(a), f.sign(b)
            if sa == 0:
                new.append(a)
                continue
            if sb == 0:
                new.append(b)
                continue
            if sa == sb:
                raise RootNotConvergedError(
                    f"no sign change of derivative {j} on ({a:.17g}, {b:.17g}); "
                    "polynomial is not real-rooted or roots are too close"
                )
            new.append(_refine(f, df, a, b, sa, rel_tol))
        roots = new
    return roots


def isolate_negative_real_roots(p: IntPolynomial,
                                rel_tol: float = DEFAULT_REL_TOL) -> RootList:
    """Return ``q`` with ``p(z) = lead * prod(z + q_i)``.

    ``p`` must have positive coefficients and be real-rooted.  Each root is
    refined to relative width ``rel_tol``.  Raises
    :class:`RootNotConvergedError` when a bracket lacks a sign change and
    :class:`RootClusterError` when distinct roots are closer than
    ``rel_tol``.
    """
    if p.degree < 1:
        return RootList(q=[], residual=0.0)
    if any(c <= 0 for c in p.coeffs):
        raise ValueError("polynomial must have positive coefficients")
    parts = square_free_decomposition(p)
    q: list[float] = []
    mult: dict[float, int] = {}
    for part, k in parts:
        for r in _simple_roots(part, rel_tol):
            q.extend([r] * k)
            mult[r] = mult.get(r, 0) + k
    q.sort()
    distinct = sorted(mult)
    for a, b in zip(distinct[:-1], distinct[1:]):
        if b - a <= rel_tol * b:
            cluster = mult[a] + mult[b]
            raise RootClusterError(
                f"distinct roots {a!r} and {b!r} collide within rel_tol={rel_tol}",
                cluster,
            )
    if len(q) != p.degree:
        raise RootNotConvergedError(f"found {len(q)} roots, expected {p.degree}")
    return RootList(q=q, residual=_residual(p, distinct), multiplicity=mult)


def _residual(p: IntPolynomial, qs: list[float]) -> float:
    """Max of ``|p(-q)| / sum(|c_k| q**k)`` over the roots."""
    fx = _Level([c if k % 2 == 0 else -c for k, c in enumerate(p.coeffs)])
    absolute = _Level([abs(c) for c in p.coeffs])
    worst = 0.0
    for q in qs:
        num, den = q.as_integer_ratio()
        worst = max(worst, abs(fx.scaled_value(num, den)) / absolute.scaled_value(num, den))
    return worst
