"""Exact integer polynomials and floating PMF convolution kernels."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction

import numba
import numpy as np

__all__ = [
    "IntPolynomial",
    "convolve_uniform",
    "geometric_sum",
]


class IntPolynomial:
    """Polynomial with arbitrary-precision integer coefficients.

    Coefficients are stored ascending by exponent with no trailing zeros;
    the zero polynomial is represented by the single coefficient ``0``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]) -> None:
        cs = [int(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [0]
        self.coeffs: tuple[int, ...] = tuple(cs)

    @classmethod
    def one(cls) -> IntPolynomial:
        return cls([1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs != (0,) else -1

    @property
    def lead(self) -> int:
        return self.coeffs[-1]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, IntPolynomial):
            return self.coeffs == other.coeffs
        if isinstance(other, (list, tuple)):
            return self.coeffs == IntPolynomial(other).coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"IntPolynomial({list(self.coeffs)!r})"

    def __add__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self), len(other))
        return IntPolynomial(self[k] + other[k] for k in range(n))

    def __sub__(self, other: IntPolynomial) -> IntPolynomial:
        n = max(len(self), len(other))
        return IntPolynomial(self[k] - other[k] for k in range(n))

    def __mul__(self, other: IntPolynomial | int) -> IntPolynomial:
        if isinstance(other, int):
            return IntPolynomial(c * other for c in self.coeffs)
        return multiply(self, other)

    __rmul__ = __mul__

    def shift(self, k: int) -> IntPolynomial:
        """Multiply by ``z**k``."""
        if self.degree < 0:
            return self
        return IntPolynomial((0,) * k + self.coeffs)

    def derivative(self) -> IntPolynomial:
        return IntPolynomial(k * c for k, c in enumerate(self.coeffs) if k > 0)

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def value_at_one(self) -> int:
        return sum(self.coeffs)

    def reversed(self) -> IntPolynomial:
        return IntPolynomial(reversed(self.coeffs))

    def is_palindromic(self) -> bool:
        return self.coeffs == self.coeffs[::-1]

    def times_geometric(self, d: int) -> IntPolynomial:
        """Multiply by ``1 + z + ... + z**(d-1)`` with a running window sum."""
        if d < 1:
            raise ValueError(f"d must be >= 1, got {d}")
        cs = self.coeffs
        n = len(cs)
        out = []
        window = 0
        for k in range(n + d - 1):
            if k < n:
                window += cs[k]
            if k - d >= 0:
                window -= cs[k - d]
            out.append(window)
        return IntPolynomial(out)

    def to_fractions(self) -> list[Fraction]:
        return [Fraction(c) for c in self.coeffs]


def multiply(p: IntPolynomial, r: IntPolynomial) -> IntPolynomial:
    """Exact product by schoolbook convolution."""
    a, b = p.coeffs, r.coeffs
    if len(a) < len(b):
        a, b = b, a
    out = [0] * (len(a) + len(b) - 1)
    for j, bj in enumerate(b):
        if bj == 0:
            continue
        for i, ai in enumerate(a):
            out[i + j] += ai * bj
    return IntPolynomial(out)


def geometric_sum(d: int) -> IntPolynomial:
    """``1 + z + ... + z**(d-1)``."""
    return IntPolynomial([1] * d)


@numba.njit(cache=True)
def _window_sums(x, d):  # pragma: no cover - compiled
    n = x.shape[0]
    size = n + d - 1
    out = np.empty(size)
    # Split where the cumulative mass reaches half: below it the running
    # window sum is accumulated upward, above it downward, so each tail is
    # summed starting from its own small end.
    total = 0.0
    for i in range(n):
        total += x[i]
    acc = 0.0
    split = size
    for k in range(size):
        if k < n:
            acc += x[k]
        if acc >= 0.5 * total:
            split = k
            break
    # Neumaier-compensated running window sums.
    s = 0.0
    c = 0.0
    for k in range(split):
        if k < n:
            v = x[k]
            t = s + v
            if abs(s) >= abs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
        if k >= d:
            v = -x[k - d]
            t = s + v
            if abs(s) >= abs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
        out[k] = s + c
    s = 0.0
    c = 0.0
    for k in range(size - 1, split - 1, -1):
        j = k - d + 1
        if j >= 0:
            v = x[j]
            t = s + v
            if abs(s) >= abs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
        if k + 1 < n:
            v = -x[k + 1]
            t = s + v
            if abs(s) >= abs(v):
                c += (s - t) + v
            else:
                c += (v - t) + s
            s = t
        out[k] = s + c
    for k in range(size):
        v = out[k] / d
        out[k] = v if v > 0.0 else 0.0
    return out


def convolve_uniform(mass: Sequence[float] | np.ndarray, d: int) -> np.ndarray:
    """Law of ``X + U`` with ``X ~ mass`` and ``U`` uniform on ``{0, ..., d-1}``.

    One compiled pass of compensated running window sums, O(len(mass) + d).
    The lower half of the output is accumulated from the bottom of the
    support and the upper half from the top, so both tails keep their
    relative accuracy.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    x = np.ascontiguousarray(mass, dtype=np.float64)
    if d == 1:
        return x.copy()
    return _window_sums(x, int(d))
