"""Brute-force ground truth by breadth-first search of the Cayley graph.

Each irreducible factor has a concrete model with right multiplication by
its Coxeter generators:

* ``A(n)``: permutations of ``1..n+1`` in one-line notation; ``s_i`` swaps
  window positions ``i, i+1``.
* ``B(n)``: signed permutations; ``s_0`` negates the first entry.
* ``D(n)``: even-signed permutations; ``s_0`` swaps the first two entries
  and negates both.
* ``I2(m)``: pairs ``(j, f)`` standing for ``r**j s**f`` in the symmetry
  group of the m-gon, generated by the reflections ``s`` and ``r s``.

BFS depth from the identity is the word length, which equals the number
of inversions; descents are read off from the depths of the neighbours.
"""

from __future__ import annotations

import csv
import io
import math
from collections import deque
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .groups import GroupDescriptor, IrreducibleFactor, Kind
from .statistics import Pmf, Stat

__all__ = [
    "DEFAULT_CAP",
    "OracleCapError",
    "OracleInconsistencyError",
    "OracleTable",
    "enumerate_group",
    "oracle_pmf",
]

DEFAULT_CAP = 10**6

State = tuple
Generator = Callable[[State], State]


class OracleCapError(ValueError):
    pass


class OracleInconsistencyError(RuntimeError):
    """The enumeration violated a Coxeter-group invariant."""


def _swap(i: int) -> Generator:
    def act(w: State) -> State:
        w = list(w)
        w[i], w[i + 1] = w[i + 1], w[i]
        return tuple(w)
    return act


def _negate_first(w: State) -> State:
    return (-w[0],) + w[1:]


def _swap_negate(w: State) -> State:
    return (-w[1], -w[0]) + w[2:]


def _dihedral_gen(m: int, k: int) -> Generator:
    # (j, f) * (k, 1) = (j + (-1)^f k, 1 - f)
    def act(w: State) -> State:
        j, f = w
        return ((j - k if f else j + k) % m, 1 - f)
    return act


def _model_size(f: IrreducibleFactor) -> int:
    """Number of elements in the model (not derived from the degrees)."""
    n = f.param
    if f.kind is Kind.A:
        return math.factorial(n + 1)
    if f.kind is Kind.B:
        return 2**n * math.factorial(n)
    if f.kind is Kind.D:
        return 2 ** (n - 1) * math.factorial(n)
    return 2 * n


def _factor_model(f: IrreducibleFactor) -> tuple[State, list[Generator]]:
    n = f.param
    if f.kind is Kind.A:
        return tuple(range(1, n + 2)), [_swap(i) for i in range(n)]
    if f.kind is Kind.B:
        return tuple(range(1, n + 1)), [_negate_first] + [_swap(i) for i in range(n - 1)]
    if f.kind is Kind.D:
        return tuple(range(1, n + 1)), [_swap_negate] + [_swap(i) for i in range(n - 1)]
    return (0, 0), [_dihedral_gen(n, 0), _dihedral_gen(n, 1)]


@dataclass
class OracleTable:
    """One row per group element: key, word length and descent count."""

    group: GroupDescriptor
    keys: list[State]
    length: np.ndarray
    descents: np.ndarray

    def __len__(self) -> int:
        return len(self.keys)

    def histogram(self, stat: Stat | str) -> list[int]:
        values = self.length if Stat(stat) is Stat.inv else self.descents
        return [int(c) for c in np.bincount(values)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["element", "length", "descents"])
        for key, ln, de in zip(self.keys, self.length, self.descents):
            w.writerow([" ".join(map(str, _flatten(key))), int(ln), int(de)])
        return buf.getvalue()


def _flatten(key: State) -> list[int]:
    out: list[int] = []
    for part in key:
        out.extend(part)
    return out


def enumerate_group(g: GroupDescriptor, cap: int = DEFAULT_CAP) -> OracleTable:
    """Enumerate ``g`` by BFS over right multiplication by its generators."""
    size = math.prod(_model_size(f) for f in g.factors)
    if size > cap:
        raise OracleCapError(f"|{g}| = {size} exceeds the enumeration cap {cap}")
    identity_parts = []
    gens: list[tuple[int, Generator]] = []
    for idx, f in enumerate(g.factors):
        e, fg = _factor_model(f)
        identity_parts.append(e)
        gens.extend((idx, act) for act in fg)
    identity = tuple(identity_parts)

    def apply(w: State, idx: int, act: Generator) -> State:
        return w[:idx] + (act(w[idx]),) + w[idx + 1:]

    index = {identity: 0}
    keys = [identity]
    depth = [0]
    queue = deque([0])
    while queue:
        i = queue.popleft()
        w = keys[i]
        for idx, act in gens:
            v = apply(w, idx, act)
            if v not in index:
                if len(keys) >= cap:
                    raise OracleCapError(f"enumeration of {g} exceeded the cap {cap}")
                index[v] = len(keys)
                keys.append(v)
                depth.append(depth[i] + 1)
                queue.append(index[v])

    length = np.asarray(depth, dtype=np.int64)
    descents = np.zeros(len(keys), dtype=np.int64)
    for i, w in enumerate(keys):
        for idx, act in gens:
            j = index[apply(w, idx, act)]
            diff = depth[j] - depth[i]
            if diff == -1:
                descents[i] += 1
            elif diff != 1:
                raise OracleInconsistencyError(
                    f"l(ws) - l(w) = {diff} for element {w}; expected +-1"
                )
    return OracleTable(g, keys, length, descents)


def oracle_pmf(g: GroupDescriptor, stat: Stat | str, cap: int = DEFAULT_CAP,
               table: OracleTable | None = None) -> Pmf:
    """Exact distribution of the statistic from brute-force enumeration."""
    stat = Stat(stat)
    if table is None:
        table = enumerate_group(g, cap)
    return Pmf.from_counts(table.histogram(stat), stat, g)
