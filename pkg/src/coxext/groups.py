"""Finite Coxeter groups as products of irreducible factors.

A group is described by a short textual grammar::

    factor := ("A" | "B" | "D") int | "I2(" int ")"
    expr   := factor ("^" int)? (("x" | "*") expr)?

Whitespace is ignored, powers bind tighter than products, and powers are
unrolled so ``"B2 x I2(5)^2"`` yields the factors ``B2, I2(5), I2(5)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

__all__ = [
    "DescriptorError",
    "DescriptorSyntaxError",
    "GroupDescriptor",
    "GroupSummary",
    "IrreducibleFactor",
    "Kind",
    "degrees",
    "factor_degrees",
    "group_summary",
    "parse_descriptor",
]

# Largest integer literal accepted by the grammar (parameters and powers).
MAX_LITERAL = 10**9
# Largest number of factors after powers are unrolled.
MAX_FACTORS = 10**6


class DescriptorError(ValueError):
    """Invalid group descriptor (bad parameter range or overflow)."""


class DescriptorSyntaxError(DescriptorError):
    """Descriptor text does not conform to the grammar."""

    def __init__(self, message: str, text: str, position: int) -> None:
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


class Kind(str, enum.Enum):
    A = "A"
    B = "B"
    D = "D"
    I2 = "I2"


_MIN_PARAM = {Kind.A: 1, Kind.B: 2, Kind.D: 2, Kind.I2: 3}


@dataclass(frozen=True, order=True)
class IrreducibleFactor:
    """One irreducible factor: ``A(n)``, ``B(n)``, ``D(n)`` or ``I2(m)``."""

    kind: Kind
    param: int

    def __post_init__(self) -> None:
        kind = Kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not isinstance(self.param, int) or isinstance(self.param, bool):
            raise DescriptorError(f"parameter of {kind.value} must be an integer")
        lo = _MIN_PARAM[kind]
        if self.param < lo:
            raise DescriptorError(
                f"{kind.value} requires parameter >= {lo}, got {self.param}"
            )

    @property
    def rank(self) -> int:
        return 2 if self.kind is Kind.I2 else self.param

    @property
    def is_dihedral(self) -> bool:
        return self.kind is Kind.I2

    def __str__(self) -> str:
        if self.kind is Kind.I2:
            return f"I2({self.param})"
        return f"{self.kind.value}{self.param}"


def factor_degrees(f: IrreducibleFactor) -> list[int]:
    """Degrees of one irreducible factor, sorted."""
    n = f.param
    if f.kind is Kind.A:
        return list(range(2, n + 2))
    if f.kind is Kind.B:
        return list(range(2, 2 * n + 1, 2))
    if f.kind is Kind.D:
        return sorted(list(range(2, 2 * n - 1, 2)) + [n])
    return [2, n]


@dataclass(frozen=True)
class GroupDescriptor:
    """A finite Coxeter group as an ordered product of irreducible factors."""

    factors: tuple[IrreducibleFactor, ...]

    def __post_init__(self) -> None:
        factors = tuple(self.factors)
        if not factors:
            raise DescriptorError("a group needs at least one factor")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def of(cls, *factors: IrreducibleFactor) -> GroupDescriptor:
        return cls(tuple(factors))

    @property
    def rank(self) -> int:
        return sum(f.rank for f in self.factors)

    @cached_property
    def degrees(self) -> list[int]:
        return degrees(self)

    @property
    def reflection_count(self) -> int:
        return sum(d - 1 for d in self.degrees)

    @property
    def order(self) -> int:
        return math.prod(self.degrees)

    @property
    def classical(self) -> list[IrreducibleFactor]:
        return [f for f in self.factors if not f.is_dihedral]

    @property
    def dihedral(self) -> list[IrreducibleFactor]:
        return [f for f in self.factors if f.is_dihedral]

    def __str__(self) -> str:
        return " x ".join(str(f) for f in self.factors)


class GroupSummary(NamedTuple):
    rank: int
    reflection_count: int
    order: int
    log_order: float


def degrees(g: GroupDescriptor) -> list[int]:
    """Degree multiset of ``g``: union of the factor degrees, sorted."""
    out: list[int] = []
    for f in g.factors:
        out.extend(factor_degrees(f))
    out.sort()
    return out


def group_summary(g: GroupDescriptor) -> GroupSummary:
    ds = g.degrees
    return GroupSummary(
        rank=g.rank,
        reflection_count=sum(d - 1 for d in ds),
        order=math.prod(ds),
        log_order=math.fsum(math.log(d) for d in ds),
    )


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None) -> DescriptorSyntaxError:
        return DescriptorSyntaxError(message, self.text, self.pos if pos is None else pos)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str) -> None:
        if self.peek() != ch:
            found = repr(self.peek()) if self.peek() else "end of input"
            raise self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def integer(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        digits = self.text[start:self.pos]
        if not digits:
            found = repr(self.text[start]) if start < len(self.text) else "end of input"
            raise self.error(f"expected an integer, found {found}", start)
        if len(digits) > 10 or int(digits) > MAX_LITERAL:
            raise DescriptorError(
                f"integer {digits} at position {start} exceeds the limit {MAX_LITERAL}"
            )
        return int(digits)

    def factor(self) -> IrreducibleFactor:
        ch = self.peek()
        start = self.pos
        if ch in ("A", "B", "D"):
            self.pos += 1
            kind = Kind(ch)
            param = self.integer()
        elif ch == "I":
            self.pos += 1
            if self.peek() != "2":
                raise self.error("expected 'I2('")
            self.pos += 1
            self.expect("(")
            param = self.integer()
            self.expect(")")
            kind = Kind.I2
        else:
            found = repr(ch) if ch else "end of input"
            raise self.error(f"expected a factor (A, B, D or I2), found {found}", start)
        try:
            return IrreducibleFactor(kind, param)
        except DescriptorError as exc:
            raise DescriptorError(f"{exc} (factor at position {start})") from None

    def expr(self) -> list[IrreducibleFactor]:
        out: list[IrreducibleFactor] = []
        while True:
            f = self.factor()
            power = 1
            if self.peek() == "^":
                self.pos += 1
                at = self.pos
                power = self.integer()
                if power < 1:
                    raise self.error("power must be >= 1", at)
            if len(out) + power > MAX_FACTORS:
                raise DescriptorError(
                    f"descriptor expands to more than {MAX_FACTORS} factors"
                )
            out.extend([f] * power)
            if self.peek() in ("x", "*"):
                self.pos += 1
                continue
            return out

    def parse(self) -> GroupDescriptor:
        factors = self.expr()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return GroupDescriptor(tuple(factors))


def parse_descriptor(text: str) -> GroupDescriptor:
    """Parse a descriptor such as ``"A3"`` or ``"B2 x I2(5)^2"``.

    Raises :class:`DescriptorSyntaxError` (with the offending position) on
    malformed input and :class:`DescriptorError` on out-of-range parameters.
    """
    return _Parser(text).parse()
