"""Exact rationals whose denominator is a power of two."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
import re

_TEXT_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*2\^(\d+)\s*)?$")


@total_ordering
@dataclass(frozen=True, init=False)
class Dyadic:
    """``numerator / 2**exponent`` kept in lowest terms.

    Canonical form has an odd numerator or ``exponent == 0``, so equal values
    compare and hash equal.
    """

    numerator: int
    exponent: int

    def __init__(self, numerator: int, exponent: int = 0):
        numerator = int(numerator)
        exponent = int(exponent)
        if exponent < 0:
            numerator <<= -exponent
            exponent = 0
        if numerator == 0:
            exponent = 0
        elif exponent:
            tz = (numerator & -numerator).bit_length() - 1
            shift = min(tz, exponent)
            numerator >>= shift
            exponent -= shift
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "exponent", exponent)

    @classmethod
    def from_fraction(cls, value: Fraction | int) -> "Dyadic":
        value = Fraction(value)
        den = value.denominator
        if den & (den - 1):
            raise ValueError(f"{value} is not dyadic")
        return cls(value.numerator, den.bit_length() - 1)

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Inverse of :meth:`__str__` (``"p/2^e"`` or a bare integer)."""
        m = _TEXT_RE.match(text)
        if not m:
            raise ValueError(f"not a dyadic literal: {text!r}")
        return cls(int(m.group(1)), int(m.group(2) or 0))

    @property
    def denominator(self) -> int:
        return 1 << self.exponent

    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self) -> float:
        return float(self.to_fraction())

    def _coerce(self, other):
        if isinstance(other, Dyadic):
            return other
        if isinstance(other, int):
            return Dyadic(other)
        if isinstance(other, Fraction):
            return Dyadic.from_fraction(other)
        return NotImplemented

    def _align(self, other: "Dyadic") -> tuple[int, int, int]:
        e = max(self.exponent, other.exponent)
        return self.numerator << (e - self.exponent), other.numerator << (e - other.exponent), e

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, e = self._align(other)
        return Dyadic(a + b, e)

    __radd__ = __add__

    def __neg__(self):
        return Dyadic(-self.numerator, self.exponent)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Dyadic(self.numerator * other.numerator, self.exponent + other.exponent)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.numerator == other.numerator and self.exponent == other.exponent

    def __lt__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, _ = self._align(other)
        return a < b

    def __hash__(self):
        return hash(self.to_fraction())

    def __str__(self) -> str:
        if self.exponent == 0:
            return str(self.numerator)
        return f"{self.numerator}/2^{self.exponent}"

    def __repr__(self) -> str:
        return f"Dyadic({self.numerator}, {self.exponent})"

    def decimal(self) -> str:
        """Exact decimal expansion (always terminates)."""
        sign = "-" if self.numerator < 0 else ""
        num = abs(self.numerator)
        if self.exponent == 0:
            return f"{sign}{num}"
        digits = str(num * 5**self.exponent).rjust(self.exponent + 1, "0")
        return f"{sign}{digits[:-self.exponent]}.{digits[-self.exponent:]}"

    def to_json(self) -> dict:
        return {"num": str(self.numerator), "log2den": self.exponent, "decimal": self.decimal()}

    @classmethod
    def from_json(cls, obj: dict) -> "Dyadic":
        return cls(int(obj["num"]), int(obj["log2den"]))
