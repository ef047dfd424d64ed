"""Truth tables, algebraic normal forms and the operations between them.

Bit ``t`` of a table holds ``f(x)`` where ``x_i = (t >> (i - 1)) & 1``, i.e.
``x1`` is the least significant coordinate. Tables are stored as a single
Python integer so that restriction, the Moebius transform and popcounts run
word-parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

MAX_VARS = 24


class AnfSyntaxError(ValueError):
    """Raised for malformed ANF text; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


@lru_cache(maxsize=None)
def _full(n: int) -> int:
    return (1 << (1 << n)) - 1


@lru_cache(maxsize=512)
def _low_mask(n: int, i: int) -> int:
    """Positions with ``x_i = 0`` in an n-variable table."""
    s = 1 << (i - 1)
    pattern, period = (1 << s) - 1, 2 * s
    size = 1 << n
    while period < size:
        pattern |= pattern << period
        period *= 2
    return pattern


def var_mask(n: int, i: int) -> int:
    """Table of the literal ``x_i`` over n variables."""
    return _full(n) ^ _low_mask(n, i)


def _check_n(n: int) -> None:
    if not 0 <= n <= MAX_VARS:
        raise ValueError(f"variable count must be in 0..{MAX_VARS}, got {n}")


def _check_index(n: int, i: int) -> None:
    if not 1 <= i <= n:
        raise IndexError(f"variable index {i} out of range 1..{n}")


@dataclass(frozen=True)
class TruthTable:
    n: int
    bits: int

    def __post_init__(self):
        _check_n(self.n)
        if self.bits < 0 or self.bits >> (1 << self.n):
            raise ValueError(f"bits do not fit a table of 2^{self.n} entries")

    @classmethod
    def constant(cls, n: int, value: int) -> "TruthTable":
        _check_n(n)
        return cls(n, _full(n) if value else 0)

    @classmethod
    def variable(cls, n: int, i: int) -> "TruthTable":
        _check_n(n)
        _check_index(n, i)
        return cls(n, var_mask(n, i))

    @classmethod
    def from_bin(cls, text: str) -> "TruthTable":
        """Parse a '0'/'1' string; character j is the value at index j."""
        text = "".join(text.split())
        size = len(text)
        if size == 0 or size & (size - 1) or set(text) - {"0", "1"}:
            raise ValueError("binary table must be a 0/1 string of length 2^n")
        return cls(size.bit_length() - 1, int(text[::-1], 2))

    @classmethod
    def from_hex(cls, text: str, n: int | None = None) -> "TruthTable":
        """Parse the hex form: the binary form read as a big-endian number.

        Without ``n`` the table length is taken as four times the number of
        hex digits, which only covers n >= 2.
        """
        text = "".join(text.split()).lower()
        if text.startswith("0x"):
            text = text[2:]
        if not text:
            raise ValueError("empty hex table")
        value = int(text, 16)
        if n is None:
            size = 4 * len(text)
            if size & (size - 1):
                raise ValueError("hex table length does not give 2^n bits; pass n")
            n = size.bit_length() - 1
        _check_n(n)
        size = 1 << n
        if value >> size:
            raise ValueError(f"hex value too large for n={n}")
        return cls.from_bin(format(value, f"0{size}b"))

    @property
    def size(self) -> int:
        return 1 << self.n

    def to_bin(self) -> str:
        return format(self.bits, f"0{self.size}b")[::-1]

    def to_hex(self) -> str:
        width = (self.size + 3) // 4
        return format(int(self.to_bin(), 2), f"0{width}x")

    def __getitem__(self, t: int) -> int:
        if not 0 <= t < self.size:
            raise IndexError(f"point index {t} out of range for n={self.n}")
        return (self.bits >> t) & 1

    def __invert__(self) -> "TruthTable":
        return TruthTable(self.n, self.bits ^ _full(self.n))

    def __xor__(self, other):
        if isinstance(other, int):
            return ~self if other & 1 else self
        _same_n(self, other)
        return TruthTable(self.n, self.bits ^ other.bits)

    def __and__(self, other: "TruthTable") -> "TruthTable":
        _same_n(self, other)
        return TruthTable(self.n, self.bits & other.bits)

    def __or__(self, other: "TruthTable") -> "TruthTable":
        _same_n(self, other)
        return TruthTable(self.n, self.bits | other.bits)

    def is_constant(self) -> bool:
        return self.bits == 0 or self.bits == _full(self.n)

    def __str__(self) -> str:
        return self.to_bin()


def _same_n(f: TruthTable, g: TruthTable) -> None:
    if f.n != g.n:
        raise ValueError(f"dimension mismatch: {f.n} vs {g.n}")


@dataclass(frozen=True)
class Point:
    n: int
    t: int

    def __post_init__(self):
        if not 0 <= self.t < (1 << self.n):
            raise ValueError(f"point index {self.t} out of range for n={self.n}")

    @classmethod
    def from_bits(cls, xs: Iterable[int]) -> "Point":
        """Build from ``(x_1, ..., x_n)``."""
        xs = list(xs)
        return cls(len(xs), sum((x & 1) << k for k, x in enumerate(xs)))

    def coords(self) -> tuple[int, ...]:
        return tuple((self.t >> k) & 1 for k in range(self.n))


def evaluate(f: TruthTable, x: Point) -> int:
    if x.n != f.n:
        raise ValueError(f"dimension mismatch: point has {x.n} coordinates, table {f.n}")
    return f[x.t]


def hamming_weight(f: TruthTable) -> int:
    return f.bits.bit_count()


# --- restriction ----------------------------------------------------------

def _compact(n: int, y: int, s: int) -> int:
    # y holds blocks of width s at period 2s; squeeze out the gaps.
    size = 1 << n
    w = s
    while 2 * w < size:
        y = (y | (y >> w)) & _low_mask(n, w.bit_length() + 1)
        w *= 2
    return y


def restrict(f: TruthTable, i: int, a: int) -> TruthTable:
    """Fix ``x_i = a``; the survivors keep their order and become x1..x_{n-1}."""
    if f.n < 1:
        raise IndexError("cannot restrict a 0-variable table")
    _check_index(f.n, i)
    s = 1 << (i - 1)
    y = (f.bits >> (s if a & 1 else 0)) & _low_mask(f.n, i)
    return TruthTable(f.n - 1, _compact(f.n, y, s))


def _expand(n: int, y: int, i: int) -> int:
    # Inverse of restrict: spread an (n-1)-table so it ignores x_i.
    s = 1 << (i - 1)
    w = (1 << n) // 4
    while w >= s:
        lm = _low_mask(n, w.bit_length())
        y = (y & lm) | ((y ^ (y & lm)) << w)
        w //= 2
    return y | (y << s)


def lift(q: TruthTable, n: int, kept: Iterable[int]) -> TruthTable:
    """Read ``q`` as a function of the variables ``kept`` inside n variables."""
    kept = tuple(kept)
    if len(kept) != q.n or list(kept) != sorted(set(kept)):
        raise ValueError("kept indices must be ascending and match q.n")
    _check_n(n)
    current = list(kept)
    bits = q.bits
    for v in range(1, n + 1):
        if v in current:
            continue
        current.append(v)
        current.sort()
        bits = _expand(len(current), bits, current.index(v) + 1)
    return TruthTable(n, bits)


def restrict_many(f: TruthTable, assignment: Mapping[int, int]) -> tuple[TruthTable, tuple[int, ...]]:
    """Fix several variables at once.

    Returns the restricted table and the original index of each surviving
    variable, so ``kept[j - 1]`` is the old name of new variable ``j``.
    """
    for i in assignment:
        _check_index(f.n, i)
    g = f
    for i in sorted(assignment, reverse=True):
        g = restrict(g, i, assignment[i])
    kept = tuple(i for i in range(1, f.n + 1) if i not in assignment)
    return g, kept


def cofactor_is_constant(f: TruthTable, i: int, a: int) -> int | None:
    """Value of ``f`` on ``x_i = a`` if that cofactor is constant, else None."""
    _check_index(f.n, i)
    low = _low_mask(f.n, i)
    y = (f.bits >> ((1 << (i - 1)) if a & 1 else 0)) & low
    if y == 0:
        return 0
    if y == low:
        return 1
    return None


def is_essential(f: TruthTable, i: int) -> bool:
    _check_index(f.n, i)
    s = 1 << (i - 1)
    return ((f.bits ^ (f.bits >> s)) & _low_mask(f.n, i)) != 0


def essential_variables(f: TruthTable) -> tuple[int, ...]:
    return tuple(i for i in range(1, f.n + 1) if is_essential(f, i))


def project_essential(f: TruthTable) -> tuple[TruthTable, tuple[int, ...]]:
    """Drop inessential variables; returns the projection and kept indices."""
    dead = {i: 0 for i in range(1, f.n + 1) if not is_essential(f, i)}
    return restrict_many(f, dead)


# --- algebraic normal form -----------------------------------------------

@dataclass(frozen=True)
class AnfPoly:
    """GF(2) polynomial; each monomial is a frozenset of variable indices."""

    n: int
    monomials: frozenset

    def __post_init__(self):
        mons = frozenset(frozenset(m) for m in self.monomials)
        for m in mons:
            for i in m:
                _check_index(self.n, i)
        object.__setattr__(self, "monomials", mons)

    @classmethod
    def from_terms(cls, n: int, terms: Iterable[Iterable[int]]) -> "AnfPoly":
        """Sum terms over GF(2); repeated monomials cancel."""
        acc: set[frozenset] = set()
        for term in terms:
            acc ^= {frozenset(term)}
        return cls(n, frozenset(acc))

    def coefficient_bits(self) -> int:
        bits = 0
        for m in self.monomials:
            bits ^= 1 << sum(1 << (i - 1) for i in m)
        return bits

    @classmethod
    def from_coefficient_bits(cls, n: int, bits: int) -> "AnfPoly":
        mons = []
        t = 0
        while bits:
            if bits & 1:
                mons.append(frozenset(i + 1 for i in range(n) if (t >> i) & 1))
            bits >>= 1
            t += 1
        return cls(n, frozenset(mons))

    def sorted_monomials(self) -> list[tuple[int, ...]]:
        return sorted((tuple(sorted(m)) for m in self.monomials), key=lambda m: (-len(m), m))

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        return " + ".join("*".join(f"x{i}" for i in m) if m else "1" for m in self.sorted_monomials())


def degree(p: AnfPoly) -> int:
    """Algebraic degree; -1 for the zero polynomial."""
    return max((len(m) for m in p.monomials), default=-1)


def _moebius(n: int, bits: int) -> int:
    # Same butterfly for both directions over GF(2).
    for i in range(1, n + 1):
        s = 1 << (i - 1)
        bits ^= (bits & _low_mask(n, i)) << s
    return bits


def truth_table_from_anf(p: AnfPoly) -> TruthTable:
    _check_n(p.n)
    return TruthTable(p.n, _moebius(p.n, p.coefficient_bits()))


def anf_from_truth_table(f: TruthTable) -> AnfPoly:
    return AnfPoly.from_coefficient_bits(f.n, _moebius(f.n, f.bits))


def parse_anf(text: str, n: int | None = None) -> AnfPoly:
    """Parse ``x1*x2 + x3 + 1`` style text.

    Terms are '1', '0' or products of ``x<k>`` joined by '*'; whitespace is
    ignored and duplicate terms cancel. Without ``n`` the largest index used
    sets the variable count.
    """
    pos = 0
    length = len(text)

    def skip_ws():
        nonlocal pos
        while pos < length and text[pos].isspace():
            pos += 1

    def parse_factor() -> tuple[int, int]:
        nonlocal pos
        skip_ws()
        start = pos
        if pos < length and text[pos] in "01":
            pos += 1
            return -int(text[start]), start
        if pos >= length or text[pos] not in "xX":
            raise AnfSyntaxError("expected 'x<k>', '1' or '0'", pos)
        pos += 1
        digits_start = pos
        while pos < length and text[pos].isdigit():
            pos += 1
        if pos == digits_start:
            raise AnfSyntaxError("expected variable number after 'x'", pos)
        k = int(text[digits_start:pos])
        if k < 1:
            raise AnfSyntaxError("variable numbers start at 1", digits_start)
        return k, start

    terms: list[frozenset] = []
    used: list[tuple[int, int]] = []
    skip_ws()
    if pos >= length:
        raise AnfSyntaxError("empty polynomial", pos)
    while True:
        factors = []
        zero = False
        while True:
            k, at = parse_factor()
            if k == 0:
                zero = True
            elif k > 0:
                factors.append(k)
                used.append((k, at))
            skip_ws()
            if pos < length and text[pos] == "*":
                pos += 1
                continue
            break
        if not zero:
            terms.append(frozenset(factors))
        skip_ws()
        if pos >= length:
            break
        if text[pos] != "+":
            raise AnfSyntaxError(f"unexpected character {text[pos]!r}", pos)
        pos += 1
        skip_ws()
        if pos >= length:
            raise AnfSyntaxError("dangling '+'", pos)

    top = max((k for k, _ in used), default=0)
    if n is None:
        n = top
    for k, at in used:
        if k > n:
            raise AnfSyntaxError(f"variable x{k} exceeds n={n}", at)
    _check_n(n)
    return AnfPoly.from_terms(n, terms)
