"""Multi-index enumeration and exact combinatorial primitives.

Everything here is integer arithmetic: factorials, binomial and multinomial
coefficients, falling factorials, and the enumeration of all (d+1)-part
compositions of a degree.  These are the building blocks for Bernstein
bases on the simplex, so exactness is non-negotiable; no floats appear.
"""
from __future__ import annotations

import math
import os
import re
from fractions import Fraction
from typing import Iterable, Iterator, Sequence, Union

__all__ = [
    "MultiIndex",
    "IndexLike",
    "Rational",
    "parse_rational",
    "format_rational",
    "factorial",
    "binomial",
    "falling_factorial",
    "multinomial",
    "index_factorial",
    "enumerate_multi_indices",
    "set_factorial_cache_bound",
    "factorial_cache_bound",
]

#: Exact arbitrary-precision rational; always reduced, denominator > 0.
Rational = Fraction

_RATIONAL_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse a 'p' or 'p/q' string into an exact rational.

    Decimal and float notations are rejected on purpose: exact paths never
    accept values that went through binary floating point.
    """
    m = _RATIONAL_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a rational 'p/q' string: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) else 1
    if den == 0:
        raise ValueError(f"zero denominator in rational: {text!r}")
    return Fraction(num, den)


def format_rational(value: Fraction) -> str:
    """Canonical 'p/q' string ('p' when the denominator is 1)."""
    return str(Fraction(value))


def _read_cache_bound() -> int:
    raw = os.environ.get("BDK_MAX_FACTORIAL", "")
    try:
        bound = int(raw)
    except ValueError:
        return 256
    return bound if bound >= 1 else 256


_FACT_BOUND = _read_cache_bound()
_FACT_TABLE = [1]


def set_factorial_cache_bound(bound: int) -> None:
    """Resize the factorial cache; values beyond it are computed on demand."""
    global _FACT_BOUND, _FACT_TABLE
    if bound < 1:
        raise ValueError("factorial cache bound must be >= 1")
    _FACT_BOUND = bound
    if len(_FACT_TABLE) > bound + 1:
        del _FACT_TABLE[bound + 1:]


def factorial_cache_bound() -> int:
    return _FACT_BOUND


def factorial(n: int) -> int:
    """n! as an exact integer, cached up to the configured bound."""
    if n < 0:
        raise ValueError("factorial of negative integer")
    if n > _FACT_BOUND:
        return math.factorial(n)
    while len(_FACT_TABLE) <= n:
        _FACT_TABLE.append(_FACT_TABLE[-1] * len(_FACT_TABLE))
    return _FACT_TABLE[n]


class MultiIndex:
    """A vector of nonnegative integer exponents in barycentric variables.

    A multi-index of dimension d has d+1 parts (the extra slot belongs to
    the dependent coordinate x_0).  Instances are immutable, hashable and
    compare by value.
    """

    __slots__ = ("parts",)

    def __init__(self, parts: Iterable[int]):
        pts = tuple(int(p) for p in parts)
        if not pts:
            raise ValueError("multi-index needs at least one part")
        if any(p < 0 for p in pts):
            raise ValueError(f"multi-index parts must be nonnegative, got {pts}")
        self.parts = pts

    @property
    def degree(self) -> int:
        """Total degree |alpha|, the sum of all parts."""
        return sum(self.parts)

    @property
    def dimension(self) -> int:
        """Simplex dimension d implied by the part count (d+1 parts)."""
        return len(self.parts) - 1

    def dominates(self, other: "MultiIndex") -> bool:
        """Componentwise partial order: other <= self in every slot."""
        if len(self.parts) != len(other.parts):
            raise ValueError("multi-index length mismatch")
        return all(o <= s for s, o in zip(self.parts, other.parts))

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        if len(self.parts) != len(other.parts):
            raise ValueError("multi-index length mismatch")
        return MultiIndex(s + o for s, o in zip(self.parts, other.parts))

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __eq__(self, other: object) -> bool:
        if isinstance(other, MultiIndex):
            return self.parts == other.parts
        if isinstance(other, tuple):
            return self.parts == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"MultiIndex{self.parts}"


IndexLike = Union[MultiIndex, Sequence[int]]


def _parts(mi: IndexLike) -> tuple:
    if isinstance(mi, MultiIndex):
        return mi.parts
    return tuple(int(p) for p in mi)


def multinomial(mi: IndexLike) -> int:
    """|mi|! / mi! for nonnegative parts; 0 if any part is negative.

    The zero convention on negative parts lets downstream summation
    formulas run without boundary guards.
    """
    pts = _parts(mi)
    if any(p < 0 for p in pts):
        return 0
    out = factorial(sum(pts))
    for p in pts:
        out //= factorial(p)
    return out


def index_factorial(mi: IndexLike) -> int:
    """mi! = product of the factorials of the parts."""
    pts = _parts(mi)
    if any(p < 0 for p in pts):
        raise ValueError("index factorial needs nonnegative parts")
    out = 1
    for p in pts:
        out *= factorial(p)
    return out


def binomial(s: int, k: int) -> int:
    """C(s, k) for integer s (possibly negative) and k >= 0.

    Defined through the product s(s-1)...(s-k+1)/k!, which is always an
    exact integer; C(s, 0) = 1 for every s and C(s, k) = 0 for 0 <= s < k.
    """
    if k < 0:
        raise ValueError("binomial needs k >= 0")
    if k == 0:
        return 1
    if 0 <= s < k:
        return 0
    return falling_factorial(s, k) // factorial(k)


def falling_factorial(s: int, k: int) -> int:
    """s(s-1)...(s-k+1), with the empty product 1 when k = 0."""
    if k < 0:
        raise ValueError("falling factorial needs k >= 0")
    out = 1
    for i in range(k):
        out *= s - i
    return out


def enumerate_multi_indices(n: int, d: int) -> list:
    """All multi-indices with d+1 parts summing to n, in a fixed order.

    Order is lexicographic with the first part most significant and
    descending, e.g. (2,0), (1,1), (0,2) for n=2, d=1.  The list has
    exactly C(n+d, d) entries.
    """
    if d < 1:
        raise ValueError("simplex dimension d must be >= 1")
    if n < 0:
        raise ValueError("degree n must be >= 0")
    return [MultiIndex(c) for c in _compositions(n, d + 1)]


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest
