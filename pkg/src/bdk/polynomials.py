"""Exact sparse polynomial algebra in cartesian simplex coordinates.

Polynomials live in the variables x_1..x_d with the dependent barycentric
coordinate x_0 = 1 - x_1 - ... - x_d eliminated.  That makes the sparse
exponent->coefficient map a canonical form: two expressions denote the
same polynomial exactly when their maps are equal.  All identity checks
in the library reduce to this equality.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, Sequence, Tuple, Union

from .combinat import (
    IndexLike,
    MultiIndex,
    enumerate_multi_indices,
    format_rational,
    multinomial,
    parse_rational,
)
from .simplex_integrals import check_dimension, monomial_integral

__all__ = [
    "CartesianPolynomial",
    "BarycentricPoint",
    "bernstein_basis",
    "bernstein_value",
    "integrate_simplex",
    "inner_product",
]

Exponents = Tuple[int, ...]
Scalar = Union[int, Fraction]


class BarycentricPoint:
    """A point given by cartesian coordinates x_1..x_d, with x_0 derived.

    Coordinates need not lie inside the simplex; the polynomials being
    evaluated are defined on all of R^d.
    """

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[Scalar]):
        self.coords = tuple(Fraction(c) for c in coords)
        if not self.coords:
            raise ValueError("point needs at least one coordinate")

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def x0(self) -> Fraction:
        return 1 - sum(self.coords)

    def barycentric(self) -> Tuple[Fraction, ...]:
        """The d+1 barycentric values (x_0, x_1, ..., x_d)."""
        return (self.x0,) + self.coords

    def in_simplex(self) -> bool:
        return all(c >= 0 for c in self.coords) and self.x0 >= 0

    def __eq__(self, other: object) -> bool:
        if isinstance(other, BarycentricPoint):
            return self.coords == other.coords
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coords)

    def __repr__(self) -> str:
        return f"BarycentricPoint({', '.join(map(str, self.coords))})"


def _as_coords(pt: Union[BarycentricPoint, Sequence[Scalar]], d: int) -> Tuple[Fraction, ...]:
    coords = pt.coords if isinstance(pt, BarycentricPoint) else tuple(Fraction(c) for c in pt)
    if len(coords) != d:
        raise ValueError(f"point has {len(coords)} coordinates, polynomial has {d}")
    return coords


class CartesianPolynomial:
    """Sparse exact polynomial in x_1..x_d.

    terms maps exponent tuples (e_1..e_d) to nonzero Fraction coefficients.
    Instances are treated as immutable; all operators return new objects.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Dict[Exponents, Scalar] = None):
        self.d = check_dimension(d)
        clean: Dict[Exponents, Fraction] = {}
        for exps, coef in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != d:
                raise ValueError(f"exponent tuple {exps} does not have {d} entries")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            coef = Fraction(coef)
            if coef:
                clean[exps] = coef
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, d: int) -> "CartesianPolynomial":
        return cls(d, {})

    @classmethod
    def constant(cls, d: int, value: Scalar) -> "CartesianPolynomial":
        return cls(d, {(0,) * d: Fraction(value)})

    @classmethod
    def variable(cls, d: int, i: int) -> "CartesianPolynomial":
        """The coordinate polynomial x_i for 1 <= i <= d."""
        if not 1 <= i <= d:
            raise ValueError(f"variable index {i} out of range 1..{d}")
        exps = tuple(1 if j == i - 1 else 0 for j in range(d))
        return cls(d, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, d: int, exps: Sequence[int], coef: Scalar = 1) -> "CartesianPolynomial":
        return cls(d, {tuple(exps): Fraction(coef)})

    # -- ring operations ----------------------------------------------

    def _check_same_dimension(self, other: "CartesianPolynomial") -> None:
        if self.d != other.d:
            raise ValueError(f"dimension mismatch: {self.d} vs {other.d}")

    def __add__(self, other: "CartesianPolynomial") -> "CartesianPolynomial":
        if not isinstance(other, CartesianPolynomial):
            return NotImplemented
        self._check_same_dimension(other)
        out = dict(self.terms)
        for exps, coef in other.terms.items():
            acc = out.get(exps, 0) + coef
            if acc:
                out[exps] = acc
            else:
                out.pop(exps, None)
        return CartesianPolynomial(self.d, out)

    def __sub__(self, other: "CartesianPolynomial") -> "CartesianPolynomial":
        return self + (-other)

    def __neg__(self) -> "CartesianPolynomial":
        return CartesianPolynomial(self.d, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, CartesianPolynomial):
            self._check_same_dimension(other)
            out: Dict[Exponents, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    key = tuple(a + b for a, b in zip(e1, e2))
                    acc = out.get(key, 0) + c1 * c2
                    if acc:
                        out[key] = acc
                    else:
                        out.pop(key, None)
            return CartesianPolynomial(self.d, out)
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c: Scalar) -> "CartesianPolynomial":
        c = Fraction(c)
        if not c:
            return CartesianPolynomial.zero(self.d)
        return CartesianPolynomial(self.d, {e: c * v for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "CartesianPolynomial":
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = CartesianPolynomial.constant(self.d, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, CartesianPolynomial):
            return self.d == other.d and self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.d, frozenset(self.terms.items())))

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max total degree over terms; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def evaluate(self, pt: Union[BarycentricPoint, Sequence[Scalar]]) -> Fraction:
        coords = _as_coords(pt, self.d)
        total = Fraction(0)
        for exps, coef in self.terms.items():
            v = coef
            for c, e in zip(coords, exps):
                if e:
                    v *= c ** e
            total += v
        return total

    def sorted_terms(self):
        """Terms in the canonical serialization order (ascending exponents)."""
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        if not self.terms:
            return "<poly 0>"
        bits = []
        for exps, coef in self.sorted_terms():
            mono = "*".join(f"x{i + 1}^{e}" for i, e in enumerate(exps) if e)
            bits.append(f"{coef}" + (f"*{mono}" if mono else ""))
        return "<poly " + " + ".join(bits) + ">"

    # -- serialization ------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "terms": [
                {"exp": list(exps), "coef": format_rational(coef)}
                for exps, coef in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "CartesianPolynomial":
        return cls(
            int(obj["d"]),
            {tuple(t["exp"]): parse_rational(t["coef"]) for t in obj["terms"]},
        )


@lru_cache(maxsize=None)
def bernstein_basis(alpha: MultiIndex) -> CartesianPolynomial:
    """The Bernstein basis polynomial C(|a|,a) x_0^a0 x_1^a1 ... x_d^ad,
    fully expanded into cartesian monomials.

    The expansion substitutes x_0 = 1 - x_1 - ... - x_d and multiplies out
    the power via the multinomial theorem; all coefficients are integers.
    """
    if not isinstance(alpha, MultiIndex):
        alpha = MultiIndex(alpha)
    d = alpha.dimension
    check_dimension(d)
    a0, rest = alpha.parts[0], alpha.parts[1:]
    scale = multinomial(alpha)
    terms: Dict[Exponents, Fraction] = {}
    for kappa in enumerate_multi_indices(a0, d):
        sign = -1 if (a0 - kappa[0]) % 2 else 1
        coef = Fraction(sign * scale * multinomial(kappa))
        exps = tuple(kappa[i + 1] + rest[i] for i in range(d))
        acc = terms.get(exps, 0) + coef
        if acc:
            terms[exps] = acc
        else:
            terms.pop(exps, None)
    return CartesianPolynomial(d, terms)


def bernstein_value(alpha: IndexLike, pt: Union[BarycentricPoint, Sequence[Scalar]]) -> Fraction:
    """Evaluate B_alpha at a point directly from barycentric values.

    Avoids the cartesian expansion; used where only values are needed.
    """
    alpha = alpha if isinstance(alpha, MultiIndex) else MultiIndex(alpha)
    pt = pt if isinstance(pt, BarycentricPoint) else BarycentricPoint(pt)
    if pt.dimension != alpha.dimension:
        raise ValueError("point/index dimension mismatch")
    value = Fraction(multinomial(alpha))
    for coord, exp in zip(pt.barycentric(), alpha.parts):
        if exp:
            value *= coord ** exp
    return value


def integrate_simplex(p: CartesianPolynomial) -> Fraction:
    """Exact integral of p over the standard d-simplex.

    Each cartesian monomial is lifted to barycentric exponents with
    mu_0 = 0 and integrated by the Dirichlet formula.
    """
    total = Fraction(0)
    for exps, coef in p.terms.items():
        total += coef * monomial_integral((0,) + exps, p.d)
    return total


def inner_product(f: CartesianPolynomial, g: CartesianPolynomial) -> Fraction:
    """<f, g> over the standard simplex, computed exactly."""
    if f.d != g.d:
        raise ValueError(f"dimension mismatch: {f.d} vs {g.d}")
    return integrate_simplex(f * g)
