"""The Bernstein-Durrmeyer operator on exact polynomials.

M_n projects a function onto the degree-n Bernstein basis through
L2-type inner products over the simplex:

    (M_n f)(x) = sum over |alpha| = n of  <f, B_alpha> / <1, B_alpha> * B_alpha(x).

Operators here act on exact polynomials only, which is enough to verify
polynomial kernel identities: a degree-N identity is pinned down by
finitely many monomial images, and the kernel module additionally
compares full canonical forms.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

from .combinat import binomial, enumerate_multi_indices, factorial
from .polynomials import CartesianPolynomial, bernstein_basis, inner_product
from .simplex_integrals import check_dimension, inner_one_bernstein

__all__ = [
    "OperatorSpec",
    "apply_operator",
    "compose_apply",
    "composition_coefficients",
]


@dataclass(frozen=True)
class OperatorSpec:
    """Degree and simplex dimension identifying one operator M_n."""

    degree: int
    dimension: int

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError(f"operator degree must be >= 0, got {self.degree}")
        check_dimension(self.dimension)


def apply_operator(spec: OperatorSpec, f: CartesianPolynomial) -> CartesianPolynomial:
    """Exact image M_n f; the result has total degree <= n."""
    if f.d != spec.dimension:
        raise ValueError(f"dimension mismatch: operator {spec.dimension}, polynomial {f.d}")
    n, d = spec.degree, spec.dimension
    weight = 1 / inner_one_bernstein((n,) + (0,) * d, d)
    image = CartesianPolynomial.zero(d)
    for alpha in enumerate_multi_indices(n, d):
        basis = bernstein_basis(alpha)
        image = image + basis.scale(weight * inner_product(f, basis))
    return image


def compose_apply(specs: Sequence[OperatorSpec], f: CartesianPolynomial) -> CartesianPolynomial:
    """Apply a composition of operators, rightmost (innermost) first.

    [M_m, M_n] means M_m o M_n, so f passes through M_n before M_m.
    An empty list returns f unchanged.
    """
    dims = {s.dimension for s in specs}
    if dims and dims != {f.d}:
        raise ValueError("all operators must share the polynomial's dimension")
    out = f
    for spec in reversed(list(specs)):
        out = apply_operator(spec, out)
    return out


def composition_coefficients(m: int, n: int, d: int) -> List[Fraction]:
    """Coefficients c_0..c_min(m,n) with M_m o M_n = sum_k c_k M_k.

    c_k = (m+d)! (n+d)! / (m+n+d)! * C(m,k) C(n,k) k! / (k+d)!.
    All coefficients are positive and sum to one, so the composition is a
    convex combination of the operators themselves.
    """
    if m < 0 or n < 0:
        raise ValueError("degrees must be >= 0")
    check_dimension(d)
    prefactor = Fraction(factorial(m + d) * factorial(n + d), factorial(m + n + d))
    return [
        prefactor * binomial(m, k) * binomial(n, k) * Fraction(factorial(k), factorial(k + d))
        for k in range(min(m, n) + 1)
    ]
