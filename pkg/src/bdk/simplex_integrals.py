"""Exact integrals over the standard simplex.

The Dirichlet formula gives every monomial integral in barycentric
exponents as a ratio of factorials, so all integrals here are exact
rationals.  No quadrature is used anywhere in the library.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .combinat import IndexLike, MultiIndex, factorial, index_factorial, multinomial

__all__ = [
    "check_dimension",
    "monomial_integral",
    "inner_one_bernstein",
    "bernstein_product_integral",
]


def check_dimension(d: int) -> int:
    """Validate a simplex dimension (d >= 1) and return it."""
    d = int(d)
    if d < 1:
        raise ValueError(f"simplex dimension must be >= 1, got {d}")
    return d


def _barycentric_parts(mi: IndexLike, d: int) -> tuple:
    pts = mi.parts if isinstance(mi, MultiIndex) else tuple(int(p) for p in mi)
    if len(pts) != d + 1:
        raise ValueError(f"expected {d + 1} barycentric exponents, got {len(pts)}")
    if any(p < 0 for p in pts):
        raise ValueError("barycentric exponents must be nonnegative")
    return pts


@lru_cache(maxsize=None)
def _monomial_integral_cached(parts: tuple, d: int) -> Fraction:
    return Fraction(index_factorial(parts), factorial(sum(parts) + d))


def monomial_integral(mu: IndexLike, d: int) -> Fraction:
    """Integral of x_0^mu_0 ... x_d^mu_d over the standard d-simplex.

    Equals mu! / (|mu| + d)! exactly (Dirichlet's formula).
    """
    d = check_dimension(d)
    return _monomial_integral_cached(_barycentric_parts(mu, d), d)


def inner_one_bernstein(alpha: IndexLike, d: int) -> Fraction:
    """<1, B_alpha> = |alpha|! / (|alpha| + d)!; depends only on the degree."""
    d = check_dimension(d)
    pts = _barycentric_parts(alpha, d)
    n = sum(pts)
    return Fraction(factorial(n), factorial(n + d))


def bernstein_product_integral(alpha: IndexLike, beta: IndexLike, d: int) -> Fraction:
    """Integral of B_alpha * B_beta over the standard d-simplex.

    Computed from the closed form
        C(|a|,a) C(|b|,b) / C(|a+b|,a+b) * <1, B_{a+b}>,
    which the test suite cross-checks against brute-force polynomial
    expansion.
    """
    d = check_dimension(d)
    a = _barycentric_parts(alpha, d)
    b = _barycentric_parts(beta, d)
    ab = tuple(x + y for x, y in zip(a, b))
    quotient = Fraction(multinomial(a) * multinomial(b), multinomial(ab))
    return quotient * inner_one_bernstein(ab, d)
