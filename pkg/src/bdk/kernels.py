"""Integral kernels of composed Bernstein-Durrmeyer operators.

A composition M_m o M_n acts by integration against a bivariate
polynomial kernel K_{m,n}(x, y).  This module builds that kernel two
independent ways:

* definitional forms: brute-force double (or triple) sums over Bernstein
  index pairs, straight from the operator definition -- the oracle;
* diagonal closed forms: a factorial prefactor times a short sum of
  products B_l(x) B_l(y) over a single multi-index l.

Every form canonicalizes to a sparse bivariate exponent map with the
dependent coordinates x_0, y_0 eliminated, so claimed identities are
decided by literal map equality rather than sampling.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import product as _cartesian_product
from typing import Dict, List, Optional, Tuple, Union

from .combinat import (
    IndexLike,
    MultiIndex,
    binomial,
    enumerate_multi_indices,
    factorial,
    falling_factorial,
    format_rational,
    index_factorial,
    parse_rational,
)
from .polynomials import (
    BarycentricPoint,
    CartesianPolynomial,
    bernstein_basis,
    bernstein_value,
)
from .simplex_integrals import (
    bernstein_product_integral,
    check_dimension,
    inner_one_bernstein,
    monomial_integral,
)

__all__ = [
    "KernelPolynomial",
    "DiagonalKernelForm",
    "kernel_single",
    "kernel_definition_twofold",
    "kernel_closed_twofold",
    "kernel_univariate_twofold",
    "kernel_legendre",
    "kernel_definition_threefold",
    "kernel_closed_threefold",
    "inner_sum_identity",
    "to_canonical",
    "eval_kernel",
    "first_kernel_difference",
]

PairKey = Tuple[Tuple[int, ...], Tuple[int, ...]]
PointLike = Union[BarycentricPoint, "list[Fraction]", tuple]


class KernelPolynomial:
    """Canonical bivariate polynomial in (x_1..x_d, y_1..y_d).

    terms maps ((e^x), (e^y)) pairs to nonzero Fraction coefficients.
    Equality of kernels is literal map equality.
    """

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Dict[PairKey, Fraction] = None):
        self.d = check_dimension(d)
        clean: Dict[PairKey, Fraction] = {}
        for (ex, ey), coef in (terms or {}).items():
            ex, ey = tuple(ex), tuple(ey)
            if len(ex) != d or len(ey) != d:
                raise ValueError("kernel exponent tuples must have d entries each")
            coef = Fraction(coef)
            if coef:
                clean[(ex, ey)] = coef
        self.terms = clean

    @classmethod
    def zero(cls, d: int) -> "KernelPolynomial":
        return cls(d, {})

    @classmethod
    def outer(cls, fx: CartesianPolynomial, fy: CartesianPolynomial) -> "KernelPolynomial":
        """The separable kernel fx(x) * fy(y)."""
        if fx.d != fy.d:
            raise ValueError("dimension mismatch in outer product")
        return cls(fx.d, {(ex, ey): cx * cy
                          for ex, cx in fx.terms.items()
                          for ey, cy in fy.terms.items()})

    def __add__(self, other: "KernelPolynomial") -> "KernelPolynomial":
        if not isinstance(other, KernelPolynomial):
            return NotImplemented
        if self.d != other.d:
            raise ValueError("dimension mismatch")
        out = dict(self.terms)
        for key, coef in other.terms.items():
            acc = out.get(key, 0) + coef
            if acc:
                out[key] = acc
            else:
                out.pop(key, None)
        return KernelPolynomial(self.d, out)

    def __sub__(self, other: "KernelPolynomial") -> "KernelPolynomial":
        return self + other.scale(-1)

    def scale(self, c) -> "KernelPolynomial":
        c = Fraction(c)
        if not c:
            return KernelPolynomial.zero(self.d)
        return KernelPolynomial(self.d, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, KernelPolynomial):
            return self.d == other.d and self.terms == other.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.d, frozenset(self.terms.items())))

    def is_zero(self) -> bool:
        return not self.terms

    def transpose(self) -> "KernelPolynomial":
        """Swap the roles of x and y."""
        return KernelPolynomial(self.d, {(ey, ex): c for (ex, ey), c in self.terms.items()})

    def evaluate(self, x: PointLike, y: PointLike) -> Fraction:
        xc = x.coords if isinstance(x, BarycentricPoint) else tuple(Fraction(c) for c in x)
        yc = y.coords if isinstance(y, BarycentricPoint) else tuple(Fraction(c) for c in y)
        if len(xc) != self.d or len(yc) != self.d:
            raise ValueError("evaluation point dimension mismatch")
        total = Fraction(0)
        for (ex, ey), coef in self.terms.items():
            v = coef
            for c, e in zip(xc, ex):
                if e:
                    v *= c ** e
            for c, e in zip(yc, ey):
                if e:
                    v *= c ** e
            total += v
        return total

    def integrate_y(self) -> CartesianPolynomial:
        """Integrate the y block over the simplex, leaving a polynomial in x.

        For a stochastic kernel this must come out as the constant 1.
        """
        out: Dict[Tuple[int, ...], Fraction] = {}
        for (ex, ey), coef in self.terms.items():
            acc = out.get(ex, 0) + coef * monomial_integral((0,) + ey, self.d)
            if acc:
                out[ex] = acc
            else:
                out.pop(ex, None)
        return CartesianPolynomial(self.d, out)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __repr__(self) -> str:
        return f"<kernel d={self.d} terms={len(self.terms)}>"

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "form": "canonical",
            "scale": "1",
            "terms": [
                {"exp_x": list(ex), "exp_y": list(ey), "coef": format_rational(c)}
                for (ex, ey), c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "KernelPolynomial":
        if obj.get("form") != "canonical":
            raise ValueError("expected a canonical-form kernel object")
        terms = {
            (tuple(t["exp_x"]), tuple(t["exp_y"])): parse_rational(t["coef"])
            for t in obj["terms"]
        }
        scale = parse_rational(obj.get("scale", "1"))
        return cls(int(obj["d"]), terms).scale(scale) if scale != 1 else cls(int(obj["d"]), terms)


class DiagonalKernelForm:
    """Structured kernel: scale * sum of weight(l) * B_l(x) B_l(y).

    The whole point of the closed-form results is that composition kernels
    admit this shape, with only matching-index basis products.
    """

    __slots__ = ("d", "scale", "terms")

    def __init__(self, d: int, scale, terms):
        self.d = check_dimension(d)
        self.scale = Fraction(scale)
        clean: List[Tuple[MultiIndex, Fraction]] = []
        for mi, weight in terms:
            mi = mi if isinstance(mi, MultiIndex) else MultiIndex(mi)
            if mi.dimension != d:
                raise ValueError("diagonal index dimension mismatch")
            weight = Fraction(weight)
            if not weight:
                raise ValueError("diagonal weights must be nonzero")
            clean.append((mi, weight))
        self.terms = tuple(clean)

    def sorted_terms(self):
        return sorted(self.terms, key=lambda t: (t[0].degree, t[0].parts))

    def max_index_degree(self) -> int:
        """Largest |l| appearing; -1 when the form is empty."""
        return max((mi.degree for mi, _ in self.terms), default=-1)

    def with_scale(self, scale) -> "DiagonalKernelForm":
        """Copy with a replaced prefactor (used by mutation self-tests)."""
        return DiagonalKernelForm(self.d, scale, self.terms)

    def evaluate(self, x: PointLike, y: PointLike) -> Fraction:
        x = x if isinstance(x, BarycentricPoint) else BarycentricPoint(x)
        y = y if isinstance(y, BarycentricPoint) else BarycentricPoint(y)
        total = Fraction(0)
        for mi, weight in self.terms:
            total += weight * bernstein_value(mi, x) * bernstein_value(mi, y)
        return self.scale * total

    def __eq__(self, other: object) -> bool:
        if isinstance(other, DiagonalKernelForm):
            return (self.d == other.d and self.scale == other.scale
                    and sorted((mi.parts, w) for mi, w in self.terms)
                    == sorted((mi.parts, w) for mi, w in other.terms))
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.d, self.scale, frozenset((mi.parts, w) for mi, w in self.terms)))

    def __repr__(self) -> str:
        return f"<diagonal-kernel d={self.d} scale={self.scale} terms={len(self.terms)}>"

    def to_json_dict(self) -> dict:
        return {
            "d": self.d,
            "form": "diagonal",
            "scale": format_rational(self.scale),
            "terms": [
                {"index": list(mi.parts), "weight": format_rational(w)}
                for mi, w in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "DiagonalKernelForm":
        if obj.get("form") != "diagonal":
            raise ValueError("expected a diagonal-form kernel object")
        return cls(
            int(obj["d"]),
            parse_rational(obj["scale"]),
            [(MultiIndex(t["index"]), parse_rational(t["weight"])) for t in obj["terms"]],
        )


# -- kernel builders ----------------------------------------------------


def kernel_single(n: int, d: int) -> DiagonalKernelForm:
    """Kernel of a single operator M_n.

    K_n(x,y) = sum over |a|=n of B_a(x) B_a(y) / <1, B_a>; since <1, B_a>
    depends only on the degree, this is (n+d)!/n! times the unit-weight
    diagonal sum.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    check_dimension(d)
    scale = Fraction(factorial(n + d), factorial(n))
    return DiagonalKernelForm(d, scale, [(a, 1) for a in enumerate_multi_indices(n, d)])


def kernel_definition_twofold(m: int, n: int, d: int) -> KernelPolynomial:
    """Brute-force kernel of M_m o M_n from the operator definition.

    Expands  sum_{|b|=m} sum_{|a|=n} B_a(y) B_b(x)
             * int B_a B_b / (<1,B_a> <1,B_b>)
    term by term.  This is the oracle: it never touches the closed form.
    """
    if m < 0 or n < 0:
        raise ValueError("degrees must be >= 0")
    check_dimension(d)
    x_side = [(b, bernstein_basis(b)) for b in enumerate_multi_indices(m, d)]
    acc: Dict[PairKey, Fraction] = {}
    for alpha in enumerate_multi_indices(n, d):
        one_alpha = inner_one_bernstein(alpha, d)
        inner: Dict[Tuple[int, ...], Fraction] = {}
        for beta, bx in x_side:
            c = bernstein_product_integral(alpha, beta, d) / (
                one_alpha * inner_one_bernstein(beta, d))
            for ex, cx in bx.terms.items():
                val = inner.get(ex, 0) + c * cx
                if val:
                    inner[ex] = val
                else:
                    inner.pop(ex, None)
        for ey, cy in bernstein_basis(alpha).terms.items():
            for ex, cx in inner.items():
                key = (ex, ey)
                val = acc.get(key, 0) + cx * cy
                if val:
                    acc[key] = val
                else:
                    acc.pop(key, None)
    return KernelPolynomial(d, acc)


def kernel_closed_twofold(m: int, n: int, d: int) -> DiagonalKernelForm:
    """Diagonal closed form of the M_m o M_n kernel.

    scale = (m+d)! (n+d)! / (m+n+d)!, weight C(m,|l|) C(n,|l|) for every
    multi-index l; the binomials cut the sum off at |l| = min(m, n).
    """
    if m < 0 or n < 0:
        raise ValueError("degrees must be >= 0")
    check_dimension(d)
    scale = Fraction(factorial(m + d) * factorial(n + d), factorial(m + n + d))
    terms = []
    for k in range(min(m, n) + 1):
        weight = binomial(m, k) * binomial(n, k)
        for ell in enumerate_multi_indices(k, d):
            terms.append((ell, weight))
    return DiagonalKernelForm(d, scale, terms)


def kernel_univariate_twofold(m: int, n: int) -> DiagonalKernelForm:
    """Univariate (d=1) closed form built through the classical double sum
    over degree k and basis position, independent of the multivariate path.
    """
    if m < 0 or n < 0:
        raise ValueError("degrees must be >= 0")
    scale = Fraction(factorial(m + 1) * factorial(n + 1), factorial(m + n + 1))
    terms = []
    for k in range(min(m, n) + 1):
        weight = binomial(m, k) * binomial(n, k)
        for j in range(k + 1):
            terms.append((MultiIndex((k - j, j)), weight))
    return DiagonalKernelForm(1, scale, terms)


def kernel_legendre(m: int, n: int) -> KernelPolynomial:
    """Univariate kernel through its shifted-Legendre expansion.

    K_{m,n} = sum_k  m_(k)/ (m+k+1)_(k) * n_(k)/(n+k+1)_(k) * (2k+1)
              * L_k(x) L_k(y),
    where s_(k) is the falling factorial and L_k is the alternating
    Bernstein combination sum_i (-1)^i C(k,i) p_{k,i}, i.e. the shifted
    Legendre polynomial on [0,1] up to sign.  Returned canonicalized.
    """
    if m < 0 or n < 0:
        raise ValueError("degrees must be >= 0")
    acc = KernelPolynomial.zero(1)
    for k in range(min(m, n) + 1):
        weight = (Fraction(falling_factorial(m, k), falling_factorial(m + k + 1, k))
                  * Fraction(falling_factorial(n, k), falling_factorial(n + k + 1, k))
                  * (2 * k + 1))
        legendre_k = CartesianPolynomial.zero(1)
        for i in range(k + 1):
            sign = -1 if i % 2 else 1
            legendre_k = legendre_k + bernstein_basis(MultiIndex((k - i, i))).scale(
                sign * binomial(k, i))
        acc = acc + KernelPolynomial.outer(legendre_k, legendre_k).scale(weight)
    return acc


def kernel_definition_threefold(n3: int, n2: int, n1: int, d: int) -> KernelPolynomial:
    """Brute-force kernel of M_n3 o M_n2 o M_n1 (innermost degree n1).

    Iterating the operator definition gives the triple sum
        sum_{|g|=n3} sum_{|b|=n2} sum_{|a|=n1}  B_g(x) B_a(y)
        * <B_a, B_b> <B_b, B_g> / (<1,B_a> <1,B_b> <1,B_g>)
    assembled from pairwise product integrals.  Works for any d.
    """
    if min(n3, n2, n1) < 0:
        raise ValueError("degrees must be >= 0")
    check_dimension(d)
    gammas = enumerate_multi_indices(n3, d)
    betas = enumerate_multi_indices(n2, d)
    alphas = enumerate_multi_indices(n1, d)
    acc: Dict[PairKey, Fraction] = {}
    for gamma in gammas:
        one_gamma = inner_one_bernstein(gamma, d)
        inner: Dict[Tuple[int, ...], Fraction] = {}
        for alpha in alphas:
            ratio = Fraction(0)
            for beta in betas:
                ratio += (bernstein_product_integral(alpha, beta, d)
                          * bernstein_product_integral(beta, gamma, d)
                          / inner_one_bernstein(beta, d))
            ratio /= inner_one_bernstein(alpha, d) * one_gamma
            for ey, cy in bernstein_basis(alpha).terms.items():
                val = inner.get(ey, 0) + ratio * cy
                if val:
                    inner[ey] = val
                else:
                    inner.pop(ey, None)
        for ex, cx in bernstein_basis(gamma).terms.items():
            for ey, cy in inner.items():
                key = (ex, ey)
                val = acc.get(key, 0) + cx * cy
                if val:
                    acc[key] = val
                else:
                    acc.pop(key, None)
    return KernelPolynomial(d, acc)


def kernel_closed_threefold(n3: int, n2: int, n1: int) -> DiagonalKernelForm:
    """Univariate (d=1) diagonal closed form for a three-operator composition.

    scale = (n3+1)! (n2+1)! (n1+1)! (n3+n2+n1+1)!
            / ((n3+n2+1)! (n3+n1+1)! (n2+n1+1)!),
    weight_k = C(n3,k) C(n2,k) C(n1,k) / C(n3+n2+n1+1, k); symmetric in
    the three degrees.
    """
    if min(n3, n2, n1) < 0:
        raise ValueError("degrees must be >= 0")
    total = n3 + n2 + n1
    scale = Fraction(
        factorial(n3 + 1) * factorial(n2 + 1) * factorial(n1 + 1) * factorial(total + 1),
        factorial(n3 + n2 + 1) * factorial(n3 + n1 + 1) * factorial(n2 + n1 + 1))
    terms = []
    for k in range(min(n3, n2, n1) + 1):
        weight = Fraction(binomial(n3, k) * binomial(n2, k) * binomial(n1, k),
                          binomial(total + 1, k))
        for j in range(k + 1):
            terms.append((MultiIndex((k - j, j)), weight))
    return DiagonalKernelForm(1, scale, terms)


def inner_sum_identity(n: int, beta: IndexLike, y: PointLike) -> Tuple[Fraction, Fraction]:
    """Both sides of the collapse identity used to diagonalize the kernel.

    Left side:   sum over |a| = n of  B_a(y) * (a+beta)!/a!
    Right side:  sum over l <= beta (componentwise) of
                 n_(|l|) / |l|! * B_l(y) * beta! * prod C(beta_v, l_v)

    The two sides are computed by entirely separate summations and are
    returned as a pair for the caller to compare.
    """
    if n < 0:
        raise ValueError("degree must be >= 0")
    beta = beta if isinstance(beta, MultiIndex) else MultiIndex(beta)
    d = beta.dimension
    check_dimension(d)
    y = y if isinstance(y, BarycentricPoint) else BarycentricPoint(y)
    if y.dimension != d:
        raise ValueError("point/index dimension mismatch")

    lhs = Fraction(0)
    for alpha in enumerate_multi_indices(n, d):
        shifted = index_factorial(alpha + beta) // index_factorial(alpha)
        lhs += bernstein_value(alpha, y) * shifted

    rhs = Fraction(0)
    beta_fact = index_factorial(beta)
    for parts in _cartesian_product(*(range(b + 1) for b in beta.parts)):
        ell = MultiIndex(parts)
        prod_binom = 1
        for b, l in zip(beta.parts, parts):
            prod_binom *= binomial(b, l)
        rhs += (Fraction(falling_factorial(n, ell.degree), factorial(ell.degree))
                * bernstein_value(ell, y) * beta_fact * prod_binom)
    return lhs, rhs


def to_canonical(form: DiagonalKernelForm) -> KernelPolynomial:
    """Expand a diagonal form into the canonical bivariate map."""
    acc: Dict[PairKey, Fraction] = {}
    for mi, weight in form.terms:
        basis = bernstein_basis(mi)
        w = form.scale * weight
        for ex, cx in basis.terms.items():
            for ey, cy in basis.terms.items():
                key = (ex, ey)
                val = acc.get(key, 0) + w * cx * cy
                if val:
                    acc[key] = val
                else:
                    acc.pop(key, None)
    return KernelPolynomial(form.d, acc)


def eval_kernel(kernel: KernelPolynomial, x: PointLike, y: PointLike) -> Fraction:
    """Exact kernel value at cartesian points x, y."""
    return kernel.evaluate(x, y)


def first_kernel_difference(lhs: KernelPolynomial, rhs: KernelPolynomial) -> Optional[dict]:
    """First monomial (in canonical order) where two kernels disagree.

    Returns None when the kernels are identical; otherwise a witness dict
    with the exponent pair and both coefficients, for failure reports.
    """
    if lhs.d != rhs.d:
        raise ValueError("dimension mismatch")
    for key in sorted(set(lhs.terms) | set(rhs.terms)):
        a = lhs.terms.get(key, Fraction(0))
        b = rhs.terms.get(key, Fraction(0))
        if a != b:
            ex, ey = key
            return {
                "exp_x": list(ex),
                "exp_y": list(ey),
                "lhs": format_rational(a),
                "rhs": format_rational(b),
            }
    return None
