"""Identity verification suite with machine-readable reports.

Runs every kernel and operator identity the library claims, across
configurable degree/dimension ranges, and assembles a deterministic JSON
report.  A failing polynomial identity is reported with the first
differing monomial pair so exact-arithmetic mismatches can be debugged
directly from the report.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Tuple

from .combinat import enumerate_multi_indices, format_rational
from .durrmeyer import OperatorSpec, apply_operator, composition_coefficients
from .kernels import (
    KernelPolynomial,
    first_kernel_difference,
    inner_sum_identity,
    kernel_closed_threefold,
    kernel_closed_twofold,
    kernel_definition_threefold,
    kernel_definition_twofold,
    kernel_legendre,
    kernel_single,
    kernel_univariate_twofold,
    to_canonical,
)
from .polynomials import BarycentricPoint, CartesianPolynomial, integrate_simplex

__all__ = [
    "SuiteConfig",
    "CheckRecord",
    "VerificationReport",
    "run_suite",
    "sample_simplex_point",
    "DEFAULT_DEGREE_CAPS",
]

REPORT_SCHEMA = "bdk-report/1"
ARTIFACT_VERSION = "0.1.0"

DEFAULT_DEGREE_CAPS = {1: 8, 2: 6, 3: 4}


@dataclass
class SuiteConfig:
    """Ranges, seed and execution hints for one verification run.

    The default ranges reproduce the full claimed identity set; shrink
    them for quick smoke runs.  `parallelism` is a worker-count hint --
    exact arithmetic makes results independent of any partitioning, and
    the current executor runs checks sequentially.
    """

    d_range: Tuple[int, ...] = (1, 2, 3)
    degree_caps: Dict[int, int] = field(default_factory=lambda: dict(DEFAULT_DEGREE_CAPS))
    threefold_cap: int = 5
    univariate_cap: int = 10
    legendre_cap: int = 8
    combination_cap: int = 5
    lemma_cap: int = 4
    operator_cap: int = 5
    operator_monomial_degree: int = 4
    moment_cap: int = 6
    points_per_case: int = 5
    seed: int = 271828
    parallelism: int = 1
    time_budget_s: Optional[float] = None
    corrupt_scale: bool = False

    def __post_init__(self):
        if not self.d_range:
            raise ValueError("d_range must not be empty")
        for d in self.d_range:
            if d < 1:
                raise ValueError("dimensions must be >= 1")
            if self.degree_caps.get(d, -1) < 0:
                raise ValueError(f"degree cap for d={d} missing or negative")
        for name in ("threefold_cap", "univariate_cap", "legendre_cap",
                     "combination_cap", "lemma_cap", "operator_cap",
                     "operator_monomial_degree", "moment_cap"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if self.points_per_case < 1:
            raise ValueError("points_per_case must be >= 1")

    def to_json_dict(self) -> dict:
        return {
            "d_range": list(self.d_range),
            "degree_caps": {str(d): c for d, c in sorted(self.degree_caps.items())},
            "threefold_cap": self.threefold_cap,
            "univariate_cap": self.univariate_cap,
            "legendre_cap": self.legendre_cap,
            "combination_cap": self.combination_cap,
            "lemma_cap": self.lemma_cap,
            "operator_cap": self.operator_cap,
            "operator_monomial_degree": self.operator_monomial_degree,
            "moment_cap": self.moment_cap,
            "points_per_case": self.points_per_case,
            "seed": self.seed,
            "parallelism": self.parallelism,
            "time_budget_s": self.time_budget_s,
            "corrupt_scale": self.corrupt_scale,
        }


@dataclass
class CheckRecord:
    name: str
    params: dict
    passed: bool
    witness: Optional[dict]
    wall_ms: float


@dataclass
class VerificationReport:
    config: dict
    checks: List[CheckRecord]
    complete: bool
    incomplete_reason: Optional[str]
    total_ms: float

    @property
    def failures(self) -> List[CheckRecord]:
        return [c for c in self.checks if not c.passed]

    @property
    def ok(self) -> bool:
        return self.complete and not self.failures

    def summary(self) -> dict:
        failed = len(self.failures)
        return {"total": len(self.checks), "passed": len(self.checks) - failed,
                "failed": failed}

    def to_json_dict(self, include_timing: bool = True) -> dict:
        checks = []
        for c in self.checks:
            rec = {"name": c.name, "params": c.params, "passed": c.passed,
                   "witness": c.witness}
            if include_timing:
                rec["wall_ms"] = round(c.wall_ms, 3)
            checks.append(rec)
        out = {
            "schema": REPORT_SCHEMA,
            "version": ARTIFACT_VERSION,
            "config": self.config,
            "complete": self.complete,
            "incomplete_reason": self.incomplete_reason,
            "summary": self.summary(),
            "checks": checks,
        }
        if include_timing:
            out["total_ms"] = round(self.total_ms, 3)
        return out

    def body_bytes(self) -> bytes:
        """Canonical serialization with all timing fields stripped.

        Two runs with the same config and seed produce identical bytes.
        """
        return canonical_json_bytes(self.to_json_dict(include_timing=False))


def canonical_json_bytes(obj: dict) -> bytes:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False).encode("utf-8")


def sample_simplex_point(rng: random.Random, d: int, max_denominator: int = 97) -> BarycentricPoint:
    """A seeded rational point inside the standard d-simplex.

    All coordinates share one denominator <= max_denominator, keeping the
    exact arithmetic small and the draw reproducible.
    """
    q = rng.randint(1, max_denominator)
    remaining = q
    coords = []
    for _ in range(d):
        p = rng.randint(0, remaining)
        coords.append(Fraction(p, q))
        remaining -= p
    return BarycentricPoint(coords)


# -- check construction ---------------------------------------------------

CheckFn = Callable[[], Tuple[bool, Optional[dict]]]
Job = Tuple[str, dict, CheckFn]


def _kernel_equal(lhs: KernelPolynomial, rhs: KernelPolynomial) -> Tuple[bool, Optional[dict]]:
    diff = first_kernel_difference(lhs, rhs)
    return (diff is None), diff


def _poly_witness(lhs: CartesianPolynomial, rhs: CartesianPolynomial) -> Tuple[bool, Optional[dict]]:
    if lhs == rhs:
        return True, None
    for key in sorted(set(lhs.terms) | set(rhs.terms)):
        a, b = lhs.terms.get(key, Fraction(0)), rhs.terms.get(key, Fraction(0))
        if a != b:
            return False, {"exp": list(key), "lhs": format_rational(a),
                           "rhs": format_rational(b)}
    return True, None


class _SuiteState:
    """Shared lazy caches so families reuse expensive kernel builds."""

    def __init__(self, cfg: SuiteConfig):
        self.cfg = cfg
        self.twofold_def: Dict[Tuple[int, int, int], KernelPolynomial] = {}
        self.twofold_closed: Dict[Tuple[int, int, int], KernelPolynomial] = {}
        self.threefold_def: Dict[Tuple[int, int, int], KernelPolynomial] = {}
        self.operator_images: Dict[Tuple[int, int, object], CartesianPolynomial] = {}

    def definition(self, d: int, m: int, n: int) -> KernelPolynomial:
        key = (d, m, n)
        if key not in self.twofold_def:
            self.twofold_def[key] = kernel_definition_twofold(m, n, d)
        return self.twofold_def[key]

    def closed_canonical(self, d: int, m: int, n: int) -> KernelPolynomial:
        key = (d, m, n)
        if key not in self.twofold_closed:
            form = kernel_closed_twofold(m, n, d)
            if self.cfg.corrupt_scale:
                form = form.with_scale(2 * form.scale)
            self.twofold_closed[key] = to_canonical(form)
        return self.twofold_closed[key]

    def threefold(self, a: int, b: int, c: int) -> KernelPolynomial:
        key = (a, b, c)
        if key not in self.threefold_def:
            self.threefold_def[key] = kernel_definition_threefold(a, b, c, 1)
        return self.threefold_def[key]

    def image(self, d: int, degree: int, f: CartesianPolynomial) -> CartesianPolynomial:
        key = (d, degree, f)
        if key not in self.operator_images:
            self.operator_images[key] = apply_operator(OperatorSpec(degree, d), f)
        return self.operator_images[key]


def _monomials_up_to(d: int, max_degree: int) -> List[CartesianPolynomial]:
    out = []
    for deg in range(max_degree + 1):
        for mi in enumerate_multi_indices(deg, d):
            # drop the slack slot: cartesian exponents only
            out.append(CartesianPolynomial.monomial(d, mi.parts[1:]))
    return out


def _iter_jobs(cfg: SuiteConfig, state: _SuiteState, rng: random.Random) -> Iterator[Job]:
    yield from _twofold_jobs(cfg, state)
    if 1 in cfg.d_range:
        yield from _univariate_jobs(cfg, state)
        yield from _threefold_jobs(cfg, state)
        yield from _moment_jobs(cfg)
    yield from _combination_jobs(cfg, state)
    yield from _operator_jobs(cfg, state)
    yield from _lemma_jobs(cfg, rng)


def _twofold_jobs(cfg: SuiteConfig, state: _SuiteState) -> Iterator[Job]:
    for d in cfg.d_range:
        cap = cfg.degree_caps[d]
        for m in range(cap + 1):
            for n in range(cap + 1):
                params = {"d": d, "m": m, "n": n}

                def closed_vs_def(d=d, m=m, n=n):
                    return _kernel_equal(state.closed_canonical(d, m, n),
                                         state.definition(d, m, n))
                yield "twofold_closed_equals_definition", params, closed_vs_def

                def stochastic(d=d, m=m, n=n):
                    return _poly_witness(state.definition(d, m, n).integrate_y(),
                                         CartesianPolynomial.constant(d, 1))
                yield "twofold_stochastic_in_y", params, stochastic

                def symmetric_xy(d=d, m=m, n=n):
                    k = state.definition(d, m, n)
                    return _kernel_equal(k, k.transpose())
                yield "twofold_symmetry_xy", params, symmetric_xy

                def truncated(d=d, m=m, n=n):
                    form = kernel_closed_twofold(m, n, d)
                    top = form.max_index_degree()
                    if top <= min(m, n):
                        return True, None
                    return False, {"max_index_degree": top, "min_degree": min(m, n)}
                yield "diagonal_truncation", params, truncated

                if m < n:
                    def symmetric_degrees(d=d, m=m, n=n):
                        return _kernel_equal(state.definition(d, m, n),
                                             state.definition(d, n, m))
                    yield "twofold_symmetry_degrees", params, symmetric_degrees

        for k in range(cap + 1):
            def single_stochastic(d=d, k=k):
                kernel = to_canonical(kernel_single(k, d))
                return _poly_witness(kernel.integrate_y(),
                                     CartesianPolynomial.constant(d, 1))
            yield "single_stochastic_in_y", {"d": d, "n": k}, single_stochastic


def _univariate_jobs(cfg: SuiteConfig, state: _SuiteState) -> Iterator[Job]:
    for m in range(cfg.univariate_cap + 1):
        for n in range(cfg.univariate_cap + 1):
            def uni_path(m=m, n=n):
                uni = kernel_univariate_twofold(m, n)
                multi = kernel_closed_twofold(m, n, 1)
                if uni == multi:
                    return True, None
                return _kernel_equal(to_canonical(uni), to_canonical(multi))
            yield "univariate_twofold_path", {"m": m, "n": n}, uni_path

            def uni_vs_def(m=m, n=n):
                return _kernel_equal(to_canonical(kernel_univariate_twofold(m, n)),
                                     state.definition(1, m, n))
            yield "univariate_twofold_vs_definition", {"m": m, "n": n}, uni_vs_def

    for m in range(cfg.legendre_cap + 1):
        for n in range(cfg.legendre_cap + 1):
            def legendre(m=m, n=n):
                return _kernel_equal(kernel_legendre(m, n),
                                     to_canonical(kernel_univariate_twofold(m, n)))
            yield "legendre_matches_univariate", {"m": m, "n": n}, legendre


def _threefold_jobs(cfg: SuiteConfig, state: _SuiteState) -> Iterator[Job]:
    cap = cfg.threefold_cap
    for a in range(cap + 1):
        for b in range(cap + 1):
            for c in range(cap + 1):
                def closed_vs_def(a=a, b=b, c=c):
                    return _kernel_equal(to_canonical(kernel_closed_threefold(a, b, c)),
                                         state.threefold(a, b, c))
                yield ("threefold_closed_equals_definition",
                       {"n3": a, "n2": b, "n1": c}, closed_vs_def)

    perm_cap = min(3, cap)
    for a in range(perm_cap + 1):
        for b in range(a, perm_cap + 1):
            for c in range(b, perm_cap + 1):
                def permuted(a=a, b=b, c=c):
                    base = state.threefold(a, b, c)
                    for perm in {(a, b, c), (a, c, b), (b, a, c),
                                 (b, c, a), (c, a, b), (c, b, a)}:
                        ok, diff = _kernel_equal(state.threefold(*perm), base)
                        if not ok:
                            diff["permutation"] = list(perm)
                            return False, diff
                    return True, None
                yield ("threefold_permutation_invariance",
                       {"degrees": [a, b, c]}, permuted)


def _combination_jobs(cfg: SuiteConfig, state: _SuiteState) -> Iterator[Job]:
    for d in cfg.d_range:
        if d > 2:
            continue
        cap = min(cfg.combination_cap, cfg.degree_caps.get(d, cfg.combination_cap))
        for m in range(cap + 1):
            for n in range(cap + 1):
                params = {"d": d, "m": m, "n": n}

                def convex(d=d, m=m, n=n):
                    coeffs = composition_coefficients(m, n, d)
                    total = sum(coeffs)
                    if total == 1 and all(c > 0 for c in coeffs):
                        return True, None
                    return False, {"sum": format_rational(total),
                                   "coefficients": [format_rational(c) for c in coeffs]}
                yield "composition_coefficients_convex", params, convex

                def combo_kernel(d=d, m=m, n=n):
                    coeffs = composition_coefficients(m, n, d)
                    acc = KernelPolynomial.zero(d)
                    for k, ck in enumerate(coeffs):
                        acc = acc + to_canonical(kernel_single(k, d)).scale(ck)
                    return _kernel_equal(acc, state.definition(d, m, n))
                yield "composition_linear_combination_kernel", params, combo_kernel


def _operator_jobs(cfg: SuiteConfig, state: _SuiteState) -> Iterator[Job]:
    for d in cfg.d_range:
        if d > 2:
            continue
        cap = cfg.operator_cap
        monomials = _monomials_up_to(d, cfg.operator_monomial_degree)

        for n in range(cap + 1):
            def constant_preserved(d=d, n=n):
                one = CartesianPolynomial.constant(d, 1)
                return _poly_witness(state.image(d, n, one), one)
            yield "operator_constant_preservation", {"d": d, "n": n}, constant_preserved

            def degree_bound(d=d, n=n):
                for f in monomials:
                    img = state.image(d, n, f)
                    if img.total_degree() > n:
                        return False, {"f": f.to_json_dict()["terms"],
                                       "image_degree": img.total_degree()}
                return True, None
            yield "operator_degree_bound", {"d": d, "n": n}, degree_bound

            def self_adjoint(d=d, n=n):
                from .polynomials import inner_product
                for f in monomials:
                    mf = state.image(d, n, f)
                    for g in monomials:
                        lhs = inner_product(mf, g)
                        rhs = inner_product(f, state.image(d, n, g))
                        if lhs != rhs:
                            return False, {"f": f.to_json_dict()["terms"],
                                           "g": g.to_json_dict()["terms"],
                                           "lhs": format_rational(lhs),
                                           "rhs": format_rational(rhs)}
                return True, None
            yield "operator_self_adjoint", {"d": d, "n": n}, self_adjoint

            def integral_preserved(d=d, n=n):
                for f in monomials:
                    lhs = integrate_simplex(state.image(d, n, f))
                    rhs = integrate_simplex(f)
                    if lhs != rhs:
                        return False, {"f": f.to_json_dict()["terms"],
                                       "lhs": format_rational(lhs),
                                       "rhs": format_rational(rhs)}
                return True, None
            yield "operator_integral_preservation", {"d": d, "n": n}, integral_preserved

        for m in range(cap + 1):
            for n in range(m + 1, cap + 1):
                def commute(d=d, m=m, n=n):
                    for f in monomials:
                        mn = state.image(d, m, state.image(d, n, f))
                        nm = state.image(d, n, state.image(d, m, f))
                        ok, diff = _poly_witness(mn, nm)
                        if not ok:
                            diff["f"] = f.to_json_dict()["terms"]
                            return False, diff
                    return True, None
                yield "operator_commutativity", {"d": d, "m": m, "n": n}, commute

        combo_cap = min(cfg.combination_cap, cap)
        for m in range(combo_cap + 1):
            for n in range(combo_cap + 1):
                def combo_operator(d=d, m=m, n=n):
                    coeffs = composition_coefficients(m, n, d)
                    for f in monomials:
                        lhs = state.image(d, m, state.image(d, n, f))
                        rhs = CartesianPolynomial.zero(d)
                        for k, ck in enumerate(coeffs):
                            rhs = rhs + state.image(d, k, f).scale(ck)
                        ok, diff = _poly_witness(lhs, rhs)
                        if not ok:
                            diff["f"] = f.to_json_dict()["terms"]
                            return False, diff
                    return True, None
                yield ("operator_linear_combination",
                       {"d": d, "m": m, "n": n}, combo_operator)


def _moment_jobs(cfg: SuiteConfig) -> Iterator[Job]:
    for n in range(cfg.moment_cap + 1):
        def first_moment(n=n):
            x = CartesianPolynomial.variable(1, 1)
            expected = CartesianPolynomial(
                1, {(0,): Fraction(1, n + 2), (1,): Fraction(n, n + 2)})
            return _poly_witness(apply_operator(OperatorSpec(n, 1), x), expected)
        yield "univariate_first_moment", {"n": n}, first_moment


def _lemma_jobs(cfg: SuiteConfig, rng: random.Random) -> Iterator[Job]:
    for d in cfg.d_range:
        if d > 2:
            continue
        for n in range(cfg.lemma_cap + 1):
            for beta_degree in range(cfg.lemma_cap + 1):
                betas = enumerate_multi_indices(beta_degree, d)
                cases = []
                for beta in betas:
                    for _ in range(cfg.points_per_case):
                        cases.append((beta, sample_simplex_point(rng, d)))

                def lemma(cases=cases, n=n):
                    for beta, y in cases:
                        lhs, rhs = inner_sum_identity(n, beta, y)
                        if lhs != rhs:
                            return False, {
                                "beta": list(beta.parts),
                                "y": [format_rational(c) for c in y.coords],
                                "lhs": format_rational(lhs),
                                "rhs": format_rational(rhs),
                            }
                    return True, None
                yield ("inner_sum_collapse",
                       {"d": d, "n": n, "beta_degree": beta_degree,
                        "cases": len(cases)}, lemma)


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    """Run every configured identity check and assemble the report.

    Deterministic for a fixed config and seed.  If the optional time
    budget runs out, the report is flagged incomplete rather than
    silently truncated.
    """
    state = _SuiteState(cfg)
    rng = random.Random(cfg.seed)
    start = time.perf_counter()
    checks: List[CheckRecord] = []
    incomplete_reason = None

    for name, params, fn in _iter_jobs(cfg, state, rng):
        if cfg.time_budget_s is not None and time.perf_counter() - start > cfg.time_budget_s:
            incomplete_reason = (
                f"time budget of {cfg.time_budget_s}s exceeded after "
                f"{len(checks)} checks")
            break
        t0 = time.perf_counter()
        passed, witness = fn()
        checks.append(CheckRecord(name, params, passed, witness,
                                  (time.perf_counter() - t0) * 1000.0))

    checks.sort(key=lambda c: (c.name, canonical_json_bytes(c.params)))
    return VerificationReport(
        config=cfg.to_json_dict(),
        checks=checks,
        complete=incomplete_reason is None,
        incomplete_reason=incomplete_reason,
        total_ms=(time.perf_counter() - start) * 1000.0,
    )
