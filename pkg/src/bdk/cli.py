"""Command-line front end.

Subcommands:
  eval    exact kernel value at rational points (several kernel forms)
  coeffs  convex coefficients writing M_m o M_n as a mix of single operators
  apply   apply composed operators to a polynomial, print canonical JSON
  table   CSV of float kernel values on a simplex grid (plot data)
  verify  run the identity suite and write a JSON report

Exact values cross this boundary as 'p/q' strings; floats appear only in
table emission and the optional --float echo.  Exit codes: 0 success,
1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import json
import re
import sys
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .combinat import format_rational, parse_rational
from .durrmeyer import OperatorSpec, compose_apply, composition_coefficients
from .kernels import (
    KernelPolynomial,
    kernel_closed_twofold,
    kernel_definition_twofold,
    kernel_legendre,
    kernel_univariate_twofold,
    to_canonical,
)
from .polynomials import BarycentricPoint, CartesianPolynomial
from .verify import DEFAULT_DEGREE_CAPS, SuiteConfig, run_suite

__all__ = ["main", "parse_polynomial", "PolynomialParseError"]

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Invalid flag combination or malformed value; maps to exit code 2."""


class PolynomialParseError(UsageError):
    def __init__(self, message: str, position: int):
        super().__init__(f"parse error at position {position}: {message}")
        self.position = position


# -- polynomial expression grammar ---------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:/\d+)?)|(?P<var>x\d+(?:\^\d+)?)|(?P<op>[+\-*]))")


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            stripped = rest.lstrip()
            if stripped:
                raise PolynomialParseError(
                    f"unexpected character {stripped[0]!r}",
                    pos + len(rest) - len(stripped))
            break
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


def parse_polynomial(text: str, d: int) -> CartesianPolynomial:
    """Parse 'c*x1^a*x2^b + ...' with rational coefficients into a polynomial.

    The grammar is deliberately small: signed terms joined by '+'/'-',
    each term a '*'-separated product of a rational constant and simple
    powers of x1..xd.
    """
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialParseError("empty polynomial expression", 0)
    poly = CartesianPolynomial.zero(d)
    i = 0
    while i < len(tokens):
        sign = 1
        while i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] in "+-":
            if tokens[i][1] == "-":
                sign = -sign
            i += 1
        if i >= len(tokens):
            raise PolynomialParseError("dangling sign", tokens[-1][2])
        coef = Fraction(sign)
        exps = [0] * d
        expect_factor = True
        while i < len(tokens):
            kind, value, pos = tokens[i]
            if kind == "op" and value == "*":
                if expect_factor:
                    raise PolynomialParseError("'*' without a preceding factor", pos)
                expect_factor = True
                i += 1
                continue
            if kind == "op":
                break
            if not expect_factor:
                raise PolynomialParseError("missing '*' between factors", pos)
            if kind == "number":
                coef *= parse_rational(value)
            else:
                var, _, power = value.partition("^")
                index = int(var[1:])
                if not 1 <= index <= d:
                    raise PolynomialParseError(
                        f"variable {var} out of range for dimension {d}", pos)
                exps[index - 1] += int(power) if power else 1
            expect_factor = False
            i += 1
        if expect_factor:
            raise PolynomialParseError("term with no factors", tokens[min(i, len(tokens) - 1)][2])
        poly = poly + CartesianPolynomial.monomial(d, exps, coef)
    return poly


# -- shared flag helpers ---------------------------------------------------


def _parse_point(raw: str, d: int, flag: str) -> BarycentricPoint:
    parts = [p for p in raw.split(",") if p.strip()]
    if len(parts) != d:
        raise UsageError(f"{flag} needs {d} comma-separated rationals, got {len(parts)}")
    try:
        return BarycentricPoint(parse_rational(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _parse_dims(raw: str) -> Tuple[int, ...]:
    try:
        dims = tuple(int(p) for p in raw.split(","))
    except ValueError as exc:
        raise UsageError(f"--d: {exc}") from exc
    if not dims:
        raise UsageError("--d needs at least one dimension")
    return dims


def _build_kernel(form: str, m: int, n: int, d: int) -> KernelPolynomial:
    if form == "definition":
        return kernel_definition_twofold(m, n, d)
    if form == "closed":
        return to_canonical(kernel_closed_twofold(m, n, d))
    if d != 1:
        raise UsageError(f"--form {form} is univariate; it requires --d 1")
    if form == "univariate":
        return to_canonical(kernel_univariate_twofold(m, n))
    if form == "legendre":
        return kernel_legendre(m, n)
    raise UsageError(f"unknown kernel form {form!r}")


# -- subcommands -----------------------------------------------------------


def _cmd_eval(args) -> int:
    kernel = _build_kernel(args.form, args.m, args.n, args.d)
    x = _parse_point(args.x, args.d, "--x")
    y = _parse_point(args.y, args.d, "--y")
    value = kernel.evaluate(x, y)
    print(format_rational(value))
    if args.float:
        print(f"{float(value):.17g}")
    if args.dump_kernel:
        payload = json.dumps(kernel.to_json_dict(), sort_keys=True)
        if args.dump_kernel == "-":
            print(payload)
        else:
            with open(args.dump_kernel, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
    return EXIT_OK


def _cmd_coeffs(args) -> int:
    coeffs = composition_coefficients(args.m, args.n, args.d)
    print(json.dumps([format_rational(c) for c in coeffs]))
    print(format_rational(sum(coeffs)))
    return EXIT_OK


def _cmd_apply(args) -> int:
    try:
        degrees = [int(p) for p in args.degrees.split(",")]
    except ValueError as exc:
        raise UsageError(f"--degrees: {exc}") from exc
    poly = parse_polynomial(args.poly, args.d)
    specs = [OperatorSpec(k, args.d) for k in degrees]
    image = compose_apply(specs, poly)
    print(json.dumps(image.to_json_dict(), sort_keys=True))
    return EXIT_OK


def _grid_points(d: int, grid: int) -> List[BarycentricPoint]:
    step = Fraction(1, grid - 1)
    if d == 1:
        return [BarycentricPoint([i * step]) for i in range(grid)]
    points = []
    for i in range(grid):
        for j in range(grid):
            if i + j <= grid - 1:
                points.append(BarycentricPoint([i * step, j * step]))
    return points


def _cmd_table(args) -> int:
    if args.d not in (1, 2):
        raise UsageError("--d must be 1 or 2 for table emission")
    if args.grid < 2:
        raise UsageError("--grid must be >= 2")
    kernel = to_canonical(kernel_closed_twofold(args.m, args.n, args.d))
    points = _grid_points(args.d, args.grid)
    header = [f"x{i + 1}" for i in range(args.d)] + [f"y{i + 1}" for i in range(args.d)] + ["K"]
    try:
        fh = open(args.out, "w", newline="", encoding="utf-8") if args.out != "-" else sys.stdout
    except OSError as exc:
        raise UsageError(f"--out: cannot write {args.out!r}: {exc}") from exc
    try:
        writer = csv.writer(fh)
        writer.writerow(header)
        for x in points:
            for y in points:
                value = kernel.evaluate(x, y)
                writer.writerow([float(c) for c in x.coords]
                                + [float(c) for c in y.coords]
                                + [float(value)])
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def _cmd_verify(args) -> int:
    dims = _parse_dims(args.d)
    if args.max_degree is not None and args.max_degree < 0:
        raise UsageError("--max-degree must be >= 0")

    if args.max_degree is not None:
        caps = {d: args.max_degree for d in dims}
        clamp = lambda default: min(default, args.max_degree)  # noqa: E731
    else:
        missing = [d for d in dims if d not in DEFAULT_DEGREE_CAPS]
        if missing:
            raise UsageError(
                f"no default degree cap for d={missing}; pass --max-degree")
        caps = {d: DEFAULT_DEGREE_CAPS[d] for d in dims}
        clamp = lambda default: default  # noqa: E731

    try:
        cfg = SuiteConfig(
            d_range=dims,
            degree_caps=caps,
            threefold_cap=args.threefold_cap if args.threefold_cap is not None else clamp(5),
            univariate_cap=clamp(10),
            legendre_cap=clamp(8),
            combination_cap=clamp(5),
            lemma_cap=clamp(4),
            operator_cap=clamp(5),
            operator_monomial_degree=clamp(4),
            moment_cap=clamp(6),
            seed=args.seed,
            time_budget_s=args.time_budget,
            corrupt_scale=args.self_test_corrupt,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    report = run_suite(cfg)
    payload = json.dumps(report.to_json_dict(), sort_keys=True, indent=2)
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
        except OSError as exc:
            raise UsageError(f"--report: cannot write {args.report!r}: {exc}") from exc
    else:
        print(payload)

    summary = report.summary()
    status = f"{summary['total']} checks, {summary['passed']} passed, {summary['failed']} failed"
    if not report.complete:
        status += f" (INCOMPLETE: {report.incomplete_reason})"
    print(f"bdk verify: {status}", file=sys.stderr)
    return EXIT_OK if summary["failed"] == 0 else EXIT_VERIFICATION_FAILED


# -- parser ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bdk",
        description="Exact Bernstein-Durrmeyer kernel algebra on the simplex.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a composition kernel at rational points")
    p_eval.add_argument("--d", type=int, required=True, help="simplex dimension")
    p_eval.add_argument("--m", type=int, required=True, help="outer operator degree")
    p_eval.add_argument("--n", type=int, required=True, help="inner operator degree")
    p_eval.add_argument("--x", required=True, help="d comma-separated rationals p/q")
    p_eval.add_argument("--y", required=True, help="d comma-separated rationals p/q")
    p_eval.add_argument("--form", default="closed",
                        choices=["definition", "closed", "univariate", "legendre"])
    p_eval.add_argument("--float", action="store_true",
                        help="also print a 17-significant-digit decimal")
    p_eval.add_argument("--dump-kernel", metavar="PATH",
                        help="write the canonical kernel JSON to PATH ('-' for stdout)")
    p_eval.set_defaults(func=_cmd_eval)

    p_coeffs = sub.add_parser("coeffs", help="linear-combination coefficients of a composition")
    p_coeffs.add_argument("--d", type=int, required=True)
    p_coeffs.add_argument("--m", type=int, required=True)
    p_coeffs.add_argument("--n", type=int, required=True)
    p_coeffs.set_defaults(func=_cmd_coeffs)

    p_apply = sub.add_parser("apply", help="apply composed operators to a polynomial")
    p_apply.add_argument("--d", type=int, required=True)
    p_apply.add_argument("--degrees", required=True,
                         help="comma-separated degrees, outermost first")
    p_apply.add_argument("--poly", required=True,
                         help="polynomial like '2/3*x1^2*x2 - x1 + 1'")
    p_apply.set_defaults(func=_cmd_apply)

    p_table = sub.add_parser("table", help="CSV float table of kernel values on a grid")
    p_table.add_argument("--d", type=int, required=True)
    p_table.add_argument("--m", type=int, required=True)
    p_table.add_argument("--n", type=int, required=True)
    p_table.add_argument("--grid", type=int, required=True)
    p_table.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    p_table.set_defaults(func=_cmd_table)

    p_verify = sub.add_parser("verify", help="run the identity verification suite")
    p_verify.add_argument("--d", default="1,2,3", help="comma-separated dimensions")
    p_verify.add_argument("--max-degree", type=int, default=None,
                          help="cap all check families at this degree")
    p_verify.add_argument("--threefold-cap", type=int, default=None)
    p_verify.add_argument("--seed", type=int, default=271828)
    p_verify.add_argument("--time-budget", type=float, default=None,
                          help="soft wall-clock budget in seconds")
    p_verify.add_argument("--report", metavar="PATH", help="write the JSON report here")
    p_verify.add_argument("--self-test-corrupt", action="store_true",
                          help="corrupt the closed-form prefactor to prove failures are caught")
    p_verify.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"bdk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"bdk: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def cli_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    cli_entry()
