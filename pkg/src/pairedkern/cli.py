"""Command-line surface: factorizations, kernels, oracle comparisons and the
randomized verification runner.

Results go to stdout as JSON (default) or text; diagnostics go to stderr.
Exit codes: 0 success, 1 computation refused (a documented unsupported
case), 2 usage error, 3 verification failures present.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .atto import (
    AttoSymbol,
    Triviality,
    atto_kernel_closed_form,
    build_finite_rank_symbol,
    s_trivial_check,
    s_triviality_threshold,
)
from .errors import BothSidedCircleZerosError, EngineError, ParseError
from .factorization import inner_outer, wiener_hopf
from .kernels import KernelSpace, paired_kernel_plus, toeplitz_kernel
from .oracle import DEFAULT_CUTOFF, DEFAULT_ORDER, numeric_kernel, paired_matrix
from .rational import (
    TAU_CIRCLE,
    Polynomial,
    RationalFunction,
    SymbolPair,
    poly_str,
    winding_number,
)
from .symexpr import parse_blaschke, parse_rational
from .verify import SUITES, compare_atto, compare_paired, compare_toeplitz, run_suite

EXIT_OK = 0
EXIT_REFUSED = 1
EXIT_USAGE = 2
EXIT_VERIFY_FAILED = 3


def _pairs(coeffs) -> list:
    return [[float(c.real), float(c.imag)] for c in np.asarray(coeffs, dtype=complex)]


def rational_payload(f: RationalFunction) -> dict:
    return {
        "num": _pairs(f.num.coeffs),
        "den": _pairs(f.den.coeffs),
        "display": _display_rational(f),
    }


def _display_rational(f: RationalFunction) -> str:
    den = f.den
    if den.degree == 0:
        return poly_str(f.num)
    return f"({poly_str(f.num)}) / ({poly_str(den)})"


def kernel_payload(space: KernelSpace, provenance: str = "exact") -> dict:
    return {
        "dim": space.dim,
        "multiplier": rational_payload(space.multiplier),
        "ambient": space.ambient,
        "provenance": provenance,
    }


def numeric_estimate_payload(dim: int, gap: float, order: int,
                             ambient: str = "H2+") -> dict:
    return {
        "dim": dim,
        "multiplier": None,
        "ambient": ambient,
        "provenance": "numeric",
        "spectral_gap": None if not np.isfinite(gap) else float(gap),
        "order": order,
    }


def _kernel_text(space: KernelSpace) -> str:
    if space.is_zero:
        return "zero space {0}"
    monomials = ", ".join("z^%d" % j if j > 1 else ("z" if j == 1 else "1")
                          for j in range(space.dim))
    return (
        f"dim {space.dim} in {space.ambient}: u(z) * span{{{monomials}}} "
        f"with u(z) = {_display_rational(space.multiplier)}"
    )


def _emit(payload: dict, text: str, as_json: bool):
    if as_json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _read_config(path: str) -> dict:
    values = {}
    keys = {"tol_circle": float, "order": int, "cutoff": float}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in keys:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = keys[key](value.strip())
    return values


def _settings(args) -> tuple:
    """(tol_circle, order, cutoff) with precedence flag > config > default."""
    config = _read_config(args.config) if args.config else {}
    tol = args.tol_circle if args.tol_circle is not None else config.get(
        "tol_circle", TAU_CIRCLE
    )
    order = args.order if args.order is not None else config.get(
        "order", DEFAULT_ORDER
    )
    cutoff = args.cutoff if args.cutoff is not None else config.get(
        "cutoff", DEFAULT_CUTOFF
    )
    return tol, order, cutoff


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--tol-circle", type=float, default=None,
                        help="width of the on-circle decision band")
    parser.add_argument("--order", type=int, default=None,
                        help="truncation order for numeric computations")
    parser.add_argument("--cutoff", type=float, default=None,
                        help="relative singular-value cutoff for null spaces")
    parser.add_argument("--config", default=None,
                        help="key = value file with tol_circle, order, cutoff")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="as_json", action="store_true", default=True,
                     help="JSON output (default)")
    fmt.add_argument("--text", dest="as_json", action="store_false",
                     help="human-readable output")


def _add_atto_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--theta", required=True,
                        help="inner function of the domain model space")
    parser.add_argument("--alpha", required=True,
                        help="inner function of the target model space")
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--symbol", nargs=4,
                       metavar=("A1M", "B1M", "A2P", "B2P"),
                       help="the four corona-pair components of the symbol")
    group.add_argument("--finite-rank", metavar="FILE",
                       help="JSON file with points and R+/R- data")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pairedkern",
        description="Kernels of Toeplitz, paired and truncated Toeplitz "
                    "operators with rational symbols on the unit circle.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("factor", help="inner-outer and Wiener-Hopf factorization")
    p.add_argument("expr")
    _add_common(p)

    p = sub.add_parser("toeplitz-kernel", help="kernel of a Toeplitz operator")
    p.add_argument("expr")
    _add_common(p)

    p = sub.add_parser("paired-kernel", help="projected kernel of a*P+ + b*P-")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--numeric", action="store_true",
                   help="numeric dimension estimate instead of the exact engine")
    _add_common(p)

    p = sub.add_parser("atto-kernel",
                       help="kernel of a truncated Toeplitz operator K_theta -> K_alpha")
    _add_atto_arguments(p)
    _add_common(p)

    p = sub.add_parser("oracle-compare",
                       help="run the exact engine and the numeric oracle side by side")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    op = osub.add_parser("toeplitz-kernel")
    op.add_argument("expr")
    _add_common(op)
    op = osub.add_parser("paired-kernel")
    op.add_argument("a")
    op.add_argument("b")
    _add_common(op)
    op = osub.add_parser("atto-kernel")
    _add_atto_arguments(op)
    _add_common(op)

    p = sub.add_parser("verify", help="randomized property suites")
    p.add_argument("--suite", required=True, choices=sorted(SUITES))
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    return parser


def _atto_symbol_from_args(args, tol: float) -> AttoSymbol:
    theta = parse_blaschke(args.theta)
    alpha = parse_blaschke(args.alpha)
    if args.symbol is not None:
        a1m, b1m, a2p, b2p = (parse_rational(text) for text in args.symbol)
        return AttoSymbol(theta, alpha, a1m, b1m, a2p, b2p, tol=tol)
    with open(args.finite_rank, encoding="utf-8") as fh:
        data = json.load(fh)
    points = [
        (complex(entry["t"][0], entry["t"][1]), int(entry.get("order", 1)))
        for entry in data["points"]
    ]
    r_plus = _rational_from_json(data.get("r_plus"))
    r_minus = _rational_from_json(data.get("r_minus"))
    return build_finite_rank_symbol(theta, alpha, r_plus, r_minus, points, tol=tol)


def _rational_from_json(obj) -> RationalFunction:
    if obj is None:
        return RationalFunction(Polynomial.zero())
    num = Polynomial([complex(re, im) for re, im in obj["num"]])
    den = Polynomial([complex(re, im) for re, im in obj.get("den", [[1.0, 0.0]])])
    return RationalFunction(num, den)


def _cmd_factor(args) -> int:
    tol, _, _ = _settings(args)
    g = parse_rational(args.expr)
    payload = {"symbol": rational_payload(g)}
    lines = [f"symbol: {_display_rational(g)}"]
    try:
        payload["winding"] = winding_number(g, tol)
        lines.append(f"winding number: {payload['winding']}")
    except EngineError as exc:
        payload["winding"] = None
        lines.append(f"winding number: undefined ({exc})")
    successes = 0
    try:
        factors = wiener_hopf(g, tol)
        payload["wiener_hopf"] = {
            "g_minus": rational_payload(factors.g_minus),
            "kappa": factors.kappa,
            "g_plus": rational_payload(factors.g_plus),
        }
        lines.append(
            f"Wiener-Hopf: g_minus = {_display_rational(factors.g_minus)}, "
            f"kappa = {factors.kappa}, g_plus = {_display_rational(factors.g_plus)}"
        )
        successes += 1
    except EngineError as exc:
        payload["wiener_hopf"] = {"error": str(exc)}
        lines.append(f"Wiener-Hopf: refused ({exc})")
    if g.poles().size == 0:
        try:
            inner, outer = inner_outer(g.num, tol)
            payload["inner_outer"] = {
                "inner": {
                    "zeros": _pairs(inner.zeros),
                    "constant": _pairs([inner.constant])[0],
                },
                "outer": rational_payload(outer),
            }
            lines.append(
                f"inner-outer: inner Blaschke zeros {np.round(inner.zeros, 6).tolist()}, "
                f"outer = {_display_rational(outer)}"
            )
            successes += 1
        except EngineError as exc:
            payload["inner_outer"] = {"error": str(exc)}
            lines.append(f"inner-outer: refused ({exc})")
    else:
        payload["inner_outer"] = {"error": "inner-outer split applies to polynomials"}
        lines.append("inner-outer: skipped (symbol has poles)")
    _emit(payload, "\n".join(lines), args.as_json)
    return EXIT_OK if successes else EXIT_REFUSED


def _cmd_toeplitz(args) -> int:
    tol, _, _ = _settings(args)
    g = parse_rational(args.expr)
    space = toeplitz_kernel(g, tol)
    payload = {"symbol": rational_payload(g), "kernel": kernel_payload(space)}
    _emit(payload, _kernel_text(space), args.as_json)
    return EXIT_OK


def _cmd_paired(args) -> int:
    tol, order, cutoff = _settings(args)
    pair = SymbolPair(parse_rational(args.a), parse_rational(args.b), tol)
    payload = {"a": rational_payload(pair.a), "b": rational_payload(pair.b)}
    if args.numeric:
        nulls = numeric_kernel(paired_matrix(pair, order, tol, row_order=2 * order),
                               cutoff)
        payload["kernel"] = numeric_estimate_payload(nulls.dim, nulls.gap, order)
        _emit(payload,
              f"numeric estimate: dim {nulls.dim} at order {order} "
              f"(spectral gap {nulls.gap:.2e})",
              args.as_json)
        return EXIT_OK
    space = paired_kernel_plus(pair, tol)
    payload["kernel"] = kernel_payload(space)
    _emit(payload, _kernel_text(space), args.as_json)
    return EXIT_OK


def _cmd_atto(args) -> int:
    tol, _, _ = _settings(args)
    sym = _atto_symbol_from_args(args, tol)
    verdict = s_trivial_check(sym, tol)
    space = atto_kernel_closed_form(sym, tol)
    payload = {
        "theta": {"zeros": _pairs(sym.theta.zeros)},
        "alpha": {"zeros": _pairs(sym.alpha.zeros)},
        "s_trivial": verdict.value,
        "s_threshold": s_triviality_threshold(sym, tol),
        "kernel": kernel_payload(space),
    }
    if sym.is_finite_rank:
        payload["finite_rank"] = {
            "circle_poly": _pairs(sym.e_poly.coeffs),
            "d1p": _pairs(sym.d1p.coeffs),
            "d2m": _pairs(sym.d2m.coeffs),
            "q1": _pairs(sym.q1.coeffs),
            "q2": _pairs(sym.q2.coeffs),
        }
    _emit(payload, _kernel_text(space), args.as_json)
    return EXIT_OK


def _cmd_oracle_compare(args) -> int:
    tol, order, cutoff = _settings(args)
    if args.oracle_command == "toeplitz-kernel":
        g = parse_rational(args.expr)
        space = toeplitz_kernel(g, tol)
        cmp = compare_toeplitz(g, order, cutoff)
        subject = {"symbol": rational_payload(g)}
    elif args.oracle_command == "paired-kernel":
        pair = SymbolPair(parse_rational(args.a), parse_rational(args.b), tol)
        space = paired_kernel_plus(pair, tol)
        cmp = compare_paired(pair, order, cutoff)
        subject = {"a": rational_payload(pair.a), "b": rational_payload(pair.b)}
    else:
        sym = _atto_symbol_from_args(args, tol)
        space = atto_kernel_closed_form(sym, tol)
        cmp = compare_atto(sym, order, cutoff)
        subject = {
            "theta": {"zeros": _pairs(sym.theta.zeros)},
            "alpha": {"zeros": _pairs(sym.alpha.zeros)},
        }
    payload = dict(subject)
    payload.update({
        "exact": kernel_payload(space),
        "numeric": numeric_estimate_payload(cmp.numeric_dim, cmp.gap,
                                            cmp.order_used, space.ambient),
        "angle": cmp.angle,
        "order_requested": order,
        "order_used": cmp.order_used,
        "agrees": cmp.agrees,
    })
    text = (
        f"exact dim {cmp.exact_dim}, numeric dim {cmp.numeric_dim}, "
        f"principal angle {cmp.angle:.3e} at order {cmp.order_used} "
        f"({'agree' if cmp.agrees else 'DISAGREE'})"
    )
    _emit(payload, text, args.as_json)
    return EXIT_OK if cmp.agrees else EXIT_REFUSED


def _cmd_verify(args) -> int:
    tol, order, cutoff = _settings(args)
    report = run_suite(args.suite, args.trials, args.seed, order=order, cutoff=cutoff)
    payload = report.to_dict()
    lines = [
        f"suite {report.suite}: {report.passes}/{report.trials} passed "
        f"(seed {report.seed}, worst {report.worst:.3e}, "
        f"{report.elapsed_seconds:.2f}s)"
    ]
    for failure in report.failures:
        lines.append(f"  trial {failure['trial']}: {failure['detail']}")
    _emit(payload, "\n".join(lines), args.as_json)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


_COMMANDS = {
    "factor": _cmd_factor,
    "toeplitz-kernel": _cmd_toeplitz,
    "paired-kernel": _cmd_paired,
    "atto-kernel": _cmd_atto,
    "oracle-compare": _cmd_oracle_compare,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return _COMMANDS[args.command](args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BothSidedCircleZerosError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        print(
            "hint: rerun with `paired-kernel ... --numeric --order 64` for a "
            "numeric dimension estimate",
            file=sys.stderr,
        )
        return EXIT_REFUSED
    except (EngineError, ValueError, ArithmeticError, OSError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
