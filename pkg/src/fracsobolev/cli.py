"""Command-line interface: ``fracsobolev {gen,ft,apply,map,norm,verify}``.

Exit codes are ``0`` on success, ``1`` on a numerical failure (including a
failing verification suite) and ``2`` on a usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from collections.abc import Sequence

from fracsobolev.errors import FracSobolevError, NumericalError, UsageError
from fracsobolev.grid import (
    DEFAULT_HALF_WIDTH,
    DEFAULT_POINTS,
    FAMILIES,
    GridSpec,
    TestFunctionSpec,
    dft,
    idft,
    l2_norm,
    sample,
)
from fracsobolev.io import (
    atomic_write,
    read_sampled,
    read_spectrum,
    sampled_to_csv,
    sampled_to_json,
    spectrum_to_csv,
    spectrum_to_json,
)
from fracsobolev.orders import OrderDecomposition, Side
from fracsobolev.quadrature import image_tail, rl_derivative, rl_integral
from fracsobolev.sobolev import forward_map, inverse_map, membership_report
from fracsobolev.spectral import spectral_rl_derivative, spectral_rl_integral
from fracsobolev.verify import SUITES, SuiteConfig, report_document, run_all

EXIT_OK = 0
EXIT_NUMERICAL = 1
EXIT_USAGE = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


# {{{ helpers


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path!r}: {exc.strerror}") from None


def _emit_text(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def _emit_sampled(args, u) -> None:
    _emit_text(args.output, sampled_to_json(u) if args.format == "json" else sampled_to_csv(u))


def _grid(args) -> GridSpec:
    return GridSpec(args.grid_l, args.grid_n)


def _tolerance(text: str) -> tuple[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad tolerance value {value!r}") from None


def _side(text: str) -> Side:
    try:
        return Side.parse(text)
    except UsageError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


# }}}


# {{{ subcommands


def cmd_gen(args) -> int:
    params = {
        "center": args.center,
        "amplitude": args.amplitude,
    }
    if args.family in ("gaussian", "hermite_gaussian", "sine_gaussian"):
        params["scale"] = args.scale
    if args.family == "sine_gaussian":
        params["frequency"] = args.frequency
    if args.family == "hermite_gaussian":
        params["degree"] = args.degree
    if args.family == "bump":
        params["radius"] = args.radius
    if args.family == "power_plus":
        params["exponent"] = args.beta
    spec = TestFunctionSpec(args.family, **params)
    _emit_sampled(args, sample(spec, _grid(args)))
    return EXIT_OK


def cmd_ft(args) -> int:
    text = _read_text(args.input)
    if args.inverse:
        _emit_sampled(args, idft(read_spectrum(text)))
        return EXIT_OK
    spec = dft(read_sampled(text))
    _emit_text(args.output, spectrum_to_json(spec) if args.format == "json" else spectrum_to_csv(spec))
    return EXIT_OK


def cmd_apply(args) -> int:
    u = read_sampled(_read_text(args.input))
    if args.periodic_images and args.method != "quadrature":
        raise UsageError("--periodic-images only applies to --method quadrature")
    if args.operator == "deriv":
        if args.method == "spectral":
            out = spectral_rl_derivative(u, args.order, args.side)
        elif args.order == 0:
            out = u
        else:
            out = rl_derivative(u, args.order, args.side)
        signed = args.order
    else:
        if args.method == "spectral":
            out = spectral_rl_integral(u, args.order, args.side)
        elif args.order == 0:
            out = u
        else:
            out = rl_integral(u, args.order, args.side)
        signed = -args.order
    if args.periodic_images:
        out = out + image_tail(u, signed, args.side)
    _emit_sampled(args, out)
    return EXIT_OK


def cmd_map(args) -> int:
    decomp = OrderDecomposition.parse(args.decomp, total=args.total)
    u = read_sampled(_read_text(args.input))
    out = forward_map(u, decomp) if args.direction == "fwd" else inverse_map(u, decomp)
    _emit_sampled(args, out)
    return EXIT_OK


def cmd_norm(args) -> int:
    u = read_sampled(_read_text(args.input))
    orders = args.order or [0.0]
    doc = {
        "grid": {"half_width": u.grid.half_width, "points": u.grid.points},
        "l2": l2_norm(u),
        "orders": [membership_report(u, s).as_dict() for s in orders],
    }
    _emit_text(args.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    config = SuiteConfig(
        grid=_grid(args),
        tolerances=dict(args.tol),
        seed=args.seed,
        window_margin=args.window,
    )
    reports = run_all(config, suites=args.suite or None, max_workers=args.jobs)
    for r in reports:
        n_fail = sum(not c.passed for c in r.cases)
        status = "PASS" if r.passed else f"FAIL ({n_fail}/{len(r.cases)} cases)"
        print(f"{r.name:<22s} {status:<22s} max rel err {r.max_rel_err:.2e}  {r.seconds:.2f}s",
              file=sys.stderr)
    doc = report_document(config, reports)
    _emit_text(args.output, json.dumps(doc, indent=2) + "\n")
    return EXIT_OK if doc["metadata"]["pass"] else EXIT_NUMERICAL


# }}}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="fracsobolev", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def grid_flags(p):
        p.add_argument("--grid-n", type=int, default=DEFAULT_POINTS, help="number of grid points N (even)")
        p.add_argument("--grid-l", type=float, default=DEFAULT_HALF_WIDTH, help="half width L of [-L, L)")

    def io_flags(p, with_input=True):
        if with_input:
            p.add_argument("-i", "--input", default="-", help="input file (default stdin)")
        p.add_argument("-o", "--output", default="-", help="output file (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("gen", help="sample a closed-form test function")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--center", type=float, default=0.0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--frequency", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--degree", type=int, default=1)
    p.add_argument("--beta", type=float, default=1.0, help="power_plus exponent")
    grid_flags(p)
    io_flags(p, with_input=False)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("ft", help="discrete Fourier transform (x,value <-> xi,re,im)")
    p.add_argument("--inverse", action="store_true")
    io_flags(p)
    p.set_defaults(func=cmd_ft)

    p = sub.add_parser("apply", help="apply a fractional derivative or integral")
    p.add_argument("operator", choices=("deriv", "integ"))
    p.add_argument("--order", type=float, required=True)
    p.add_argument("--side", type=_side, default=Side.LEFT, help="L or R")
    p.add_argument("--method", choices=("spectral", "quadrature"), default="spectral")
    p.add_argument("--periodic-images", action="store_true",
                   help="add the far field of the periodic copies (quadrature only)")
    io_flags(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("map", help="resolvent map for an order decomposition")
    p.add_argument("direction", choices=("fwd", "inv"))
    p.add_argument("--decomp", required=True, help='e.g. "0.5:L,1:R" (empty for identity)')
    p.add_argument("--total", type=float, default=None, help="total order (default: sum of factors)")
    io_flags(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("norm", help="Sobolev norms and membership diagnostics as JSON")
    p.add_argument("--order", type=float, action="append", help="order s (repeatable; default 0)")
    p.add_argument("-i", "--input", default="-")
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("verify", help="run the verification suites")
    grid_flags(p)
    p.add_argument("--tol", type=_tolerance, action="append", default=[], metavar="SUITE=TOL",
                   help="override the tolerance of every case in a suite (repeatable)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--window", type=float, default=None, help="window margin (default L/4)")
    p.add_argument("--suite", action="append", choices=tuple(SUITES), help="run only these suites")
    p.add_argument("--jobs", type=int, default=None, help="run suites in this many threads")
    p.add_argument("-o", "--output", default="-", help="JSON report file (default stdout)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"fracsobolev: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            return args.func(args)
    except UsageError as exc:
        print(f"fracsobolev: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, ArithmeticError) as exc:
        print(f"fracsobolev: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except FracSobolevError as exc:
        print(f"fracsobolev: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
