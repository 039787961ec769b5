"""Command-line front end.

    toeplitz-spectra expand  --preset example5 --out runs/ex5
    toeplitz-spectra recover --table runs/ex5/table.csv --out runs/ex5
    toeplitz-spectra predict --table runs/ex5/table.csv --n 1000 --out runs/ex5

Exit status: 0 on success, 2 for bad input, 3 for numeric failure
(spectrum not real, singular system, QR non-convergence).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

import gmpy2

from .expansion import extract, read_table, write_table
from .linalg import eigenvalues, project_real_sorted
from .precision import DOUBLE_BITS, NumericFailure, PrecisionContext
from .predict import DEFAULT_DEGREE, compare, predict, write_prediction
from .presets import PRESETS, get_preset
from .recovery import recover, write_magnitudes, write_recovered
from .toeplitz import (
    BUILTIN_G,
    build_toeplitz,
    fourier_coefficients_by_quadrature,
    load_symbol,
    perfect_grid,
    theta_grid,
    tridiag_exact_eigenvalues,
)

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3

log = logging.getLogger("toeplitz_spectra")


class InputError(ValueError):
    pass


def _bits(value: str) -> int:
    b = int(value)
    if b != DOUBLE_BITS and not 64 <= b <= 4096:
        raise argparse.ArgumentTypeError("bits must be 53 or in [64, 4096]")
    return b


def _order(value: str) -> str:
    table = {"asc": "ascending", "ascending": "ascending", "desc": "descending", "descending": "descending"}
    if value not in table:
        raise argparse.ArgumentTypeError("order must be asc or desc")
    return table[value]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--preset", choices=sorted(PRESETS), help="named example bundling symbol and parameters")
    common.add_argument("--symbol", type=Path, help="symbol JSON file {min_k, coeffs}")
    common.add_argument("--n0", type=int)
    common.add_argument("--alpha", type=int)
    common.add_argument("--bits", type=_bits)
    common.add_argument("--order", type=_order, default="ascending")
    common.add_argument("--n", type=int, help="target matrix order")
    common.add_argument("--threshold", help="RCTP classification threshold (decimal string)")
    common.add_argument("--interp-degree", type=int, default=DEFAULT_DEGREE)
    common.add_argument("--out", type=Path, default=Path("."))
    common.add_argument("--table", type=Path, help="expansion table CSV (recover, predict)")
    common.add_argument("--g", choices=sorted(BUILTIN_G), help="built-in spectral function (quadrature, exact)")
    common.add_argument("--K", type=int, default=10, help="number of quadrature coefficients")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="toeplitz-spectra", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("expand", "compute the expansion table c_k(theta_{j,n0})"),
        ("recover", "cosine coefficients of g from a table"),
        ("predict", "matrix-less spectrum of T_n from a table"),
        ("exact", "closed-form or high-precision spectrum, plus perfect grid"),
        ("compare", "double precision vs high precision spectrum"),
        ("quadrature", "Fourier coefficients of a built-in g by quadrature"),
    ]:
        sub.add_parser(name, parents=[common], help=helptext)
    return parser


def _resolve(args):
    """Fill unset numeric parameters from the preset."""
    preset = get_preset(args.preset) if args.preset else None
    for attr in ("n0", "alpha", "bits", "n"):
        if getattr(args, attr) is None and preset is not None:
            setattr(args, attr, getattr(preset, attr))
    if args.g is None and preset is not None:
        args.g = preset.g
    return preset


def _symbol(args, preset, ctx):
    if args.symbol is not None:
        if not args.symbol.exists():
            raise InputError(f"symbol file not found: {args.symbol}")
        return load_symbol(args.symbol, ctx)
    if preset is not None:
        return preset.symbol(ctx)
    raise InputError("need --symbol or --preset")


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InputError(f"--{name.replace('_', '-')} is required")


def _write_rows(path: Path, header, rows):
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)
    return path


def cmd_expand(args, preset):
    _require(args, "n0", "alpha", "bits")
    if args.n0 < 4:
        raise InputError("n0 must be at least 4")
    if args.alpha < 0:
        raise InputError("alpha must be non-negative")
    ctx = PrecisionContext(args.bits)
    symbol = _symbol(args, preset, ctx)
    table = extract(symbol, args.n0, args.alpha, ctx, args.order)
    csv_path, meta_path = write_table(table, args.out / "table.csv")
    for k in range(table.alpha + 1):
        peak = max(abs(v) for v in table.C[k])
        print(f"c{k}: max |c~_{k}| = {float(peak):.6e}")
    print(f"wrote {csv_path} and {meta_path}")


def cmd_recover(args, preset):
    path = args.table or args.out / "table.csv"
    if not path.exists():
        raise InputError(f"table not found: {path}")
    table = read_table(path)
    ctx = table.ctx
    rs = recover(table.C[0], ctx, threshold=args.threshold, source=table.metadata())
    write_recovered(rs, args.out / "recovered.json")
    write_magnitudes(rs, args.out / "ghat_abs.csv")
    degree = "not an RCTP" if rs.rctp_degree is None else f"RCTP of degree {rs.rctp_degree}"
    print(f"{degree} (threshold {float(rs.threshold):.1e})")
    for k, v in enumerate(rs.ghat[:10]):
        print(f"ghat~_{k} = {ctx.to_str(v)}")


def cmd_predict(args, preset):
    _require(args, "n")
    path = args.table or args.out / "table.csv"
    if not path.exists():
        raise InputError(f"table not found: {path}")
    table = read_table(path)
    pred = predict(table, args.n, degree=args.interp_degree)
    out = write_prediction(pred, args.out / f"prediction_n{args.n}.csv")
    print(f"wrote {out} (c_0 by {pred.source['row0']})")


def cmd_exact(args, preset):
    _require(args, "n", "bits")
    ctx = PrecisionContext(args.bits)
    symbol = _symbol(args, preset, ctx)
    try:
        spec = tridiag_exact_eigenvalues(symbol, args.n, ctx, args.order)
        how = "closed form"
    except ValueError as exc:
        print(f"no closed form ({exc}); using the {args.bits}-bit eigensolver", file=sys.stderr)
        spec = project_real_sorted(eigenvalues(build_toeplitz(symbol, args.n, ctx), ctx), ctx, args.order)
        how = "eigensolver"
    theta = theta_grid(args.n, ctx)
    header = ["j", "theta", "lambda"]
    grid = None
    if args.g is not None:
        grid = perfect_grid(BUILTIN_G[args.g], spec, _sqrt(ctx.eps, ctx), ctx)
        header += ["xi", "residual"]
    rows = []
    for j in range(args.n):
        row = [j + 1, ctx.to_str(theta[j]), ctx.to_str(spec.values[j])]
        if grid is not None:
            row += [ctx.to_str(grid.xi[j]), ctx.to_str(grid.residuals[j])]
        rows.append(row)
    out = _write_rows(args.out / f"exact_n{args.n}.csv", header, rows)
    print(f"wrote {out} ({how})")


def cmd_compare(args, preset):
    _require(args, "n", "bits")
    ctx = PrecisionContext(args.bits)
    low = PrecisionContext(DOUBLE_BITS)
    symbol = _symbol(args, preset, ctx)
    T = build_toeplitz(symbol, args.n, ctx)
    low_eigs = eigenvalues(T, low)
    low_t = eigenvalues(T.T, low)
    for name, eigs in [("double", low_eigs), ("double_transpose", low_t)]:
        _write_rows(args.out / f"spectrum_{name}.csv", ["re", "im"],
                    [[repr(float(v.real)), repr(float(v.imag))] for v in eigs])
    high = project_real_sorted(eigenvalues(T, ctx), ctx, args.order)
    _write_rows(args.out / f"spectrum_{args.bits}.csv", ["j", "lambda"],
                [[j + 1, ctx.to_str(v)] for j, v in enumerate(high.values)])
    low_sorted = sorted(low_eigs, key=lambda v: v.real, reverse=(args.order == "descending"))
    with ctx.active():
        dev = [abs(complex(a) - complex(b)) for a, b in zip(low_sorted, high.values)]
    report = {
        "n": args.n,
        "high_bits": args.bits,
        "max_imag_double": max(abs(float(v.imag)) for v in low_eigs),
        "max_deviation": max(dev),
        "mean_deviation": sum(dev) / len(dev),
        "double_passes_realness": _passes(low_eigs, low),
    }
    (args.out / "compare_report.json").write_text(json.dumps(report, indent=2) + "\n")
    print(json.dumps(report, indent=2))


def _sqrt(x, ctx):
    with ctx.active():
        return gmpy2.sqrt(x)


def _passes(eigs, ctx):
    try:
        project_real_sorted(eigs, ctx)
        return True
    except NumericFailure:
        return False


def cmd_quadrature(args, preset):
    if args.g is None:
        raise InputError("need --g NAME or a preset with a known g")
    ctx = PrecisionContext(args.bits or DOUBLE_BITS)
    coeffs = fourier_coefficients_by_quadrature(BUILTIN_G[args.g], args.K, ctx)
    out = _write_rows(args.out / f"quadrature_{args.g}.csv", ["k", "ghat"],
                      [[k, ctx.to_str(v)] for k, v in enumerate(coeffs)])
    for k, v in enumerate(coeffs):
        print(f"ghat_{k} = {ctx.to_str(v)}")
    print(f"wrote {out}")


COMMANDS = {
    "expand": cmd_expand,
    "recover": cmd_recover,
    "predict": cmd_predict,
    "exact": cmd_exact,
    "compare": cmd_compare,
    "quadrature": cmd_quadrature,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    logging.basicConfig(level=logging.INFO if args.verbose or args.command == "expand" else logging.WARNING,
                        format="%(message)s", stream=sys.stderr)
    try:
        preset = _resolve(args)
        args.out.mkdir(parents=True, exist_ok=True)
        COMMANDS[args.command](args, preset)
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, OSError, OverflowError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
