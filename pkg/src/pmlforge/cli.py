"""``pmlforge`` command line: design, sweep, convert, validate.

Exit codes: 0 ok, 1 validation failure, 2 bad flags, 3 solver failure,
4 unreadable design file, 5 conversion breakdown.
"""

from __future__ import annotations

import argparse
import csv
import json
import shutil
import sys

import numpy as np

from . import design_file as dfile
from .balance_optimizer import design_balanced, fixed_split_report
from .composite_layer import SpectralWindow, build_composite
from .errors import BreakdownError, PMLForgeError
from .grid_synthesis import FDGrid, FEMesh, fd_response, fd_to_fe, fe_to_fd, grid_to_rational, rational_to_grid
from .poly_rational import OddEvenRational, Polynomial
from .validation import probe_points, validate_design
from .wave_maps import discrete_tanh_half, halfspace_error_sweep
from .zolotarev import MAX_K

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SOLVER, EXIT_DESIGN_FILE, EXIT_CONVERT = range(6)
CSV_HEADER = ["lambda_re", "lambda_im", "s_re", "s_im", "refl_abs", "ntd_rel_err", "flag_pole"]

DESIGN_EPILOG = """example:
  pmlforge design --lambda1 -0.01 --lambda2 0.01 --lambda3 1 --k 8 --out d.json
  pmlforge sweep --design d.json --out sweep.csv
  pmlforge validate --design d.json
"""


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _check_window(args):
    if not args.lambda1 < 0:
        raise CliError("lambda1 must be negative", EXIT_USAGE)
    if not args.lambda1 > -1:
        raise CliError("lambda1 must be greater than -1", EXIT_USAGE)
    if not args.lambda2 > 0:
        raise CliError("lambda2 must be positive", EXIT_USAGE)
    if not args.lambda3 >= args.lambda2:
        raise CliError("lambda3 must be at least lambda2", EXIT_USAGE)
    if not 2 <= args.k <= MAX_K:
        raise CliError(f"k must lie in [2, {MAX_K}]", EXIT_USAGE)
    if args.split_l is not None and not 1 <= args.split_l <= args.k - 1:
        raise CliError("split-l must lie in [1, k - 1]", EXIT_USAGE)
    if args.tail_power == 1:
        if args.split_l is not None and (args.k - args.split_l) % 2:
            raise CliError("tail-power 1 needs k - split-l even", EXIT_USAGE)


def _achieved_table(design):
    a = design.achieved
    rows = [
        ("evanescent", a.max_reflection_evanescent, a.max_ntd_rel_error_evanescent),
        ("propagative", a.max_reflection_propagative, a.max_ntd_rel_error_propagative),
    ]
    lines = [f"{'interval':<12}  {'max |refl|':>14}  {'max NtD rel err':>16}"]
    lines += [f"{n:<12}  {r:14.6e}  {e:16.6e}" for n, r, e in rows]
    return "\n".join(lines)


def cmd_design(args):
    _check_window(args)
    window = SpectralWindow(args.lambda1, args.lambda2, args.lambda3)
    stage = "balance scan" if args.split_l is None else "product construction"
    try:
        if args.split_l is None:
            design, report = design_balanced(window, args.k, args.tail_power)
        else:
            design = build_composite(window, args.k, args.split_l, args.tail_power)
            report = fixed_split_report(design)
    except BreakdownError as exc:
        raise CliError(f"solver failure during grid synthesis: {exc}", EXIT_SOLVER) from exc
    except (PMLForgeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        raise CliError(f"solver failure during {stage}: {exc}", EXIT_SOLVER) from exc
    if args.split_l is None:
        print(report.table())
        print()
    print(f"k_total={design.k_total}  split_l={design.split_l}  balanced={str(report.balanced).lower()}")
    print(_achieved_table(design))
    dfile.save(dfile.DesignFile.from_design(design, report), args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def _load_design(path):
    try:
        return dfile.load(path).to_design()
    except (dfile.DesignFileError, PMLForgeError, KeyError, TypeError) as exc:
        raise CliError(f"invalid design file: {exc}", EXIT_DESIGN_FILE) from exc


def cmd_sweep(args):
    if args.samples < 2:
        raise CliError("samples must be at least 2", EXIT_USAGE)
    design = _load_design(args.design)
    result = halfspace_error_sweep(design.h, design.window, args.samples)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for x in result.samples:
            s = x.s
            writer.writerow([
                repr(x.lam.real), repr(x.lam.imag), repr(s.real), repr(s.imag),
                repr(x.reflection_modulus), repr(x.rel_error), int(x.pole),
            ])
    for name in ("evanescent", "propagative"):
        m = result.maxima[name]
        print(f"{name:<12}  max |refl| {m['reflection']:.12e}  max NtD rel err {m['rel_error']:.12e}")
    print(f"wrote {len(result.samples)} rows to {args.out}")
    return EXIT_OK


# Conversion files: {"kind": "fe", "lengths": [...]}, {"kind": "fd", "hhat": [...],
# "h": [...], "terminal_unbounded": bool}, {"kind": "rational", "p_tilde": [...],
# "q_tilde": [...]} (ascending coefficients).  A design file is accepted as fe
# (its segment) or fd (its tail).

def _read_repr(path, kind):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_DESIGN_FILE) from exc
    try:
        if "schema_version" in data:
            d = dfile.DesignFile.from_dict(data)
            data = {"fe": {"lengths": d.fe_lengths},
                    "fd": {"hhat": d.fd_hhat, "h": d.fd_h, "terminal_unbounded": d.fd_terminal_unbounded},
                    }.get(kind)
            if data is None:
                raise dfile.DesignFileError("a design file holds no rational representation")
        elif data.get("kind") != kind:
            raise dfile.DesignFileError(f"file kind {data.get('kind')!r} does not match --from {kind}")
        if kind == "fe":
            return FEMesh(dfile.unpairs(data["lengths"], "lengths"))
        if kind == "fd":
            return FDGrid(dfile.unpairs(data["hhat"], "hhat"), dfile.unpairs(data["h"], "h"),
                          bool(data.get("terminal_unbounded", False)))
        return OddEvenRational(Polynomial(dfile.unpairs(data["p_tilde"], "p_tilde")),
                               Polynomial(dfile.unpairs(data["q_tilde"], "q_tilde")))
    except (dfile.DesignFileError, KeyError, ValueError, TypeError, AttributeError) as exc:
        raise CliError(f"invalid {kind} file: {exc}", EXIT_DESIGN_FILE) from exc


def _to_dict(obj):
    if isinstance(obj, FEMesh):
        return {"kind": "fe", "lengths": dfile.pairs(obj.lengths)}
    if isinstance(obj, FDGrid):
        return {"kind": "fd", "hhat": dfile.pairs(obj.hhat), "h": dfile.pairs(obj.h),
                "terminal_unbounded": bool(obj.terminal_unbounded)}
    return {"kind": "rational", "p_tilde": dfile.pairs(obj.p_tilde.coeffs),
            "q_tilde": dfile.pairs(obj.q_tilde.coeffs)}


def _response(obj, s):
    """Common currency of all three forms: the discrete ``tanh(s/2)``."""
    if isinstance(obj, FEMesh):
        return np.array([discrete_tanh_half(obj, x) for x in s])
    if isinstance(obj, FDGrid):
        return fd_response(obj, s)
    return obj(s)


def _convert(obj, target):
    if target == "fe":
        if isinstance(obj, OddEvenRational):
            obj = rational_to_grid(obj)
        return fd_to_fe(obj)
    if target == "fd":
        if isinstance(obj, FEMesh):
            return fe_to_fd(obj)
        return rational_to_grid(obj)
    if isinstance(obj, FEMesh):
        obj = fe_to_fd(obj)
    return grid_to_rational(obj)


def cmd_convert(args):
    if args.src == args.dst:
        obj = _read_repr(args.input, args.src)
        shutil.copyfile(args.input, args.out)
        print("identity conversion: residual 0")
        return EXIT_OK
    obj = _read_repr(args.input, args.src)
    try:
        out = _convert(obj, args.dst)
    except BreakdownError as exc:
        raise CliError(f"conversion breakdown: {exc}", EXIT_CONVERT) from exc
    except (PMLForgeError, ValueError) as exc:
        raise CliError(str(exc), EXIT_CONVERT) from exc
    s = probe_points()
    a, b = _response(obj, s), _response(out, s)
    residual = float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-300)))
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_to_dict(out), fh, indent=2)
        fh.write("\n")
    print(f"{args.src} -> {args.dst}: residual {residual:.3e}")
    return EXIT_OK


def cmd_validate(args):
    design = _load_design(args.design)
    results = validate_design(design)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<18} {r.detail}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def build_parser():
    parser = argparse.ArgumentParser(prog="pmlforge", description="Optimal discrete absorbing layers.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="design a composite layer for a spectral window",
                       epilog=DESIGN_EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--lambda1", type=float, default=-0.01, help="propagative window is [-1, lambda1] (default -0.01)")
    p.add_argument("--lambda2", type=float, default=0.01, help="evanescent window lower end (default 0.01)")
    p.add_argument("--lambda3", type=float, default=1.0, help="evanescent window upper end (default 1)")
    p.add_argument("--k", type=int, default=8, help="total degree budget (default 8)")
    p.add_argument("--split-l", type=int, default=None, help="fix the evanescent degree instead of balancing")
    p.add_argument("--tail-power", type=int, choices=(1, 2), default=2, help="h2 = t_p**tail_power (default 2)")
    p.add_argument("--out", required=True, help="output JSON design file")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("sweep", help="write the half-space NtD error sweep of a design as CSV")
    p.add_argument("--design", required=True)
    p.add_argument("--samples", type=int, default=2001, help="Chebyshev points per interval (default 2001)")
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("convert", help="convert between FE mesh, FD grid and odd-even rational")
    p.add_argument("--from", dest="src", choices=("fe", "fd", "rational"), required=True)
    p.add_argument("--to", dest="dst", choices=("fe", "fd", "rational"), required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("validate", help="run the invariant checks against a design file")
    p.add_argument("--design", required=True)
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"pmlforge {args.command}: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
