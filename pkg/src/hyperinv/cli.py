"""Command-line entry point ``hyperinv``.

Exit codes: 0 success, 1 verification failure, 2 domain error, 3 I/O error.
Output is JSON unless ``--pretty`` asks for a plain-text table.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings

import numpy as np

from . import exact_poly, genfun, inversion, operators, verify
from .io import (cx_to_json, matrix_to_csv, matrix_to_json, parse_complex,
                 read_json, seq_from_json, seq_to_json, write_json)
from .special_fn import DomainError

EXIT_OK, EXIT_VERIFY, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3
# L maps a polynomial to an entire function, so series results of L are
# carried to at least this order
SERIES_ORDER = 24


class _IOFailure(Exception):
    pass


def _load(path):
    try:
        return read_json(path)
    except (OSError, json.JSONDecodeError) as exc:
        raise _IOFailure(f"cannot read {path}: {exc}") from exc


def _load_series(path):
    data = _load(path)
    try:
        return operators.H0Series.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise _IOFailure(f"{path}: not an H0 series ({exc})") from exc


def _load_seq(path):
    data = _load(path)
    try:
        return seq_from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise _IOFailure(f"{path}: not a sequence ({exc})") from exc


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise _IOFailure(f"cannot write {path}: {exc}") from exc


def _emit(args, obj, rows=None, header=None):
    if args.pretty and rows is not None:
        widths = [max(len(str(r[i])) for r in [header] + rows)
                  for i in range(len(header))]
        lines = ["  ".join(str(c).ljust(w) for c, w in zip(r, widths))
                 for r in [header] + rows]
        _write_text(args.out, "\n".join(lines) + "\n")
        return
    try:
        write_json(args.out, obj, pretty=args.pretty)
    except OSError as exc:
        raise _IOFailure(f"cannot write {args.out}: {exc}") from exc


def _fmt(z):
    z = complex(z)
    return f"{z.real:.15g}{z.imag:+.15g}j"


# -- commands ----------------------------------------------------------------

def cmd_matrices(args):
    if args.exact:
        out = {"A": exact_poly.build_a_exact(args.n).to_json(),
               "B": exact_poly.build_b_exact(args.n).to_json()}
        _write_text(args.out, json.dumps(out, indent=2 if args.pretty else None) + "\n")
        return EXIT_OK
    p = inversion.MatrixParams(args.x, args.nu, args.n)
    mats = {"A": inversion.build_a(p, args.dps).values,
            "B": inversion.build_b(p, args.dps).values}
    if args.q:
        mats["Q"] = inversion.t0_matrix(args.x, args.nu, args.n).values
    if args.format == "csv":
        text = "".join(f"# {name}\n" + matrix_to_csv(m) for name, m in mats.items())
        _write_text(args.out, text)
    else:
        _emit(args, {name: matrix_to_json(m) for name, m in mats.items()})
    return EXIT_OK


def cmd_verify(args):
    names = list(verify.SUITES) if args.suite == "all" else [args.suite]
    reports = [verify.run_suite(s, n=args.n, seed=args.seed) for s in names]
    rows = [[r["suite"], r["cases"], f"{r['max_residual']:.3e}",
             "PASS" if r["pass"] else "FAIL"] for r in reports]
    _emit(args, reports[0] if len(reports) == 1 else reports, rows,
          ["suite", "cases", "max_residual", "result"])
    return EXIT_OK if all(r["pass"] for r in reports) else EXIT_VERIFY


def cmd_solve(args):
    k = _load_seq(args.k)
    e = inversion.solve_e0(k, args.x, args.nu)
    direct = inversion.solve_tri(inversion.t0_matrix(args.x, args.nu, k.size), k)
    scale = max(float(np.abs(direct).max()), 1e-300)
    residual = float(np.abs(e - direct).max()) / scale if k.any() else 0.0
    _emit(args, {"x": cx_to_json(args.x), "nu": cx_to_json(args.nu),
                 "E": seq_to_json(e), "residual": residual})
    return EXIT_OK


def cmd_apply(args):
    f = _load_series(args.f)
    p = operators.OperatorParams(args.x, args.nu, extended=args.op == "Linv")
    if args.op == "L":
        fn = lambda z: operators.apply_l_quad(f, z, p)
    elif args.op == "M":
        fn = lambda z: operators.apply_m_quad(f, z, p)
    else:
        fn = lambda z: operators.linv_contour(f, z, p)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        if args.as_series:
            if args.op == "L" and args.method == "series":
                series = operators.apply_l_series(f.padded(args.as_series), p)
            else:
                series = operators.taylor_refit(fn, args.as_series,
                                                radius=args.radius)
            out = series.to_json()
            rows = None
        else:
            zs = [parse_complex(z) for z in args.z]
            if args.op == "L" and args.method == "series":
                series = operators.apply_l_series(f.padded(SERIES_ORDER), p)
                fn = series.eval
            vals = [complex(fn(z)) for z in zs]
            out = {"op": args.op, "values": [{"z": cx_to_json(z), "value": cx_to_json(v)}
                                             for z, v in zip(zs, vals)]}
            rows = [[_fmt(z), _fmt(v)] for z, v in zip(zs, vals)]
    notes = sorted({f"{w.category.__name__}: {w.message}" for w in caught})
    for msg in notes:
        print(msg, file=sys.stderr)
    if notes:
        out["warnings"] = notes
    _emit(args, out, rows, ["z", "value"])
    return EXIT_OK


def cmd_genfun(args):
    nu = args.nu
    out = {"nu": cx_to_json(nu), "radius": genfun.radius_r(nu), "w": [], "z": []}
    rows = []
    for w in map(parse_complex, args.w):
        th = genfun.theta(w, nu)
        sc = genfun.sigma_closed(w, nu)
        ss, tail = genfun.sigma_series(w, nu, full_output=True)
        ode = genfun.ode_residual(w, nu) if w != 0 else 0.0
        out["w"].append({"w": cx_to_json(w), "theta": cx_to_json(th),
                         "sigma_closed": cx_to_json(sc), "sigma_series": cx_to_json(ss),
                         "tail_estimate": tail, "ode_residual": ode})
        rows.append(["w=" + _fmt(w), "Sigma=" + _fmt(sc), f"ode={ode:.2e}"])
    if args.z:
        if args.x is None:
            raise DomainError("--z needs --x")
        p = genfun.GfParams(args.x, nu)
        for z in map(parse_complex, args.z):
            xv = genfun.xi(z, p)
            back = genfun.omega(xv, p)
            out["z"].append({"z": cx_to_json(z), "xi": cx_to_json(xv),
                             "omega_of_xi": cx_to_json(back)})
            rows.append(["z=" + _fmt(z), "Xi=" + _fmt(xv), "Omega(Xi)=" + _fmt(back)])
    _emit(args, out, rows, ["point", "value", "check"])
    return EXIT_OK


def cmd_volterra(args):
    e_star = _load_series(args.f).padded(args.order)
    p = operators.OperatorParams(args.x, args.nu)
    k1 = operators.k1_from_k(operators.apply_l_series(e_star, p), p)
    out = {"values": [], "kernel_exponent": operators.kernel_singularity_exponent(p)}
    rows = []
    for z in map(parse_complex, args.z):
        lhs = operators.volterra_lhs(e_star, z, p)
        rhs = z / p.x * k1(z)
        rel = abs(lhs - rhs) / max(abs(rhs), 1e-300)
        out["values"].append({"z": cx_to_json(z), "lhs": cx_to_json(lhs),
                              "rhs": cx_to_json(rhs), "rel_err": rel})
        rows.append([_fmt(z), _fmt(lhs), _fmt(rhs), f"{rel:.2e}"])
    _emit(args, out, rows, ["z", "lhs", "(z/x) K1(z)", "rel_err"])
    return EXIT_OK


# -- parser ------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true",
                        help="indented JSON, or a plain table where one applies")
    common.add_argument("--out", default="-", help="output path ('-' for stdout)")

    xnu = argparse.ArgumentParser(add_help=False)
    xnu.add_argument("--x", type=parse_complex, default=0.5)
    xnu.add_argument("--nu", type=parse_complex, default=-2.0)

    ap = argparse.ArgumentParser(prog="hyperinv",
                                 description="Hypergeometric inversion pair and "
                                             "integro-differential operator toolkit.")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("matrices", parents=[common, xnu], help="export A, B (and Q)")
    s.add_argument("--n", type=int, default=5)
    s.add_argument("--exact", action="store_true", help="exact polynomial entries")
    s.add_argument("--q", action="store_true", help="also write the reduced-system matrix")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--dps", type=int, default=None, help="build with mpmath at this precision")
    s.set_defaults(func=cmd_matrices)

    s = sub.add_parser("verify", parents=[common], help="run verification suites")
    s.add_argument("--suite", choices=("all", *verify.SUITES), default="all")
    s.add_argument("--n", type=int, default=None, help="order or sample count")
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", parents=[common, xnu], help="solve the reduced system for E")
    s.add_argument("--k", required=True, help="JSON sequence K_1..K_n")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("apply", parents=[common, xnu], help="evaluate L, M or L^-1")
    s.add_argument("--op", choices=("L", "M", "Linv"), required=True)
    s.add_argument("--f", required=True, help="H0 series JSON")
    s.add_argument("--z", nargs="+", default=["1"])
    s.add_argument("--method", choices=("quad", "series"), default="quad",
                   help="evaluation route for L")
    s.add_argument("--as-series", type=int, default=0, metavar="ORDER",
                   help="return the result as an H0 series of this order "
                        "(the input is zero-padded to it)")
    s.add_argument("--radius", type=float, default=1.0,
                   help="sampling radius for --as-series refits")
    s.set_defaults(func=cmd_apply)

    s = sub.add_parser("genfun", parents=[common], help="Theta, Sigma, Xi and Omega")
    s.add_argument("--nu", type=parse_complex, default=-1.0)
    s.add_argument("--x", type=parse_complex, default=None)
    s.add_argument("--w", nargs="*", default=[])
    s.add_argument("--z", nargs="*", default=[])
    s.set_defaults(func=cmd_genfun)

    s = sub.add_parser("volterra", parents=[common, xnu], help="Volterra consistency check")
    s.add_argument("--f", required=True, help="H0 series JSON for the unknown")
    s.add_argument("--z", nargs="+", default=["0.5"])
    s.add_argument("--order", type=int, default=SERIES_ORDER,
                   help="series order used for L of the unknown")
    s.set_defaults(func=cmd_volterra)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 1:
        print("error: --n must be >= 1", file=sys.stderr)
        return EXIT_DOMAIN
    try:
        return args.func(args)
    except _IOFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
