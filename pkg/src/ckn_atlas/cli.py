"""Command line entry point: ``ckn-atlas <subcommand> ...``.

Exit status: 0 on success, 1 for invalid parameters, 2 when a numerical
method did not converge (or, for ``verify``, when a check failed).
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys

from . import __version__, constants, gn, spectrum
from .errors import CKNError, ConvergenceError, DomainError

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2


def _emit(values: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(values, indent=2, sort_keys=False, default=str))
        return
    width = max(len(k) for k in values)
    for key, val in values.items():
        if isinstance(val, float):
            val = f"{val:.12g}"
        print(f"{key:<{width}}  {val}")


def cmd_constants(args) -> int:
    d, p = args.d, args.p
    theta = constants.vartheta(p, d) if args.theta is None else args.theta
    constants.check_ckn(d, p, theta)
    ex = constants.exponents(d, p)
    out = {"d": d, "p": p, "theta": theta, "vartheta": ex.vartheta, "a_c": ex.a_c, "2*": ex.two_star}
    if args.a is not None:
        out["a"] = args.a
        out["Lambda"] = constants.lambda_of(args.a, d)
        out["C*_CKN"] = constants.ckn_star(d, p, theta, args.a)
    else:
        out["C*_CKN(Lambda=1)"] = constants.ckn_star_lambda(d, p, theta, 1.0)
    if d >= 2:
        out.update(constants.symmetry_breaking_thresholds(d, p, theta, args.gamma).as_dict())
        out["C*_CKN limit (p->2, theta=d(p-2)/(2p))"] = constants.ckn_star_limit(d)
    if args.gamma is not None:
        constants.check_wlh(d, args.gamma)
        out["gamma"] = args.gamma
        if args.a is not None:
            out["C*_WLH"] = constants.wlh_star(d, args.gamma, args.a)
        else:
            out["C*_WLH(Lambda=1)"] = constants.wlh_star_lambda(d, args.gamma, 1.0)
    out["C_LS"] = constants.c_ls(d)
    if d >= 3:
        out["S_d"] = constants.sobolev_constant(d)
        out.update(constants.existence_thresholds(d, p).as_dict())
        out["Lambda_1(p->2)"] = constants.lambda_1_limit(d)
    _emit(out, args.json)
    return EXIT_OK


def cmd_gn(args) -> int:
    res = gn.cgn_details(args.d, args.p, tol=args.tol)
    out = {"d": res.d, "p": res.p, "C_GN": res.cgn, "Q": res.q, "R1": res.residuals["R1"], "R2": res.residuals["R2"]}
    if res.cross_check is not None:
        out["C_GN via g(p)"] = res.cross_check
        out["cross-check rel. diff"] = res.cross_check_rel
    _emit(out, args.json)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    d, p, k = args.d, args.p, args.mode
    constants.check_ckn(d, p, 1.0)
    out = {"d": d, "p": p, "mode": k}
    if args.scan:
        out["Lambda*"] = spectrum.stability_threshold(d, p, k=k, n=args.n)
        if k == 1:
            out["Lambda* closed form"] = spectrum.closed_form_threshold(d, p)
    else:
        lam = spectrum.closed_form_threshold(d, p) if args.Lambda is None else args.Lambda
        if lam <= 0:
            raise DomainError(f"Lambda must be positive, got {lam}")
        ev = spectrum.mode_eigenvalues(spectrum.mode_operator(d, p, lam, k), count=args.count, n=args.n)
        out["Lambda"] = lam
        for i, (v, e) in enumerate(zip(ev.values, ev.error)):
            out[f"eigenvalue[{i}]"] = float(v)
            out[f"error[{i}]"] = float(e)
    _emit(out, args.json)
    return EXIT_OK


def cmd_curves(args) -> int:
    from .atlas import curve_scan, emit_csv, emit_svg, load_config

    cfg = load_config(args.config, d=args.d, p_min=args.p_min, p_max=args.p_max, steps=args.steps,
                      out=args.out, svg=args.svg, workers=args.workers)
    if cfg.out is None:
        raise DomainError("an output path is required (--out or 'out' in the config file)")
    table = curve_scan(cfg)
    emit_csv(table, cfg.out)
    if cfg.svg is not None:
        emit_svg(table, cfg.svg)
    missing = sum(int(sum(1 for v in col if not math.isfinite(v))) for col in table.columns.values())
    print(f"wrote {cfg.out} ({len(table)} rows, {missing} absent entries)"
          + (f" and {cfg.svg}" if cfg.svg is not None else ""))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .atlas import verify_all

    report = verify_all(args.d, fast=args.fast)
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        for chk in report.checks:
            print(chk.line())
        print("overall:", "PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_NUMERICAL


class _Parser(argparse.ArgumentParser):
    # usage errors are invalid parameters, not argparse's default status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ckn-atlas", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log numerical warnings")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("constants", help="closed-form constants and thresholds")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--theta", type=float, help="defaults to the critical value d(p-2)/(2p)")
    p.add_argument("--gamma", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("gn", help="optimal Gagliardo-Nirenberg constant by shooting")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gn)

    p = sub.add_parser("spectrum", help="mode eigenvalues or the stability threshold")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--mode", type=int, default=1)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="Lambda", type=float)
    g.add_argument("--scan", action="store_true", help="locate the zero crossing in Lambda")
    p.add_argument("--count", type=int, default=2, help="number of eigenvalues to print")
    p.add_argument("--n", type=int, default=spectrum.DEFAULT_N, help="grid points")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("curves", help="phase-diagram curves to CSV (and SVG)")
    p.add_argument("--d", type=int)
    p.add_argument("--p-min", type=float)
    p.add_argument("--p-max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--out")
    p.add_argument("--svg")
    p.add_argument("--config")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("verify", help="run the verification checks")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--fast", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConvergenceError as exc:
        print(f"error: numerical method did not converge: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (CKNError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
