"""Command line front end.

Exit codes: 0 success / all identities pass, 1 verification failure,
2 usage error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import cache as cache_mod
from .characteristics import Characteristic, parse_characteristic
from .curves import (
    HyperellipticCurve,
    curve_hash,
    curve_to_json_dict,
    generate_branch_points,
    new_curve,
    read_curve_file,
    write_curve_file,
)
from .errors import (
    GenericPositionError,
    InvalidToleranceError,
    NumericFailureError,
    PathError,
    QuadratureError,
    ThetaforgeError,
)
from .theta import PeriodMatrix, theta
from .verifier import (
    DEFAULT_THRESHOLDS,
    SuiteConfig,
    run_suite,
    sample_points,
    theta_scale,
    verify_cor_products,
    verify_jacobi,
    verify_normed,
    verify_rosenhain,
    verify_thm1,
    verify_thm2,
    verify_with_resampling,
)

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3

_EPS_MIN, _EPS_MAX = 1e-13, 1e-3


class _UsageError(ValueError):
    pass


def _parse_complex(s: str) -> complex:
    s = s.strip().replace(" ", "").replace("i", "j")
    if s.endswith("j") or "j" in s:
        return complex(s)
    return complex(float(s))


def _parse_tau(s: str) -> PeriodMatrix:
    rows = [r for r in s.split(";") if r.strip()]
    mat = [[_parse_complex(v) for v in row.split(",") if v.strip()] for row in rows]
    return PeriodMatrix(np.array(mat, dtype=complex))


def _parse_sigma(s: str) -> tuple:
    return tuple(int(v) for v in s.split(",") if v.strip())


def _parse_z(s: str) -> np.ndarray:
    return np.array([_parse_complex(v) for v in s.split(",") if v.strip()])


def _check_eps(eps: float) -> float:
    if not _EPS_MIN <= eps <= _EPS_MAX:
        raise _UsageError(f"--eps must lie in [{_EPS_MIN:g}, {_EPS_MAX:g}]")
    return eps


def _check_genus(g: int) -> int:
    if not 1 <= g <= 4:
        raise _UsageError(f"--genus must lie in [1, 4], got {g}")
    return g


def _load_curve(args) -> HyperellipticCurve:
    if getattr(args, "curve", None):
        return read_curve_file(args.curve)
    genus = _check_genus(getattr(args, "genus", 2))
    rng = np.random.default_rng(args.seed)
    return new_curve(generate_branch_points(rng, genus))


def _periods_for(args, curve):
    use_cache = not getattr(args, "no_cache", False)
    cache_dir = getattr(args, "cache_dir", None)
    return cache_mod.load_or_compute(
        curve, min(1e-12, args.eps), cache_dir=cache_dir, use_cache=use_cache
    )


def _emit_json(args, payload: dict) -> None:
    if getattr(args, "json", None):
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        if args.json == "-":
            sys.stdout.write(text + "\n")
        else:
            with open(args.json, "w", encoding="ascii") as fh:
                fh.write(text)


def _print_report(rep) -> None:
    sign = "" if rep.sign is None else f"  sign={rep.sign:+d}"
    print(
        f"{rep.identity_id:<14} residual={rep.rel_residual:.3e}{sign}  "
        f"lhs={rep.lhs:.6e}  rhs={rep.rhs:.6e}"
    )


def _report_exit(rep, threshold: float | None = None) -> int:
    limit = threshold if threshold is not None else DEFAULT_THRESHOLDS.get(
        rep.identity_id, 1e-6
    )
    ok = rep.rel_residual <= limit
    print(f"{'PASS' if ok else 'FAIL'} (threshold {limit:.1e})")
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def _cmd_curve(args) -> int:
    if args.curve_cmd == "gen":
        genus = _check_genus(args.genus)
        rng = np.random.default_rng(args.seed)
        curve = new_curve(generate_branch_points(rng, genus))
        if args.out:
            write_curve_file(curve, args.out)
            print(f"wrote genus {genus} curve to {args.out}")
        else:
            print(json.dumps(curve_to_json_dict(curve)))
        return EXIT_OK
    curve = read_curve_file(args.curve)
    print(f"genus:  {curve.g}")
    print(f"hash:   {curve_hash(curve)}")
    print("branch points: " + ", ".join(f"{p:.17g}" for p in curve.branch_points))
    return EXIT_OK


def _cmd_periods(args) -> int:
    _check_eps(args.eps)
    curve = _load_curve(args)
    pd = _periods_for(args, curve)
    tau = pd.tau.tau
    print(f"tau (genus {curve.g}):")
    for row in tau:
        print("  " + "  ".join(f"{v.real:+.12e}{v.imag:+.12e}j" for v in row))
    payload = {
        "curve_hash": curve_hash(curve),
        "tau_re": [format(v, ".17e") for v in tau.real.ravel()],
        "tau_im": [format(v, ".17e") for v in tau.imag.ravel()],
    }
    _emit_json(args, payload)
    return EXIT_OK


def _cmd_theta(args) -> int:
    _check_eps(args.eps)
    if args.tau:
        pm = _parse_tau(args.tau)
    else:
        curve = _load_curve(args)
        pm = _periods_for(args, curve).tau
    alpha = (parse_characteristic(args.char) if args.char
             else Characteristic.zero(pm.g))
    z = _parse_z(args.z) if args.z else np.zeros(pm.g, dtype=complex)
    val = theta(pm, alpha, z, args.eps)
    print(f"theta[{alpha.text()}](z) = {val.value:.17e}  (err <= {val.error_bound:.3e})")
    _emit_json(args, {"theta": val.to_json_dict()})
    return EXIT_OK


def _cmd_verify(args) -> int:
    _check_eps(args.eps)
    which = args.identity
    if which == "jacobi":
        if not args.tau:
            raise _UsageError("verify jacobi requires --tau")
        rep = verify_jacobi(_parse_tau(args.tau), args.eps)
        _print_report(rep)
        _emit_json(args, rep.to_json_dict())
        return _report_exit(rep)

    curve = _load_curve(args)
    pd = _periods_for(args, curve)

    if which in ("thm2", "rosenhain"):
        sigma = (_parse_sigma(args.sigma) if args.sigma
                 else tuple(range(1, 2 * curve.g + 3)))
        if which == "rosenhain":
            rep = verify_rosenhain(curve, pd, sigma, args.eps)
        else:
            rep = verify_thm2(pd, sigma, args.eps, curve=curve)
        _print_report(rep)
        _emit_json(args, rep.to_json_dict())
        return _report_exit(rep)

    rng = np.random.default_rng(args.seed)
    scale = theta_scale(pd.tau, args.eps)
    if which == "thm1":
        fn = lambda points, q: verify_thm1(  # noqa: E731
            curve, pd, args.variant, points, q, args.eps, scale=scale)
    elif which == "cor":
        fn = lambda points, q: verify_cor_products(  # noqa: E731
            curve, pd, points, q, args.eps, scale=scale)
    elif which == "normed":
        fn = lambda points, q: verify_normed(  # noqa: E731
            curve, pd, args.variant, points, q, args.eps, scale=scale)
    else:
        raise _UsageError(f"unknown identity {which!r}")
    rep = verify_with_resampling(fn, curve, rng)
    _print_report(rep)
    _emit_json(args, rep.to_json_dict())
    return _report_exit(rep)


def _cmd_suite(args) -> int:
    _check_eps(args.eps)
    for g in (args.genus_min, args.genus_max):
        _check_genus(g)
    config = SuiteConfig(
        genus_min=args.genus_min,
        genus_max=args.genus_max,
        curves_per_genus=args.curves,
        trials_per_curve=args.trials,
        seed=args.seed,
        eps=args.eps,
    )
    result = run_suite(config)
    print(f"suite: genus {config.genus_min}..{config.genus_max}, "
          f"{config.curves_per_genus} curves x {config.trials_per_curve} trials, "
          f"seed {config.seed}")
    for key, val in result["max_residuals"].items():
        print(f"  max residual {key:<14} {float(val):.3e}")
    for key, val in result["sign_table"].items():
        print(f"  sign {key}: {val:+d}")
    if result["failures"]:
        print(f"  failures: {len(result['failures'])}")
    print("PASS" if result["pass"] else "FAIL")
    _emit_json(args, result)
    return EXIT_OK if result["pass"] else EXIT_VERIFY_FAIL


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thetaforge",
        description="Theta functions on hyperelliptic Jacobians and "
                    "certified identity verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_default=0):
        p.add_argument("--eps", type=float, default=1e-10)
        p.add_argument("--seed", type=int, default=seed_default)
        p.add_argument("--json", help="write a JSON report to this path ('-' = stdout)")
        p.add_argument("--cache-dir", dest="cache_dir", default=None)
        p.add_argument("--no-cache", dest="no_cache", action="store_true")

    p_curve = sub.add_parser("curve", help="generate or inspect curve files")
    sub_curve = p_curve.add_subparsers(dest="curve_cmd", required=True)
    p_gen = sub_curve.add_parser("gen")
    p_gen.add_argument("--genus", type=int, default=2)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None)
    p_show = sub_curve.add_parser("show")
    p_show.add_argument("--curve", required=True)

    p_per = sub.add_parser("periods", help="compute the period matrix of a curve")
    p_per.add_argument("--curve", default=None)
    p_per.add_argument("--genus", type=int, default=2)
    common(p_per)

    p_theta = sub.add_parser("theta", help="evaluate theta[char](z; tau)")
    p_theta.add_argument("--tau", default=None, help="rows 'a,b;c,d' (use i or j)")
    p_theta.add_argument("--curve", default=None)
    p_theta.add_argument("--genus", type=int, default=2)
    p_theta.add_argument("--char", default=None, help="'a1,..;b1,..' entries 0 or 1/2")
    p_theta.add_argument("--z", default=None, help="comma separated complex entries")
    common(p_theta)

    p_verify = sub.add_parser("verify", help="verify one identity instance")
    p_verify.add_argument("identity",
                          choices=["thm1", "thm2", "cor", "normed",
                                   "jacobi", "rosenhain"])
    p_verify.add_argument("--tau", default=None)
    p_verify.add_argument("--curve", default=None)
    p_verify.add_argument("--genus", type=int, default=2)
    p_verify.add_argument("--sigma", default=None, help="permutation 'c1,c2,...'")
    p_verify.add_argument("--variant", choices=["i", "ii", "iii"], default="i")
    common(p_verify)

    p_suite = sub.add_parser("suite", help="run the aggregate verification suite")
    p_suite.add_argument("--genus-min", type=int, default=1)
    p_suite.add_argument("--genus-max", type=int, default=3)
    p_suite.add_argument("--curves", type=int, default=3)
    p_suite.add_argument("--trials", type=int, default=5)
    common(p_suite)

    return parser


def execute(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        if args.command == "curve":
            return _cmd_curve(args)
        if args.command == "periods":
            return _cmd_periods(args)
        if args.command == "theta":
            return _cmd_theta(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "suite":
            return _cmd_suite(args)
        raise _UsageError(f"unknown command {args.command!r}")
    except (_UsageError, InvalidToleranceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, PathError, NumericFailureError,
            GenericPositionError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ThetaforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(execute(sys.argv[1:]))


if __name__ == "__main__":
    main()
