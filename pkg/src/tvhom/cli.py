"""Command-line front end.

Exit status is 0 on success, 1 when a check fails, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from . import harness, io
from .constants import REFERENCE_EPS, c_eps, delta_eps, optimize_c0
from .errors import EnumerationBudgetExceeded, InputParseError, TheoremViolation, TVHomError
from .measure import check_admissible, convolve_family, t_functional, uniform_mixture
from .tv import (
    encode_instance,
    homogenize,
    tv_homogenized_multinomial,
    tv_product_bruteforce,
    tv_product_exact,
)

log = logging.getLogger("tvhom")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
UNDERFLOW_WARN_N = 40
MATCH_TOL = 1e-10


def _default_seed() -> int:
    env = os.environ.get("TVH_SEED")
    if env is None:
        return 42
    try:
        return int(env)
    except ValueError:
        raise SystemExit(f"TVH_SEED must be an integer, got {env!r}")


def _positive_int(s: str) -> int:
    v = int(s)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {s}")
    return v


def _nonneg_int(s: str) -> int:
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {s}")
    return v


def _positive_float(s: str) -> float:
    v = float(s)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {s}")
    return v


def _unit_open(s: str) -> float:
    v = float(s)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError(f"expected a number in (0, 1), got {s}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tvhom",
        description="Exact TV between product distributions and homogenization checks.",
    )
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def file_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--input", "-i", required=True, help="instance JSON file")
        sp.add_argument("--smooth", type=_unit_open, metavar="DELTA",
                        help="mix every pmf with uniform: (1-DELTA)*P + DELTA/m")
        sp.add_argument("--out", "-o", help="output path (default stdout)")
        return sp

    file_cmd("encode", "print the admissible encodings of each coordinate pair")
    file_cmd("tv-product", "TV between the heterogeneous products")
    file_cmd("tv-homog", "TV between the homogenized products (multinomial route)")
    file_cmd("oracle", "brute-force TV, cross-checked against tv-product")

    c = sub.add_parser("constants", help="optimize the explicit constant C0")
    c.add_argument("--grid-lo", type=_positive_float, default=1e-4)
    c.add_argument("--grid-hi", type=_positive_float, default=0.5)
    c.add_argument("--grid-steps", type=int, default=1000)
    c.add_argument("--refine-tol", type=_positive_float, default=1e-10)
    c.add_argument("--eps", type=_positive_float, default=REFERENCE_EPS,
                   help="also evaluate delta and C at this eps")
    c.add_argument("--out", "-o")

    v = sub.add_parser("verify", help="run the lemma suite on generated instances or one file")
    v.add_argument("--input", "-i", help="verify this instance file instead of a generated corpus")
    v.add_argument("--smooth", type=_unit_open, metavar="DELTA")
    v.add_argument("--seed", type=_nonneg_int, default=None)
    v.add_argument("--count", type=_nonneg_int, default=1000)
    v.add_argument("--n-min", type=_positive_int, default=1)
    v.add_argument("--n-max", type=_positive_int, default=6)
    v.add_argument("--m-min", type=_positive_int, default=2)
    v.add_argument("--m-max", type=_positive_int, default=4)
    v.add_argument("--concentration", type=_positive_float, default=1.0)
    v.add_argument("--tol", type=_positive_float, default=None,
                   help="single tolerance for every check (default: per-check table)")
    v.add_argument("--lambdas", type=lambda s: tuple(float(x) for x in s.split(",")),
                   default=harness.DEFAULT_LAMBDAS, help="comma-separated Laplace grid")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--summary-only", action="store_true", help="omit per-instance records from JSON")
    v.add_argument("--jobs", type=_positive_int, default=1)
    v.add_argument("--out", "-o")

    s = sub.add_parser("search", help="hill-climb for large TV(hom)/TV(vec) ratios")
    s.add_argument("--seed", type=_nonneg_int, default=None)
    s.add_argument("--restarts", type=_positive_int, default=50)
    s.add_argument("--steps", type=_nonneg_int, default=200)
    s.add_argument("--family", choices=("bernoulli", "general"), default="bernoulli")
    s.add_argument("--n-max", type=_positive_int, default=16)
    s.add_argument("--m-max", type=_positive_int, default=3)
    s.add_argument("--out", "-o")
    return p


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "constants":
        if args.grid_lo > args.grid_hi:
            parser.error("--grid-lo must not exceed --grid-hi")
        if args.grid_steps < 10:
            parser.error("--grid-steps must be at least 10")
    if args.command == "verify":
        if args.n_min > args.n_max:
            parser.error("--n-min must not exceed --n-max")
        if args.m_min > args.m_max:
            parser.error("--m-min must not exceed --m-max")
        if any(lam < 0 for lam in args.lambdas):
            parser.error("--lambdas must be nonnegative")
    if getattr(args, "seed", 0) is None:
        args.seed = _default_seed()
    return args


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _load(args):
    inst = io.load_instance(args.input, smooth_delta=args.smooth)
    if inst.n > UNDERFLOW_WARN_N:
        log.warning("n = %d: products of many weights may underflow in double precision", inst.n)
    return inst


def _smoothing_note(args, fn) -> dict | None:
    """Value at DELTA and at DELTA/10, to show how much the smoothing moved it."""
    if args.smooth is None:
        return None
    coarse = fn(io.load_instance(args.input, smooth_delta=args.smooth))
    fine = fn(io.load_instance(args.input, smooth_delta=args.smooth / 10))
    return {"delta": args.smooth, "value_at_delta_over_10": fine, "sensitivity": abs(coarse - fine)}


def _hom(inst):
    return tv_homogenized_multinomial(homogenize(inst.Ps), homogenize(inst.Qs), inst.n)


def cmd_encode(args) -> int:
    inst = _load(args)
    etas = encode_instance(inst)
    bar = uniform_mixture(etas)
    out = {
        "n": inst.n,
        "m": inst.m,
        "etas": [e.to_json() for e in etas],
        "eta_bar": bar.to_json(),
        "admissibility": [
            {"integral_plus": r.integral_plus, "integral_minus": r.integral_minus, "admissible": r.admissible}
            for r in (check_admissible(e) for e in etas)
        ],
        "t_values": [t_functional(e) for e in etas],
    }
    _emit(io.to_json_text(out), args.out)
    return EXIT_OK


def cmd_tv_product(args) -> int:
    inst = _load(args)
    eta = convolve_family(encode_instance(inst))
    out = {"n": inst.n, "m": inst.m, "tv_product": t_functional(eta), "atoms": len(eta)}
    note = _smoothing_note(args, tv_product_exact)
    if note:
        out["smoothing"] = note
    _emit(io.to_json_text(out), args.out)
    return EXIT_OK


def cmd_tv_homog(args) -> int:
    inst = _load(args)
    Pbar, Qbar = homogenize(inst.Ps), homogenize(inst.Qs)
    out = {
        "n": inst.n,
        "m": inst.m,
        "Pbar": Pbar.probs.tolist(),
        "Qbar": Qbar.probs.tolist(),
        "tv_homogenized": tv_homogenized_multinomial(Pbar, Qbar, inst.n),
    }
    note = _smoothing_note(args, _hom)
    if note:
        out["smoothing"] = note
    _emit(io.to_json_text(out), args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst = _load(args)
    brute = tv_product_bruteforce(inst)
    exact = tv_product_exact(inst)
    match = abs(brute - exact) <= MATCH_TOL
    out = {
        "n": inst.n,
        "m": inst.m,
        "tv_bruteforce": brute,
        "tv_product": exact,
        "abs_diff": abs(brute - exact),
        "match": match,
    }
    _emit(io.to_json_text(out), args.out)
    return EXIT_OK if match else EXIT_FAIL


def cmd_constants(args) -> int:
    rep = optimize_c0(args.grid_lo, args.grid_hi, args.grid_steps, args.refine_tol)
    out = rep.to_json()
    out["at_eps"] = {"eps": args.eps, "delta_eps": delta_eps(args.eps), "c_eps": c_eps(args.eps)}
    _emit(io.to_json_text(out), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.input:
        inst = _load(args)
        reports = [harness.verify_instance(inst, args.tol, instance_id=0, lambdas=args.lambdas)]
        summary = harness.summarize(reports)
        config = {"input": args.input, "tol": args.tol}
    else:
        cfg = harness.GeneratorConfig(
            seed=args.seed,
            n_range=(args.n_min, args.n_max),
            m_range=(args.m_min, args.m_max),
            concentration=args.concentration,
            count=args.count,
        )
        res = harness.run_suite(cfg, args.tol, lambdas=args.lambdas, jobs=args.jobs)
        reports, summary = res.reports, res.summary
        config = {
            "seed": cfg.seed,
            "n_range": list(cfg.n_range),
            "m_range": list(cfg.m_range),
            "concentration": cfg.concentration,
            "count": cfg.count,
            "tol": args.tol,
            "lambdas": list(args.lambdas),
        }
    if args.format == "csv":
        text = io.reports_to_csv(reports)
    else:
        out = {"config": config, "summary": summary}
        if not args.summary_only:
            out["reports"] = [r.to_json() for r in reports]
        text = io.to_json_text(out)
    _emit(text, args.out)
    if summary["failed_checks"]:
        log.error("%d failed checks", summary["failed_checks"])
        return EXIT_FAIL
    return EXIT_OK


def cmd_search(args) -> int:
    rep = harness.search_worst_ratio(
        args.seed, args.restarts, args.steps, args.family, args.n_max, m_max=args.m_max
    )
    _emit(io.to_json_text(rep.to_json()), args.out)
    return EXIT_OK


COMMANDS = {
    "encode": cmd_encode,
    "tv-product": cmd_tv_product,
    "tv-homog": cmd_tv_homog,
    "oracle": cmd_oracle,
    "constants": cmd_constants,
    "verify": cmd_verify,
    "search": cmd_search,
}


def run(args: argparse.Namespace) -> int:
    try:
        return COMMANDS[args.command](args)
    except InputParseError as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except TheoremViolation as exc:
        log.error("theorem violation: %s", exc)
        return EXIT_FAIL
    except EnumerationBudgetExceeded as exc:
        log.error("%s", exc)
        return EXIT_USAGE
    except TVHomError as exc:
        log.error("%s", exc)
        return EXIT_USAGE


def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(levelname)s: %(message)s")
    return run(args)


if __name__ == "__main__":
    raise SystemExit(main())
