"""Command-line front end.

Exit codes: 0 success (or saturating measurement), 1 saturation check
failed, 2 input error, 3 undefined quantity, 4 partial sweep failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys

import numpy as np

from . import fisher, models, saturation
from .errors import MenosError, NoFeasiblePoint, UndefinedSusceptibility
from .experiments import interferometer_point, superres_hg_point
from .io import encode_float, load_model, load_povm, report_to_json
from .povm import Povm, projective_from_states, validate

EXIT_OK, EXIT_CHECK_FAIL, EXIT_INPUT, EXIT_UNDEFINED, EXIT_PARTIAL = 0, 1, 2, 3, 4
TOL_ENV = "MENOS_TOL_OVERRIDE"


class InputError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def tolerance_scale() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw == "":
        return 1.0
    try:
        scale = float(raw)
    except ValueError:
        raise InputError(f"{TOL_ENV} must be a positive number, got {raw!r}") from None
    if not scale > 0 or math.isinf(scale):
        raise InputError(f"{TOL_ENV} must be a positive number, got {raw!r}")
    return scale


def sweep(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise InputError("--steps must be at least 1")
    if not lo <= hi:
        raise InputError(f"range is not ordered: {lo} > {hi}")
    return np.linspace(lo, hi, steps)


def _open_out(path):
    return sys.stdout if path in (None, "-") else open(path, "w", newline="")


def write_table(header, rows, path, fmt_kind):
    out = _open_out(path)
    try:
        if fmt_kind == "json":
            recs = [dict(zip(header, (encode_float(v) if not isinstance(v, str) else v for v in r))) for r in rows]
            out.write(json.dumps(recs, indent=1) + "\n")
        else:
            w = csv.writer(out, lineterminator="\n")
            w.writerow(header)
            for r in rows:
                w.writerow([fmt(v) for v in r])
    finally:
        if out is not sys.stdout:
            out.close()


def _builder_args(spec: str) -> tuple[str, dict]:
    name, _, rest = spec.partition(":")
    kwargs = {}
    for item in filter(None, rest.split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"builder argument {item!r} is not of the form key=value")
        try:
            kwargs[key.strip()] = float(value)
        except ValueError:
            raise InputError(f"builder argument {item!r} is not numeric") from None
    return name, kwargs


MODEL_BUILDERS = {
    # |+><+| with drho = sigma_y / 2, F_Q = 1
    "canonical-pure": lambda: models.pure_canonicalize(
        np.array([1.0, 0.0]), np.array([0.0, 0.5])
    ),
    "interferometer": lambda theta=0.0, phi=math.pi / 2: models.interferometer_model(theta, phi),
    "superres": lambda theta=1.0, sigma=1.0: models.superres_model(theta, sigma),
}

POVM_BUILDERS = {
    "sigma-y": lambda: projective_from_states([np.array([1, 1j]) / math.sqrt(2), np.array([1, -1j]) / math.sqrt(2)]),
    "computational": lambda dim=2: Povm([np.diag(np.eye(int(dim))[k]) for k in range(int(dim))]),
    "identity": lambda dim=2: Povm([np.eye(int(dim))]),
    "superres-family": lambda phi_s=math.pi / 2, phi_a=math.pi / 2: saturation.superres_family_povm(phi_s, phi_a),
}


def _resolve(spec: str, builders: dict, loader):
    """``spec`` is a JSON path, or ``builtin:NAME[:key=value,...]``."""
    if not spec.startswith("builtin:"):
        return loader(spec)
    name, kwargs = _builder_args(spec[len("builtin:"):])
    if name not in builders:
        raise InputError(f"unknown builder {name!r}; choose from {', '.join(sorted(builders))}")
    try:
        return builders[name](**kwargs)
    except TypeError as exc:
        raise InputError(f"bad arguments for builder {name!r}: {exc}") from None


def load_inputs(args):
    model = _resolve(args.model, MODEL_BUILDERS, load_model)
    povm = _resolve(args.povm, POVM_BUILDERS, load_povm)
    report = validate(povm)
    if not report.passed:
        raise InputError(
            f"not a POVM: min eigenvalue {min(report.min_eigenvalues):.3g}, "
            f"completeness residual {report.completeness_residual:.3g}"
        )
    if povm.dim != model.dim:
        raise InputError(f"POVM dim {povm.dim} != model dim {model.dim}")
    return model, povm


def cmd_chi(args) -> int:
    scale = tolerance_scale()
    model, povm = load_inputs(args)
    stats = fisher.outcome_stats(model, povm, fisher.P_TOL * scale, fisher.DP_TOL * scale)
    report = fisher.chi_menos(model, stats)
    data = report_to_json(report)
    if args.oracle_trials:
        data["chi_bruteforce"] = encode_float(
            fisher.chi_bruteforce(model, stats, povm, trials=args.oracle_trials, seed=args.seed)
        )
    if args.out:
        with _open_out(args.out) as fh:
            fh.write(json.dumps(data, indent=1) + "\n")
    print(f"chi = {fmt(report.chi)}")
    return EXIT_OK


def cmd_check(args) -> int:
    scale = tolerance_scale()
    model, povm = load_inputs(args)
    report = saturation.check_saturation(
        model, povm, tol=saturation.SAT_TOL * scale, p_tol=fisher.P_TOL * scale
    )
    text = json.dumps({k: encode_float(v) if isinstance(v, float) else v for k, v in report.to_dict().items()}, indent=1)
    print(text)
    if args.out:
        with _open_out(args.out) as fh:
            fh.write(text + "\n")
    return EXIT_OK if report.saturates else EXIT_CHECK_FAIL


def cmd_interferometer(args) -> int:
    if not 0.0 <= args.visibility <= 1.0:
        raise InputError("--visibility must lie in [0, 1]")
    scale = tolerance_scale()
    rows = []
    for phi in sweep(args.phi_min, args.phi_max, args.steps):
        pt = interferometer_point(float(phi), args.visibility, p_tol=fisher.P_TOL * scale, dp_tol=fisher.DP_TOL * scale)
        rows.append((pt.phi, pt.cfi_v1, pt.cfi_v, pt.chi))
    write_table(("phi", "cfi_v1", "cfi_v", "chi"), rows, args.out, args.format)
    return EXIT_OK


def _theta_sweep(args):
    if not args.theta_min > 0:
        raise InputError("--theta-min must be positive")
    if not args.sigma > 0:
        raise InputError("--sigma must be positive")
    return sweep(args.theta_min, args.theta_max, args.steps)


def cmd_superres_hg(args) -> int:
    if args.modes < 2:
        raise InputError("--modes must be at least 2")
    scale = tolerance_scale()
    rows = []
    for theta in _theta_sweep(args):
        pt = superres_hg_point(float(theta), args.sigma, args.modes, fisher.P_TOL * scale, fisher.DP_TOL * scale)
        rows.append((pt.theta, pt.cfi, pt.chi, pt.qfi))
    write_table(("theta", "cfi", "chi", "qfi"), rows, args.out, args.format)
    return EXIT_OK


def cmd_superres_chiq(args) -> int:
    if args.grid_n < 16:
        raise InputError("--grid-n must be at least 16")
    scale = tolerance_scale()
    rows, failed = [], False
    for theta in _theta_sweep(args):
        try:
            r = saturation.minimize_chi_q_superres(
                float(theta), args.sigma, args.grid_n, args.refine_iters,
                sat_tol=saturation.SAT_TOL * scale, p_tol=fisher.P_TOL * scale,
            )
            rows.append((r.theta, r.chi_q, r.phi_s, r.phi_a, r.cfi_at_optimum))
        except NoFeasiblePoint:
            failed = True
            rows.append((float(theta), "nofeasible", "", "", ""))
    write_table(("theta", "chi_q", "phi_s", "phi_a", "cfi"), rows, args.out, args.format)
    return EXIT_PARTIAL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="menos", description="Fisher-information measurement-noise susceptibility")
    sub = parser.add_subparsers(dest="command", required=True)

    def files(p, fmt_default):
        p.add_argument("--model", required=True, help="model JSON path, or builtin:NAME[:key=value,...]")
        p.add_argument("--povm", required=True, help="POVM JSON path, or builtin:NAME[:key=value,...]")
        p.add_argument("--out", help="write the JSON report here")
        p.add_argument("--format", choices=("json",), default=fmt_default)

    def output(p):
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("chi", help="worst-case susceptibility of a POVM")
    files(p, "json")
    p.add_argument("--oracle-trials", type=int, default=0, help="also run the brute-force search with this many random POVMs")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("check", help="certify QCRB saturation")
    files(p, "json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("interferometer", help="phase sweep of the Mach-Zehnder example")
    p.add_argument("--phi-min", type=float, default=0.0)
    p.add_argument("--phi-max", type=float, default=math.pi)
    p.add_argument("--steps", type=int, default=181)
    p.add_argument("--visibility", type=float, default=0.98)
    output(p)
    p.set_defaults(func=cmd_interferometer)

    for name, func, help_ in (
        ("superres-hg", cmd_superres_hg, "separation sweep with Hermite-Gaussian mode sorting"),
        ("superres-chiq", cmd_superres_chiq, "separation sweep of the minimal QCRB-saturating susceptibility"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--theta-min", type=float, default=0.05)
        p.add_argument("--theta-max", type=float, default=10.0)
        p.add_argument("--steps", type=int, default=60)
        p.add_argument("--sigma", type=float, default=1.0)
        if name == "superres-hg":
            p.add_argument("--modes", type=int, default=4, help="number of outcomes K")
        else:
            p.add_argument("--grid-n", type=int, default=24)
            p.add_argument("--refine-iters", type=int, default=6)
        output(p)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UndefinedSusceptibility as exc:
        print(f"menos: undefined: {exc}", file=sys.stderr)
        return EXIT_UNDEFINED
    except (InputError, MenosError, OSError) as exc:
        print(f"menos: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
