"""Command-line front end: ``setvar <subcommand> [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .convex import SteinerDensity, body_from_json, body_to_json, sphere_quadrature, steiner_center, steiner_defect
from .errors import NoConvergence, SetvarError
from .experiments import SUITES, emit_report, make_config, parse_config_text, run_experiment
from .fbm import FbmSpec, fbm_path
from .io import fmt, read_path_csv, read_set_path, write_path_csv
from .svcalc import HukuharaPath, sv_young_integral
from .variation import holder_constant, riesz_vp, var_p
from .young import young_integral, young_via_fractional


def _global_parent(suppress: bool) -> argparse.ArgumentParser:
    default = argparse.SUPPRESS if suppress else None
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=default, help="random seed")
    p.add_argument("--config", default=default, help="key=value config file; flags override it")
    p.add_argument("--out", default=default, help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default=default, help="output format")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="setvar", parents=[_global_parent(False)], description=__doc__)
    parser.add_argument("--version", action="version", version=f"setvar {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    glob = _global_parent(True)

    p = sub.add_parser("fbm", parents=[glob], help="sample a fractional Brownian path")
    p.add_argument("--H", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--T", type=float)

    p = sub.add_parser("pvar", parents=[glob], help="p-variation and Hoelder constant of a path")
    p.add_argument("--path", required=True, help="path CSV, interval CSV (t,lo,hi) or body JSON lines")
    p.add_argument("--p", type=float)
    p.add_argument("--beta", type=float, help="also report M_beta")
    p.add_argument("--window", type=float, nargs=2, metavar=("A", "B"))
    p.add_argument("--band", type=int)

    p = sub.add_parser("young", parents=[glob], help="Young integral of f against a scalar g")
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--s", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--tol", type=float)
    p.add_argument("--max-levels", type=int)
    p.add_argument("--method", choices=("riemann", "fractional"))
    p.add_argument("--rho", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--extrapolate", action="store_true", help="Richardson-extrapolate the dyadic levels")

    p = sub.add_parser("steiner", parents=[glob], help="generalized Steiner center of a body")
    p.add_argument("--body", required=True, help='JSON body, e.g. {"kind":"interval","lo":0,"hi":1}, or a file')
    p.add_argument("--direction", type=float, nargs="+")
    p.add_argument("--tilt", type=float)
    p.add_argument("--sphere-nodes", type=int)
    p.add_argument("--ball-nodes-radial", type=int)
    p.add_argument("--ball-nodes-angular", type=int)

    p = sub.add_parser("svint", parents=[glob], help="hull of Young integrals of Steiner selections")
    p.add_argument("--phi", required=True, help="Hukuhara derivative: interval CSV or body JSON lines")
    p.add_argument("--x0", type=float, nargs="+")
    p.add_argument("--g", required=True)
    p.add_argument("--t", type=float)
    p.add_argument("--n-selections", type=int)
    p.add_argument("--p", type=float)
    p.add_argument("--alpha", type=float)

    p = sub.add_parser("verify", parents=[glob], help="run a verification suite")
    p.add_argument("--suite", choices=SUITES)
    p.add_argument("--n", type=int)
    p.add_argument("--T", type=float)
    p.add_argument("--H", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--rho", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--n-selections", type=int)
    p.add_argument("--instances", type=int)
    return parser


def _apply_config(args: argparse.Namespace) -> dict:
    """Fill unset flags from the config file; returns the raw file values."""
    values = {}
    if args.config:
        values = parse_config_text(Path(args.config).read_text())
    if args.command != "verify":
        for key, raw in values.items():
            if getattr(args, key, None) is None and hasattr(args, key):
                setattr(args, key, _guess(raw))
    return values


def _guess(raw: str):
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            pass
    return raw


def _or(value, default):
    return default if value is None else value


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_mapping(result: dict, args) -> None:
    if (args.format or "json") == "csv":
        rows = ["key,value"]
        for k, v in result.items():
            rows.append(f"{k},{json.dumps(v) if isinstance(v, (list, dict)) else v}")
        _write("\n".join(rows) + "\n", args.out)
    else:
        _write(json.dumps(result, indent=2) + "\n", args.out)


def _floats(x) -> list:
    return [float(fmt(v)) for v in np.atleast_1d(x)]


def cmd_fbm(args) -> int:
    spec = FbmSpec(_or(args.H, 0.5), _or(args.n, 1024), _or(args.T, 1.0), _or(args.seed, 0))
    path = fbm_path(spec)
    write_path_csv(path, args.out or sys.stdout)
    return 0


def _load_any_path(src):
    with open(src) as fh:
        head = fh.readline().strip()
    if head.startswith("t,lo,hi") or Path(src).suffix in (".jsonl", ".json"):
        return read_set_path(src)
    return read_path_csv(src)


def cmd_pvar(args) -> int:
    path = _load_any_path(args.path)
    p = _or(args.p, 2.0)
    window = tuple(args.window) if args.window else None
    result = {
        "p": p,
        "var_p": float(fmt(var_p(path, p, window, args.band))),
        "riesz_vp": float(fmt(riesz_vp(path, p, window, args.band))),
    }
    if args.beta is not None:
        result["holder_constant"] = float(fmt(holder_constant(path, args.beta, window)))
    _emit_mapping(result, args)
    return 0


def cmd_young(args) -> int:
    f, g = read_path_csv(args.f), read_path_csv(args.g)
    if _or(args.method, "riemann") == "fractional":
        value = young_via_fractional(f, g, args.rho, args.alpha, args.beta)
        _emit_mapping({"value": _floats(value), "defect": None, "levels": None, "bound_report": None}, args)
        return 0
    try:
        res = young_integral(
            f, g, args.s, args.t, tol=_or(args.tol, 1e-6), max_levels=args.max_levels,
            extrapolate=args.extrapolate, p=args.p, alpha=args.alpha,
            report_bound=args.p is not None and args.alpha is not None,
        )
    except NoConvergence as exc:
        _emit_mapping({"value": _floats(exc.value), "defect": exc.defect, "levels": exc.levels,
                       "bound_report": None, "error": str(exc)}, args)
        return 1
    _emit_mapping({"value": _floats(res.value), "defect": res.cauchy_defect, "levels": res.levels,
                   "bound_report": res.bound_report}, args)
    return 0


def cmd_steiner(args) -> int:
    text = Path(args.body).read_text() if Path(args.body).is_file() else args.body
    body = body_from_json(json.loads(text))
    direction = args.direction or [1.0] + [0.0] * (body.dim - 1)
    mu = SteinerDensity(tuple(direction), _or(args.tilt, 0.0))
    q = None
    if body.dim == 2:
        q = sphere_quadrature(2, _or(args.sphere_nodes, 360), _or(args.ball_nodes_radial, 40),
                              _or(args.ball_nodes_angular, 60))
    _emit_mapping({
        "center": _floats(steiner_center(body, mu, q)),
        "defect": steiner_defect(body, mu, q),
        "lipschitz": mu.lipschitz(),
    }, args)
    return 0


def cmd_svint(args) -> int:
    Phi = read_set_path(args.phi)
    g = read_path_csv(args.g)
    x0 = np.asarray(args.x0 if args.x0 else [0.0] * Phi.dim)
    hp = HukuharaPath(x0, Phi)
    hull = sv_young_integral(hp, g, args.t, _or(args.n_selections, 16), p=args.p, alpha=args.alpha)
    _emit_mapping({"hull": body_to_json(hull), "n_selections": _or(args.n_selections, 16)}, args)
    return 0


def cmd_verify(args, file_values: dict) -> int:
    cfg = make_config(
        file_values, suite=args.suite, seed=args.seed, n=args.n, T=args.T, H=args.H, p=args.p,
        alpha=args.alpha, beta=args.beta, rho=args.rho, theta=args.theta,
        n_selections=args.n_selections, instances=args.instances, out=args.out,
    )
    report = run_experiment(cfg)
    text = emit_report(report, args.format or "json", cfg.out)
    if not cfg.out:
        sys.stdout.write(text)
    return 0 if report.passed else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_values = _apply_config(args)
        if args.command == "verify":
            return cmd_verify(args, file_values)
        return {"fbm": cmd_fbm, "pvar": cmd_pvar, "young": cmd_young, "steiner": cmd_steiner,
                "svint": cmd_svint}[args.command](args)
    except (SetvarError, OSError, ValueError) as exc:
        print(f"setvar: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
