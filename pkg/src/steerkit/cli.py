"""Command line surface.

One process, one command, results on stdout: JSON documents for single
computations, RFC-4180 CSV (CRLF, header row, 12 significant digits) for
sweep datasets.  Optional --plot on the dataset commands renders a
matplotlib figure next to the delimited output.

Exit codes: 0 success, 2 invalid arguments, 3 unreadable or invalid state
file, 4 computation error (reported as a JSON error envelope on stdout).
"""
from __future__ import annotations

import argparse
import dataclasses
import csv
import itertools
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._version import __version__
from .analytic import steerability_x_analytic, x_derived
from .bell_chsh import RegionScanConfig, chsh_max, region_scan
from .errors import ParamOutOfDomain, SteerkitError, UnknownFamily
from .geometry import steering_ellipsoid, steering_radius
from .optimizer import OptimizerConfig, maximize_steerability
from .qstate import (
    FAMILY_NAMES,
    detect_x_params,
    family_x_params,
    load_state_file,
    make_family,
    to_pauli,
)
from .steer_functional import Direction
from .tolerances import DEFAULT, Tolerances
from .util import fmt12, parse_number, worker_count

_PARAM_FLAGS = ("a", "a3", "b3", "c1", "c2", "c3", "V", "theta", "eta", "chi", "sign")


class _CliExit(Exception):
    def __init__(self, code: int):
        super().__init__(f"exit {code}")
        self.code = code


def _fail(code: int, message: str):
    print(f"steerkit: {message}", file=sys.stderr)
    raise _CliExit(code)


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="steerkit",
        description="Two-setting steering, CHSH violation, steering radius and "
        "ellipsoid geometry for two-qubit states.",
    )
    top.add_argument("--version", action="version", version=f"steerkit {__version__}")
    sub = top.add_subparsers(dest="command", metavar="command")

    state = argparse.ArgumentParser(add_help=False)
    grp = state.add_argument_group("state source")
    grp.add_argument(
        "--family",
        help="family selector: a name from {%s}, optionally with inline "
        "parameters like 'pure,a=0.7071'" % ", ".join(FAMILY_NAMES),
    )
    grp.add_argument("--state", help="path of a state JSON file (rho | pauli | family)")
    for flag in _PARAM_FLAGS:
        grp.add_argument(
            f"--{flag}", default=None, metavar="VAL",
            help=f"family parameter {flag} (accepts pi fractions like pi/6)",
        )

    tolp = argparse.ArgumentParser(add_help=False)
    grp = tolp.add_argument_group("tolerances")
    grp.add_argument("--tol-validate", type=float, default=None,
                     help="override the state validation tolerance (default 1e-10)")
    grp.add_argument("--eps-singular", type=float, default=None,
                     help="override the singular steered-state threshold (default 1e-6)")

    optp = argparse.ArgumentParser(add_help=False)
    grp = optp.add_argument_group("optimizer")
    grp.add_argument("--grid-per-angle", type=int, default=18)
    grp.add_argument("--top-k", type=int, default=8)
    grp.add_argument("--refine-max-iters", type=int, default=400)
    grp.add_argument("--refine-tol", type=float, default=1e-10)
    grp.add_argument("--seed", type=int, default=0,
                     help="nonzero adds seeded jitter to refinement starts")

    dirp = argparse.ArgumentParser(add_help=False)
    dirp.add_argument("--direction", choices=("AtoB", "BtoA", "both"), default="AtoB")

    methp = argparse.ArgumentParser(add_help=False)
    methp.add_argument("--method", choices=("auto", "analytic", "numeric"), default="auto")

    plotp = argparse.ArgumentParser(add_help=False)
    plotp.add_argument("--plot", metavar="PATH", default=None,
                       help="also render a figure of the dataset to this file")

    p = sub.add_parser("steer", parents=[state, dirp, methp, optp, tolp],
                       help="steerability S of one state")
    p.set_defaults(func=cmd_steer)

    p = sub.add_parser("chsh", parents=[state, tolp],
                       help="maximal CHSH violation N of one state")
    p.set_defaults(func=cmd_chsh)

    p = sub.add_parser("radius", parents=[state, dirp, optp, tolp],
                       help="steering radius of an X-state")
    p.set_defaults(func=cmd_radius)

    p = sub.add_parser("ellipsoid", parents=[state, dirp, tolp],
                       help="steering ellipsoid center and volume of an X-state")
    p.set_defaults(func=cmd_ellipsoid)

    p = sub.add_parser("asym", parents=[state, methp, optp, tolp, plotp],
                       help="two-direction steerability comparison (CSV)")
    p.add_argument("--grid", action="append", metavar="NAME=START:STOP:STEP",
                   help="parameter grid; repeatable")
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("sweep", parents=[state, dirp, methp, optp, tolp, plotp],
                       help="parameter sweep dataset (CSV)")
    p.add_argument("--grid", action="append", metavar="NAME=START:STOP:STEP",
                   help="parameter grid; repeatable (two grids give a plane)")
    p.set_defaults(func=cmd_sweep)
    p.set_defaults(direction="both")

    p = sub.add_parser("region", parents=[tolp, plotp],
                       help="(N, S) scan over sampled zero states (CSV)")
    p.add_argument("--samples", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mix", default="bell_diagonal,t3zero_x",
                   help="comma list of samplers: bell_diagonal, t3zero_x")
    p.set_defaults(func=cmd_region)

    return top


def _tolerances(args) -> Tolerances:
    tol = DEFAULT
    if getattr(args, "tol_validate", None) is not None:
        v = args.tol_validate
        if v <= 0:
            _fail(2, "--tol-validate must be positive")
        tol = dataclasses.replace(tol, hermitian=v, trace=v, psd=v)
    if getattr(args, "eps_singular", None) is not None:
        v = args.eps_singular
        if v <= 0:
            _fail(2, "--eps-singular must be positive")
        tol = dataclasses.replace(tol, singular=v)
    return tol


def _opt_config(args) -> OptimizerConfig:
    try:
        return OptimizerConfig(
            grid_per_angle=args.grid_per_angle,
            top_k=args.top_k,
            refine_max_iters=args.refine_max_iters,
            refine_tol=args.refine_tol,
            seed=args.seed,
        )
    except ValueError as exc:
        _fail(2, str(exc))


def _parse_param(key: str, text) -> float:
    if key == "sign":
        t = str(text).strip()
        if t in ("+", "+1", "1", "1.0"):
            return 1.0
        if t in ("-", "-1", "-1.0"):
            return -1.0
        raise ValueError(f"sign must be + or -, got {text!r}")
    return parse_number(text)


def _parse_family_arg(args):
    """Family name and parameter map from --family plus parameter flags."""
    flags = {k: getattr(args, k) for k in _PARAM_FLAGS if getattr(args, k, None) is not None}
    if args.family is None:
        if flags:
            _fail(2, "family parameter flags given without --family")
        return None
    parts = [t.strip() for t in args.family.split(",") if t.strip()]
    if not parts:
        _fail(2, "--family must start with a family name")
    name, params = parts[0], {}
    try:
        for item in parts[1:]:
            if "=" not in item:
                raise ValueError(f"expected key=value in family argument, got {item!r}")
            k, v = item.split("=", 1)
            params[k.strip()] = _parse_param(k.strip(), v)
        for k, v in flags.items():
            if k in params:
                raise ValueError(f"parameter {k} given both inline and as a flag")
            params[k] = _parse_param(k, v)
    except ValueError as exc:
        _fail(2, str(exc))
    return name, params


def _resolve_state(args, tol: Tolerances):
    """Returns (DensityMatrix, XStateParams or None, input echo)."""
    fam = _parse_family_arg(args)
    if args.state and fam:
        _fail(2, "--state and --family are mutually exclusive")
    if args.state:
        try:
            dm, echo = load_state_file(args.state, tol)
        except OSError as exc:
            _fail(3, f"cannot read state file: {exc}")
        except (ValueError, KeyError, TypeError, SteerkitError) as exc:
            _fail(3, f"invalid state file {args.state}: {exc}")
        xp = detect_x_params(to_pauli(dm), tol)
        return dm, xp, {"state_file": args.state, **echo}
    if fam:
        name, params = fam
        try:
            dm = make_family(name, params, tol)
            xp = family_x_params(name, params)
        except (UnknownFamily, SteerkitError, ValueError) as exc:
            _fail(2, str(exc))
        return dm, xp, {"family": name, "params": params}
    _fail(2, "a state source is required: --family or --state")


def _directions(text: str):
    if text == "both":
        return [Direction.AtoB, Direction.BtoA]
    return [Direction[text]]


def _steer_point(dm, xp, direction, method, cfg, tol):
    if method == "numeric":
        return maximize_steerability(dm, direction, cfg, tol)
    if method == "analytic":
        return steerability_x_analytic(xp, direction, tol)
    # auto: trust the closed form exactly where it is certified exact
    if xp is not None:
        d = x_derived(xp, direction, tol)
        if abs(d.t3) <= tol.zero_t3:
            return steerability_x_analytic(xp, direction, tol)
    return maximize_steerability(dm, direction, cfg, tol)


def _print_json(doc) -> None:
    print(json.dumps(doc, indent=2))


def _print_csv(header, rows) -> None:
    w = csv.writer(sys.stdout, lineterminator="\r\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt12(c) for c in row])


def _base_doc(command: str, echo: dict, args, tol: Tolerances) -> dict:
    inp = dict(echo)
    for key in ("direction", "method"):
        if hasattr(args, key):
            inp[key] = getattr(args, key)
    return {
        "command": command,
        "input": inp,
        "tolerances": tol.as_dict(),
        "version": __version__,
    }


def _result_dict(res) -> dict:
    return {
        "direction": res.direction.value,
        "s": res.s,
        "method": res.method.value,
        "angles": [float(x) for x in res.angles],
        "deltas": None if res.deltas is None else [float(x) for x in res.deltas],
        "objective_at_opt": res.objective_at_opt,
    }


# ---------------------------------------------------------------------------
# commands


def cmd_steer(args) -> int:
    tol = _tolerances(args)
    cfg = _opt_config(args)
    dm, xp, echo = _resolve_state(args, tol)
    if args.method == "analytic" and xp is None:
        _fail(2, "--method analytic requires an X-state source")
    results = [
        _result_dict(_steer_point(dm, xp, d, args.method, cfg, tol))
        for d in _directions(args.direction)
    ]
    doc = _base_doc("steer", echo, args, tol)
    doc["results"] = results
    doc["optimizer"] = dataclasses.asdict(cfg)
    _print_json(doc)
    return 0


def cmd_chsh(args) -> int:
    tol = _tolerances(args)
    dm, _xp, echo = _resolve_state(args, tol)
    doc = _base_doc("chsh", echo, args, tol)
    doc["n"] = chsh_max(to_pauli(dm))
    _print_json(doc)
    return 0


def cmd_radius(args) -> int:
    tol = _tolerances(args)
    cfg = _opt_config(args)
    _dm, xp, echo = _resolve_state(args, tol)
    if xp is None:
        _fail(2, "radius requires an X-state source")
    out = []
    for d in _directions(args.direction):
        r = steering_radius(xp, d, cfg, tol)
        out.append(
            {
                "direction": d.value,
                "radius": r.radius,
                "branch": r.branch,
                "point": None
                if r.point is None
                else {"z1": r.point.z1, "z3": r.point.z3, "Z": r.point.Z},
                "per_branch": {
                    "xy": r.per_branch[0], "xz": r.per_branch[1], "yz": r.per_branch[2]
                },
            }
        )
    doc = _base_doc("radius", echo, args, tol)
    doc["results"] = out
    doc["optimizer"] = dataclasses.asdict(cfg)
    _print_json(doc)
    return 0


def cmd_ellipsoid(args) -> int:
    tol = _tolerances(args)
    _dm, xp, echo = _resolve_state(args, tol)
    if xp is None:
        _fail(2, "ellipsoid requires an X-state source")
    out = []
    for d in _directions(args.direction):
        e = steering_ellipsoid(xp, d, tol)
        out.append({"direction": d.value, "center_z": e.center_z, "volume": e.volume})
    doc = _base_doc("ellipsoid", echo, args, tol)
    doc["results"] = out
    _print_json(doc)
    return 0


def _parse_grid(text: str):
    if "=" not in text:
        _fail(2, f"grid argument {text!r} must look like NAME=START:STOP:STEP")
    name, rng = text.split("=", 1)
    name = name.strip()
    pieces = rng.split(":")
    try:
        if len(pieces) == 1:
            vals = np.array([parse_number(pieces[0])])
            return name, vals
        if len(pieces) != 3:
            raise ValueError("expected START:STOP:STEP")
        start, stop, step = (parse_number(t) for t in pieces)
        if step == 0:
            raise ValueError("grid step must be nonzero")
        count = int(round((stop - start) / step)) + 1
        if count < 1 or count > 10**6:
            raise ValueError(f"grid for {name} has {count} points")
        return name, start + step * np.arange(count)
    except ValueError as exc:
        _fail(2, f"bad grid {text!r}: {exc}")


def _sweep_common(args, directions) -> int:
    tol = _tolerances(args)
    cfg = _opt_config(args)
    if args.state:
        _fail(2, "sweeps need a --family source, not a state file")
    fam = _parse_family_arg(args)
    if fam is None:
        _fail(2, "sweeps need a --family source")
    name, fixed = fam
    grids = [_parse_grid(s) for s in (args.grid or [])]
    if args.func is cmd_sweep and not grids:
        _fail(2, "sweep requires at least one --grid")
    gnames = [g[0] for g in grids]
    if len(set(gnames)) != len(gnames):
        _fail(2, "grid parameter names must be distinct")
    clash = [n for n in gnames if n in fixed]
    if clash:
        _fail(2, f"parameter(s) {clash} given both fixed and as a grid")

    value_cols = ["s_a2b" if d is Direction.AtoB else "s_b2a" for d in directions]
    errors = {}

    def one_point(values):
        params = dict(fixed)
        params.update(zip(gnames, (float(v) for v in values)))
        cells = list(values)
        for d in directions:
            try:
                dm = make_family(name, params, tol)
                xp = family_x_params(name, params)
                cells.append(_steer_point(dm, xp, d, args.method, cfg, tol).s)
            except SteerkitError as exc:
                errors[type(exc).__name__] = errors.get(type(exc).__name__, 0) + 1
                cells.append(math.nan)
        return cells

    points = list(itertools.product(*(g[1] for g in grids))) if grids else [()]
    workers = worker_count()
    if workers > 1 and len(points) >= 64:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(one_point, points))
    else:
        rows = [one_point(p) for p in points]

    _print_csv(gnames + value_cols, rows)
    for cls, num in sorted(errors.items()):
        print(f"steerkit: {num} grid point(s) skipped ({cls})", file=sys.stderr)

    if args.plot:
        from . import plots

        ncol = len(gnames)
        if ncol == 1:
            xs = [r[0] for r in rows]
            series = {c: [r[ncol + i] for r in rows] for i, c in enumerate(value_cols)}
            plots.line_plot(xs, series, gnames[0], args.plot)
        elif ncol == 2:
            xs = [r[0] for r in rows]
            ys = [r[1] for r in rows]
            values = {c: [r[ncol + i] for r in rows] for i, c in enumerate(value_cols)}
            plots.plane_plot(xs, ys, values, gnames[0], gnames[1], args.plot)
        else:
            print("steerkit: --plot supports one or two grids; skipped", file=sys.stderr)
    return 0


def cmd_sweep(args) -> int:
    return _sweep_common(args, _directions(args.direction))


def cmd_asym(args) -> int:
    return _sweep_common(args, [Direction.AtoB, Direction.BtoA])


def cmd_region(args) -> int:
    tol = _tolerances(args)
    mix = tuple(t.strip() for t in args.mix.split(",") if t.strip())
    try:
        scan_cfg = RegionScanConfig(count=args.samples, seed=args.seed, mix=mix)
        samples = region_scan(scan_cfg, tol)
    except ParamOutOfDomain as exc:
        _fail(2, str(exc))
    rows = [
        [s.n_value, s.s_value, s.params.a3, s.params.b3, s.params.c1, s.params.c2, s.params.c3]
        for s in samples
    ]
    _print_csv(["n", "s", "a3", "b3", "c1", "c2", "c3"], rows)
    if args.plot:
        from . import plots

        plots.region_plot([r[0] for r in rows], [r[1] for r in rows], args.plot)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        print("steerkit: a command is required", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except _CliExit as exc:
        return exc.code
    except SteerkitError as exc:
        _print_json({"error": {"code": type(exc).__name__, "message": str(exc)}})
        return 4


if __name__ == "__main__":
    sys.exit(main())
