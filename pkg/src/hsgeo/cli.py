"""Command-line front end: scenario configuration, solving, data emission.

Subcommands: geodesic, distance, solve-hs, solve-2hs, solitons, blowup,
verify.  Initial data comes from named families ("bump:amp=1,lo=-1,hi=1"),
from CSV/JSON files, or the literal "identity"; there is no expression
language.  Outputs are CSV or JSON with floats printed at 17 significant
digits, so identical configurations produce byte-identical files.  Log
lines go to stderr; data goes to the -o path or stdout.

Exit codes: 0 success, 1 configuration error (unparseable flags or
config file, unknown family, invalid initial data), 2 numerical failure
(evaluation at or past a blow-up, verification residual out of bounds).
The env var HSGEO_TOL overrides the default tail tolerance of every
constructed grid function (documented default 1e-10 wins when unset).
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import diffeo as dg
from . import funcspace as fs
from . import geodesic as ge
from . import hs_solve as hs
from . import periodic_ch as pc
from . import rmap as rm
from . import soliton as so
from . import twocomp as tc
from . import verify as vf
from .connection import TangentVectorAtId
from .errors import HsgeoError

__all__ = ["main"]

_LINE_GRID_DEFAULT = "2001,-10,10"
_PERIODIC_GRID_DEFAULT = "512"


def _log(message: str) -> None:
    sys.stderr.write(message + "\n")


# ---------------------------------------------------------------------------
# scenario parsing
# ---------------------------------------------------------------------------

def _parse_floats(text: str, name: str) -> list:
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ValueError("%s must be comma-separated numbers, got %r"
                         % (name, text))
    if not values:
        raise ValueError("%s must contain at least one number" % name)
    return values


def _parse_times(text: str) -> list:
    times = _parse_floats(text, "times")
    if any(b < a for a, b in zip(times, times[1:])):
        raise ValueError("time samples must be sorted, got %r" % text)
    return times


def _parse_grid(text: str, periodic: bool) -> fs.Grid:
    parts = _parse_floats(text, "grid")
    n = int(parts[0])
    if n != parts[0]:
        raise ValueError("grid size must be an integer, got %r" % text)
    if periodic:
        return fs.Grid.periodic(n)
    if len(parts) != 3:
        raise ValueError("grid spec is n,xmin,xmax, got %r" % text)
    return fs.Grid.line(n, parts[1], parts[2])


def _parse_family_spec(spec: str):
    name, _, rest = spec.partition(":")
    params = {}
    for chunk in filter(None, rest.split(",")):
        key, eq, value = chunk.partition("=")
        if not eq:
            raise ValueError("family parameters are key=value, got %r"
                             % chunk)
        params[key.strip()] = float(value)
    return name.strip(), params


def _is_file_spec(spec: str) -> bool:
    return spec.endswith(".csv") or spec.endswith(".json")


def _load_diffeo(spec: str, grid: fs.Grid) -> dg.Diffeo:
    try:
        if spec == "identity":
            return dg.identity(grid)
        if spec.endswith(".json"):
            return dg.diffeo_from_json(spec)
        if spec.endswith(".csv"):
            return dg.diffeo_from_csv(spec)
        name, params = _parse_family_spec(spec)
        return dg.diffeo_from_family(name, grid, **params)
    except (HsgeoError, TypeError) as exc:
        raise ValueError("invalid endpoint %r: %s" % (spec, exc))


def _load_field(spec: str, grid: fs.Grid, what: str) -> fs.GridFunction:
    try:
        if spec.endswith(".csv"):
            kind = "periodic" if grid.kind == "periodic" else "line"
            return fs.gridfunction_from_csv(spec, decay=fs.DECAY_RAPID,
                                            kind=kind)
        name, params = _parse_family_spec(spec)
        return fs.family(name, grid, **params)
    except (HsgeoError, TypeError) as exc:
        raise ValueError("invalid %s %r: %s" % (what, spec, exc))


def _require(value, flag: str) -> str:
    if value is None:
        raise ValueError("missing required option %s (flag or config key)"
                         % flag)
    return value


def _load_velocity(spec: str, grid: fs.Grid) -> TangentVectorAtId:
    v = _load_field(spec, grid, "velocity")
    space = "A" if v.decay in fs.DECAYING_CLASSES else "A1"
    try:
        return TangentVectorAtId(v, space)
    except HsgeoError as exc:
        raise ValueError("invalid velocity %r: %s" % (spec, exc))


# ---------------------------------------------------------------------------
# output emission
# ---------------------------------------------------------------------------

def _fmt(value: float) -> str:
    return "%.17g" % value


def _fmt_json(value: float) -> str:
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    return _fmt(value)


def _render(columns, rows, fmt: str) -> str:
    if fmt == "csv":
        lines = [",".join(columns)]
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        return "\n".join(lines) + "\n"
    body = ",".join("[%s]" % ",".join(_fmt_json(v) for v in row)
                    for row in rows)
    return ('{"columns":[%s],"rows":[%s]}\n'
            % (",".join('"%s"' % c for c in columns), body))


def _emit(columns, rows, args) -> None:
    text = _render(columns, rows, args.format)
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", newline="") as fh:
            fh.write(text)
        _log("[OK] wrote %s (%d rows)" % (args.output, len(rows)))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def _cmd_geodesic(args) -> int:
    grid = _parse_grid(args.grid or _LINE_GRID_DEFAULT, periodic=False)
    times = _parse_times(args.times or "0,0.5,1")
    phi0 = _load_diffeo(_require(args.from_, "--from"), grid)
    if (args.to is None) == (args.direction is None):
        raise ValueError("give exactly one of --to (boundary value) or "
                         "--direction (initial value)")
    if args.to is not None:
        path = ge.geodesic_bvp(phi0, _load_diffeo(args.to, grid))
    else:
        k = _load_field(args.direction, grid, "direction")
        path = ge.geodesic_from_direction(rm.r_map(phi0), k)
    _log("[INFO] exit times: forward %s, backward %s"
         % (_fmt(path.t_exit_forward), _fmt(path.t_exit_backward)))
    rows = []
    for t in times:
        gamma = path.gamma_values(t)
        f = ge.evaluate(path, t).f.values
        for x, fv, gv in zip(grid.nodes, f, gamma):
            rows.append((t, x, fv, gv))
    _emit(("t", "x", "f", "gamma"), rows, args)
    return 0


def _cmd_distance(args) -> int:
    grid = _parse_grid(args.grid or _LINE_GRID_DEFAULT, periodic=False)
    phi0 = _load_diffeo(_require(args.from_, "--from"), grid)
    phi1 = _load_diffeo(_require(args.to, "--to"), grid)
    d = ge.distance(phi0, phi1)
    _log("[OK] distance = %s" % _fmt(d))
    if args.output is not None or args.format == "json":
        _emit(("distance",), [(d,)], args)
    else:
        sys.stdout.write(_fmt(d) + "\n")
    return 0


def _cmd_solve_hs(args) -> int:
    if args.periodic:
        return _solve_hs_periodic(args)
    grid = _parse_grid(args.grid or _LINE_GRID_DEFAULT, periodic=False)
    times = _parse_times(args.times or "0,0.5,1")
    u0 = _load_velocity(_require(args.u0, "--u0"), grid)
    sol = hs.hs_solve(u0)
    _log("[INFO] t_blowup = %s" % _fmt(sol.t_blowup))
    rows = []
    for t in times:
        u, phi = hs.hs_eval(sol, t)
        for x, uv, fv in zip(grid.nodes, u.values, phi.f.values):
            rows.append((t, x, uv, fv))
    _emit(("t", "x", "u", "f"), rows, args)
    return 0


def _solve_hs_periodic(args) -> int:
    grid = _parse_grid(args.grid or _PERIODIC_GRID_DEFAULT, periodic=True)
    times = _parse_times(args.times or "0,0.5,1")
    u0 = _load_field(_require(args.u0, "--u0"), grid, "velocity")
    ident = pc.periodic_identity(grid)
    v = pc.tangent_r_periodic(ident, u0)
    gamma0 = pc.r_map_periodic(ident)
    rows = []
    for t in times:
        point = pc.sphere_exponential(gamma0, v, t)
        back = pc.r_inverse_periodic(point)
        for th, fv, gv in zip(grid.nodes, back.f.values,
                              point.gamma.values):
            rows.append((t, th, fv, gv))
    _emit(("t", "theta", "f", "gamma"), rows, args)
    return 0


def _cmd_solve_2hs(args) -> int:
    grid = _parse_grid(args.grid or _LINE_GRID_DEFAULT, periodic=False)
    times = _parse_times(args.times or "0,0.5,1")
    u0 = _load_velocity(_require(args.u0, "--u0"), grid)
    rho0 = _load_field(args.rho0 or "zero", grid, "density")
    try:
        sol = tc.twocomp_solve(u0, rho0)
    except HsgeoError as exc:
        raise ValueError("invalid density %r: %s" % (args.rho0, exc))
    _log("[INFO] t_breakdown = %s" % _fmt(sol.t_breakdown))
    rows = []
    for t in times:
        u, rho, _ = tc.twocomp_eval(sol, t)
        gamma = tc.twocomp_gamma(sol, t).gamma.values
        for x, uv, rv, gv in zip(grid.nodes, u.values, rho.values, gamma):
            rows.append((t, x, uv, rv, gv.real, gv.imag))
    _emit(("t", "x", "u", "rho", "re_gamma", "im_gamma"), rows, args)
    return 0


def _cmd_solitons(args) -> int:
    if args.positions is None or args.weights is None:
        raise ValueError("solitons needs --positions and --weights")
    y = _parse_floats(args.positions, "positions")
    a = _parse_floats(args.weights, "weights")
    times = _parse_times(args.times or "0,0.25,0.5,0.75,1")
    try:
        state = so.SolitonState(np.array(y), np.array(a))
    except (HsgeoError, ValueError) as exc:
        raise ValueError("invalid soliton data: %s" % exc)
    top = float(np.max(np.cumsum(state.a)))
    t_collapse = 2.0 / top if top > 0.0 else np.inf
    _log("[INFO] first collapse at t = %s" % _fmt(t_collapse))
    rows = []
    for t in times:
        flowed = so.soliton_flow_closed_form(state, t)
        rows.append((t,) + tuple(flowed.y) + tuple(flowed.a))
    n = state.n
    columns = (("t",) + tuple("y%d" % (i + 1) for i in range(n))
               + tuple("a%d" % (i + 1) for i in range(n)))
    _emit(columns, rows, args)
    return 0


def _cmd_blowup(args) -> int:
    grid = _parse_grid(args.grid or _LINE_GRID_DEFAULT, periodic=False)
    phi0 = _load_diffeo(args.from_ or "identity", grid)
    k = _load_field(_require(args.direction, "--direction"), grid,
                    "direction")
    path = ge.geodesic_from_direction(rm.r_map(phi0), k)
    _log("[INFO] backward exit at t = %s" % _fmt(-path.t_exit_backward))
    print("[OK] forward exit time T = %s" % _fmt(path.t_exit_forward))
    if args.output is not None:
        _emit(("t_exit_forward", "t_exit_backward"),
              [(path.t_exit_forward, path.t_exit_backward)], args)
    return 0


def _cmd_verify(args) -> int:
    # HSGEO_TOL needs no handling here: every construction reads it as
    # the tail tolerance (see funcspace.default_tail_tolerance)
    results = vf.run_all()
    print(vf.render_table(results))
    return 0 if vf.all_passed(results) else 2


# ---------------------------------------------------------------------------
# argument plumbing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # flag mistakes are configuration errors: exit 1, not argparse's 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def _add_common(sub, grid=True, times=True):
    sub.add_argument("-o", "--output", default=None,
                     help="output path (default: stdout)")
    sub.add_argument("--format", default=None, choices=("csv", "json"),
                     help="output format (default csv)")
    sub.add_argument("--config", default=None,
                     help="flat key=value config file; flags win")
    if grid:
        sub.add_argument("--grid", default=None,
                         help="n,xmin,xmax (default %s)"
                         % _LINE_GRID_DEFAULT)
    if times:
        sub.add_argument("--times", default=None,
                         help="comma-separated sorted sample times")


def _build_parser() -> _Parser:
    parser = _Parser(prog="hsgeo",
                     description="Exact geodesics, transport solutions and "
                                 "blow-up prediction via square-root "
                                 "lifting.")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    p = subs.add_parser("geodesic", help="sample a geodesic between or "
                                         "out of diffeomorphisms")
    p.add_argument("--from", dest="from_", default=None,
                   help="start: identity, family[:k=v,...], or file")
    p.add_argument("--to", default=None, help="end map (boundary value)")
    p.add_argument("--direction", default=None,
                   help="lift-space direction (initial value)")
    _add_common(p)

    p = subs.add_parser("distance", help="geodesic distance between maps")
    p.add_argument("--from", dest="from_", default=None)
    p.add_argument("--to", default=None)
    _add_common(p, times=False)

    p = subs.add_parser("solve-hs", help="analytic transport solution")
    p.add_argument("--u0", default=None,
                   help="initial velocity: family[:k=v,...] or CSV")
    p.add_argument("--periodic", action="store_true",
                   help="flow on the circle (grid spec is then just n)")
    _add_common(p)

    p = subs.add_parser("solve-2hs", help="coupled velocity-density flow")
    p.add_argument("--u0", default=None)
    p.add_argument("--rho0", default=None,
                   help="initial density (default zero)")
    _add_common(p)

    p = subs.add_parser("solitons", help="piecewise-linear kink dynamics")
    p.add_argument("--positions", default=None,
                   help="comma-separated kink positions")
    p.add_argument("--weights", default=None,
                   help="comma-separated slope jumps, summing to zero")
    _add_common(p, grid=False)

    p = subs.add_parser("blowup", help="exit time of a lift-space ray")
    p.add_argument("--from", dest="from_", default=None)
    p.add_argument("--direction", default=None)
    _add_common(p, times=False)

    p = subs.add_parser("verify", help="cross-module invariant suite")
    _add_common(p, grid=False, times=False)

    return parser


def _merge_config(args) -> None:
    if getattr(args, "config", None) is None:
        return
    with open(args.config) as fh:
        lines = fh.readlines()
    for lineno, line in enumerate(lines, 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        key, eq, value = text.partition("=")
        if not eq:
            raise ValueError("%s:%d: expected key=value, got %r"
                             % (args.config, lineno, text))
        dest = key.strip().replace("-", "_")
        if dest in ("from",):
            dest = "from_"
        if dest == "config" or not hasattr(args, dest):
            raise ValueError("%s:%d: unknown key %r for %r"
                             % (args.config, lineno, key.strip(),
                                args.command))
        value = value.strip()
        current = getattr(args, dest)
        if dest == "periodic":
            if current is False:
                setattr(args, dest,
                        value.lower() in ("1", "true", "yes", "on"))
        elif current is None:
            setattr(args, dest, value)


_HANDLERS = {
    "geodesic": _cmd_geodesic,
    "distance": _cmd_distance,
    "solve-hs": _cmd_solve_hs,
    "solve-2hs": _cmd_solve_2hs,
    "solitons": _cmd_solitons,
    "blowup": _cmd_blowup,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _merge_config(args)
        if args.format is None:
            args.format = "csv"
        if args.format not in ("csv", "json"):
            raise ValueError("format must be csv or json, got %r"
                             % args.format)
        return _HANDLERS[args.command](args)
    except (ValueError, OSError) as exc:
        _log("[FAIL] %s" % exc)
        return 1
    except HsgeoError as exc:
        _log("[FAIL] %s" % exc)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
