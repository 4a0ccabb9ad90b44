"""Orientation-preserving diffeomorphisms of the line on a grid window.

A diffeomorphism is stored as its displacement f = phi - Id together with
nodal slopes f' (analytic where a family provides them, finite differences
otherwise).  Group classes refine the behaviour at infinity:

    A    f -> 0 at both ends (no shift)
    A1   f -> 0 at -infinity, a finite shift allowed at +infinity
    A2   finite shifts allowed at both ends

Composition and inversion act on the grid data through monotone cubic
Hermite interpolation; values requested outside the window use constant
tail extension where the tails have settled and fail loudly otherwise.
MonotoneMap is the same record with phi' >= 0 only, the completion in
which geodesics continue past blow-up.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (ConstraintViolated, DerivativeTooSmall,
                     RangeExceedsWindow, TailNotSettled)
from .funcspace import (DECAY_BOUNDED, Grid, GridFunction, ensure_same_grid,
                        fd_slopes, hermite_interp, hermite_interp_derivative,
                        limit_at_minus_infinity, limit_at_plus_infinity,
                        monotone_slopes)

__all__ = [
    "Diffeo",
    "MonotoneMap",
    "GROUP_CLASSES",
    "identity",
    "compose",
    "invert",
    "shifts",
    "diffeo_from_family",
    "diffeo_to_csv",
    "diffeo_from_csv",
    "diffeo_to_json",
    "diffeo_from_json",
]

GROUP_CLASSES = ("A", "A1", "A2")
_CLASS_RANK = {"A": 0, "A1": 1, "A2": 2}

_SLOPE_FLOOR = 1e-8  # operations refuse below this; construction needs > 0
_MONOTONE_SLACK = 1e-12  # MonotoneMap tolerates phi' >= -this


@dataclass(frozen=True, eq=False)
class Diffeo:
    """Diffeomorphism phi = Id + f with strictly positive slope.

    Attributes:
        f: displacement phi - Id.
        f_prime: nodal slopes of f, so phi' = 1 + f_prime.
        group_class: "A", "A1" or "A2".
        min_slope: recorded min of phi' over the nodes.
    """

    f: GridFunction
    f_prime: GridFunction
    group_class: str
    min_slope: float = None

    def __post_init__(self):
        _validate_map(self, strict=True)

    @property
    def grid(self) -> Grid:
        return self.f.grid

    @property
    def phi_values(self) -> np.ndarray:
        return self.grid.nodes + self.f.values

    @property
    def phi_slopes(self) -> np.ndarray:
        return 1.0 + self.f_prime.values


@dataclass(frozen=True, eq=False)
class MonotoneMap:
    """Monotone limit of diffeomorphisms: phi' >= 0, folds allowed.

    Same data layout as Diffeo; produced when a geodesic is evaluated at or
    past its exit time.
    """

    f: GridFunction
    f_prime: GridFunction
    group_class: str
    min_slope: float = None

    def __post_init__(self):
        _validate_map(self, strict=False)

    @property
    def grid(self) -> Grid:
        return self.f.grid

    @property
    def phi_values(self) -> np.ndarray:
        return self.grid.nodes + self.f.values

    @property
    def phi_slopes(self) -> np.ndarray:
        return 1.0 + self.f_prime.values


def _validate_map(m, strict: bool) -> None:
    if m.f.grid.kind != "line":
        raise ValueError("Diffeo lives on a line grid; see periodic_ch for "
                         "circle maps")
    ensure_same_grid(m.f.grid, m.f_prime.grid, "f and f_prime")
    if m.f.is_complex or m.f_prime.is_complex:
        raise ValueError("diffeomorphism data must be real")
    if m.group_class not in GROUP_CLASSES:
        raise ValueError("unknown group class %r" % (m.group_class,))
    slopes = 1.0 + m.f_prime.values
    ms = float(np.min(slopes))
    object.__setattr__(m, "min_slope", ms)
    if strict:
        if ms <= 0.0:
            raise ConstraintViolated(
                "phi' must stay positive, found min %.6g" % ms)
    elif ms < -_MONOTONE_SLACK:
        raise ConstraintViolated(
            "monotone map needs phi' >= 0 up to slack, found min %.6g" % ms)
    tol = m.f.tail_tol
    if m.group_class == "A":
        a = abs(m.f.values[0])
        b = abs(m.f.values[-1])
        if a > tol or b > tol:
            raise TailNotSettled(
                "class A requires vanishing shifts, got f(x_min)=%.3g, "
                "f(x_max)=%.3g" % (a, b))
    elif m.group_class == "A1":
        a = abs(m.f.values[0])
        if a > tol:
            raise TailNotSettled(
                "class A1 requires f(x_min) below %.3g, got %.3g"
                % (tol, a))


def _build(cls, f: GridFunction, group_class: str,
           f_prime: GridFunction = None):
    if f_prime is None:
        f_prime = GridFunction(f.grid, fd_slopes(f.values, f.grid.h),
                               DECAY_BOUNDED, f.tail_tol)
    return cls(f, f_prime, group_class)


def make_diffeo(f: GridFunction, group_class: str = "A1",
                f_prime: GridFunction = None) -> Diffeo:
    """Build a Diffeo from its displacement; slopes by FD when not given."""
    return _build(Diffeo, f, group_class, f_prime)


def make_monotone_map(f: GridFunction, group_class: str = "A1",
                      f_prime: GridFunction = None) -> MonotoneMap:
    return _build(MonotoneMap, f, group_class, f_prime)


def identity(grid: Grid) -> Diffeo:
    z = GridFunction(grid, np.zeros(grid.n), "compact")
    return Diffeo(z, z, "A")


def diffeo_from_family(name: str, grid: Grid, group_class: str = None,
                       **params) -> Diffeo:
    """Diffeo Id + f with f from a named funcspace family.

    The family's analytic derivative provides the nodal slopes.  The group
    class defaults to "A" for families decaying at both ends and "A1"
    otherwise (e.g. logistic displacements carry a right shift).
    """
    from .funcspace import DECAYING_CLASSES, family_with_derivative
    f, fp = family_with_derivative(name, grid, **params)
    if group_class is None:
        group_class = "A" if f.decay in DECAYING_CLASSES else "A1"
    return Diffeo(f, fp, group_class)


# ---------------------------------------------------------------------------
# group operations
# ---------------------------------------------------------------------------

def _interp_phi(phi, points: np.ndarray):
    """phi and phi' of the monotone Hermite interpolant at given points.

    Points outside the window use constant tail extension of f when the
    corresponding tail has settled; otherwise RangeExceedsWindow.
    """
    grid = phi.grid
    x = grid.nodes
    vals = phi.phi_values
    slopes = monotone_slopes(vals, phi.phi_slopes, grid.h)
    eps = 1e-12 * (grid.x_max - grid.x_min)
    left = points < x[0] - eps
    right = points > x[-1] + eps
    for mask, side, limit_op in ((left, "left", limit_at_minus_infinity),
                                 (right, "right", limit_at_plus_infinity)):
        if np.any(mask):
            try:
                limit_op(phi.f)
            except TailNotSettled as exc:
                raise RangeExceedsWindow(
                    "composition needs phi beyond the %s edge of the window "
                    "but the tail has not settled: %s" % (side, exc)) from exc
    inner = np.clip(points, x[0], x[-1])
    out = hermite_interp(grid.x_min, grid.h, vals, slopes, inner)
    dout = hermite_interp_derivative(grid.x_min, grid.h, vals, slopes, inner)
    if np.any(left):
        out = np.where(left, points + phi.f.values[0], out)
        dout = np.where(left, 1.0, dout)
    if np.any(right):
        out = np.where(right, points + phi.f.values[-1], out)
        dout = np.where(right, 1.0, dout)
    return out, dout


def compose(phi, psi):
    """Composition phi o psi on the common grid.

    The result's group class is the weakest of the two inputs.  Returns a
    MonotoneMap when either input is one, a Diffeo otherwise.
    """
    ensure_same_grid(phi.grid, psi.grid, "composition operands")
    y = psi.phi_values
    phi_at_y, dphi_at_y = _interp_phi(phi, y)
    f_vals = phi_at_y - psi.grid.nodes
    fp_vals = dphi_at_y * psi.phi_slopes - 1.0
    rank = max(_CLASS_RANK[phi.group_class], _CLASS_RANK[psi.group_class])
    group_class = GROUP_CLASSES[rank]
    tol = max(phi.f.tail_tol, psi.f.tail_tol)
    f = GridFunction(phi.grid, f_vals, DECAY_BOUNDED, tol)
    fp = GridFunction(phi.grid, fp_vals, DECAY_BOUNDED, tol)
    cls = Diffeo if (isinstance(phi, Diffeo) and isinstance(psi, Diffeo)) \
        else MonotoneMap
    return cls(f, fp, group_class)


def invert(phi: Diffeo) -> Diffeo:
    """Inverse diffeomorphism sampled on the same grid.

    Solves phi(y) = x per node with safeguarded Newton iteration on the
    monotone interpolant (bisection fallback keeps the bracket).  Node
    targets outside the range of phi on the window use the settled tails.

    Raises:
        DerivativeTooSmall: min phi' < 1e-8.
    """
    if phi.min_slope < _SLOPE_FLOOR:
        raise DerivativeTooSmall(
            "inversion needs min phi' >= %.0e, got %.3g"
            % (_SLOPE_FLOOR, phi.min_slope))
    grid = phi.grid
    x = grid.nodes
    vals = phi.phi_values
    slopes = monotone_slopes(vals, phi.phi_slopes, grid.h)
    targets = x

    below = targets < vals[0]
    above = targets > vals[-1]
    inside = ~(below | above)
    y = np.empty_like(targets)

    # tails: phi(y) = y + shift there, so y = x - shift
    if np.any(below):
        try:
            limit_at_minus_infinity(phi.f)
        except TailNotSettled as exc:
            raise RangeExceedsWindow(
                "inverse needs the left tail of phi but it has not "
                "settled: %s" % exc) from exc
        y[below] = targets[below] - phi.f.values[0]
    if np.any(above):
        try:
            limit_at_plus_infinity(phi.f)
        except TailNotSettled as exc:
            raise RangeExceedsWindow(
                "inverse needs the right tail of phi but it has not "
                "settled: %s" % exc) from exc
        y[above] = targets[above] - phi.f.values[-1]

    if np.any(inside):
        t = targets[inside]
        idx = np.clip(np.searchsorted(vals, t) - 1, 0, grid.n - 2)
        lo = x[idx]
        hi = x[idx + 1]
        # linear initial guess inside the bracketing cell
        denom = vals[idx + 1] - vals[idx]
        denom = np.where(denom <= 0, grid.h, denom)
        yk = lo + (t - vals[idx]) / denom * grid.h
        for _ in range(60):
            fk = hermite_interp(grid.x_min, grid.h, vals, slopes, yk) - t
            lo = np.where(fk <= 0, yk, lo)
            hi = np.where(fk > 0, yk, hi)
            dk = hermite_interp_derivative(grid.x_min, grid.h, vals,
                                           slopes, yk)
            step = fk / np.where(np.abs(dk) < _SLOPE_FLOOR, 1.0, dk)
            cand = yk - step
            bad = (np.abs(dk) < _SLOPE_FLOOR) | (cand <= lo) | (cand >= hi)
            cand = np.where(bad, 0.5 * (lo + hi), cand)
            done = np.abs(fk) < 1e-12 * (1.0 + np.abs(t))
            yk = np.where(done, yk, cand)
            if np.all(done) or np.max(hi - lo) < 1e-15:
                break
        y[inside] = yk

    f_vals = y - targets
    phi_prime_at_y = hermite_interp_derivative(grid.x_min, grid.h, vals,
                                               slopes, np.clip(y, x[0],
                                                               x[-1]))
    outside = below | above
    if np.any(outside):
        phi_prime_at_y = np.where(outside, 1.0, phi_prime_at_y)
    fp_vals = 1.0 / phi_prime_at_y - 1.0
    f = GridFunction(grid, f_vals, DECAY_BOUNDED, phi.f.tail_tol)
    fp = GridFunction(grid, fp_vals, DECAY_BOUNDED, phi.f.tail_tol)
    return Diffeo(f, fp, phi.group_class)


def shifts(phi) -> tuple:
    """Shifts (f(-inf), f(+inf)) of a diffeomorphism.

    Class A returns (0.0, 0.0) after asserting both tails vanish; the
    other classes return the settled tail values (raising TailNotSettled
    when the window is too narrow to read them off).
    """
    if phi.group_class == "A":
        # construction already asserted the end values; make sure the
        # tails are actually flat, not just passing through zero
        limit_at_minus_infinity(phi.f)
        limit_at_plus_infinity(phi.f)
        return (0.0, 0.0)
    left = limit_at_minus_infinity(phi.f)
    right = limit_at_plus_infinity(phi.f)
    return (float(left), float(right))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def diffeo_to_csv(phi, path) -> None:
    """Write rows (x, phi(x) - x) with a header; 17 significant digits."""
    with open(path, "w", newline="") as fh:
        fh.write("x,f\n")
        for x, v in zip(phi.grid.nodes, phi.f.values):
            fh.write("%.17g,%.17g\n" % (x, v))


def diffeo_from_csv(path, group_class: str = "A1") -> Diffeo:
    """Read a diffeomorphism from (x, f) rows; slopes by finite differences.

    The CSV carries no class tag, so the caller chooses one (default A1).
    """
    from .funcspace import gridfunction_from_csv
    f = gridfunction_from_csv(path, decay=DECAY_BOUNDED)
    return make_diffeo(f, group_class)


def diffeo_to_json(phi, path=None):
    """Serialize to the JSON object {grid, f, class}.

    Returns the document as a string when path is None, otherwise writes
    the file.  json round-trips floats exactly (shortest-repr encoding).
    """
    grid = phi.grid
    doc = {
        "grid": {"kind": grid.kind, "n": grid.n,
                 "x_min": grid.x_min, "x_max": grid.x_max},
        "f": [float(v) for v in phi.f.values],
        "class": phi.group_class,
    }
    text = json.dumps(doc)
    if path is None:
        return text
    with open(path, "w") as fh:
        fh.write(text)
    return None


def diffeo_from_json(source) -> Diffeo:
    """Inverse of diffeo_to_json; accepts a path or a JSON string."""
    text = None
    try:
        with open(source, "r") as fh:
            text = fh.read()
    except (OSError, TypeError):
        text = source
    doc = json.loads(text)
    g = doc["grid"]
    if g["kind"] != "line":
        raise ValueError("JSON diffeo must live on a line grid")
    grid = Grid.line(g["n"], g["x_min"], g["x_max"])
    f = GridFunction(grid, np.asarray(doc["f"], dtype=float), DECAY_BOUNDED)
    return make_diffeo(f, doc["class"])
