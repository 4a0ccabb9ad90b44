"""Grid-sampled functions on a truncated line or the circle.

All higher layers (diffeomorphisms, square-root lifts, solvers) work with
functions sampled on a uniform grid.  This module provides the grid and
function containers, finite-difference derivatives, quadrature, cumulative
integration from the left end of the window (standing in for -infinity),
tail limits, cubic Hermite interpolation with a monotonicity safeguard, and
the named function families used by tests and the CLI.

Decay classes record what is known about the behaviour outside the window:

    compact                vanishes outside a sub-window
    rapidly-decreasing     Schwartz-like decay at both ends
    integrable-derivatives W-type decay: the function and its derivatives
                           are integrable, values -> 0 at both ends
    bounded                no decay claimed (antiderivatives, velocities
                           with a limit at +infinity, ...)
    periodic               lives on the circle grid

The three decaying classes assert at construction that the sampled end
values are below the tail tolerance, so a too-narrow window fails loudly
instead of corrupting downstream integrals.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass

import numpy as np

from .errors import GridTooSmall, NotIntegrable, TailNotSettled

__all__ = [
    "Grid",
    "GridFunction",
    "Quadrature",
    "TRAPEZOID",
    "SIMPSON",
    "DECAY_CLASSES",
    "DECAYING_CLASSES",
    "default_tail_tolerance",
    "integrate",
    "derivative",
    "antiderivative_from_minus_infinity",
    "cumulative_values",
    "limit_at_plus_infinity",
    "limit_at_minus_infinity",
    "hermite_interp",
    "hermite_interp_derivative",
    "fd_slopes",
    "monotone_slopes",
    "compose_values",
    "family",
    "family_with_derivative",
    "gridfunction_from_csv",
    "gridfunction_to_csv",
]

DECAY_COMPACT = "compact"
DECAY_RAPID = "rapidly-decreasing"
DECAY_WTYPE = "integrable-derivatives"
DECAY_BOUNDED = "bounded"
DECAY_PERIODIC = "periodic"

DECAY_CLASSES = (DECAY_COMPACT, DECAY_RAPID, DECAY_WTYPE, DECAY_BOUNDED,
                 DECAY_PERIODIC)
DECAYING_CLASSES = (DECAY_COMPACT, DECAY_RAPID, DECAY_WTYPE)

_SUPPORT_EPS = 1e-14


def default_tail_tolerance() -> float:
    """Tail tolerance used by new GridFunctions.

    Defaults to 1e-10; the environment variable HSGEO_TOL overrides it
    (read on every call so CLI runs can tighten or loosen checks without
    touching code).
    """
    return float(os.environ.get("HSGEO_TOL", "1e-10"))


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform sampling grid, either a truncated line window or the circle.

    Attributes:
        nodes: strictly increasing sample points.
        kind: "line" for a window [x_min, x_max], "periodic" for the
            circle [0, 2*pi) sampled without the duplicate endpoint.
    """

    nodes: np.ndarray
    kind: str = "line"

    def __post_init__(self):
        nodes = np.ascontiguousarray(np.asarray(self.nodes, dtype=float))
        if nodes.ndim != 1 or nodes.size < 2:
            raise GridTooSmall("grid needs at least 2 nodes, got %r"
                               % (nodes.shape,))
        if self.kind not in ("line", "periodic"):
            raise ValueError("unknown grid kind %r" % (self.kind,))
        steps = np.diff(nodes)
        if np.any(steps <= 0.0):
            raise ValueError("grid nodes must be strictly increasing")
        h = steps[0]
        if np.max(np.abs(steps - h)) > 1e-12 * max(abs(h), 1.0):
            raise ValueError("grid spacing is not uniform")
        if self.kind == "periodic":
            if abs(nodes[0]) > 1e-12:
                raise ValueError("periodic grid must start at 0")
            period = nodes[-1] + h
            if abs(period - 2.0 * np.pi) > 1e-10:
                raise ValueError("periodic grid must span [0, 2*pi), got "
                                 "period %.17g" % period)
        nodes.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)

    @classmethod
    def line(cls, n: int = 2001, x_min: float = -10.0,
             x_max: float = 10.0) -> "Grid":
        return cls(np.linspace(x_min, x_max, n), "line")

    @classmethod
    def periodic(cls, n: int = 512) -> "Grid":
        return cls(np.linspace(0.0, 2.0 * np.pi, n, endpoint=False),
                   "periodic")

    @property
    def n(self) -> int:
        return self.nodes.size

    @property
    def h(self) -> float:
        return float(self.nodes[1] - self.nodes[0])

    @property
    def x_min(self) -> float:
        return float(self.nodes[0])

    @property
    def x_max(self) -> float:
        return float(self.nodes[-1])

    def matches(self, other: "Grid") -> bool:
        return (self.kind == other.kind and self.n == other.n
                and self.nodes[0] == other.nodes[0]
                and self.nodes[-1] == other.nodes[-1])


def ensure_same_grid(a: "Grid", b: "Grid", what: str = "operands") -> None:
    if not a.matches(b):
        raise ValueError("%s live on different grids" % what)


# ---------------------------------------------------------------------------
# grid functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GridFunction:
    """Sampled function together with its decay metadata.

    Attributes:
        grid: the sampling grid.
        values: samples at the grid nodes (float or complex).
        decay: one of DECAY_CLASSES.
        tail_tol: tolerance used for tail/limit assertions.
        support: for the compact class, the (lo, hi) window actually
            containing the nonzero samples; None when identically zero.
    """

    grid: Grid
    values: np.ndarray
    decay: str = DECAY_BOUNDED
    tail_tol: float = None
    support: tuple = None

    def __post_init__(self):
        vals = np.ascontiguousarray(np.asarray(self.values))
        if not np.iscomplexobj(vals):
            vals = vals.astype(float, copy=False)
        if vals.shape != (self.grid.n,):
            raise ValueError("values shape %r does not match grid size %d"
                             % (vals.shape, self.grid.n))
        if not np.all(np.isfinite(vals)):
            raise ValueError("values contain non-finite entries")
        if self.decay not in DECAY_CLASSES:
            raise ValueError("unknown decay class %r" % (self.decay,))
        if self.tail_tol is None:
            object.__setattr__(self, "tail_tol", default_tail_tolerance())
        if self.grid.kind == "periodic":
            if self.decay != DECAY_PERIODIC:
                raise ValueError("functions on a periodic grid must use the "
                                 "periodic decay class")
        elif self.decay == DECAY_PERIODIC:
            raise ValueError("periodic decay class needs a periodic grid")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        if self.decay in DECAYING_CLASSES:
            self._check_tails()
        if self.decay == DECAY_COMPACT:
            object.__setattr__(self, "support", self._find_support())

    def _check_tails(self):
        a = abs(self.values[0])
        b = abs(self.values[-1])
        if a > self.tail_tol or b > self.tail_tol:
            raise TailNotSettled(
                "decay class %r requires end values below %.3g, got "
                "|f(x_min)|=%.3g, |f(x_max)|=%.3g; widen the window"
                % (self.decay, self.tail_tol, a, b))

    def _find_support(self):
        nz = np.nonzero(np.abs(self.values) > _SUPPORT_EPS)[0]
        if nz.size == 0:
            return None
        lo, hi = nz[0], nz[-1]
        if lo == 0 or hi == self.grid.n - 1:
            raise TailNotSettled(
                "compact support touches the window boundary; widen the "
                "window or use a weaker decay class")
        x = self.grid.nodes
        return (float(x[lo]), float(x[hi]))

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def with_values(self, values, decay: str = None,
                    support: tuple = None) -> "GridFunction":
        return GridFunction(self.grid, values,
                            self.decay if decay is None else decay,
                            self.tail_tol, support)


def _weakest_decay(a: str, b: str) -> str:
    order = {DECAY_COMPACT: 0, DECAY_RAPID: 1, DECAY_WTYPE: 2,
             DECAY_BOUNDED: 3, DECAY_PERIODIC: 3}
    winner = a if order[a] >= order[b] else b
    if DECAY_PERIODIC in (a, b):
        return DECAY_PERIODIC
    return winner


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Quadrature:
    """Quadrature rule marker; see TRAPEZOID and SIMPSON."""

    rule: str

    def __post_init__(self):
        if self.rule not in ("trapezoid", "simpson"):
            raise ValueError("unknown quadrature rule %r" % (self.rule,))


TRAPEZOID = Quadrature("trapezoid")
SIMPSON = Quadrature("simpson")


def _as_rule(rule) -> str:
    if isinstance(rule, Quadrature):
        return rule.rule
    if isinstance(rule, str):
        return Quadrature(rule).rule
    raise TypeError("rule must be a Quadrature or rule name")


def integrate(f: GridFunction, rule=SIMPSON):
    """Integral of f over the window (line) or the full period (circle).

    Composite Simpson (default) is exact for cubics on the line; an odd
    interval count is handled with a 3/8 block at the right end.  On the
    periodic grid both rules coincide with the rectangle rule, which is
    the natural (spectrally accurate) choice on a full period.
    """
    name = _as_rule(rule)
    v = f.values
    h = f.grid.h
    if f.grid.kind == "periodic":
        return _maybe_real(h * v.sum())
    if name == "trapezoid":
        return _maybe_real(h * (v.sum() - 0.5 * (v[0] + v[-1])))
    return _maybe_real(_simpson_line(v, h))


def _maybe_real(x):
    return x if np.iscomplexobj(np.asarray(x)) else float(x)


def _simpson_line(v: np.ndarray, h: float):
    m = v.size - 1
    if m < 1:
        return 0.0
    if m == 1:
        return h * 0.5 * (v[0] + v[1])
    if m % 2 == 0:
        return _simpson_even(v, h)
    if m == 3:
        return _three_eighths(v, h)
    # odd interval count >= 5: Simpson on the even prefix, 3/8 on the tail
    return _simpson_even(v[:m - 2], h) + _three_eighths(v[m - 3:], h)


def _simpson_even(v: np.ndarray, h: float):
    return (h / 3.0) * (v[0] + v[-1] + 4.0 * v[1:-1:2].sum()
                        + 2.0 * v[2:-1:2].sum())


def _three_eighths(v: np.ndarray, h: float):
    return (3.0 * h / 8.0) * (v[0] + 3.0 * v[1] + 3.0 * v[2] + v[3])


# ---------------------------------------------------------------------------
# finite-difference derivative
# ---------------------------------------------------------------------------

def fd_slopes(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order finite-difference slopes on a uniform line grid.

    Five-point central stencils in the interior, one-sided five-point
    stencils at the two nodes next to each boundary.  Falls back to
    second order for grids with fewer than 5 nodes.
    """
    v = np.asarray(values)
    n = v.size
    if n < 3:
        raise GridTooSmall("derivative needs at least 3 nodes, got %d" % n)
    out = np.empty_like(v)
    if n < 5:
        out[1:-1] = (v[2:] - v[:-2]) / (2.0 * h)
        out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
        out[-1] = (3.0 * v[-1] - 4.0 * v[-2] + v[-3]) / (2.0 * h)
        return out
    c = 1.0 / (12.0 * h)
    out[2:-2] = c * (v[:-4] - 8.0 * v[1:-3] + 8.0 * v[3:-1] - v[4:])
    out[0] = c * (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2]
                  + 16.0 * v[3] - 3.0 * v[4])
    out[1] = c * (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2]
                  - 6.0 * v[3] + v[4])
    out[-2] = -c * (-3.0 * v[-1] - 10.0 * v[-2] + 18.0 * v[-3]
                    - 6.0 * v[-4] + v[-5])
    out[-1] = -c * (-25.0 * v[-1] + 48.0 * v[-2] - 36.0 * v[-3]
                    + 16.0 * v[-4] - 3.0 * v[-5])
    return out


def _fd_slopes_periodic(values: np.ndarray, h: float) -> np.ndarray:
    v = np.asarray(values)
    n = v.size
    if n < 3:
        raise GridTooSmall("derivative needs at least 3 nodes, got %d" % n)
    if n < 5:
        return (np.roll(v, -1) - np.roll(v, 1)) / (2.0 * h)
    return (np.roll(v, 2) - 8.0 * np.roll(v, 1) + 8.0 * np.roll(v, -1)
            - np.roll(v, -2)) / (12.0 * h)


def derivative(f: GridFunction) -> GridFunction:
    """Nodewise derivative of a GridFunction (4th order).

    The decay class is carried over unchanged: derivatives of decaying
    functions decay, and nothing better is claimed for bounded input.
    """
    if f.grid.kind == "periodic":
        dv = _fd_slopes_periodic(f.values, f.grid.h)
        return GridFunction(f.grid, dv, DECAY_PERIODIC, f.tail_tol)
    dv = fd_slopes(f.values, f.grid.h)
    return GridFunction(f.grid, dv, f.decay, f.tail_tol)


# ---------------------------------------------------------------------------
# cumulative integration from the left
# ---------------------------------------------------------------------------

def _poly4_weights() -> np.ndarray:
    # W[j, k] = integral over [j, j+1] of the Lagrange basis polynomial
    # through nodes {0,1,2,3,4}, unit spacing.  Small exact integers, so
    # solving the Vandermonde system in floats is fine.
    vand = np.vander(np.arange(5.0), increasing=True)
    coeffs = np.linalg.inv(vand)  # coeffs[p, k]: monomial p of basis k
    powers = np.arange(1.0, 6.0)
    j = np.arange(4.0)[:, None]
    mono_int = ((j + 1.0) ** powers - j ** powers) / powers  # (4, 5)
    return mono_int @ coeffs


_POLY4_W = _poly4_weights()


def cumulative_values(v: np.ndarray, h: float, rule: str) -> np.ndarray:
    """Running integral of nodal values with out[0] = 0 (low-level core).

    Rule "poly4" integrates a local degree-4 interpolant per interval,
    "trapezoid" the chord.  Callers are responsible for the meaning of the
    left anchor.
    """
    n = v.size
    if rule == "trapezoid" or n < 5:
        steps = 0.5 * h * (v[1:] + v[:-1])
    elif rule == "poly4":
        # integrate the local degree-4 interpolant over each interval;
        # interval i uses the 5-node window starting at clip(i-1, 0, n-5)
        i = np.arange(n - 1)
        w = np.clip(i - 1, 0, n - 5)
        win = v[w[:, None] + np.arange(5)[None, :]]
        steps = h * np.einsum("ij,ij->i", _POLY4_W[i - w], win)
    else:
        raise ValueError("unknown cumulative rule %r" % (rule,))
    out = np.empty(n, dtype=steps.dtype)
    out[0] = 0.0
    np.cumsum(steps, out=out[1:])
    return out


def antiderivative_from_minus_infinity(f: GridFunction,
                                       rule: str = "poly4") -> GridFunction:
    """Cumulative integral F(x) = int_{-inf}^x f, with F(x_min) = 0.

    The decaying classes guarantee the tail to the left of the window
    contributes below the tail tolerance, so starting the accumulation at
    zero is justified.  rule "poly4" integrates a local degree-4
    interpolant per interval (5th-order steps); rule "trapezoid" is exact
    for piecewise-linear integrands and for piecewise-constant integrands
    whose jumps sit at cell midpoints.

    Raises:
        NotIntegrable: for bounded or periodic input.
    """
    if f.decay not in DECAYING_CLASSES:
        raise NotIntegrable(
            "antiderivative from -infinity needs a decaying class, got %r"
            % (f.decay,))
    out = cumulative_values(f.values, f.grid.h, rule)
    return GridFunction(f.grid, out, DECAY_BOUNDED, f.tail_tol)


# ---------------------------------------------------------------------------
# tail limits
# ---------------------------------------------------------------------------

def _tail_block(f: GridFunction, side: str) -> np.ndarray:
    m = max(2, f.grid.n // 100)
    return f.values[-m:] if side == "plus" else f.values[:m]


def _limit(f: GridFunction, side: str):
    if f.grid.kind == "periodic":
        raise ValueError("limits at infinity are undefined on the circle")
    block = _tail_block(f, side)
    spread = np.max(np.abs(block - block[0]))
    if spread > f.tail_tol:
        raise TailNotSettled(
            "values in the last 1%% of the window near %s infinity vary by "
            "%.3g > %.3g; widen the window" %
            ("+" if side == "plus" else "-", spread, f.tail_tol))
    edge = f.values[-1] if side == "plus" else f.values[0]
    return _maybe_real(edge)


def limit_at_plus_infinity(f: GridFunction):
    """Settled value at the right end of the window.

    Asserts the last 1% of nodes vary by less than the tail tolerance and
    returns the final sample.
    """
    return _limit(f, "plus")


def limit_at_minus_infinity(f: GridFunction):
    """Settled value at the left end of the window (mirror of the +inf op)."""
    return _limit(f, "minus")


# ---------------------------------------------------------------------------
# cubic Hermite interpolation
# ---------------------------------------------------------------------------

def monotone_slopes(values: np.ndarray, slopes: np.ndarray,
                    h: float) -> np.ndarray:
    """Fritsch-Carlson safeguard for Hermite slopes of monotone data.

    Scales slopes into the monotonicity region (alpha^2 + beta^2 <= 9 per
    interval); leaves well-behaved slopes untouched.  Intended for
    interpolating diffeomorphism values, where the data is monotone but
    finite-difference slopes could overshoot near sharp features.
    """
    v = np.asarray(values, dtype=float)
    m = np.array(slopes, dtype=float)
    d = np.diff(v) / h
    tiny = 1e-300
    flat = np.abs(d) < tiny
    if np.any(flat):
        idx = np.nonzero(flat)[0]
        m[idx] = 0.0
        m[idx + 1] = 0.0
    dsafe = np.where(flat, 1.0, d)
    alpha = m[:-1] / dsafe
    beta = m[1:] / dsafe
    # slopes opposing the local secant force a fold; clamp them to zero
    m[:-1] = np.where(alpha < 0.0, 0.0, m[:-1])
    m[1:] = np.where(beta < 0.0, 0.0, m[1:])
    alpha = np.maximum(m[:-1] / dsafe, 0.0)
    beta = np.maximum(m[1:] / dsafe, 0.0)
    r2 = alpha * alpha + beta * beta
    factor = np.where(r2 > 9.0, 3.0 / np.sqrt(np.maximum(r2, tiny)), 1.0)
    scale = np.ones_like(m)
    scale[:-1] = factor
    scale[1:] = np.minimum(scale[1:], factor)
    return m * scale


def hermite_interp(x0: float, h: float, values: np.ndarray,
                   slopes: np.ndarray, xq: np.ndarray) -> np.ndarray:
    """Evaluate the cubic Hermite interpolant on a uniform grid.

    Queries are assumed to lie within the grid window (callers handle
    tails); values at most one spacing outside are clamped to the edge
    interval, which keeps roundoff-level excursions harmless.
    """
    v = np.asarray(values)
    m = np.asarray(slopes)
    xq = np.asarray(xq)
    n = v.size
    idx = np.clip(np.floor((xq - x0) / h).astype(int), 0, n - 2)
    s = (xq - (x0 + idx * h)) / h
    s2 = s * s
    s3 = s2 * s
    h00 = 2.0 * s3 - 3.0 * s2 + 1.0
    h10 = s3 - 2.0 * s2 + s
    h01 = -2.0 * s3 + 3.0 * s2
    h11 = s3 - s2
    return (h00 * v[idx] + h10 * h * m[idx]
            + h01 * v[idx + 1] + h11 * h * m[idx + 1])


def hermite_interp_derivative(x0: float, h: float, values: np.ndarray,
                              slopes: np.ndarray,
                              xq: np.ndarray) -> np.ndarray:
    """Derivative of the cubic Hermite interpolant at the query points."""
    v = np.asarray(values)
    m = np.asarray(slopes)
    xq = np.asarray(xq)
    n = v.size
    idx = np.clip(np.floor((xq - x0) / h).astype(int), 0, n - 2)
    s = (xq - (x0 + idx * h)) / h
    s2 = s * s
    d00 = (6.0 * s2 - 6.0 * s) / h
    d10 = 3.0 * s2 - 4.0 * s + 1.0
    d01 = (-6.0 * s2 + 6.0 * s) / h
    d11 = 3.0 * s2 - 2.0 * s
    return (d00 * v[idx] + d10 * m[idx]
            + d01 * v[idx + 1] + d11 * m[idx + 1])


def compose_values(g: GridFunction, points: np.ndarray,
                   slopes: np.ndarray = None) -> np.ndarray:
    """Values of g at arbitrary points, with constant tail extension.

    Points inside the window are interpolated (cubic Hermite, slopes from
    4th-order finite differences unless given).  Points outside use the
    nearest end value, justified for decaying classes and asserted for
    bounded input via the usual settledness check.

    Raises:
        TailNotSettled: an out-of-window point needs a tail that has not
            settled.
    """
    if g.grid.kind == "periodic":
        raise ValueError("compose_values is a line-grid operation")
    x = g.grid.nodes
    pts = np.asarray(points, dtype=float)
    if slopes is None:
        slopes = fd_slopes(g.values, g.grid.h)
    eps = 1e-12 * (g.grid.x_max - g.grid.x_min)
    left = pts < x[0] - eps
    right = pts > x[-1] + eps
    if np.any(left):
        limit_at_minus_infinity(g)  # raises if the tail is not settled
    if np.any(right):
        limit_at_plus_infinity(g)
    inner = np.clip(pts, x[0], x[-1])
    out = hermite_interp(g.grid.x_min, g.grid.h, g.values, slopes, inner)
    if np.any(left):
        out = np.where(left, g.values[0], out)
    if np.any(right):
        out = np.where(right, g.values[-1], out)
    return out


# ---------------------------------------------------------------------------
# named families
# ---------------------------------------------------------------------------

def _gaussian(x, amp=1.0, center=0.0, width=1.0):
    v = amp * np.exp(-((x - center) / width) ** 2)
    dv = v * (-2.0 * (x - center) / width ** 2)
    return v, dv


def _bump(x, amp=1.0, lo=-1.0, hi=1.0):
    # smooth bump exp(-1/(x-lo)^2) * exp(-1/(x-hi)^2) inside (lo, hi),
    # identically zero outside (the product formula alone does not vanish
    # there, so the truncation is part of the definition)
    v = np.zeros_like(x)
    dv = np.zeros_like(x)
    inside = (x > lo) & (x < hi)
    xi = x[inside]
    with np.errstate(over="ignore"):
        core = np.exp(-1.0 / (xi - lo) ** 2 - 1.0 / (xi - hi) ** 2)
    v[inside] = amp * core
    dv[inside] = v[inside] * (2.0 / (xi - lo) ** 3 + 2.0 / (xi - hi) ** 3)
    return v, dv


def _logistic(x, amp=1.0, center=0.0, rate=1.0):
    sig = 1.0 / (1.0 + np.exp(-rate * (x - center)))
    return amp * sig, amp * rate * sig * (1.0 - sig)


def _sine(x, amp=1.0, freq=1.0, phase=0.0):
    return (amp * np.sin(freq * x + phase),
            amp * freq * np.cos(freq * x + phase))


def _zero(x):
    return np.zeros_like(x), np.zeros_like(x)


_FAMILIES = {
    "gaussian": (_gaussian, DECAY_RAPID),
    "bump": (_bump, DECAY_COMPACT),
    "logistic": (_logistic, DECAY_BOUNDED),
    "sine": (_sine, DECAY_BOUNDED),
    "zero": (_zero, DECAY_COMPACT),
}

# steep negative logistic used in the blow-up walkthroughs: -1/(4+4e^(-10x))
_ALIASES = {
    "logistic-neg": ("logistic", {"amp": -0.25, "rate": 10.0}),
}


def family_with_derivative(name: str, grid: Grid, **params):
    """Build (f, f') for a named family with analytic derivative samples."""
    if name in _ALIASES:
        base, defaults = _ALIASES[name]
        merged = dict(defaults)
        merged.update(params)
        return family_with_derivative(base, grid, **merged)
    if name not in _FAMILIES:
        raise ValueError("unknown family %r (known: %s)"
                         % (name, ", ".join(sorted(_FAMILIES) +
                                            sorted(_ALIASES))))
    builder, decay = _FAMILIES[name]
    v, dv = builder(grid.nodes, **params)
    if grid.kind == "periodic":
        decay = DECAY_PERIODIC
        dec_d = DECAY_PERIODIC
    elif name == "sine":
        decay = DECAY_BOUNDED
        dec_d = DECAY_BOUNDED
    else:
        dec_d = decay
    f = GridFunction(grid, v, decay)
    fp = GridFunction(grid, dv, dec_d)
    return f, fp


def family(name: str, grid: Grid, **params) -> GridFunction:
    """Sample a named function family on the grid.

    Families: gaussian(amp, center, width), bump(amp, lo, hi) with compact
    support, logistic(amp, center, rate), sine(amp, freq, phase), zero,
    plus the alias logistic-neg (steep negative logistic).
    """
    return family_with_derivative(name, grid, **params)[0]


# ---------------------------------------------------------------------------
# CSV ingestion
# ---------------------------------------------------------------------------

def _parse_rows(path):
    rows = []
    with open(path, "r", newline="") as fh:
        sample = fh.read(4096)
        fh.seek(0)
        delim = "," if "," in sample else None
        if delim:
            reader = csv.reader(fh)
            raw = [row for row in reader if row and not
                   row[0].lstrip().startswith("#")]
        else:
            raw = [line.split() for line in fh
                   if line.strip() and not line.lstrip().startswith("#")]
    if not raw:
        raise ValueError("no data rows in %s" % path)
    start = 0
    try:
        float(raw[0][0])
    except ValueError:
        start = 1  # header row
    for row in raw[start:]:
        rows.append([float(c) for c in row])
    return np.asarray(rows, dtype=float)


def gridfunction_from_csv(path, decay: str = DECAY_BOUNDED,
                          kind: str = "line") -> GridFunction:
    """Read a sampled function from CSV.

    Two columns (x, value) give a real function, three columns
    (x, re, im) a complex one.  A header row and '#' comment lines are
    skipped; comma or whitespace delimited.
    """
    data = _parse_rows(path)
    if data.shape[1] not in (2, 3):
        raise ValueError("expected 2 or 3 columns, got %d" % data.shape[1])
    grid = Grid(data[:, 0], kind)
    if data.shape[1] == 2:
        vals = data[:, 1]
    else:
        vals = data[:, 1] + 1j * data[:, 2]
    return GridFunction(grid, vals, decay)


def gridfunction_to_csv(f: GridFunction, path) -> None:
    """Write (x, value) rows; complex functions get (x, re, im)."""
    with open(path, "w", newline="") as fh:
        if f.is_complex:
            fh.write("x,re,im\n")
            for x, v in zip(f.grid.nodes, f.values):
                fh.write("%.17g,%.17g,%.17g\n" % (x, v.real, v.imag))
        else:
            fh.write("x,value\n")
            for x, v in zip(f.grid.nodes, f.values):
                fh.write("%.17g,%.17g\n" % (x, v))
