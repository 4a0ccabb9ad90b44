"""Analytic solution of the Hunter-Saxton equation on the line.

The transport equation u_t = -u u_x + (1/2) int_{-inf}^x u_x^2 dy is the
geodesic equation of the homogeneous H^1 metric; in lift coordinates the
flow from the identity is the straight line t -> t u_0'.  Everything here
is closed-form in the initial slopes: the flow map comes from the inverse
lift, the velocity from composing quadratures of u_0' with the inverse
flow map, and the breakdown time from the most negative initial slope.
No time stepping is performed anywhere.
"""

from dataclasses import dataclass

import numpy as np

from .connection import TangentVectorAtId
from .diffeo import Diffeo, invert
from .errors import PastBlowup
from .funcspace import (DECAY_BOUNDED, DECAY_RAPID, DECAY_WTYPE,
                        GridFunction, antiderivative_from_minus_infinity,
                        compose_values, derivative, ensure_same_grid)
from .geodesic import GeodesicPath, evaluate, geodesic_from_direction
from .rmap import RPoint

__all__ = [
    "HSSolution",
    "hs_solve",
    "hs_eval",
    "hs_phi",
    "hs_slopes",
    "naive_variational_residual",
]


@dataclass(frozen=True, eq=False)
class HSSolution:
    """Closed-form solution record for one initial velocity.

    Attributes:
        u0: initial velocity field (vanishing at -infinity).
        path: the lift-space line from the identity with direction u0'.
        t_blowup: 2/|min u0'| when some slope is negative, +inf otherwise.
        cum_slope_sq: int_{-inf}^x u0'(y)^2 dy, precomputed once.
    """

    u0: TangentVectorAtId
    path: GeodesicPath
    t_blowup: float
    cum_slope_sq: GridFunction

    @property
    def grid(self):
        return self.u0.grid


def hs_solve(u0: TangentVectorAtId, *, u0_slope: GridFunction = None,
             cumulative_rule: str = "poly4") -> HSSolution:
    """Set up the analytic solution with initial velocity u0.

    The lift direction is u0'; pass analytic slope samples through
    u0_slope to avoid the finite-difference error floor.  The breakdown
    time is 2/|min u0'| (first node whose slope reaches -2/t), +inf when
    the slopes are nonnegative.
    """
    if u0_slope is None:
        k = derivative(u0.X)
    else:
        ensure_same_grid(u0.grid, u0_slope.grid, "u0 and u0_slope")
        k = u0_slope
    gamma0 = RPoint(GridFunction(u0.grid, np.zeros(u0.grid.n),
                                 DECAY_RAPID, u0.X.tail_tol))
    path = geodesic_from_direction(gamma0, k,
                                   cumulative_rule=cumulative_rule)
    cum = antiderivative_from_minus_infinity(
        GridFunction(u0.grid, k.values * k.values, DECAY_WTYPE,
                     u0.X.tail_tol))
    return HSSolution(u0, path, path.t_exit_forward, cum)


def hs_phi(sol: HSSolution, t: float):
    """Flow map at time t: a Diffeo before breakdown, MonotoneMap after.

    The slope formula (1 + (t/2) u0')^2 is a square, so the monotone
    continuation exists for every t.
    """
    return evaluate(sol.path, t)


def hs_eval(sol: HSSolution, t: float):
    """(u(t), phi(t)) strictly before the breakdown time.

    The velocity comes from the explicit formula
    u(t, x) = u0(z) + (t/2) int_{-inf}^{z} u0'^2 dy at z = phi^{-1}(t, x);
    no numerical differentiation in time is involved.
    """
    if t >= sol.t_blowup:
        raise PastBlowup(
            "velocity requested at t = %.6g, at or past the breakdown "
            "time %.6g; only the flow map continues (hs_phi)"
            % (t, sol.t_blowup))
    phi = hs_phi(sol, t)
    assert isinstance(phi, Diffeo)
    z = invert(phi).phi_values
    base = GridFunction(sol.grid,
                        sol.u0.values + 0.5 * t * sol.cum_slope_sq.values,
                        DECAY_BOUNDED, sol.u0.X.tail_tol)
    u_vals = compose_values(base, z)
    return GridFunction(sol.grid, u_vals, DECAY_BOUNDED,
                        sol.u0.X.tail_tol), phi


def hs_slopes(sol: HSSolution, t: float) -> GridFunction:
    """u_x(t) nodewise from the closed form, without differentiating u.

    Composing the explicit solution with the inverse flow map gives
    u_x(t, x) = u0'(z)/(1 + (t/2) u0'(z)) at z = phi^{-1}(t, x); the
    denominator is positive strictly before the breakdown time.
    """
    if t >= sol.t_blowup:
        raise PastBlowup(
            "slopes requested at t = %.6g, at or past the breakdown "
            "time %.6g" % (t, sol.t_blowup))
    phi = hs_phi(sol, t)
    z = invert(phi).phi_values
    k_at_z = compose_values(sol.path.k, z)
    return GridFunction(sol.grid, k_at_z / (1.0 + 0.5 * t * k_at_z),
                        DECAY_BOUNDED, sol.u0.X.tail_tol)


def naive_variational_residual(times, fields) -> float:
    """Sup-norm of u_txx + (u u_x)_xx - u_x u_xx over the samples.

    This third-order form follows from differentiating the transport
    equation twice in x, which removes the nonlocal term; genuine
    solutions drive it to zero with the grid while generic fields leave
    an O(1) remainder.  times must be uniform with at least three
    samples; the time derivative is a central difference, so the first
    and last slices only serve as stencil neighbours.
    """
    times = np.asarray(times, dtype=float)
    if len(times) != len(fields):
        raise ValueError("times and fields must pair up")
    if len(times) < 3:
        raise ValueError("need at least three time samples")
    steps = np.diff(times)
    dt = float(steps[0])
    if dt <= 0 or np.max(np.abs(steps - dt)) > 1e-9 * abs(dt):
        raise ValueError("time samples must be uniform and increasing")
    grid = fields[0].grid
    for f in fields[1:]:
        ensure_same_grid(grid, f.grid, "field samples")
    slopes = [derivative(f) for f in fields]
    curvs = [derivative(s).values for s in slopes]
    sup = 0.0
    for m in range(1, len(fields) - 1):
        u_txx = (curvs[m + 1] - curvs[m - 1]) / (2.0 * dt)
        flux = GridFunction(grid, fields[m].values * slopes[m].values,
                            DECAY_BOUNDED, fields[m].tail_tol)
        flux_xx = derivative(derivative(flux)).values
        res = u_txx + flux_xx - slopes[m].values * curvs[m]
        sup = max(sup, float(np.max(np.abs(res))))
    return sup
