"""Right-invariant metric algebra for velocity fields on the line.

The homogeneous H^1 pairing int U' V' dx makes the space of fields
vanishing at -infinity a flat manifold.  This module provides the layer
that witnesses it directly on the Lie algebra: the bracket, the
symmetrized coadjoint operator (the transport right-hand side), the
induced bilinear operator rho, and the sectional-curvature numerator
assembled from them.  Every sign convention used here is derived in
docs/signs.md and pinned by tests.

Two decay tags mirror the group classes: an "A" field vanishes at both
ends, an "A1" field vanishes at -infinity and is merely bounded at
+infinity.  The coadjoint output of a nonzero "A" field has limit
-(1/2) int X'^2 < 0 at +infinity, so it is never again an "A" field:
the transport equation only closes up in the larger space.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolated, TailNotSettled
from .funcspace import (DECAY_BOUNDED, DECAY_WTYPE, DECAYING_CLASSES,
                        SIMPSON, GridFunction,
                        antiderivative_from_minus_infinity, derivative,
                        ensure_same_grid, integrate)

__all__ = [
    "TangentVectorAtId",
    "lie_bracket",
    "ad_star_symmetric",
    "rho",
    "metric_h1",
    "curvature_numerator",
    "euler_arnold_rhs",
]


@dataclass(frozen=True, eq=False)
class TangentVectorAtId:
    """Velocity field at the identity with a decay tag.

    Attributes:
        X: real GridFunction on a line grid.
        space: "A" (vanishing at both ends, decaying class required) or
            "A1" (vanishing at -infinity, bounded at +infinity).
    """

    X: GridFunction
    space: str = "A1"

    def __post_init__(self):
        if self.X.grid.kind != "line":
            raise ValueError("tangent fields live on line grids")
        if self.X.is_complex:
            raise ValueError("tangent fields are real")
        if self.space not in ("A", "A1"):
            raise ValueError("space tag must be 'A' or 'A1', got %r"
                             % (self.space,))
        if self.space == "A":
            if self.X.decay not in DECAYING_CLASSES:
                raise ConstraintViolated(
                    "an 'A' field needs a decaying class (both tails "
                    "vanish), got %r" % (self.X.decay,))
        elif abs(float(self.X.values[0])) > self.X.tail_tol:
            raise TailNotSettled(
                "an 'A1' field must vanish at -infinity, got "
                "|X(x_min)| = %.3g" % abs(float(self.X.values[0])))

    @property
    def grid(self):
        return self.X.grid

    @property
    def values(self):
        return self.X.values


def _joint_space(X: TangentVectorAtId, Y: TangentVectorAtId) -> str:
    return "A" if X.space == "A" and Y.space == "A" else "A1"


def _squared_slope_integrand(dx_values, grid, tol) -> GridFunction:
    # cumulative integration needs a decaying integrand; the squared
    # slopes of any admissible field do settle, and the constructor
    # gate turns a non-integrable input into an honest error
    return GridFunction(grid, dx_values, DECAY_WTYPE, tol)


def lie_bracket(X: TangentVectorAtId,
                Y: TangentVectorAtId) -> TangentVectorAtId:
    """Bracket X'Y - XY' of two fields (right-invariant convention)."""
    ensure_same_grid(X.grid, Y.grid, "bracket arguments")
    vals = (derivative(X.X).values * Y.values
            - X.values * derivative(Y.X).values)
    space = _joint_space(X, Y)
    decay = DECAY_WTYPE if space == "A" else DECAY_BOUNDED
    return TangentVectorAtId(GridFunction(X.grid, vals, decay,
                                          X.X.tail_tol), space)


def ad_star_symmetric(X: TangentVectorAtId) -> TangentVectorAtId:
    """The coadjoint of X paired against itself, lowered to a field.

    Returns Z = -(1/2) int_{-inf}^x X'^2 dy + (1/2)(X^2)', the unique
    field vanishing at -infinity whose pairing reproduces the coadjoint
    action; the transport equation reads u_t = -Z.  The limit of Z at
    +infinity is -(1/2) int X'^2, nonzero for every nonzero X, so the
    output always carries the "A1" tag.
    """
    dx = derivative(X.X)
    cum = antiderivative_from_minus_infinity(_squared_slope_integrand(
        dx.values * dx.values, X.grid, X.X.tail_tol))
    sq = GridFunction(X.grid, X.values * X.values, DECAY_BOUNDED,
                      X.X.tail_tol)
    vals = -0.5 * cum.values + 0.5 * derivative(sq).values
    return TangentVectorAtId(GridFunction(X.grid, vals, DECAY_BOUNDED,
                                          X.X.tail_tol), "A1")


def rho(X: TangentVectorAtId, Y: TangentVectorAtId) -> TangentVectorAtId:
    """Symmetrized connection operator.

    rho(X)Y = (1/2)(-int_{-inf}^x X'Y' dy + (XY)'); symmetric in its
    arguments and equal to ad_star_symmetric on the diagonal.
    """
    ensure_same_grid(X.grid, Y.grid, "rho arguments")
    dx = derivative(X.X)
    dy = derivative(Y.X)
    cum = antiderivative_from_minus_infinity(_squared_slope_integrand(
        dx.values * dy.values, X.grid, X.X.tail_tol))
    prod = GridFunction(X.grid, X.values * Y.values, DECAY_BOUNDED,
                        X.X.tail_tol)
    vals = 0.5 * (derivative(prod).values - cum.values)
    return TangentVectorAtId(GridFunction(X.grid, vals, DECAY_BOUNDED,
                                          X.X.tail_tol), "A1")


def metric_h1(U: TangentVectorAtId, V: TangentVectorAtId) -> float:
    """Homogeneous H^1 pairing int U' V' dx (Simpson quadrature)."""
    ensure_same_grid(U.grid, V.grid, "pairing arguments")
    du = derivative(U.X)
    dv = derivative(V.X)
    return float(integrate(GridFunction(U.grid, du.values * dv.values,
                                        DECAY_BOUNDED, U.X.tail_tol),
                           SIMPSON))


def curvature_numerator(X: TangentVectorAtId,
                        Y: TangentVectorAtId) -> float:
    """Sectional-curvature numerator of the plane spanned by X and Y.

    Evaluates g(rho(X)X, rho(Y)Y) - |rho(X)Y|^2 + (3/4)|[X,Y]|^2
    - g(rho(X)Y, [X,Y]) + g(Y, [X,[X,Y]]) with the H^1 pairing g.
    Vanishes identically: the metric is flat, which the square-root
    lift exhibits as a linear chart.
    """
    bracket = lie_bracket(X, Y)
    rho_xy = rho(X, Y)
    return (metric_h1(rho(X, X), rho(Y, Y))
            - metric_h1(rho_xy, rho_xy)
            + 0.75 * metric_h1(bracket, bracket)
            - metric_h1(rho_xy, bracket)
            + metric_h1(Y, lie_bracket(X, bracket)))


def euler_arnold_rhs(X: TangentVectorAtId) -> TangentVectorAtId:
    """Right-hand side of the transport equation u_t = -ad_star(u).

    Nodewise this is -u u' + (1/2) int_{-inf}^x u'^2 dy.
    """
    z = ad_star_symmetric(X)
    return TangentVectorAtId(z.X.with_values(-z.X.values), "A1")
