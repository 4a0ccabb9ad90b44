"""Two-component transport system through the complex square-root lift.

The scalar lift extends to pairs (phi, alpha) of a diffeomorphism and a
decaying phase,

    gamma = 2 sqrt(phi') e^{i alpha/2} - 2,

which straightens the semidirect-product metric int X'Y' + ab dx into the
flat complex L^2 metric.  Geodesics are again straight lines, so the
coupled transport system

    u_t + u u_x = (1/2) int_{-inf}^x (u_x^2 + rho^2) dz,
    rho_t + (rho u)_x = 0

solves in closed form, and breakdown happens exactly where the line
t (u0' + i rho0) can reach -2: nodes carrying rho0 = 0 and u0' < 0.  A
vanishing density sample means exact zero; compactly-supported families
produce those, and any nonzero density at a node keeps |gamma + 2| > 0
there for all time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .connection import TangentVectorAtId
from .diffeo import Diffeo, invert
from .errors import (BranchCutAmbiguity, ConstraintViolated,
                     DerivativeTooSmall, PastBlowup)
from .funcspace import (DECAY_BOUNDED, DECAY_WTYPE, DECAYING_CLASSES,
                        GridFunction, SIMPSON, compose_values,
                        cumulative_values, derivative, ensure_same_grid,
                        integrate)
from .rmap import classified_diffeo

__all__ = [
    "TwoCompConfig",
    "ComplexRPoint",
    "TwoCompSolution",
    "r_map_2c",
    "r_inverse_2c",
    "tangent_r_2c",
    "twocomp_metric",
    "pullback_metric_2c",
    "twocomp_solve",
    "twocomp_gamma",
    "twocomp_eval",
    "twocomp_slopes",
    "twocomp_energy",
    "euler_arnold_rhs_2c",
]

_SLOPE_FLOOR = 1e-8
_BRANCH_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class TwoCompConfig:
    """Group element (phi, alpha): a diffeomorphism with a decaying phase.

    The product acts by (phi, alpha)(psi, beta) = (phi o psi, beta +
    alpha o psi); only the grids and decay classes are checked here.
    """

    phi: Diffeo
    alpha: GridFunction

    def __post_init__(self):
        if not isinstance(self.phi, Diffeo):
            raise TypeError("the first component must be a Diffeo")
        ensure_same_grid(self.phi.grid, self.alpha.grid, "config parts")
        if self.phi.group_class == "A2":
            raise ValueError("the complex lift inverts only on classes A "
                             "and A1; a left shift would be lost")
        if self.alpha.is_complex:
            raise ValueError("the phase component is real-valued")
        if self.alpha.decay not in DECAYING_CLASSES:
            raise ConstraintViolated(
                "the phase must decay at both ends, got class %r"
                % (self.alpha.decay,))

    @property
    def grid(self):
        return self.phi.grid


@dataclass(frozen=True, eq=False)
class ComplexRPoint:
    """Point of the complex lift target: decaying values avoiding -2.

    Attributes:
        gamma: GridFunction (real samples are fine: zero phase).
        min_distance: recorded nodal minimum of |gamma + 2|.
    """

    gamma: GridFunction
    min_distance: float = None

    def __post_init__(self):
        g = self.gamma
        if g.grid.kind != "line":
            raise ValueError("complex lift points live on a line grid")
        if g.decay not in DECAYING_CLASSES:
            raise ValueError(
                "lift points must decay at both ends, got class %r"
                % (g.decay,))
        dist = float(np.min(np.abs(g.values + 2.0)))
        object.__setattr__(self, "min_distance", dist)
        if dist <= 0.0:
            raise ConstraintViolated(
                "lift values must avoid -2; a node sits exactly on it")

    @property
    def grid(self):
        return self.gamma.grid


def _weaker_decay(a: str, b: str) -> str:
    # both arguments decay; DECAYING_CLASSES is ordered strongest first
    return a if DECAYING_CLASSES.index(a) >= DECAYING_CLASSES.index(b) else b


def _line_decay(fp_like: GridFunction, other: GridFunction) -> str:
    base = (fp_like.decay if fp_like.decay in DECAYING_CLASSES
            else DECAY_WTYPE)
    return _weaker_decay(base, other.decay)


def r_map_2c(state: TwoCompConfig) -> ComplexRPoint:
    """Lift a pair: gamma = 2 sqrt(phi') e^{i alpha/2} - 2 nodewise.

    Raises:
        DerivativeTooSmall: min phi' below 1e-8.
    """
    phi = state.phi
    if phi.min_slope < _SLOPE_FLOOR:
        raise DerivativeTooSmall(
            "lift needs min phi' >= %.0e, got %.3g"
            % (_SLOPE_FLOOR, phi.min_slope))
    phase = np.exp(0.5j * state.alpha.values)
    vals = 2.0 * np.sqrt(phi.phi_slopes) * phase - 2.0
    tol = phi.f_prime.tail_tol + state.alpha.tail_tol
    gamma = GridFunction(phi.grid, vals,
                         _line_decay(phi.f_prime, state.alpha), tol)
    return ComplexRPoint(gamma)


def r_inverse_2c(point: ComplexRPoint,
                 cumulative_rule: str = "poly4") -> TwoCompConfig:
    """Inverse lift: slope from the modulus, phase from the argument.

    phi' = |gamma + 2|^2 / 4 algebraically at the nodes; the displacement
    integrates phi' - 1 from the left and is classified A or A1 by its
    shift.  The phase is twice the continuous branch of arg(gamma + 2)
    anchored near zero at the left edge (nearest-branch continuation
    between adjacent nodes).

    Raises:
        BranchCutAmbiguity: an adjacent-node argument increment reaches
            pi, so the branch is not resolvable on this grid.
        ConstraintViolated: the branch does not return to zero at the
            right edge (the lift point winds around -2).
    """
    g = point.gamma
    w = g.values + 2.0
    fp_vals = 0.25 * (w * np.conj(w)).real - 1.0
    tol = g.tail_tol
    if abs(fp_vals[0]) > 4.0 * tol:
        raise ConstraintViolated(
            "the slope integrand does not vanish at the left edge (%.3g); "
            "the displacement cannot be anchored at -infinity"
            % abs(fp_vals[0]))
    if abs(fp_vals[0]) <= tol and abs(fp_vals[-1]) <= tol:
        fp_decay = g.decay
    else:
        fp_decay = DECAY_BOUNDED
    fp = GridFunction(g.grid, fp_vals, fp_decay, tol)
    f = GridFunction(g.grid, cumulative_values(fp_vals, g.grid.h,
                                               cumulative_rule),
                     DECAY_BOUNDED, tol)
    defect = float(integrate(GridFunction(g.grid, 4.0 * fp_vals,
                                          DECAY_BOUNDED, tol), SIMPSON))
    phi = classified_diffeo(f, fp, defect)

    increments = np.angle(w[1:] / w[:-1])
    worst = float(np.max(np.abs(increments))) if increments.size else 0.0
    if worst >= np.pi - _BRANCH_SLACK:
        raise BranchCutAmbiguity(
            "adjacent-node argument increment %.6g reaches pi; refine the "
            "grid to resolve the branch" % worst)
    theta = np.empty(g.grid.n)
    theta[0] = np.angle(w[0])
    theta[1:] = theta[0] + np.cumsum(increments)
    alpha_vals = 2.0 * theta
    if abs(alpha_vals[-1]) >= np.pi:
        raise ConstraintViolated(
            "the rebuilt phase ends at %.6g instead of returning to the "
            "trivial branch; the lift point winds around -2"
            % alpha_vals[-1])
    alpha = GridFunction(g.grid, alpha_vals, g.decay, tol)
    return TwoCompConfig(phi, alpha)


def tangent_r_2c(state: TwoCompConfig, h: GridFunction,
                 U: GridFunction) -> GridFunction:
    """Tangent map of the complex lift at (phi, alpha) on a variation.

    For a curve with d/ds phi_s = h and d/ds alpha_s = U the lift moves
    with velocity phi'^{-1/2} h' e^{i alpha/2} + i phi'^{1/2}
    e^{i alpha/2} U.
    """
    phi = state.phi
    if phi.min_slope < _SLOPE_FLOOR:
        raise DerivativeTooSmall(
            "tangent lift needs min phi' >= %.0e, got %.3g"
            % (_SLOPE_FLOOR, phi.min_slope))
    ensure_same_grid(phi.grid, h.grid, "state and variation")
    ensure_same_grid(phi.grid, U.grid, "state and variation")
    root = np.sqrt(phi.phi_slopes)
    phase = np.exp(0.5j * state.alpha.values)
    vals = (derivative(h).values / root + 1j * root * U.values) * phase
    if h.decay in DECAYING_CLASSES and U.decay in DECAYING_CLASSES:
        decay = _weaker_decay(h.decay, U.decay)
    else:
        decay = DECAY_BOUNDED
    return GridFunction(phi.grid, vals, decay, h.tail_tol)


def twocomp_metric(state: TwoCompConfig, hU, kV) -> float:
    """Semidirect-product pairing of two variations at (phi, alpha).

    Right-translating (h, U) to the identity gives (X, a) = (h o
    phi^{-1}, U o phi^{-1}); substituting x = phi(y) in int X'Y' + ab dx
    yields int h'k'/phi' + U V phi' dy, evaluated without inversion.
    """
    h, U = hU
    k, V = kV
    slopes = state.phi.phi_slopes
    vals = (derivative(h).values * derivative(k).values / slopes
            + U.values * V.values * slopes)
    return float(integrate(GridFunction(state.grid, vals, DECAY_BOUNDED,
                                        h.tail_tol), SIMPSON))


def pullback_metric_2c(state: TwoCompConfig, hU, kV) -> float:
    """Complex L^2 pairing of the lifted variations.

    Re int T R(h,U) conj(T R(k,V)) dx; equals twocomp_metric because the
    lift is an isometry onto a flat chart.
    """
    a = tangent_r_2c(state, *hU)
    b = tangent_r_2c(state, *kV)
    vals = (a.values * np.conj(b.values)).real
    return float(integrate(GridFunction(state.grid, vals, DECAY_BOUNDED,
                                        a.tail_tol), SIMPSON))


# ---------------------------------------------------------------------------
# closed-form solutions
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TwoCompSolution:
    """Analytic solution data: the lift travels along t (u0' + i rho0).

    Attributes:
        u0: initial velocity at the identity.
        rho0: initial density (decaying, real).
        k: nodal slope samples of u0.
        t_breakdown: first forward time with t k = -2 at a node where
            rho0 vanishes exactly; +inf when no such node exists.
        t_breakdown_back: same in the backward direction (-inf if none).
    """

    u0: TangentVectorAtId
    rho0: GridFunction
    k: GridFunction
    t_breakdown: float
    t_breakdown_back: float

    @property
    def grid(self):
        return self.u0.grid


def twocomp_solve(u0: TangentVectorAtId, rho0: GridFunction, *,
                  u0_slope: GridFunction = None) -> TwoCompSolution:
    """Set up the coupled analytic solution with data (u0, rho0).

    Breakdown requires a node where the density sample is exactly zero
    and the slope is negative (forward) or positive (backward); any
    nonzero density keeps the lift away from -2 forever.
    """
    ensure_same_grid(u0.grid, rho0.grid, "u0 and rho0")
    if rho0.is_complex:
        raise ValueError("the density is real-valued")
    if rho0.decay not in DECAYING_CLASSES:
        raise ConstraintViolated(
            "the density must decay at both ends, got class %r"
            % (rho0.decay,))
    if u0_slope is None:
        k = derivative(u0.X)
    else:
        ensure_same_grid(u0.grid, u0_slope.grid, "u0 and u0_slope")
        k = u0_slope
    bare = rho0.values == 0.0
    falling = bare & (k.values < 0.0)
    rising = bare & (k.values > 0.0)
    if np.any(falling):
        t_fwd = float(-2.0 / np.min(k.values[falling]))
    else:
        t_fwd = np.inf
    if np.any(rising):
        t_back = float(-2.0 / np.max(k.values[rising]))
    else:
        t_back = -np.inf
    return TwoCompSolution(u0, rho0, k, t_fwd, t_back)


def _gate(sol: TwoCompSolution, t: float, what: str) -> None:
    if t >= sol.t_breakdown or t <= sol.t_breakdown_back:
        raise PastBlowup(
            "%s requested at t = %.6g, at or past the breakdown time "
            "(forward %.6g, backward %.6g)"
            % (what, t, sol.t_breakdown, sol.t_breakdown_back))


def twocomp_gamma(sol: TwoCompSolution, t: float) -> ComplexRPoint:
    """Lift point t (u0' + i rho0) at time t."""
    _gate(sol, t, "lift point")
    vals = t * (sol.k.values + 1j * sol.rho0.values)
    return ComplexRPoint(GridFunction(sol.grid, vals,
                                      _line_decay(sol.k, sol.rho0),
                                      sol.u0.X.tail_tol))


def _flow_parts(sol: TwoCompSolution, t: float):
    k = sol.k.values
    r = sol.rho0.values
    re = 2.0 + t * k
    sq = 0.25 * (re * re + t * t * r * r)  # phi'(t) nodewise
    fp_vals = sq - 1.0
    tol = sol.u0.X.tail_tol
    f = GridFunction(sol.grid, cumulative_values(fp_vals, sol.grid.h,
                                                 "poly4"),
                     DECAY_BOUNDED, tol)
    fp = GridFunction(sol.grid, fp_vals, DECAY_BOUNDED, tol)
    defect = float(integrate(GridFunction(sol.grid, 4.0 * fp_vals,
                                          DECAY_BOUNDED, tol), SIMPSON))
    phi = classified_diffeo(f, fp, defect)
    return phi, re, sq


def twocomp_eval(sol: TwoCompSolution, t: float):
    """(u(t), rho(t), phi(t)) strictly inside the breakdown window.

    Differentiating the line in time gives phi_t = (1/2) int_{-inf}^x
    u0'(2 + t u0') + t rho0^2 and alpha_t = 4 rho0 / |t gamma0' + 2|^2;
    the fields are those compositions with the inverse flow map, no
    numerical time differentiation involved.

    Raises:
        PastBlowup: t at or beyond a breakdown time.
        DerivativeTooSmall: the flow map survives but its slope fell
            under the resolvable floor (near-vanishing density).
    """
    _gate(sol, t, "fields")
    phi, re, sq = _flow_parts(sol, t)
    z = invert(phi).phi_values
    tol = sol.u0.X.tail_tol
    k = sol.k.values
    r = sol.rho0.values
    phi_t_vals = 0.5 * cumulative_values(k * re + t * r * r, sol.grid.h,
                                         "poly4")
    u_vals = compose_values(GridFunction(sol.grid, phi_t_vals,
                                         DECAY_BOUNDED, tol), z)
    alpha_t_vals = r / sq
    rho_vals = compose_values(GridFunction(sol.grid, alpha_t_vals,
                                           DECAY_BOUNDED, tol), z)
    u = GridFunction(sol.grid, u_vals, DECAY_BOUNDED, tol)
    rho = GridFunction(sol.grid, rho_vals, DECAY_BOUNDED, tol)
    return u, rho, phi


def twocomp_slopes(sol: TwoCompSolution, t: float):
    """(u_x(t), rho(t)) nodewise without differentiating the fields.

    u_x o phi = phi_t' / phi' is algebraic in the data, so the slope
    field comes out at solver accuracy even when the composed velocity
    has steepened beyond what finite differences resolve.
    """
    _gate(sol, t, "slopes")
    phi, re, sq = _flow_parts(sol, t)
    z = invert(phi).phi_values
    tol = sol.u0.X.tail_tol
    k = sol.k.values
    r = sol.rho0.values
    ux_vals = compose_values(
        GridFunction(sol.grid, 0.5 * (k * re + t * r * r) / sq,
                     DECAY_BOUNDED, tol), z)
    rho_vals = compose_values(
        GridFunction(sol.grid, r / sq, DECAY_BOUNDED, tol), z)
    return (GridFunction(sol.grid, ux_vals, DECAY_BOUNDED, tol),
            GridFunction(sol.grid, rho_vals, DECAY_BOUNDED, tol))


def twocomp_energy(sol: TwoCompSolution, t: float) -> float:
    """int u_x^2 + rho^2 dx at time t, by substitution x = phi(z).

    The integrand transported to the initial frame is ((u_x o phi)^2 +
    (rho o phi)^2) phi', evaluated from the closed forms; conservation
    (the value is int u0'^2 + rho0^2 for every t) is a theorem, not an
    implementation shortcut, so tests may pin it.
    """
    _gate(sol, t, "energy")
    k = sol.k.values
    r = sol.rho0.values
    re = 2.0 + t * k
    sq = 0.25 * (re * re + t * t * r * r)
    ux_at_phi = 0.5 * (k * re + t * r * r) / sq
    rho_at_phi = r / sq
    vals = (ux_at_phi * ux_at_phi + rho_at_phi * rho_at_phi) * sq
    return float(integrate(GridFunction(sol.grid, vals, DECAY_BOUNDED,
                                        sol.u0.X.tail_tol), SIMPSON))


def euler_arnold_rhs_2c(X: TangentVectorAtId, a: GridFunction):
    """Candidate geodesic right-hand side for the pair (X, a).

    Returns (-X X' + (1/2) int_{-inf}^x X'^2 + a^2 dy, -(a X)').  The
    first component tends to (1/2) int X'^2 + a^2 at +infinity, nonzero
    whenever the pair is, which is exactly why no geodesic equation
    exists on the decaying subgroup and the A1 completion is needed.
    """
    ensure_same_grid(X.grid, a.grid, "velocity and density")
    dx = derivative(X.X)
    dens = GridFunction(X.grid, dx.values * dx.values + a.values * a.values,
                        DECAY_WTYPE, X.X.tail_tol)
    cum = cumulative_values(dens.values, X.grid.h, "poly4")
    u_vals = -X.values * dx.values + 0.5 * cum
    prod = GridFunction(X.grid, a.values * X.values, DECAY_BOUNDED,
                        a.tail_tol)
    rho_vals = -derivative(prod).values
    return (GridFunction(X.grid, u_vals, DECAY_BOUNDED, X.X.tail_tol),
            GridFunction(X.grid, rho_vals, DECAY_BOUNDED, a.tail_tol))
