"""Finite-dimensional reduction of the transport flow to kink trains.

A velocity field whose slope is piecewise constant with kinks at
y_1 < ... < y_N stays in that family under the flow: the dynamics
reduce to Hamilton's equations for (y, a) where a_i is the slope jump
at y_i and the partial sums S_i = a_1 + ... + a_i are the negated cell
slopes.  The weights are constrained to sum to zero, so the velocity is
constant beyond y_N.  Both the Hamiltonian vector field and the flow in
closed form are provided; a kink cell collapses (and the weight there
diverges) at t = 2/S_i for the largest positive S_i, mirroring the
breakdown of the continuum equation.

With sum(a) = 0 the positions are canonically conjugate to the weights
only modulo a uniform translation; the representative used here anchors
dy_i at u(y_i), which is what matches transport by the continuum flow
map and the closed-form positions.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolated, SolitonBlowup, WindowTooSmall
from .funcspace import DECAY_BOUNDED, Grid, GridFunction

__all__ = [
    "SolitonState",
    "PartialSums",
    "partial_sums",
    "soliton_energy",
    "hamilton_rhs",
    "soliton_flow_closed_form",
    "soliton_to_velocity",
    "gibbs_slope",
]

_WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class SolitonState:
    """Kink positions and slope jumps at one instant.

    Attributes:
        y: strictly increasing positions, length N.
        a: slope jumps, length N, summing to zero within 1e-12.
        time: the instant the state describes.
    """

    y: np.ndarray
    a: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        y = np.atleast_1d(np.asarray(self.y, dtype=float))
        a = np.atleast_1d(np.asarray(self.a, dtype=float))
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "a", a)
        if y.shape != a.shape or y.ndim != 1:
            raise ValueError("y and a must be 1-d arrays of equal length")
        if y.size > 1 and np.min(np.diff(y)) <= 0.0:
            raise ValueError("positions must be strictly increasing")
        if abs(float(np.sum(a))) > _WEIGHT_TOL:
            raise ConstraintViolated(
                "weights must sum to zero, got %.3g" % float(np.sum(a)))

    @property
    def n(self) -> int:
        return self.y.size


@dataclass(frozen=True, eq=False)
class PartialSums:
    """Prefix sums S_i = a_1 + ... + a_i; S_N vanishes with the weights."""

    S: np.ndarray

    def __post_init__(self):
        S = np.atleast_1d(np.asarray(self.S, dtype=float))
        object.__setattr__(self, "S", S)
        if abs(float(S[-1])) > _WEIGHT_TOL:
            raise ConstraintViolated(
                "the last prefix sum must vanish, got %.3g"
                % float(S[-1]))


def partial_sums(state: SolitonState) -> PartialSums:
    """Prefix sums of the weights as a validated record."""
    return PartialSums(np.cumsum(state.a))


def soliton_energy(state: SolitonState) -> float:
    """E = (1/2) sum_i S_i^2 (y_{i+1} - y_i), the kinetic energy.

    Equals (1/2) int u'^2 dx for the piecewise-linear velocity whose
    cell slopes are -S_i.
    """
    S = np.cumsum(state.a)
    return 0.5 * float(np.sum(S[:-1] ** 2 * np.diff(state.y)))


def hamilton_rhs(state: SolitonState):
    """Hamiltonian vector field (dy, da) at the state.

    da_i = -dE/dy_i = (1/2)(S_i^2 - S_{i-1}^2) with S_0 = 0.  dy_i is
    the energy gradient in the weights modulo the uniform-translation
    gauge left open by sum(a) = 0; the representative -sum_{j<i} S_j
    (y_{j+1} - y_j) equals the velocity u(y_i) and matches the
    closed-form flow.  Gauge-invariant differences dy_i - dy_j agree
    with constrained finite differences of the energy.
    """
    S = np.cumsum(state.a)
    gaps = np.diff(state.y)
    dy = -np.concatenate(([0.0], np.cumsum(S[:-1] * gaps)))
    s_prev = np.concatenate(([0.0], S[:-1]))
    da = 0.5 * (S * S - s_prev * s_prev)
    return dy, da


def _first_collapse(S: np.ndarray, t: float) -> float:
    if t > 0:
        active = S[S > 0]
        return 2.0 / float(np.max(active)) if active.size else np.inf
    active = S[S < 0]
    return 2.0 / float(np.min(active)) if active.size else -np.inf


def soliton_flow_closed_form(state: SolitonState, t: float) -> SolitonState:
    """State after time t of Hamiltonian flow, in closed form.

    S_i(t) = S_i / (1 - (t/2) S_i), positions advance by the quadratic
    polynomial sum_{j<i} ((t^2/4) S_j^2 - t S_j)(y_{j+1} - y_j), and the
    weights are recovered by differencing the flowed prefix sums.  Cell
    widths scale by (1 - (t/2) S_i)^2 >= 0, so ordering survives up to
    the first collapse.
    """
    S = np.cumsum(state.a)
    denom = 1.0 - 0.5 * t * S
    if np.min(denom) <= 0.0:
        critical = _first_collapse(S, t)
        raise SolitonBlowup(
            "a kink cell collapses at t = %.6g (requested %.6g)"
            % (critical, t), critical_time=critical)
    S_t = S / denom
    gaps = np.diff(state.y)
    shifts = np.concatenate(
        ([0.0], np.cumsum((0.25 * t * t * S[:-1] ** 2 - t * S[:-1]) * gaps)))
    a_t = np.diff(np.concatenate(([0.0], S_t)))
    return SolitonState(state.y + shifts, a_t, state.time + t)


def soliton_to_velocity(state: SolitonState, grid: Grid) -> GridFunction:
    """Sample the piecewise-linear velocity u(x) = -sum a_i max(x-y_i, 0).

    The window must contain every kink; u vanishes left of y_1 and is
    constant right of y_N because the weights sum to zero.
    """
    if state.y[0] <= grid.x_min or state.y[-1] >= grid.x_max:
        raise WindowTooSmall(
            "kinks span [%.3g, %.3g] but the grid covers [%.3g, %.3g]"
            % (state.y[0], state.y[-1], grid.x_min, grid.x_max))
    x = grid.nodes
    ramps = np.clip(x[None, :] - state.y[:, None], 0.0, None)
    values = -state.a @ ramps
    return GridFunction(grid, values, DECAY_BOUNDED)


def gibbs_slope(state: SolitonState) -> np.ndarray:
    """Slope sampled exactly at the kinks: u'(y_i) = a_i/2 - S_i.

    The half-weight term is the symmetric (half-jump) value of the
    piecewise-constant slope at its jump point.
    """
    return 0.5 * state.a - np.cumsum(state.a)
