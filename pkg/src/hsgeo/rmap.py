"""The square-root lift of line diffeomorphisms and its exact inverse.

The lift sends phi = Id + f to

    gamma = 2 (sqrt(phi') - 1),

a map onto functions with values above -2, and straightens the homogeneous
H^1 geometry: the pulled-back metric of the lift is the flat L^2 metric.
The inverse reads the slope off pointwise,

    phi' = (gamma/2 + 1)^2,   f(x) = 1/4 int_{-inf}^x (gamma^2 + 4 gamma),

which is exact at the nodes: the returned diffeomorphism stores the
algebraic slope samples, so lift round trips cost no differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConstraintViolated, DerivativeTooSmall, TailNotSettled
from .funcspace import (DECAY_BOUNDED, DECAY_WTYPE, DECAYING_CLASSES,
                        GridFunction, SIMPSON, cumulative_values, derivative,
                        integrate)
from .diffeo import Diffeo

__all__ = [
    "RPoint",
    "r_map",
    "r_inverse",
    "r_inverse_arrays",
    "classified_diffeo",
    "tangent_r",
    "pullback_metric",
    "image_defect",
    "shift_from_lift",
]

_SLOPE_FLOOR = 1e-8
_CLASS_A_DEFECT = 1e-7


@dataclass(frozen=True, eq=False)
class RPoint:
    """Point gamma in the lift target: decaying values staying above -2.

    Attributes:
        gamma: real GridFunction in one of the decaying classes.
        min_value: recorded nodal minimum of gamma.
    """

    gamma: GridFunction
    min_value: float = None

    def __post_init__(self):
        g = self.gamma
        if g.grid.kind != "line":
            raise ValueError("RPoint lives on a line grid")
        if g.is_complex:
            raise ValueError("scalar lift points are real; see twocomp for "
                             "the complex-valued lift")
        if g.decay not in DECAYING_CLASSES:
            raise ValueError(
                "lift points must decay at both ends, got class %r"
                % (g.decay,))
        mv = float(np.min(g.values))
        object.__setattr__(self, "min_value", mv)
        if mv <= -2.0:
            raise ConstraintViolated(
                "lift values must stay above -2, found min %.6g" % mv)

    @property
    def grid(self):
        return self.gamma.grid


def _gamma_decay(f_prime: GridFunction) -> str:
    if f_prime.decay in DECAYING_CLASSES:
        return f_prime.decay
    return DECAY_WTYPE


def r_map(phi: Diffeo) -> RPoint:
    """Lift a diffeomorphism: gamma = 2 (sqrt(phi') - 1).

    Defined for classes A and A1.  Class A2 carries a left shift the lift
    cannot see (the inverse always rebuilds f from zero at -infinity), so
    lifting it would silently discard data.

    Raises:
        DerivativeTooSmall: min phi' below 1e-8.
    """
    if not isinstance(phi, Diffeo):
        raise TypeError("r_map expects a Diffeo; monotone maps with "
                        "phi' = 0 leave the lift domain")
    if phi.group_class == "A2":
        raise ValueError("the lift inverts only on classes A and A1; a "
                         "left shift would be lost")
    if phi.min_slope < _SLOPE_FLOOR:
        raise DerivativeTooSmall(
            "lift needs min phi' >= %.0e, got %.3g"
            % (_SLOPE_FLOOR, phi.min_slope))
    vals = 2.0 * (np.sqrt(phi.phi_slopes) - 1.0)
    gamma = GridFunction(phi.grid, vals, _gamma_decay(phi.f_prime),
                         phi.f.tail_tol)
    return RPoint(gamma)


def _f_prime_values(gamma_values: np.ndarray) -> np.ndarray:
    # phi' - 1 = (gamma/2 + 1)^2 - 1 = (gamma^2 + 4 gamma)/4
    return 0.25 * (gamma_values * gamma_values + 4.0 * gamma_values)


def r_inverse_arrays(gamma_values: np.ndarray, grid, tail_tol: float,
                     decay: str = DECAY_WTYPE,
                     cumulative_rule: str = "poly4"):
    """(f, f') of the inverse lift, without RPoint validation.

    Shared by the public inverse and by geodesic evaluation, which must
    keep working when gamma has crossed -2 (the slope formula squares, so
    phi' >= 0 always) or when a synthetic direction decays only on the
    left.  Only the left tail is asserted: it anchors the cumulative
    integral at zero.
    """
    fp_vals = _f_prime_values(np.asarray(gamma_values, dtype=float))
    if abs(fp_vals[0]) > 4.0 * tail_tol:
        raise TailNotSettled(
            "the slope integrand does not vanish at the left edge "
            "(%.3g); the displacement cannot be anchored at -infinity"
            % abs(fp_vals[0]))
    if (decay in DECAYING_CLASSES
            and abs(fp_vals[0]) <= tail_tol
            and abs(fp_vals[-1]) <= tail_tol):
        fp_decay = decay
    else:
        fp_decay = DECAY_BOUNDED
    fp = GridFunction(grid, fp_vals, fp_decay, tail_tol)
    f_vals = cumulative_values(fp_vals, grid.h, cumulative_rule)
    f = GridFunction(grid, f_vals, DECAY_BOUNDED, tail_tol)
    return f, fp


def classified_diffeo(f: GridFunction, fp: GridFunction,
                      defect: float) -> Diffeo:
    """Assemble a rebuilt map with the class implied by its image defect.

    Classification treats shifts below _CLASS_A_DEFECT as zero, so a map
    labelled A may legitimately end at defect/4; the class-A tail check
    is widened to that bound instead of the raw grid tolerance.
    """
    if abs(defect) < _CLASS_A_DEFECT:
        widened = GridFunction(f.grid, f.values, f.decay,
                               max(f.tail_tol, 0.25 * _CLASS_A_DEFECT),
                               f.support)
        return Diffeo(widened, fp, "A")
    return Diffeo(f, fp, "A1")


def r_inverse(gamma: RPoint, cumulative_rule: str = "poly4") -> Diffeo:
    """Inverse lift: rebuild the diffeomorphism from gamma.

    The slope samples are algebraic in gamma (no differentiation), the
    displacement is the cumulative integral of (gamma^2 + 4 gamma)/4 from
    the left.  The result is classified A when the image defect
    int (gamma^2 + 4 gamma) vanishes within 1e-7, A1 otherwise.
    """
    f, fp = r_inverse_arrays(gamma.gamma.values, gamma.grid,
                             gamma.gamma.tail_tol, gamma.gamma.decay,
                             cumulative_rule)
    return classified_diffeo(f, fp, image_defect(gamma))


def tangent_r(phi: Diffeo, h: GridFunction) -> GridFunction:
    """Tangent map of the lift at phi applied to a variation h.

    For a curve s -> phi_s with d/ds phi_s = h, the lift moves with
    velocity h' / sqrt(phi'); sampled nodewise with 4th-order slopes of h.
    """
    if phi.min_slope < _SLOPE_FLOOR:
        raise DerivativeTooSmall(
            "tangent lift needs min phi' >= %.0e, got %.3g"
            % (_SLOPE_FLOOR, phi.min_slope))
    dh = derivative(h)
    vals = dh.values / np.sqrt(phi.phi_slopes)
    decay = dh.decay if dh.decay in DECAYING_CLASSES else DECAY_BOUNDED
    return GridFunction(phi.grid, vals, decay, h.tail_tol)


def pullback_metric(phi: Diffeo, h: GridFunction, k: GridFunction) -> float:
    """Homogeneous H^1 inner product of two variations at phi.

    Computed through the lift: int (h'/sqrt(phi')) (k'/sqrt(phi')) dx,
    which equals int X' Y' dx for the right-translated fields X = h o
    phi^{-1}, Y = k o phi^{-1}.
    """
    a = tangent_r(phi, h)
    b = tangent_r(phi, k)
    prod = GridFunction(phi.grid, a.values * b.values, DECAY_BOUNDED,
                        h.tail_tol)
    return float(integrate(prod, SIMPSON))


def image_defect(gamma: RPoint) -> float:
    """int (gamma^2 + 4 gamma) dx: zero exactly on lifts of class A.

    The integral equals 4 Shift_r of the rebuilt diffeomorphism, so its
    vanishing distinguishes shift-free diffeomorphisms inside class A1.
    """
    g = gamma.gamma
    vals = g.values * g.values + 4.0 * g.values
    # bounded container: the integrand's end values sit at ~4x gamma's,
    # which can brush the tail gate without being wrong
    return float(integrate(GridFunction(g.grid, vals, DECAY_BOUNDED,
                                        g.tail_tol), SIMPSON))


def shift_from_lift(gamma: RPoint) -> float:
    """Right shift of the rebuilt diffeomorphism, read off the lift.

    Equals image_defect / 4; provided separately because geodesic
    bookkeeping uses the shift normalization throughout.
    """
    return 0.25 * image_defect(gamma)
