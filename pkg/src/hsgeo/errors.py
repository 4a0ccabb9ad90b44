"""Exception taxonomy for the hsgeo library.

Every error raised on a contract violation derives from HsgeoError so that
callers (and the CLI) can distinguish numerical-contract failures from
programming errors.
"""


class HsgeoError(Exception):
    """Base class for all library-level failures."""


class GridTooSmall(HsgeoError):
    """Operation needs more grid nodes than provided."""


class NotIntegrable(HsgeoError):
    """Cumulative integration from -infinity requested for a decay class
    that is not integrable there (bounded or periodic)."""


class TailNotSettled(HsgeoError):
    """A limit or tail value was requested but the sampled values have not
    settled to a constant within the tail tolerance; the truncation window
    is too narrow for the request."""


class RangeExceedsWindow(HsgeoError):
    """Composition needs function values outside the grid window and the
    relevant tail has not settled, so constant extension is unjustified."""


class DerivativeTooSmall(HsgeoError):
    """min phi' fell below the near-breakdown threshold (1e-8); the
    operation would silently lose accuracy."""


class ConstraintViolated(HsgeoError):
    """A pointwise domain constraint failed (phi' <= 0, gamma <= -2,
    gamma = -2 in the complex case, weights not summing to zero, ...)."""


class BranchCutAmbiguity(HsgeoError):
    """Continuous branch of arg(gamma + 2) cannot be chosen: an adjacent-node
    increment reaches pi, so the winding is not resolvable on this grid."""


class PastBlowup(HsgeoError):
    """Velocity (or density) output requested at or beyond the breakdown
    time; only the monotone flow map continues past it."""


class SolitonBlowup(HsgeoError):
    """Closed-form soliton flow evaluated at or beyond a cell collapse.

    Attributes:
        critical_time: the first collapse time in the requested direction.
    """

    def __init__(self, message, critical_time=None):
        super().__init__(message)
        self.critical_time = critical_time


class WindowTooSmall(HsgeoError):
    """Requested data (e.g. soliton positions) lies outside the grid window."""


class AntipodalPoints(HsgeoError):
    """Great-circle interpolation is not unique for antipodal sphere points."""


class PositivityLost(HsgeoError):
    """A sphere-geodesic point left the positive cone; the corresponding
    circle map degenerates (periodic analogue of blow-up)."""
