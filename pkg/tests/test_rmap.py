"""Square-root lift: round trips, tangent map, flat pullback, defects."""

import numpy as np
import pytest

from hsgeo import funcspace as fs
from hsgeo import diffeo as dg
from hsgeo import rmap as rm
from hsgeo.errors import ConstraintViolated, DerivativeTooSmall

GRID = fs.Grid.line(2001, -10.0, 10.0)


def gaussian_diffeo(amp=0.8):
    return dg.diffeo_from_family("gaussian", GRID, amp=amp)


def bump_diffeo(amp=0.5):
    return dg.diffeo_from_family("bump", GRID, amp=amp)


def logistic_diffeo(amp=0.4, rate=3.0):
    return dg.diffeo_from_family("logistic", GRID, amp=amp, rate=rate)


def gamma_from(phi):
    return rm.r_map(phi)


# ---------------------------------------------------------------------------
# domain validation
# ---------------------------------------------------------------------------

def test_rpoint_rejects_values_at_minus_two():
    bad = fs.GridFunction(GRID, -2.5 * np.exp(-GRID.nodes ** 2),
                          "rapidly-decreasing")
    with pytest.raises(ConstraintViolated):
        rm.RPoint(bad)


def test_rpoint_requires_decay():
    flat = fs.GridFunction(GRID, np.full(GRID.n, 0.3), "bounded")
    with pytest.raises(ValueError):
        rm.RPoint(flat)


def test_r_map_rejects_a2_and_degenerate():
    x = GRID.nodes
    sig = 1.0 / (1.0 + np.exp(-3.0 * x))
    f = fs.GridFunction(GRID, 0.1 + 0.2 * sig, "bounded")
    phi2 = dg.make_diffeo(f, "A2")
    with pytest.raises(ValueError):
        rm.r_map(phi2)

    g = fs.family("gaussian", GRID)
    F = fs.antiderivative_from_minus_infinity(g)
    scale = -(1.0 - 1e-9)
    fdeg = F.with_values(scale * F.values)
    fpdeg = fs.GridFunction(GRID, scale * g.values, "bounded")
    phi_deg = dg.Diffeo(fdeg, fpdeg, "A1")
    with pytest.raises(DerivativeTooSmall):
        rm.r_map(phi_deg)


# ---------------------------------------------------------------------------
# round trips
# ---------------------------------------------------------------------------

def test_round_trip_gamma_side_is_nodewise_exact():
    # gamma -> phi stores the algebraic slope samples, so lifting back is
    # pure arithmetic: 2(sqrt((gamma/2+1)^2)-1) = gamma to rounding
    for phi0 in (gaussian_diffeo(), bump_diffeo(), logistic_diffeo()):
        gamma = gamma_from(phi0)
        back = rm.r_map(rm.r_inverse(gamma))
        np.testing.assert_allclose(back.gamma.values, gamma.gamma.values,
                                   rtol=0, atol=1e-14)


def test_round_trip_phi_side():
    for phi0 in (gaussian_diffeo(), bump_diffeo(), logistic_diffeo()):
        back = rm.r_inverse(rm.r_map(phi0))
        np.testing.assert_allclose(back.f.values, phi0.f.values,
                                   rtol=0, atol=1e-8)
        np.testing.assert_allclose(back.f_prime.values, phi0.f_prime.values,
                                   rtol=0, atol=1e-10)


def test_identity_maps_to_zero():
    gamma = gamma_from(dg.identity(GRID))
    np.testing.assert_array_equal(gamma.gamma.values, 0.0)
    back = rm.r_inverse(gamma)
    np.testing.assert_array_equal(back.f.values, 0.0)
    assert back.group_class == "A"


def test_classification_by_image_defect():
    assert rm.r_inverse(gamma_from(bump_diffeo())).group_class == "A"
    assert rm.r_inverse(gamma_from(gaussian_diffeo())).group_class == "A"
    assert rm.r_inverse(gamma_from(logistic_diffeo())).group_class == "A1"


# ---------------------------------------------------------------------------
# tangent map
# ---------------------------------------------------------------------------

def variation(seed):
    # random gaussian packets kept narrow enough that the window tails
    # clear the 1e-10 settledness gate with margin
    rng = np.random.RandomState(seed)
    x = GRID.nodes
    v = np.zeros(GRID.n)
    for _ in range(3):
        c = rng.uniform(-2.0, 2.0)
        w = rng.uniform(0.5, 1.2)
        a = rng.uniform(-0.5, 0.5)
        v += a * np.exp(-((x - c) / w) ** 2)
    return fs.GridFunction(GRID, v, "rapidly-decreasing")


def test_tangent_r_matches_central_difference_of_lift():
    phi = gaussian_diffeo()
    h = variation(7)
    got = rm.tangent_r(phi, h)
    s = 1e-5
    plus = dg.make_diffeo(phi.f.with_values(phi.f.values + s * h.values,
                                            decay="bounded"), "A")
    minus = dg.make_diffeo(phi.f.with_values(phi.f.values - s * h.values,
                                             decay="bounded"), "A")
    fd = (rm.r_map(plus).gamma.values - rm.r_map(minus).gamma.values) / (2 * s)
    np.testing.assert_allclose(got.values, fd, rtol=0, atol=1e-6)


def test_tangent_r_at_identity_is_derivative():
    e = dg.identity(GRID)
    h = variation(3)
    got = rm.tangent_r(e, h)
    np.testing.assert_allclose(got.values, fs.derivative(h).values,
                               rtol=0, atol=1e-14)


# ---------------------------------------------------------------------------
# flat pullback = homogeneous H^1 through right translation
# ---------------------------------------------------------------------------

def right_translate(h, phi):
    """Oracle route: X = h o phi^{-1}, independent inversion + composition."""
    inv = dg.invert(phi)
    vals = fs.compose_values(h, inv.phi_values)
    return fs.GridFunction(GRID, vals, "bounded")


def hdot_product(X, Y):
    integrand = fs.derivative(X).values * fs.derivative(Y).values
    return fs.integrate(fs.GridFunction(GRID, integrand, "bounded"))


@pytest.mark.parametrize("seed", [11, 12, 13])
def test_pullback_equals_translated_hdot(seed):
    phi = gaussian_diffeo(0.6)
    h = variation(seed)
    k = variation(seed + 50)
    lhs = rm.pullback_metric(phi, h, k)
    rhs = hdot_product(right_translate(h, phi), right_translate(k, phi))
    assert abs(lhs - rhs) < 1e-6 * (1.0 + abs(rhs))


def test_pullback_at_identity_is_plain_hdot():
    e = dg.identity(GRID)
    h = variation(21)
    k = variation(22)
    lhs = rm.pullback_metric(e, h, k)
    assert abs(lhs - hdot_product(h, k)) < 1e-10


# ---------------------------------------------------------------------------
# shift bookkeeping
# ---------------------------------------------------------------------------

def test_image_defect_values():
    assert abs(rm.image_defect(gamma_from(bump_diffeo()))) < 1e-9
    # logistic displacement with right shift 0.4: defect = 4 * shift
    defect = rm.image_defect(gamma_from(logistic_diffeo(amp=0.4)))
    assert abs(defect - 1.6) < 1e-7


def test_shift_identity_against_diffeo_shifts():
    gamma = gamma_from(logistic_diffeo(amp=0.4))
    rebuilt = rm.r_inverse(gamma)
    s_left, s_right = dg.shifts(rebuilt)
    assert abs(s_left) < 1e-10
    assert abs(rm.shift_from_lift(gamma) - s_right) < 1e-7
    assert abs(s_right - 0.4) < 1e-7


# ---------------------------------------------------------------------------
# plateau and calibrated-shift examples
# ---------------------------------------------------------------------------

def smooth01(t):
    t = np.clip(t, 0.0, 1.0)
    return t ** 3 * (6.0 * t * t - 15.0 * t + 10.0)


def plateau_diffeo():
    # phi' = 4 on [-1, 1], easing back to 1 over width 0.5 on both sides
    x = GRID.nodes
    p = smooth01((x + 1.5) / 0.5) * smooth01((1.5 - x) / 0.5)
    fp = fs.GridFunction(GRID, 3.0 * p, "compact")
    f = fs.antiderivative_from_minus_infinity(fp)
    return dg.Diffeo(f.with_values(f.values, decay="bounded"), fp, "A1")


def test_lift_value_on_slope_plateau():
    phi = plateau_diffeo()
    gamma = rm.r_map(phi)
    inner = np.abs(GRID.nodes) <= 0.9
    np.testing.assert_allclose(gamma.gamma.values[inner], 2.0,
                               rtol=0, atol=1e-12)


def test_tangent_on_plateau_is_sqrt_slope():
    # h = X o phi with X' = 1 on the image of the plateau, so the lifted
    # velocity sqrt(phi') (X' o phi) equals 2 there
    phi = plateau_diffeo()
    y = phi.phi_values

    def X(yv):
        g = smooth01((yv + 6.0) / 2.0) * smooth01((9.8 - yv) / 0.6)
        return yv * g

    h = fs.GridFunction(GRID, X(y), "bounded")
    tangent = rm.tangent_r(phi, h)
    inner = np.abs(GRID.nodes) <= 0.9
    np.testing.assert_allclose(tangent.values[inner], 2.0,
                               rtol=0, atol=1e-7)


def test_unit_shift_calibrated_bump():
    # scale a bump so that int (gamma^2 + 4 gamma) = 4, giving shift 1
    b = fs.family("bump", GRID)
    i1 = fs.integrate(b)
    i2 = fs.integrate(b.with_values(b.values ** 2))
    amp = 2.0 * (-i1 + np.sqrt(i1 * i1 + i2)) / i2
    gamma = rm.RPoint(b.with_values(amp * b.values))
    rebuilt = rm.r_inverse(gamma)
    assert rebuilt.group_class == "A1"
    assert abs(dg.shifts(rebuilt)[1] - 1.0) < 1e-7


def test_pullback_gaussian_analytic_value():
    # h' = gaussian at the identity: int gaussian^2 = sqrt(pi/2)
    e = dg.identity(GRID)
    gauss = fs.family("gaussian", GRID)
    h = fs.antiderivative_from_minus_infinity(gauss)
    val = rm.pullback_metric(e, h, h)
    assert abs(val - np.sqrt(np.pi / 2.0)) < 1e-8
