"""Tests for the complex lift and the coupled transport system."""

import numpy as np
import pytest

import hsgeo.connection as cn
import hsgeo.diffeo as df
import hsgeo.funcspace as fs
import hsgeo.hs_solve as hs
import hsgeo.rmap as rm
import hsgeo.twocomp as tc
from hsgeo.errors import (BranchCutAmbiguity, ConstraintViolated, PastBlowup)

GRID = fs.Grid.line(2001, -10.0, 10.0)


def gaussian_pair(amp=1.0, center=0.0, width=1.0):
    return fs.family_with_derivative("gaussian", GRID, amp=amp,
                                     center=center, width=width)


def smooth_state(phase_amp=0.8):
    phi = df.diffeo_from_family("bump", GRID, amp=0.5, lo=-2.0, hi=2.0)
    alpha, _ = gaussian_pair(amp=phase_amp, center=0.5, width=1.4)
    return tc.TwoCompConfig(phi, alpha)


def gaussian_velocity(amp=0.4, center=0.0, width=1.0):
    v, dv = gaussian_pair(amp=amp, center=center, width=width)
    return cn.TangentVectorAtId(v, "A"), dv


# ---------------------------------------------------------------------------
# types and lift algebra
# ---------------------------------------------------------------------------

def test_config_gates():
    phi = df.identity(GRID)
    bounded = fs.family("logistic", GRID, amp=0.3)
    with pytest.raises(ConstraintViolated):
        tc.TwoCompConfig(phi, bounded)
    ramp = fs.GridFunction(GRID, np.zeros(GRID.n) + 0j, fs.DECAY_RAPID)
    with pytest.raises(ValueError):
        tc.TwoCompConfig(phi, ramp)


def test_point_rejects_exact_hit():
    vals = fs.family("bump", GRID, amp=-4.0, lo=-3.0, hi=3.0).values.copy()
    idx = GRID.n // 2
    vals[idx] = -2.0
    with pytest.raises(ConstraintViolated):
        tc.ComplexRPoint(fs.GridFunction(GRID, vals, fs.DECAY_COMPACT))


def test_lift_of_trivial_pair_is_zero():
    state = tc.TwoCompConfig(df.identity(GRID),
                             fs.family("zero", GRID))
    point = tc.r_map_2c(state)
    assert np.all(point.gamma.values == 0.0)
    assert point.min_distance == 2.0


def test_lift_of_pure_phase_sits_on_modulus_two_circle():
    alpha = fs.family("bump", GRID, amp=1.2, lo=-2.0, hi=2.0)
    state = tc.TwoCompConfig(df.identity(GRID), alpha)
    point = tc.r_map_2c(state)
    np.testing.assert_allclose(np.abs(point.gamma.values + 2.0), 2.0,
                               rtol=0, atol=1e-14)
    expected = 2.0 * np.exp(0.5j * alpha.values) - 2.0
    np.testing.assert_allclose(point.gamma.values, expected, rtol=0,
                               atol=1e-15)


def test_round_trip_from_state():
    state = smooth_state()
    back = tc.r_inverse_2c(tc.r_map_2c(state))
    assert np.max(np.abs(back.phi.f.values - state.phi.f.values)) < 1e-8
    assert np.max(np.abs(back.phi.f_prime.values
                         - state.phi.f_prime.values)) < 1e-12
    assert np.max(np.abs(back.alpha.values - state.alpha.values)) < 1e-12


def test_round_trip_from_point():
    re, _ = gaussian_pair(amp=0.3, center=-1.0, width=1.2)
    im, _ = gaussian_pair(amp=0.4, center=1.0, width=0.9)
    point = tc.ComplexRPoint(fs.GridFunction(
        GRID, re.values + 1j * im.values, fs.DECAY_RAPID))
    again = tc.r_map_2c(tc.r_inverse_2c(point))
    assert np.max(np.abs(again.gamma.values - point.gamma.values)) < 1e-12


def test_modulus_slope_identity_is_algebraic():
    state = smooth_state()
    point = tc.r_map_2c(state)
    w = point.gamma.values + 2.0
    np.testing.assert_allclose(0.25 * np.abs(w) ** 2 - 1.0,
                               state.phi.f_prime.values, rtol=0,
                               atol=1e-14)


def test_real_point_reduces_to_scalar_inverse():
    phi = df.diffeo_from_family("bump", GRID, amp=0.5, lo=-2.0, hi=2.0)
    gamma = rm.r_map(phi).gamma
    state = tc.r_inverse_2c(tc.ComplexRPoint(gamma))
    assert np.all(state.alpha.values == 0.0)
    scalar = rm.r_inverse(rm.RPoint(gamma))
    assert np.max(np.abs(state.phi.f.values - scalar.f.values)) < 1e-13
    assert state.phi.group_class == scalar.group_class


def test_branch_ambiguity_detected():
    theta = np.where((GRID.nodes > 0.0) & (GRID.nodes < 5.0), np.pi, 0.0)
    vals = 2.0 * np.exp(1j * theta) - 2.0
    point = tc.ComplexRPoint(fs.GridFunction(GRID, vals, fs.DECAY_COMPACT))
    with pytest.raises(BranchCutAmbiguity):
        tc.r_inverse_2c(point)


def test_winding_around_the_puncture_detected():
    # slow full turn of arg(gamma + 2): each increment is small, yet the
    # branch cannot return to zero on the right
    sig = 1.0 / (1.0 + np.exp(-5.0 * GRID.nodes))
    vals = 2.0 * np.exp(2j * np.pi * sig) - 2.0
    point = tc.ComplexRPoint(fs.GridFunction(GRID, vals, fs.DECAY_RAPID,
                                             1e-8))
    with pytest.raises(ConstraintViolated):
        tc.r_inverse_2c(point)


# ---------------------------------------------------------------------------
# metric and tangent map
# ---------------------------------------------------------------------------

def test_metric_at_identity_splits():
    state = tc.TwoCompConfig(df.identity(GRID), fs.family("zero", GRID))
    h, _ = gaussian_pair(amp=0.5, center=-0.5)
    U, _ = gaussian_pair(amp=0.7, center=1.0)
    zero = fs.family("zero", GRID)
    pure_phase = tc.twocomp_metric(state, (zero, U), (zero, U))
    direct = fs.integrate(U.with_values(U.values ** 2), fs.SIMPSON)
    assert abs(pure_phase - direct) < 1e-12
    pure_h = tc.twocomp_metric(state, (h, zero), (h, zero))
    assert abs(pure_h - rm.pullback_metric(df.identity(GRID), h, h)) < 1e-10
    assert tc.twocomp_metric(state, (zero, zero), (zero, zero)) == 0.0


def test_metric_matches_complex_pullback():
    state = smooth_state()
    rng = np.random.default_rng(17)
    for _ in range(4):
        amps = rng.uniform(-0.8, 0.8, 4)
        centers = rng.uniform(-1.5, 1.5, 4)
        h, _ = gaussian_pair(amp=amps[0], center=centers[0], width=1.1)
        U, _ = gaussian_pair(amp=amps[1], center=centers[1], width=0.8)
        k, _ = gaussian_pair(amp=amps[2], center=centers[2], width=1.3)
        V, _ = gaussian_pair(amp=amps[3], center=centers[3], width=0.9)
        lhs = tc.pullback_metric_2c(state, (h, U), (k, V))
        rhs = tc.twocomp_metric(state, (h, U), (k, V))
        assert abs(lhs - rhs) < 1e-6 * (1.0 + abs(rhs))


def test_tangent_matches_curve_differentiation():
    state = smooth_state()
    h, dh = gaussian_pair(amp=0.5, center=0.3, width=1.2)
    U, _ = gaussian_pair(amp=0.6, center=-0.8, width=1.0)
    image = tc.tangent_r_2c(state, h, U)
    s = 1e-5

    def lifted(sign):
        f = state.phi.f.with_values(state.phi.f.values + sign * s * h.values)
        fp = state.phi.f_prime.with_values(
            state.phi.f_prime.values + sign * s * dh.values)
        alpha = state.alpha.with_values(
            state.alpha.values + sign * s * U.values,
            decay=fs.DECAY_RAPID)
        moved = tc.TwoCompConfig(df.Diffeo(f, fp, "A1"), alpha)
        return tc.r_map_2c(moved).gamma.values

    fd = (lifted(1.0) - lifted(-1.0)) / (2.0 * s)
    assert np.max(np.abs(fd - image.values)) < 1e-6


# ---------------------------------------------------------------------------
# closed-form solutions
# ---------------------------------------------------------------------------

def test_zero_density_reduces_to_scalar_transport():
    u0, dv = gaussian_velocity()
    rho0 = fs.family("zero", GRID)
    sol2 = tc.twocomp_solve(u0, rho0, u0_slope=dv)
    sol1 = hs.hs_solve(u0, u0_slope=dv)
    assert sol2.t_breakdown == sol1.t_blowup
    for t in (0.5, 1.5):
        u2, rho2, phi2 = tc.twocomp_eval(sol2, t)
        u1, phi1 = hs.hs_eval(sol1, t)
        assert np.all(rho2.values == 0.0)
        assert np.max(np.abs(phi2.f.values - phi1.f.values)) < 1e-12
        assert np.max(np.abs(u2.values - u1.values)) < 1e-8


def test_positive_density_prevents_breakdown():
    u0, dv = gaussian_velocity()
    assert float(np.min(dv.values)) < 0.0
    rho0, _ = gaussian_pair(amp=0.2, center=0.0, width=2.0)
    assert np.all(rho0.values > 0.0)
    sol = tc.twocomp_solve(u0, rho0, u0_slope=dv)
    assert sol.t_breakdown == np.inf
    e0 = tc.twocomp_energy(sol, 0.0)
    for t in (1.0, 10.0, 100.0):
        assert abs(tc.twocomp_energy(sol, t) - e0) < 1e-9 * e0


def test_breakdown_needs_bare_negative_slope():
    u0, dv = gaussian_velocity()  # slopes negative for x > 0
    assert float(np.min(dv.values)) < 0.0
    covering, _ = gaussian_pair(amp=0.1, center=0.0, width=2.0)
    assert tc.twocomp_solve(u0, covering,
                            u0_slope=dv).t_breakdown == np.inf
    # bump densities vanish exactly outside their support
    off_support = fs.family("bump", GRID, amp=0.3, lo=-6.0, hi=-3.0)
    sol = tc.twocomp_solve(u0, off_support, u0_slope=dv)
    assert sol.t_breakdown == 2.0 / abs(float(np.min(dv.values)))
    assert sol.t_breakdown_back == -2.0 / abs(float(np.max(dv.values)))
    shielding = fs.family("bump", GRID, amp=0.3, lo=0.0, hi=9.0)
    masked = tc.twocomp_solve(u0, shielding, u0_slope=dv)
    bare_min = float(np.min(dv.values[shielding.values == 0.0]))
    assert masked.t_breakdown == -2.0 / bare_min
    assert masked.t_breakdown > sol.t_breakdown


def test_fields_refused_past_breakdown():
    u0, dv = gaussian_velocity()
    sol = tc.twocomp_solve(u0, fs.family("zero", GRID), u0_slope=dv)
    t_star = sol.t_breakdown
    tc.twocomp_eval(sol, 0.98 * t_star)
    with pytest.raises(PastBlowup):
        tc.twocomp_eval(sol, t_star)
    with pytest.raises(PastBlowup):
        tc.twocomp_slopes(sol, 1.5 * t_star)
    with pytest.raises(PastBlowup):
        tc.twocomp_eval(sol, 1.01 * sol.t_breakdown_back)


def test_energy_measured_on_the_moving_frame():
    u0, dv = gaussian_velocity()
    rho0, _ = gaussian_pair(amp=0.3, center=0.5, width=1.5)
    sol = tc.twocomp_solve(u0, rho0, u0_slope=dv)
    e0 = tc.twocomp_energy(sol, 0.0)
    for t in (0.5, 1.0, 2.0):
        ux, rho = tc.twocomp_slopes(sol, t)
        vals = ux.values ** 2 + rho.values ** 2
        measured = fs.integrate(fs.GridFunction(GRID, vals,
                                                fs.DECAY_BOUNDED),
                                fs.SIMPSON)
        assert abs(measured - e0) < 1e-6 * e0


def test_pde_residuals_vanish():
    # u_t + u u_x - (1/2) cumint(u_x^2 + rho^2) = 0 and
    # rho_t + (rho u)_x = 0, measured with central time differences
    u0, dv = gaussian_velocity()
    rho0, _ = gaussian_pair(amp=0.3, center=0.5, width=1.5)
    sol = tc.twocomp_solve(u0, rho0, u0_slope=dv)
    t, dt = 1.0, 1e-3
    u_lo, rho_lo, _ = tc.twocomp_eval(sol, t - dt)
    u_mid, rho_mid, _ = tc.twocomp_eval(sol, t)
    u_hi, rho_hi, _ = tc.twocomp_eval(sol, t + dt)
    u_t = (u_hi.values - u_lo.values) / (2.0 * dt)
    rho_t = (rho_hi.values - rho_lo.values) / (2.0 * dt)
    ux = fs.derivative(u_mid)
    source = fs.antiderivative_from_minus_infinity(
        fs.GridFunction(GRID, ux.values ** 2 + rho_mid.values ** 2,
                        fs.DECAY_WTYPE))
    res_u = u_t + u_mid.values * ux.values - 0.5 * source.values
    flux = fs.derivative(fs.GridFunction(GRID,
                                         rho_mid.values * u_mid.values,
                                         fs.DECAY_BOUNDED))
    res_rho = rho_t + flux.values
    assert np.max(np.abs(res_u)) < 1e-5
    assert np.max(np.abs(res_rho)) < 1e-5


def test_geodesic_rhs_defect_witness():
    X, _ = gaussian_velocity(amp=0.5, center=-0.3, width=1.1)
    a, _ = gaussian_pair(amp=0.4, center=0.8, width=0.9)
    u_part, rho_part = tc.euler_arnold_rhs_2c(X, a)
    dx = fs.derivative(X.X)
    half_energy = 0.5 * fs.integrate(
        fs.GridFunction(GRID, dx.values ** 2 + a.values ** 2,
                        fs.DECAY_WTYPE), fs.SIMPSON)
    defect = fs.limit_at_plus_infinity(u_part)
    assert defect > 0.0
    assert abs(defect - half_energy) < 1e-7
    assert abs(rho_part.values[0]) < 1e-10
    assert abs(rho_part.values[-1]) < 1e-10
