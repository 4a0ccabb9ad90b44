"""End-to-end acceptance suite pinning the package's published tolerances.

Each test freezes one external guarantee: the lift isometries and round
trips, the stored geodesic walkthrough, the steep-sigmoid exit time, the
transport-equation residual orders and dichotomies, closed-form distance
and shift laws, flatness, the soliton Hamiltonian system, the
two-component breakdown matrix, the periodic sphere chart, and the
subgroup defect witnesses.  Tolerances here are contract values, not
measured margins; loosen nothing without a recorded reason.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from hsgeo import cli
from hsgeo import connection as cn
from hsgeo import diffeo as dg
from hsgeo import funcspace as fs
from hsgeo import geodesic as ge
from hsgeo import hs_solve as hs
from hsgeo import periodic_ch as pc
from hsgeo import rmap as rm
from hsgeo import soliton as so
from hsgeo import twocomp as tc

GRID = fs.Grid.line(2001, -10.0, 10.0)
PGRID = fs.Grid.periodic(512)
DATA = Path(__file__).parent / "data"


def random_diffeo(rng, grid=GRID):
    lo = rng.uniform(-6.0, 0.5)
    width = rng.uniform(3.5, 5.0)
    amp = rng.uniform(-0.45, 0.45)
    return dg.diffeo_from_family("bump", grid, amp=amp, lo=lo,
                                 hi=lo + width)


def random_variation(rng, grid=GRID):
    v = np.zeros(grid.n)
    for _ in range(3):
        c = rng.uniform(-2.0, 2.0)
        w = rng.uniform(0.5, 1.2)
        a = rng.uniform(-0.5, 0.5)
        v += a * np.exp(-((grid.nodes - c) / w) ** 2)
    return fs.GridFunction(grid, v, fs.DECAY_RAPID)


def random_field(rng, grid=GRID):
    # one packet with amplitude and width bounded away from the scales
    # where the relative curvature ratio loses conditioning
    amp = rng.choice((-1.0, 1.0)) * rng.uniform(0.4, 1.0)
    f = fs.family("gaussian", grid, amp=amp,
                  center=rng.uniform(-1.5, 1.5),
                  width=rng.uniform(1.0, 1.6))
    return cn.TangentVectorAtId(f, "A")


def random_circle_map(rng, grid=PGRID):
    th = grid.nodes
    a = rng.uniform(-0.3, 0.3)
    b = rng.uniform(-0.12, 0.12)
    s = rng.uniform(0.0, 2.0 * np.pi)
    f = a * np.sin(th + s) + b * np.cos(2.0 * th)
    fp = a * np.cos(th + s) - 2.0 * b * np.sin(2.0 * th)
    return pc.PeriodicDiffeo(fs.GridFunction(grid, f, fs.DECAY_PERIODIC),
                             fs.GridFunction(grid, fp, fs.DECAY_PERIODIC))


def random_wave(rng, grid=PGRID):
    c = rng.uniform(-0.8, 0.8)
    k = rng.integers(1, 4)
    s = rng.uniform(0.0, 2.0 * np.pi)
    return fs.GridFunction(grid, c * np.sin(k * grid.nodes + s),
                           fs.DECAY_PERIODIC)


def translated(h, phi):
    vals = fs.compose_values(h, dg.invert(phi).phi_values)
    return fs.GridFunction(phi.grid, vals, fs.DECAY_BOUNDED)


def hdot(X, Y):
    prod = fs.derivative(X).values * fs.derivative(Y).values
    return float(fs.integrate(fs.GridFunction(X.grid, prod,
                                              fs.DECAY_BOUNDED)))


# ---------------------------------------------------------------------------
# 1. the scalar lift is an isometry
# ---------------------------------------------------------------------------

def test_isometry_over_hundred_random_triples():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    for _ in range(100):
        phi = random_diffeo(rng)
        h = random_variation(rng)
        k = random_variation(rng)
        lhs = rm.pullback_metric(phi, h, k)
        rhs = hdot(translated(h, phi), translated(k, phi))
        assert abs(lhs - rhs) < 1e-6 * (1.0 + abs(rhs))
    assert time.perf_counter() - t0 < 10.0


# ---------------------------------------------------------------------------
# 2. round trips in all three charts
# ---------------------------------------------------------------------------

def test_round_trips_stay_under_tolerance():
    rng = np.random.default_rng(102)
    for _ in range(20):
        phi = random_diffeo(rng)
        gamma = rm.r_map(phi)
        back = rm.r_inverse(gamma)
        assert np.max(np.abs(back.f.values - phi.f.values)) < 1e-8
        again = rm.r_map(back)
        assert np.max(np.abs(again.gamma.values
                             - gamma.gamma.values)) < 1e-8
    for _ in range(5):
        state = tc.TwoCompConfig(random_diffeo(rng), random_variation(rng))
        point = tc.r_map_2c(state)
        back = tc.r_inverse_2c(point)
        assert np.max(np.abs(back.phi.f.values
                             - state.phi.f.values)) < 1e-8
        assert np.max(np.abs(back.alpha.values
                             - state.alpha.values)) < 1e-8
        again = tc.r_map_2c(back)
        assert np.max(np.abs(again.gamma.values
                             - point.gamma.values)) < 1e-8
    for _ in range(5):
        rep = pc.normalize_mean(random_circle_map(rng))
        gamma = pc.r_map_periodic(rep)
        back = pc.r_inverse_periodic(gamma)
        assert np.max(np.abs(back.f.values - rep.f.values)) < 1e-8
        again = pc.r_map_periodic(back)
        assert np.max(np.abs(again.gamma.values
                             - gamma.gamma.values)) < 1e-8


# ---------------------------------------------------------------------------
# 3. stored geodesic walkthrough reproduces bit-exactly
# ---------------------------------------------------------------------------

def test_geodesic_walkthrough_matches_stored_bytes(tmp_path, capsys):
    out = tmp_path / "walkthrough.csv"
    code = cli.main(["geodesic", "--from", "identity",
                     "--to", "bump:amp=1,lo=-1,hi=1",
                     "--times", "0,0.5,1,1.5,2,2.5,3",
                     "-o", str(out)])
    capsys.readouterr()
    assert code == 0
    assert out.read_bytes() == (DATA / "fig1_regression.csv").read_bytes()


# ---------------------------------------------------------------------------
# 4. steep-sigmoid exit time
# ---------------------------------------------------------------------------

def test_steep_sigmoid_exit_time():
    # the documented walkthrough for this direction pins the exit near
    # t = 2.58; this build computes 8.000, a standing deviation recorded
    # in the README, so the assertion below is expected to fail until
    # the discrepancy is resolved
    t0 = time.perf_counter()
    k = fs.family("logistic-neg", GRID)
    start = rm.RPoint(fs.GridFunction(GRID, np.zeros(GRID.n),
                                      fs.DECAY_RAPID))
    exit_time = ge.blowup_time(ge.geodesic_from_direction(start, k))
    assert time.perf_counter() - t0 < 1.0
    assert abs(exit_time - 2.58) <= 0.01


# ---------------------------------------------------------------------------
# 5. transport equation: residual order and blow-up dichotomy
# ---------------------------------------------------------------------------

def _transport_residual(n, s, t=0.8):
    grid = fs.Grid.line(n, -10.0, 10.0)
    u0, slope = fs.family_with_derivative("gaussian", grid, amp=0.5,
                                          width=1.4)
    sol = hs.hs_solve(cn.TangentVectorAtId(u0, "A"), u0_slope=slope)
    u_mid, _ = hs.hs_eval(sol, t)
    u_plus, _ = hs.hs_eval(sol, t + s)
    u_minus, _ = hs.hs_eval(sol, t - s)
    u_t = (u_plus.values - u_minus.values) / (2.0 * s)
    ux = fs.derivative(u_mid)
    cum = fs.antiderivative_from_minus_infinity(
        fs.GridFunction(grid, ux.values ** 2, fs.DECAY_WTYPE))
    res = u_t + u_mid.values * ux.values - 0.5 * cum.values
    return float(np.max(np.abs(res)))


def test_transport_residual_converges_at_second_order():
    res = [_transport_residual(n, s) for n, s in ((501, 4e-3),
                                                  (1001, 2e-3),
                                                  (2001, 1e-3))]
    order = min(np.log2(res[0] / res[1]), np.log2(res[1] / res[2]))
    assert order >= 1.8


def ramp_velocity(scale):
    g = fs.family("gaussian", GRID)
    slope = g.with_values(scale * g.values)
    u0 = fs.antiderivative_from_minus_infinity(g)
    return cn.TangentVectorAtId(u0.with_values(scale * u0.values),
                                "A1"), slope


def test_blowup_dichotomy_is_exact():
    u0, slope = fs.family_with_derivative("gaussian", GRID, amp=0.5,
                                          width=1.4)
    sol = hs.hs_solve(cn.TangentVectorAtId(u0, "A"), u0_slope=slope)
    assert sol.t_blowup == 2.0 / abs(float(np.min(slope.values)))
    rising, rslope = ramp_velocity(0.5)
    rsol = hs.hs_solve(rising, u0_slope=rslope)
    assert not np.isfinite(rsol.t_blowup)
    u100, _ = hs.hs_eval(rsol, 100.0)
    assert np.all(np.isfinite(u100.values))


# ---------------------------------------------------------------------------
# 6. distance equals discretized path length
# ---------------------------------------------------------------------------

def test_distance_matches_path_length_integral():
    rng = np.random.default_rng(106)
    s = 1e-6
    ts = np.linspace(0.0, 1.0, 11)
    for _ in range(20):
        phi0 = random_diffeo(rng)
        phi1 = random_diffeo(rng)
        d = ge.distance(phi0, phi1)
        path = ge.geodesic_bvp(phi0, phi1)
        speeds = []
        for t in ts:
            mid = ge.evaluate(path, float(t))
            fp = ge.evaluate(path, float(t) + s).f.values
            fm = ge.evaluate(path, float(t) - s).f.values
            ht = fs.GridFunction(GRID, (fp - fm) / (2.0 * s),
                                 fs.DECAY_BOUNDED)
            speeds.append(np.sqrt(max(rm.pullback_metric(mid, ht, ht),
                                      0.0)))
        length = float(np.trapezoid(speeds, ts))
        assert d > 1e-6
        assert abs(d - length) / d < 1e-5


# ---------------------------------------------------------------------------
# 7. shift along a geodesic is an exact quadratic
# ---------------------------------------------------------------------------

def test_shift_follows_quadratic_law():
    rng = np.random.default_rng(107)
    ts = np.linspace(0.0, 1.0, 11)
    for _ in range(5):
        phi0 = random_diffeo(rng)
        phi1 = random_diffeo(rng)
        path = ge.geodesic_bvp(phi0, phi1)
        ksq = float(fs.integrate(fs.GridFunction(
            GRID, path.k.values ** 2, fs.DECAY_BOUNDED), fs.SIMPSON))
        direct = []
        for t in ts:
            predicted, _ = ge.shift_along_geodesic(path, float(t))
            _, right = dg.shifts(ge.evaluate(path, float(t)))
            assert abs(predicted - right) < 1e-6
            direct.append(right)
        # endpoints in the decaying class carry no shift at all
        assert abs(direct[0]) < 1e-12
        assert abs(direct[-1]) < 1e-12
        coeff = np.polyfit(ts, direct, 2)[0]
        assert abs(coeff - ksq / 4.0) < 1e-7


# ---------------------------------------------------------------------------
# 8. flat curvature and the polarized-operator identities
# ---------------------------------------------------------------------------

def test_curvature_numerator_vanishes_relative_to_norms():
    rng = np.random.default_rng(108)
    for _ in range(50):
        X = random_field(rng)
        Y = random_field(rng)
        scale = cn.metric_h1(X, X) * cn.metric_h1(Y, Y)
        assert abs(cn.curvature_numerator(X, Y)) < 1e-6 * scale


def test_polarized_operator_identities():
    rng = np.random.default_rng(109)
    for _ in range(6):
        X = random_field(rng)
        Y = random_field(rng)
        Z = random_field(rng)
        cyclic = (cn.metric_h1(cn.rho(X, Y), Z)
                  + cn.metric_h1(cn.rho(Y, Z), X)
                  + cn.metric_h1(cn.rho(Z, X), Y))
        pairing = (cn.metric_h1(cn.rho(X, Y), Z)
                   - 0.5 * (cn.metric_h1(X, cn.lie_bracket(Y, Z))
                            + cn.metric_h1(Y, cn.lie_bracket(X, Z))))
        assert abs(cyclic) < 1e-7
        assert abs(pairing) < 1e-7


# ---------------------------------------------------------------------------
# 9. soliton Hamiltonian system
# ---------------------------------------------------------------------------

def random_soliton(rng, n):
    # kinks snapped to cell midpoints so the transport identity is exact
    j = np.sort(rng.choice(np.arange(400, 1600), size=n, replace=False))
    y = GRID.nodes[j] + 0.5 * GRID.h
    a = rng.uniform(-1.0, 1.0, n)
    a[-1] = -np.sum(a[:-1])
    return so.SolitonState(y, a)


def collapse_time(state):
    S = so.partial_sums(state).S
    top = float(np.max(S))
    return 2.0 / top if top > 0.0 else np.inf


def safe_soliton(rng, n, horizon):
    state = random_soliton(rng, n)
    while collapse_time(state) < horizon:
        state = random_soliton(rng, n)
    return state


def rk4_flow(state, t_final, dt):
    steps = int(round(t_final / dt))
    y, a = state.y.copy(), state.a.copy()
    for _ in range(steps):
        k1y, k1a = so.hamilton_rhs(so.SolitonState(y, a))
        k2y, k2a = so.hamilton_rhs(so.SolitonState(y + 0.5 * dt * k1y,
                                                   a + 0.5 * dt * k1a))
        k3y, k3a = so.hamilton_rhs(so.SolitonState(y + 0.5 * dt * k2y,
                                                   a + 0.5 * dt * k2a))
        k4y, k4a = so.hamilton_rhs(so.SolitonState(y + dt * k3y,
                                                   a + dt * k3a))
        y = y + dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        a = a + dt / 6.0 * (k1a + 2.0 * k2a + 2.0 * k3a + k4a)
    return so.SolitonState(y, a)


def test_soliton_closed_form_matches_rk4():
    rng = np.random.default_rng(110)
    for n in (2, 4, 6):
        state = safe_soliton(rng, n, 2.0)
        closed = so.soliton_flow_closed_form(state, 1.0)
        oracle = rk4_flow(state, 1.0, 1e-4)
        assert np.max(np.abs(closed.y - oracle.y)) < 1e-6
        assert np.max(np.abs(closed.a - oracle.a)) < 1e-6


def test_soliton_energy_is_conserved():
    rng = np.random.default_rng(111)
    for n in (3, 6):
        state = safe_soliton(rng, n, 2.0)
        e0 = so.soliton_energy(state)
        for t in (0.25, 0.6, 1.0):
            flowed = so.soliton_flow_closed_form(state, t)
            assert abs(so.soliton_energy(flowed) - e0) < 1e-9


def test_soliton_kinks_ride_the_flow():
    rng = np.random.default_rng(112)
    state = safe_soliton(rng, 5, 1.5)
    u0 = so.soliton_to_velocity(state, GRID)
    S = np.cumsum(state.a)
    slope = np.zeros(GRID.n)
    for i in range(state.n - 1):
        inside = ((GRID.nodes > state.y[i])
                  & (GRID.nodes < state.y[i + 1]))
        slope[inside] = -S[i]
    sol = hs.hs_solve(cn.TangentVectorAtId(u0, "A1"),
                      u0_slope=fs.GridFunction(GRID, slope,
                                               fs.DECAY_BOUNDED),
                      cumulative_rule="trapezoid")
    j = np.searchsorted(GRID.nodes, state.y) - 1
    for t in (0.4, 1.0):
        phi = hs.hs_phi(sol, t)
        flowed = so.soliton_flow_closed_form(state, t)
        at_kinks = (phi.phi_values[j]
                    + 0.5 * GRID.h * (1.0 + phi.f_prime.values[j]))
        assert np.max(np.abs(at_kinks - flowed.y)) < 1e-6


def test_soliton_rhs_is_energy_gradient():
    rng = np.random.default_rng(113)
    state = random_soliton(rng, 6)
    dy, da = so.hamilton_rhs(state)
    eps = 1e-6
    for i in range(state.n):
        y_hi = state.y.copy()
        y_lo = state.y.copy()
        y_hi[i] += eps
        y_lo[i] -= eps
        fd = (so.soliton_energy(so.SolitonState(y_hi, state.a))
              - so.soliton_energy(so.SolitonState(y_lo,
                                                  state.a))) / (2 * eps)
        assert abs(da[i] + fd) < 1e-7
    for i in range(state.n - 1):
        # weights must keep a zero sum, so perturb adjacent pairs
        a_hi = state.a.copy()
        a_lo = state.a.copy()
        a_hi[i] += eps
        a_hi[i + 1] -= eps
        a_lo[i] -= eps
        a_lo[i + 1] += eps
        fd = (so.soliton_energy(so.SolitonState(state.y, a_hi))
              - so.soliton_energy(so.SolitonState(state.y,
                                                  a_lo))) / (2 * eps)
        assert abs((dy[i] - dy[i + 1]) - fd) < 1e-7


# ---------------------------------------------------------------------------
# 10. two-component system
# ---------------------------------------------------------------------------

def test_zero_density_reduces_to_scalar_flow():
    rng = np.random.default_rng(114)
    zero = fs.GridFunction(GRID, np.zeros(GRID.n), fs.DECAY_RAPID)
    for _ in range(3):
        v, dv = fs.family_with_derivative(
            "gaussian", GRID, amp=rng.choice((-1.0, 1.0))
            * rng.uniform(0.3, 0.5), center=rng.uniform(-1.0, 1.0),
            width=rng.uniform(1.0, 1.6))
        u0 = cn.TangentVectorAtId(v, "A")
        two = tc.twocomp_solve(u0, zero, u0_slope=dv)
        one = hs.hs_solve(u0, u0_slope=dv)
        assert two.t_breakdown == one.t_blowup
        horizon = min(one.t_blowup, 4.0)
        for t in (0.2, 0.5 * horizon):
            u2, rho2, phi2 = tc.twocomp_eval(two, t)
            u1, phi1 = hs.hs_eval(one, t)
            assert np.max(np.abs(u2.values - u1.values)) < 1e-8
            assert np.max(np.abs(rho2.values)) < 1e-8
            assert np.max(np.abs(phi2.f.values - phi1.f.values)) < 1e-8


def breakdown_cases():
    # a bump velocity falls exactly on part of (0, 2) and is exactly
    # flat outside, so the density bumps can cover, miss, or straddle
    # the falling nodes by construction
    fall, fall_slope = fs.family_with_derivative("bump", GRID, amp=0.5,
                                                 lo=-2.0, hi=2.0)
    fall_u = cn.TangentVectorAtId(fall, "A")
    rise_u, rise_slope = ramp_velocity(0.5)
    zero = fs.GridFunction(GRID, np.zeros(GRID.n), fs.DECAY_RAPID)
    zero_u = cn.TangentVectorAtId(zero, "A")
    wide = fs.family("bump", GRID, amp=0.4, lo=-3.0, hi=3.0)
    narrow = fs.family("bump", GRID, amp=0.4, lo=-0.5, hi=0.5)
    off = fs.family("bump", GRID, amp=0.4, lo=5.0, hi=8.0)
    gauss = fs.family("gaussian", GRID, amp=0.4, width=1.5)
    return [
        (zero_u, zero, zero, False),           # nothing moves
        (fall_u, fall_slope, zero, True),      # bare falling slope
        (fall_u, fall_slope, wide, False),     # shielded where it falls
        (fall_u, fall_slope, narrow, True),    # shield too narrow
        (rise_u, rise_slope, zero, False),     # rising slopes never break
        (rise_u, rise_slope, gauss, False),    # dense rising, still safe
        (fall_u, fall_slope, gauss, False),    # strictly positive density
        (fall_u, fall_slope, off, True),       # shield misses the fall
    ]


def test_breakdown_happens_exactly_when_predicted():
    for u0, slope, rho0, expect_finite in breakdown_cases():
        sol = tc.twocomp_solve(u0, rho0, u0_slope=slope)
        assert np.isfinite(sol.t_breakdown) == expect_finite
        if expect_finite:
            bare = (rho0.values == 0.0) & (slope.values < 0.0)
            assert sol.t_breakdown == -2.0 / float(
                np.min(slope.values[bare]))


def _twocomp_residual(n, s, t=0.5):
    grid = fs.Grid.line(n, -10.0, 10.0)
    u0, slope = fs.family_with_derivative("gaussian", grid, amp=0.5,
                                          width=1.4)
    rho0 = fs.family("gaussian", grid, amp=0.6, center=0.5, width=1.8)
    sol = tc.twocomp_solve(cn.TangentVectorAtId(u0, "A"), rho0,
                           u0_slope=slope)
    u_mid, rho_mid, _ = tc.twocomp_eval(sol, t)
    u_p, rho_p, _ = tc.twocomp_eval(sol, t + s)
    u_m, rho_m, _ = tc.twocomp_eval(sol, t - s)
    u_t = (u_p.values - u_m.values) / (2.0 * s)
    rho_t = (rho_p.values - rho_m.values) / (2.0 * s)
    ux = fs.derivative(u_mid)
    cum = fs.antiderivative_from_minus_infinity(
        fs.GridFunction(grid, ux.values ** 2 + rho_mid.values ** 2,
                        fs.DECAY_WTYPE))
    res_u = u_t + u_mid.values * ux.values - 0.5 * cum.values
    flux = fs.GridFunction(grid, u_mid.values * rho_mid.values,
                           fs.DECAY_BOUNDED)
    res_rho = rho_t + fs.derivative(flux).values
    return max(float(np.max(np.abs(res_u))),
               float(np.max(np.abs(res_rho))))


def test_twocomp_residual_converges_at_second_order():
    res = [_twocomp_residual(n, s) for n, s in ((1001, 2e-3),
                                                (2001, 1e-3),
                                                (4001, 5e-4))]
    order = min(np.log2(res[0] / res[1]), np.log2(res[1] / res[2]))
    assert order >= 1.8


# ---------------------------------------------------------------------------
# 11. periodic sphere chart and the phase-locked variant
# ---------------------------------------------------------------------------

def test_periodic_lift_lands_on_the_sphere():
    rng = np.random.default_rng(115)
    for _ in range(10):
        gamma = pc.r_map_periodic(random_circle_map(rng))
        # rectangle rule is the natural quadrature on a periodic grid
        norm_sq = float(np.sum(gamma.gamma.values ** 2) * PGRID.h)
        assert abs(norm_sq - 8.0 * np.pi) < 1e-8
        assert abs(gamma.norm_sq - 8.0 * np.pi) < 1e-8


def test_periodic_pullback_is_the_homogeneous_inner_product():
    rng = np.random.default_rng(116)
    for _ in range(10):
        phi = random_circle_map(rng)
        h = random_wave(rng)
        k = random_wave(rng)
        lhs = pc.pullback_periodic(phi, h, k)
        back = pc.invert_periodic(phi).phi_values
        X = fs.GridFunction(PGRID, pc.compose_periodic_values(h, back),
                            fs.DECAY_PERIODIC)
        Y = fs.GridFunction(PGRID, pc.compose_periodic_values(k, back),
                            fs.DECAY_PERIODIC)
        prod = fs.derivative(X).values * fs.derivative(Y).values
        rhs = float(fs.integrate(X.with_values(prod)))
        assert abs(lhs - rhs) < 1e-6 * (1.0 + abs(rhs))


def test_phase_locked_pullback_identity():
    rng = np.random.default_rng(117)
    for _ in range(10):
        phi = random_circle_map(rng)
        lhs, rhs = pc.ch_pullback_check(phi, random_wave(rng),
                                        random_wave(rng))
        assert abs(lhs - rhs) < 1e-6 * (1.0 + abs(rhs))


def test_phase_constraint_separates_images():
    rng = np.random.default_rng(118)
    th = PGRID.nodes
    for _ in range(6):
        gamma = pc.ch_r_map(random_circle_map(rng))
        res = pc.ch_phase_constraint(gamma)
        assert np.max(np.abs(res.values + 4.0)) < 1e-6
        bent = gamma.with_values(
            gamma.values + 0.25 * np.exp(1j * th + np.cos(th)) / 3.0)
        off = pc.ch_phase_constraint(bent)
        assert np.max(np.abs(off.values + 4.0)) > 0.1


# ---------------------------------------------------------------------------
# 12. the geodesic right-hand side leaves the decaying subalgebra
# ---------------------------------------------------------------------------

def test_geodesic_rhs_defect_equals_half_energy():
    rng = np.random.default_rng(119)
    for _ in range(20):
        X = random_field(rng)
        half_energy = 0.5 * cn.metric_h1(X, X)
        defect = float(cn.euler_arnold_rhs(X).values[-1])
        assert defect > 0.0
        assert abs(defect - half_energy) < 1e-7
