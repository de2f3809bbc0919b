import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secantflow import dynamics
from secantflow.dynamics import SecantCloud, Section, Trajectory
from secantflow.polyalg import parse_poly


def decay(t, s):
    return -s


def rotation(t, s):
    return np.array([-s[1], s[0], 0.0])


# integrator -------------------------------------------------------------------

def test_decay_endpoint():
    tr = dynamics.integrate(decay, [1, 0, 0], 5.0, rel_tol=1e-10, abs_tol=1e-14)
    assert np.abs(tr.points[-1] - [math.exp(-5), 0, 0]).max() <= 1e-8
    assert tr.status == "completed"
    assert (np.diff(tr.t) > 0).all()


def test_rotation_radius():
    tr = dynamics.integrate(rotation, [1, 0, 0], 100.0, rel_tol=1e-10, abs_tol=1e-12)
    r = np.linalg.norm(tr.points, axis=1)
    assert np.abs(r - 1).max() < 1e-8


def test_zero_field_constant():
    tr = dynamics.integrate(lambda t, s: np.zeros(3), [0.3, -0.2, 0.1], 10.0)
    assert (tr.points == tr.points[0]).all()


def test_t_eval_exact_times():
    te = np.linspace(0, 2, 21)
    tr = dynamics.integrate(decay, [1, 1, 1], 2.0, rel_tol=1e-10, abs_tol=1e-14, t_eval=te)
    assert np.array_equal(tr.t, te)
    assert np.allclose(tr.points[:, 0], np.exp(-te), atol=1e-9)


def test_max_steps_graceful():
    tr = dynamics.integrate(rotation, [1, 0, 0], 100.0, max_steps=10)
    assert tr.status == "max_steps"
    assert len(tr.t) >= 2 and np.isfinite(tr.points).all()


def test_unit_speed_same_orbit():
    tr = dynamics.integrate(lambda t, s: 5 * np.array([-s[1], s[0], 0.0]), [1, 0, 0], 3.0, rescale="unit_speed",
                            rel_tol=1e-10, abs_tol=1e-12)
    assert np.abs(np.linalg.norm(tr.points, axis=1) - 1).max() < 1e-8
    # unit speed: arc length equals time
    arc = np.linalg.norm(np.diff(tr.points, axis=0), axis=1).sum()
    assert arc == pytest.approx(3.0, rel=1e-3)


def test_integrate_errors():
    with pytest.raises(ValueError):
        dynamics.integrate(decay, [1, 0, 0], 1.0, rel_tol=0)
    with pytest.raises(ValueError):
        dynamics.integrate(decay, [np.nan, 0, 0], 1.0)
    with pytest.raises(dynamics.IntegrationError) as e:
        dynamics.integrate(lambda t, s: np.array([np.inf, 0, 0]) if t > 0.5 else -s, [1, 0, 0], 1.0)
    assert len(e.value.trajectory.t) >= 1


def test_orders():
    exact = np.array([math.exp(-2)] * 3)
    fixed = dynamics.observed_order_fixed_step(decay, [1, 1, 1], 2.0, exact)
    assert min(fixed) >= dynamics.DESIGN_ORDER - 1
    assert dynamics.observed_order_adaptive(decay, [1, 1, 1], 2.0, exact) >= dynamics.DESIGN_ORDER - 1


def test_trajectory_csv():
    tr = Trajectory(np.array([0.0, 1.0]), np.array([[0.0, 0, 1], [1, 0, 1]]), {}, np.array([0.0, 0.5]))
    assert tr.csv_header() == ["t", "x", "y", "z", "depth"]
    assert list(tr.csv_rows())[1] == [1.0, 1.0, 0.0, 1.0, 0.5]


# seeding --------------------------------------------------------------------------

def test_seed_toy():
    p = dynamics.seed_on_surface(parse_poly("x^2+y^2-z"), 0.25)
    assert p == pytest.approx((0.5, 0.0, 0.25), abs=1e-12)


def test_seed_example1(family1):
    p = dynamics.seed_on_surface(family1, 1 / 8)
    assert abs(float(family1.numeric()(*p)[0])) <= 1e-10


def test_seed_empty_slice():
    with pytest.raises(dynamics.SeedError):
        dynamics.seed_on_surface(parse_poly("x^2+y^2+1"), 0.25)


# secants ------------------------------------------------------------------------

def test_alpha_map_examples():
    assert np.allclose(dynamics.alpha_map([[0, 0]]), [[0, 0, 1]])
    assert np.allclose(dynamics.alpha_map([[1, 0]]), [[1 / math.sqrt(2), 0, 1 / math.sqrt(2)]])


@settings(max_examples=50)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(1e-6, 5))
def test_secant_chart_identity(x, y, z):
    s = dynamics.sigma([x, y, z])[0]
    assert np.abs(s / np.linalg.norm(s) - dynamics.alpha_map([[x, y]])[0]).max() <= 1e-14


def test_secants_ambient_examples():
    tr = Trajectory(np.array([0.0, 1.0]), np.array([[0.0, 0, 5], [3, 4, 0]]))
    assert np.allclose(dynamics.secants_ambient(tr).points, [[0, 0, 1], [0.6, 0.8, 0]])
    with pytest.raises(ValueError):
        dynamics.secants_ambient(Trajectory(np.array([0.0]), np.zeros((1, 3))))


def test_secants_from_chart_needs_positive_z():
    with pytest.raises(ValueError):
        dynamics.secants_from_chart(Trajectory(np.array([0.0]), np.array([[1.0, 0, 0]])))


def test_secant_norms(rng):
    tr = Trajectory(np.arange(50.0), np.column_stack([rng.normal(size=(50, 2)), rng.uniform(0.1, 1, 50)]))
    c = dynamics.secants_from_chart(tr)
    assert np.abs(np.linalg.norm(c.points, axis=1) - 1).max() <= 1e-12


# spiral monitor --------------------------------------------------------------------

def test_spiral_rotation_with_decay():
    T = 40.0
    f = lambda t, s: np.array([-s[1], s[0], -s[2] ** 3])  # noqa: E731
    tr = dynamics.integrate(f, [1.0, 0.0, 1.0], T, rel_tol=1e-10, abs_tol=1e-12, t_eval=np.arange(0, T, 0.01))
    sec = Section(np.array([0.0, 0.0]), np.array([1.0, 0.0]), reach=2.0)
    lap = dynamics.spiral_monitor(tr, sec)
    assert abs(lap.laps - T / (2 * math.pi)) <= 1
    assert lap.z_strictly_decreasing and lap.spiraling
    assert np.allclose(np.diff(lap.crossing_times), 2 * math.pi, atol=1e-6)


def test_spiral_no_crossings():
    tr = Trajectory(np.arange(10.0), np.column_stack([np.linspace(-1, -0.5, 10), np.full(10, 0.3), np.ones(10)]))
    lap = dynamics.spiral_monitor(tr, Section(np.array([0.0, 0.0]), np.array([1.0, 0.0]), 1.0))
    assert lap.laps == 0 and not lap.spiraling


def test_spiral_rejects_nonpositive_z():
    tr = Trajectory(np.arange(2.0), np.array([[1.0, 0, 0.1], [1, 0, -0.1]]))
    with pytest.raises(ValueError):
        dynamics.spiral_monitor(tr, Section(np.array([0.0, 0.0]), np.array([1.0, 0.0])))


# omega estimate ---------------------------------------------------------------------

def _circle_target(n=400):
    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return dynamics.alpha_map(np.column_stack([0.5 * np.cos(t), 0.5 * np.sin(t)]))


def test_omega_exact_copies():
    T = _circle_target()
    rep = dynamics.omega_estimate(SecantCloud(np.vstack([T] * 4)), T, windows=4, tail_fraction=1.0)
    assert rep.distances == [0.0] * 4 and rep.converging


def test_omega_outlier_in_first_window_only():
    T = _circle_target()
    cloud = np.vstack([T] * 4)
    out = cloud.copy()
    out[3] = [0.0, 0.0, 1.0]
    base = dynamics.omega_estimate(SecantCloud(cloud), T, windows=4, tail_fraction=1.0)
    pert = dynamics.omega_estimate(SecantCloud(out), T, windows=4, tail_fraction=1.0)
    assert pert.distances[0] > 0.3
    assert pert.final_distance == base.final_distance == 0.0


def test_omega_rewindowing_keeps_final_window():
    T = _circle_target()
    rng = np.random.default_rng(1)
    cloud = T[rng.integers(0, len(T), 2000)] + rng.normal(0, 1e-3, (2000, 3))
    a = dynamics.omega_estimate(SecantCloud(cloud), T, windows=2, boundaries=[0, 1500, 2000])
    b = dynamics.omega_estimate(SecantCloud(cloud), T, windows=4, boundaries=[0, 500, 1000, 1500, 2000])
    assert a.final_distance == b.final_distance


def test_omega_errors():
    T = _circle_target()
    with pytest.raises(ValueError):
        dynamics.omega_estimate(SecantCloud(T), T, windows=1)
    with pytest.raises(ValueError):
        dynamics.omega_estimate(SecantCloud(T), np.zeros((0, 3)))


def test_secant_cloud_csv():
    c = SecantCloud(np.eye(3), [0, 2])
    assert [r[3] for r in c.csv_rows()] == [0, 0, 1]


# sections and cross-chart ---------------------------------------------------------------

def test_choose_section_avoids_cuts(family1, gamma1):
    sec = dynamics.choose_section(family1.h, gamma1, avoid=family1.cuts)
    assert float(np.linalg.norm(sec.normal)) == pytest.approx(1.0)
    assert abs(float(family1.h.eval(tuple(map(float, sec.anchor))))) < 1e-3
    for c in family1.cuts:
        assert np.hypot(*(sec.anchor - np.array(c, float))) >= 0.15


def test_cross_chart_small_family():
    from secantflow import fields, levelsets
    fam = levelsets.build_H(parse_poly("x^2+y^2-1/4"), 1, 0.5, barrier="binomial")
    L = fields.exponent_ledger(fam.H)
    X = fields.assemble_X(fam.H, L.beta1, L.beta2)
    out = dynamics.cross_chart_check(X, fields.assemble_Y(fam.H, L), L.alpha, (0.3, 0.2, 0.5))
    assert out["max_deviation"] <= 1e-6 and out["secant_travel"] > 1e-3
