import math

import numpy as np
import numpy.testing as npt
import pytest

from qig.errors import LeftManifold
from qig.flow_engine import (Trajectory, compare_flow_to_orbit, integrate_flow,
                             orbit_curve)
from qig.group_actions import alpha_subgroup, bkm_subgroup
from qig.metric_family import bkm
from qig.state_space import TracelessObservable, state_from_bloch
from qig.vector_fields import (VectorField, fundamental_field,
                               gradient_field_closed, rescaled_gradient_field)

A_OBS = TracelessObservable(0.4, -0.3, 0.6)
ZERO = TracelessObservable(0.0, 0.0, 0.0)
START = state_from_bloch(0.25, -0.15, 0.35)


def test_rotation_flow_preserves_radius():
    traj = integrate_flow(fundamental_field(A_OBS), START, 4.0, 400)
    npt.assert_allclose(traj.radii, START.r, atol=1e-10)


def test_bkm_gradient_flow_matches_tanh():
    # From the center the BKM sigma_3 gradient flow is z(t) = tanh(t).
    field = gradient_field_closed(TracelessObservable(0, 0, 1), bkm())
    traj = integrate_flow(field, state_from_bloch(0.0, 0.0, 1e-12), 2.0, 500)
    npt.assert_allclose(traj.points[:, 2], np.tanh(traj.times), atol=1e-9)


def test_flow_matches_orbit():
    dev = compare_flow_to_orbit(rescaled_gradient_field(A_OBS, 1.0),
                                alpha_subgroup(1.0, A_OBS, ZERO),
                                START, 1.0, 1000)
    assert dev < 1e-6
    dev = compare_flow_to_orbit(gradient_field_closed(A_OBS, bkm()),
                                bkm_subgroup(A_OBS, ZERO),
                                START, 1.0, 1000)
    assert dev < 1e-6


def test_rk4_fourth_order():
    field = rescaled_gradient_field(A_OBS, 1.0)
    orbit = alpha_subgroup(1.0, A_OBS, ZERO)
    coarse = compare_flow_to_orbit(field, orbit, START, 2.0, 16)
    fine = compare_flow_to_orbit(field, orbit, START, 2.0, 32)
    assert 8.0 <= coarse / fine <= 32.0


def test_adaptive_matches_fixed():
    field = rescaled_gradient_field(A_OBS, 2.0)
    fixed = integrate_flow(field, START, 1.0, 200)
    adaptive = integrate_flow(field, START, 1.0, 200, adaptive=True)
    npt.assert_allclose(adaptive.points, fixed.points, atol=1e-8)
    npt.assert_array_equal(adaptive.times, fixed.times)


def test_outward_field_raises_left_manifold():
    outward = VectorField("outward", lambda v: np.asarray(v, dtype=float))
    with pytest.raises(LeftManifold):
        integrate_flow(outward, state_from_bloch(0.5, 0.0, 0.0), 10.0, 1000)


def test_orbit_curve_endpoints():
    orbit = orbit_curve(alpha_subgroup(1.0, A_OBS, ZERO), START, 1.0, 100)
    npt.assert_allclose(orbit.points[0], START.bloch, atol=1e-14)
    assert orbit.times[-1] == 1.0
    assert orbit.points.shape == (101, 3)


def test_trajectory_csv_format():
    traj = Trajectory(np.array([0.0, 1.0]),
                      np.array([[0.1, 0.0, 0.0], [0.0, 0.2, 0.0]]))
    lines = traj.to_csv(observable=A_OBS).strip().split("\n")
    assert lines[0] == "t,x,y,z,r,l_a"
    row = [float(v) for v in lines[1].split(",")]
    assert row == [0.0, 0.1, 0.0, 0.0, 0.1, pytest.approx(0.04)]
