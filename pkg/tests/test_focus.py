import numpy as np
import pytest

from sharpfield.errors import HingeTooClose, NoConvergence, ParallelFocusPlane
from sharpfield.focus import solve_front_standard, solve_front_standard_thick
from sharpfield.geom import Plane, normal_from_angles, unit
from sharpfield.optics import CameraModel, SensorPoint, object_from_sensor

F = 0.05


def slope_two_plane():
    return Plane.from_point_normal([0, 0, 1.5], [0, -1, 2])


def concurrence_residual(sol, sfp, nS, S, f, center=np.zeros(3)):
    """Largest distance of hinge and Scheimpflug line points from the planes they must lie on."""
    nL = sol.lens_normal
    worst = 0.0
    for t in (-1.0, 0.0, 1.0):
        H = sol.hinge.at(t)
        worst = max(worst, abs(sfp.signed_distance(H)), abs((H - center) @ nL - f), abs((H - center) @ nS))
        U = sol.scheimpflug.at(t)
        S_full = np.array([S[0], S[1], sol.S3])
        worst = max(worst, abs(sfp.signed_distance(U)), abs((U - center) @ nL), abs((U - S_full) @ nS))
    return worst


def test_slope_two_plane():
    sol = solve_front_standard(slope_two_plane(), [0, 0, 1], [0, 0, -0.1], F)
    assert sol.front.theta == pytest.approx(0.0166674, abs=1e-6)
    assert sol.front.phi == pytest.approx(0.0, abs=1e-12)
    assert sol.S3 == pytest.approx(-0.051732, abs=1e-6)
    assert np.allclose(sol.hinge.point, [0, -3, 0])


def test_vertical_plane_needs_swing_only():
    sfp = Plane([1, 0, 0], -0.5)
    sol = solve_front_standard(sfp, [0, 0, 1], [0, 0, -0.1], F)
    assert sol.front.theta == pytest.approx(0.0, abs=1e-12)
    assert sol.front.phi == pytest.approx(np.arcsin(F / 0.5), abs=1e-12)


def test_sharp_plane_is_conjugate_to_sensor():
    sfp = slope_two_plane()
    sol = solve_front_standard(sfp, [0, 0, 1], [0, 0, -0.1], F)
    cam = CameraModel(F, 3e-5, S=[0, 0, sol.S3], front=sol.front)
    for uv in [(0, 0), (0.01, -0.005), (-0.012, 0.008)]:
        X = object_from_sensor(SensorPoint(*uv), cam)
        assert abs(sfp.signed_distance(X)) < 1e-9


def random_problem(rng):
    nS = unit([rng.normal(0, 0.1), rng.normal(0, 0.1), 1.0])
    while True:
        n = unit(rng.normal(size=3) * [1, 1, 0.5] + [0, 0, 0.5])
        X0 = rng.uniform([-1, -1, 0.5], [1, 1, 5])
        sfp = Plane.from_point_normal(X0, n)
        S = rng.uniform([-0.01, -0.01, -0.2], [0.01, 0.01, -0.06])
        try:
            return sfp, nS, S, solve_front_standard(sfp, nS, S, F)
        except (HingeTooClose, ParallelFocusPlane):
            continue


def test_concurrence_on_random_problems(rng):
    for _ in range(100):
        sfp, nS, S, sol = random_problem(rng)
        assert concurrence_residual(sol, sfp, nS, S, F) < 1e-9
        assert sol.lens_normal[2] > 0


def test_parallel_plane_rejected():
    with pytest.raises(ParallelFocusPlane):
        solve_front_standard(Plane([0, 0, 1], 2.0), [0, 0, 1], [0, 0, -0.1], F)


def test_hinge_closer_than_focal_length():
    # plane crossing the lens-center plane 2 cm from the center
    sfp = Plane.from_point_normal([0, -0.02, 0], [0, -1, 0.01])
    with pytest.raises(HingeTooClose):
        solve_front_standard(sfp, [0, 0, 1], [0, 0, -0.1], F)


def test_thick_with_zero_offset_matches_thin():
    cam = CameraModel(F, 3e-5, S=[0, 0, -0.1])
    thick = solve_front_standard_thick(slope_two_plane(), cam)
    thin = solve_front_standard(slope_two_plane(), [0, 0, 1], [0, 0, -0.1], F)
    assert thick.iterations == 1
    assert thick.front.theta == pytest.approx(thin.front.theta, abs=1e-15)
    assert thick.S3 == pytest.approx(thin.S3, abs=1e-15)


@pytest.mark.parametrize(
    "tL, sfp",
    [
        ([0, 0, 0.01], slope_two_plane()),
        ([0.01, -0.015, 0.01], Plane.from_point_normal([0.2, 0, 1.2], [0.3, -1, 2])),
        ([0, 0, 0.02], Plane.from_point_normal([0, 0.1, 0.8], [0.1, -1, 1.5])),
    ],
)
def test_thick_lens_fixed_point(tL, sfp):
    cam = CameraModel(F, 3e-5, L=[0.0, 0.0, 0.0], S=[0, 0, -0.1], tL=tL)
    sol = solve_front_standard_thick(sfp, cam)
    assert sol.iterations <= 5
    # the optical center is where the converged angles put it
    center = cam.L + CameraModel(F, 3e-5, front=sol.front, tL=tL).RL @ cam.tL
    assert np.allclose(sol.lens_center, center, atol=1e-12)
    assert np.allclose(sol.lens_normal, normal_from_angles(sol.front), atol=1e-12)
    assert concurrence_residual(sol, sfp, cam.sensor_normal, cam.S, F, center) < 1e-9


def test_thick_lens_focuses_the_plane():
    sfp = slope_two_plane()
    cam = CameraModel(F, 3e-5, S=[0, 0, -0.1], tL=[0, 0, 0.01])
    sol = solve_front_standard_thick(sfp, cam)
    focused = CameraModel(F, 3e-5, S=[0, 0, sol.S3], front=sol.front, tL=cam.tL)
    for uv in [(0, 0), (0.01, 0.01)]:
        X = object_from_sensor(SensorPoint(*uv), focused)
        assert abs(sfp.signed_distance(X)) < 1e-9


def test_thick_lens_iteration_cap():
    cam = CameraModel(F, 3e-5, S=[0, 0, -0.1], tL=[0.01, -0.015, 0.01])
    sfp = Plane.from_point_normal([0.2, 0, 1.2], [0.3, -1, 2])
    with pytest.raises(NoConvergence):
        solve_front_standard_thick(sfp, cam, tol=1e-30, max_iter=3)
