import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from sharpfield.errors import CollinearPoints, OnFocalPlane, OnRearFocalPlane
from sharpfield.geom import RotationAngles
from sharpfield.optics import (
    CameraModel,
    SensorPoint,
    fit_plane,
    image_of_global,
    image_of_point,
    object_from_sensor,
    object_of_image,
    sensor_from_object,
)

F = 0.05
coord = st.floats(-3, 3, allow_nan=False)
depth = st.floats(0.06, 20, allow_nan=False)
small = st.floats(-0.3, 0.3, allow_nan=False)
offset = st.floats(-0.02, 0.02, allow_nan=False)


def test_two_f_object_images_at_minus_two_f():
    assert np.allclose(image_of_point([0, 0, 0.1], F), [0, 0, -0.1])
    assert np.allclose(object_of_image([0, 0, -0.1], F), [0, 0, 0.1])


@given(coord, coord, depth)
def test_conjugation_round_trip(x1, x2, x3):
    x = np.array([x1, x2, x3])
    back = object_of_image(image_of_point(x, F), F)
    assert np.linalg.norm(back - x) <= 1e-10 * np.linalg.norm(x)


@given(coord, coord, depth)
def test_image_lies_on_ray_through_center(x1, x2, x3):
    x = np.array([x1, x2, x3])
    a = image_of_point(x, F)
    assert np.linalg.norm(np.cross(a, x)) <= 1e-9 * np.linalg.norm(a) * np.linalg.norm(x)
    # real object in front of the focal plane gives an image behind the lens
    assert a[2] < 0


def test_focal_plane_errors():
    with pytest.raises(OnFocalPlane):
        image_of_point([0.1, 0, F], F)
    with pytest.raises(OnRearFocalPlane):
        object_of_image([0.1, 0, -F], F)


def test_on_axis_acquisition():
    cam = CameraModel(F, 3e-5, L=[0, 0, 0], S=[0, 0, -0.1])
    assert np.allclose(object_from_sensor(SensorPoint(0, 0), cam), [0, 0, 0.1])


def test_sensor_in_rear_focal_plane_has_no_object():
    cam = CameraModel(F, 3e-5, S=[0, 0, -F])
    with pytest.raises(OnRearFocalPlane):
        object_from_sensor(SensorPoint(0.001, 0.002), cam)


def test_nodal_offset_shifts_object():
    # with a lens offset the whole chain moves with the optical center
    cam = CameraModel(F, 3e-5, L=[0, 0, 0], S=[0, 0, -0.09], tL=[0, 0, 0.01])
    X = object_from_sensor(SensorPoint(0, 0), cam)
    assert np.allclose(X, [0, 0, 0.11])
    assert np.allclose(cam.lens_center, [0, 0, 0.01])


@given(small, small, small, small, offset, offset, offset, st.floats(-0.01, 0.01), st.floats(-0.01, 0.01))
def test_acquisition_round_trip(ft, fp, rt, rp, t1, t2, t3, u, v):
    cam = CameraModel(
        F,
        3e-5,
        L=[0.01, -0.02, 0.0],
        S=[0.0, 0.01, -0.12],
        front=RotationAngles(ft, fp),
        rear=RotationAngles(rt, rp),
        tL=[t1, t2, t3],
        tS=[0.001, -0.002, 0.0],
    )
    try:
        X = object_from_sensor(SensorPoint(u, v), cam)
    except OnRearFocalPlane:
        assume(False)
    # only real objects in front of the lens are meaningful
    x = cam.RL.T @ (X - cam.L) - cam.tL
    assume(x[2] > 1.01 * F)
    p = sensor_from_object(X, cam)
    assert p.u == pytest.approx(u, abs=1e-10)
    assert p.v == pytest.approx(v, abs=1e-10)
    # the image of X lies on the sensor plane
    A = image_of_global(X, cam)
    assert abs((A - cam.S - cam.RS @ cam.tS) @ cam.sensor_normal) <= 1e-10


def test_camera_validation():
    with pytest.raises(ValueError):
        CameraModel(0.05, 0.06)
    with pytest.raises(ValueError):
        CameraModel(-0.05, 1e-5)
    with pytest.raises(ValueError):
        CameraModel(0.05, 3e-5, L=[0, np.nan, 0])


def test_fit_plane_exact_for_coplanar_points():
    pts = [[0, 0, 1.5], [1, 0, 1.5], [0, 1, 2.0], [2, 3, 3.0]]
    p = fit_plane(pts)
    assert np.allclose(p.normal, np.array([0, -1, 2]) / np.sqrt(5))
    assert p.contains(np.array(pts))


def test_fit_plane_orientation():
    p = fit_plane([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert np.allclose(p.normal, [0, 0, 1])
    q = fit_plane([[0, 0, 0], [1, 0, 0], [0, 0, 1]])
    assert np.allclose(q.normal, [0, 1, 0])


def test_fit_plane_minimizes_orthogonal_residual(rng):
    n = np.array([0.2, -0.3, 1.0])
    n /= np.linalg.norm(n)
    pts = rng.normal(size=(50, 3))
    pts -= np.outer(pts @ n - 1.0, n)
    pts += 0.01 * rng.normal(size=pts.shape)
    p = fit_plane(pts)
    cost = np.sum(p.signed_distance(pts) ** 2)
    for _ in range(20):
        m = p.normal + 0.01 * rng.normal(size=3)
        m /= np.linalg.norm(m)
        other = np.sum((pts @ m - pts.mean(axis=0) @ m) ** 2)
        assert cost <= other + 1e-12


def test_fit_plane_collinear():
    with pytest.raises(CollinearPoints):
        fit_plane([[0, 0, 1], [0, 1, 2], [0, 2, 3]])
    with pytest.raises(CollinearPoints):
        fit_plane([[0, 0, 1], [0, 1, 2]])
