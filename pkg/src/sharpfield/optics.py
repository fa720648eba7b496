"""Camera parameters, thin-lens conjugation and object point acquisition."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import CollinearPoints, OnFocalPlane, OnRearFocalPlane
from .geom import Plane, RotationAngles, rotation_matrix, vec


class SensorPoint(NamedTuple):
    u: float
    v: float


def _zero():
    return np.zeros(3)


@dataclass(frozen=True)
class CameraModel:
    """Intrinsic and extrinsic parameters of the view camera.

    Lengths are in meters. ``L`` and ``S`` are the global centers of the
    front and rear standards; ``tL`` is the offset from ``L`` to the lens
    nodal point and ``tS`` the offset from ``S`` to the sensor center, both
    expressed in the frame of their standard.
    """

    f: float
    c: float
    L: np.ndarray = field(default_factory=_zero)
    S: np.ndarray = field(default_factory=_zero)
    front: RotationAngles = RotationAngles(0.0, 0.0)
    rear: RotationAngles = RotationAngles(0.0, 0.0)
    tL: np.ndarray = field(default_factory=_zero)
    tS: np.ndarray = field(default_factory=_zero)

    def __post_init__(self):
        if not self.f > 0:
            raise ValueError("focal length must be positive")
        if not 0 < self.c < self.f:
            raise ValueError("circle of confusion must satisfy 0 < c < f")
        for name in ("L", "S", "tL", "tS"):
            object.__setattr__(self, name, vec(getattr(self, name)))
        object.__setattr__(self, "front", RotationAngles(*map(float, self.front)))
        object.__setattr__(self, "rear", RotationAngles(*map(float, self.rear)))

    @property
    def RL(self) -> np.ndarray:
        return rotation_matrix(self.front)

    @property
    def RS(self) -> np.ndarray:
        return rotation_matrix(self.rear)

    @property
    def lens_center(self) -> np.ndarray:
        """Global position of the optical center."""
        return self.L + self.RL @ self.tL

    @property
    def sensor_normal(self) -> np.ndarray:
        return self.RS[:, 2]


def image_of_point(x, f: float) -> np.ndarray:
    """Image ``a = f / (f - x3) x`` of a point given in the lens frame."""
    x = vec(x)
    if abs(x[2] - f) < 1e-12 * f:
        raise OnFocalPlane("object point lies on the front focal plane")
    return f / (f - x[2]) * x


def object_of_image(a, f: float) -> np.ndarray:
    """Object ``x = f / (f + a3) a`` conjugate to an image point."""
    a = vec(a)
    if abs(a[2] + f) < 1e-12 * f:
        raise OnRearFocalPlane("image point lies on the rear focal plane")
    return f / (f + a[2]) * a


def object_from_sensor(p: SensorPoint, cam: CameraModel) -> np.ndarray:
    """Global coordinates of the object point sharply imaged at ``p``."""
    u, v = p
    A = cam.S + cam.RS @ (cam.tS + np.array([u, v, 0.0]))
    RL = cam.RL
    a = RL.T @ (A - cam.L) - cam.tL
    x = object_of_image(a, cam.f)
    return cam.L + RL @ (x + cam.tL)


def sensor_from_object(X, cam: CameraModel) -> SensorPoint:
    """Sensor coordinates where the ray from ``X`` through the lens center meets the sensor.

    If the sensor passes through the image of ``X`` this is where ``X`` is
    in focus; it is the inverse of :func:`object_from_sensor` in that case.
    """
    RL = cam.RL
    x = RL.T @ (vec(X) - cam.L) - cam.tL
    a = image_of_point(x, cam.f)
    A = cam.L + RL @ (a + cam.tL)
    local = cam.RS.T @ (A - cam.S) - cam.tS
    return SensorPoint(float(local[0]), float(local[1]))


def image_of_global(X, cam: CameraModel) -> np.ndarray:
    """Global coordinates of the image of a global object point."""
    RL = cam.RL
    x = RL.T @ (vec(X) - cam.L) - cam.tL
    return cam.L + RL @ (image_of_point(x, cam.f) + cam.tL)


def fit_plane(points) -> Plane:
    """Total least squares plane through ``points``.

    The normal is the eigenvector of the centered scatter matrix with the
    smallest eigenvalue, oriented so that its third (then second) component
    is non-negative.
    """
    P = np.asarray(points, dtype=float)
    if P.ndim != 2 or P.shape[1] != 3 or len(P) < 3:
        raise CollinearPoints("at least three 3D points are required")
    centroid = P.mean(axis=0)
    Q = P - centroid
    evals, evecs = np.linalg.eigh(Q.T @ Q)
    if evals[1] <= 1e-12 * max(evals[2], np.finfo(float).tiny):
        raise CollinearPoints("points are collinear, plane is undefined")
    n = evecs[:, 0]
    if n[2] < 0 or (n[2] == 0 and n[1] < 0):
        n = -n
    return Plane.from_point_normal(centroid, n)
