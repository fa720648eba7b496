"""Small fixed-size linear algebra: planes, lines, standard rotations.

Vectors are plain ``numpy`` arrays of shape (3,). Planes are stored with a
unit normal so that ``offset`` is the signed distance of the plane from the
origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateSystem,
    NoFrontFacingSolution,
    NonFrontFacingNormal,
    ParallelPlanes,
)

PARALLEL_TOL = 1e-12


def vec(x) -> np.ndarray:
    v = np.asarray(x, dtype=float).reshape(3)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector {v}")
    return v


def unit(x) -> np.ndarray:
    v = vec(x)
    norm = np.linalg.norm(v)
    if norm <= PARALLEL_TOL:
        raise ValueError("cannot normalize a zero vector")
    return v / norm


def is_parallel(u, v, tol: float = PARALLEL_TOL) -> bool:
    """Scale-free parallelism test ``|u x v| <= tol |u| |v|``."""
    u, v = np.asarray(u, float), np.asarray(v, float)
    return np.linalg.norm(np.cross(u, v)) <= tol * np.linalg.norm(u) * np.linalg.norm(v)


class RotationAngles(NamedTuple):
    theta: float  # tilt
    phi: float  # swing


@dataclass(frozen=True)
class Plane:
    """The set ``{X : <X, normal> = offset}`` with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = vec(self.normal)
        norm = np.linalg.norm(n)
        if norm <= PARALLEL_TOL:
            raise ValueError("plane normal must be nonzero")
        object.__setattr__(self, "normal", n / norm)
        object.__setattr__(self, "offset", float(self.offset) / norm)
        if not np.isfinite(self.offset):
            raise ValueError("plane offset must be finite")

    @classmethod
    def from_point_normal(cls, point, normal) -> "Plane":
        n = unit(normal)
        return cls(n, float(np.dot(vec(point), n)))

    def signed_distance(self, x) -> np.ndarray:
        return np.asarray(x, float) @ self.normal - self.offset

    def contains(self, x, tol: float = 1e-10) -> bool:
        return bool(np.all(np.abs(self.signed_distance(x)) <= tol))

    def translated(self, shift) -> "Plane":
        return Plane(self.normal, self.offset + float(np.dot(vec(shift), self.normal)))


@dataclass(frozen=True)
class Line3:
    """Parametric line ``point + t * direction``."""

    point: np.ndarray
    direction: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", vec(self.point))
        d = vec(self.direction)
        if np.linalg.norm(d) <= PARALLEL_TOL:
            raise ValueError("line direction must be nonzero")
        object.__setattr__(self, "direction", d)

    def at(self, t) -> np.ndarray:
        t = np.asarray(t, float)
        return self.point + np.multiply.outer(t, self.direction)

    def distance_to(self, x) -> float:
        d = self.direction / np.linalg.norm(self.direction)
        r = vec(x) - self.point
        return float(np.linalg.norm(r - np.dot(r, d) * d))

    def translated(self, shift) -> "Line3":
        return Line3(self.point + vec(shift), self.direction)


def rotation_matrix(angles) -> np.ndarray:
    """Alt-azimuth rotation of a standard; tilt ``theta`` then swing ``phi``.

    This is ``Ry(-phi) @ Rx(theta)``, a proper rotation.
    The third column is the standard's normal
    ``(-sin(phi) cos(theta), -sin(theta), cos(phi) cos(theta))``.
    """
    theta, phi = angles
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(phi), np.sin(phi)
    return np.array(
        [
            [cp, -sp * st, -sp * ct],
            [0.0, ct, -st],
            [sp, cp * st, cp * ct],
        ]
    )


def normal_from_angles(angles) -> np.ndarray:
    theta, phi = angles
    return np.array(
        [-np.sin(phi) * np.cos(theta), -np.sin(theta), np.cos(phi) * np.cos(theta)]
    )


def angles_from_normal(n) -> RotationAngles:
    """Tilt and swing whose rotation maps ``e3`` onto the unit vector ``n``."""
    n = vec(n)
    if n[2] <= 0:
        raise NonFrontFacingNormal(f"normal {n} does not face forward (n3 <= 0)")
    n = n / np.linalg.norm(n)
    theta = -np.arcsin(np.clip(n[1], -1.0, 1.0))
    phi = -np.arcsin(np.clip(n[0] / np.cos(theta), -1.0, 1.0))
    return RotationAngles(float(theta) + 0.0, float(phi) + 0.0)


def minnorm_solve2(n_a, b_a: float, n_b, b_b: float) -> np.ndarray:
    """Minimum-norm ``X`` with ``<X, n_a> = b_a`` and ``<X, n_b> = b_b``.

    The solution lies in span{n_a, n_b}; it is found from the 2x2 Gram system.
    """
    n_a, n_b = vec(n_a), vec(n_b)
    if is_parallel(n_a, n_b):
        raise DegenerateSystem("the two equations have parallel normals")
    # scale each equation to a unit normal so the Gram matrix is well conditioned
    ka, kb = np.linalg.norm(n_a), np.linalg.norm(n_b)
    u_a, u_b = n_a / ka, n_b / kb
    g = u_a @ u_b
    gram = np.array([[1.0, g], [g, 1.0]])
    coef = np.linalg.solve(gram, np.array([b_a / ka, b_b / kb], dtype=float))
    return coef[0] * u_a + coef[1] * u_b


def line_from_planes(p: Plane, q: Plane) -> Line3:
    if is_parallel(p.normal, q.normal):
        raise ParallelPlanes("planes are parallel, no intersection line")
    point = minnorm_solve2(p.normal, p.offset, q.normal, q.offset)
    return Line3(point, np.cross(p.normal, q.normal))


def unit_normal_through_hinge(hinge: Line3, f: float) -> np.ndarray:
    """Unit lens normal whose front focal plane ``<X, n> = f`` contains ``hinge``.

    All normals satisfying the two linear conditions form the line
    ``v + t w`` with ``v`` the minimum-norm solution and ``w = V x W``; the
    unit-norm root with a positive third component is returned.
    """
    if f <= 0:
        raise ValueError("focal length must be positive")
    W, V = hinge.point, hinge.direction
    w_dir = np.cross(V, W)
    if np.linalg.norm(w_dir) <= PARALLEL_TOL * np.linalg.norm(V) * max(np.linalg.norm(W), 1.0):
        # W parallel to V means the hinge passes through the origin
        raise NoFrontFacingSolution("hinge passes through the lens center")
    v = minnorm_solve2(W, f, V, 0.0)
    a = w_dir @ w_dir
    b = 2.0 * (w_dir @ v)
    c = v @ v - 1.0
    disc = b * b - 4.0 * a * c
    if disc < 0:
        raise NoFrontFacingSolution(
            f"hinge is closer than the focal length f={f} to the lens center"
        )
    sq = np.sqrt(disc)
    roots = [(-b + sq) / (2.0 * a), (-b - sq) / (2.0 * a)]
    normals = [v + t * w_dir for t in roots]
    normals = [n / np.linalg.norm(n) for n in normals if n[2] > 0]
    if not normals:
        raise NoFrontFacingSolution("no front-facing lens normal contains the hinge")
    return max(normals, key=lambda n: n[2])


def rotation_about_z(alpha: float) -> np.ndarray:
    """Counter-clockwise rotation by ``alpha`` about the third axis."""
    ca, sa = np.cos(alpha), np.sin(alpha)
    return np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])


def frame_to_e3(n) -> np.ndarray:
    """Rotation ``R`` with ``R @ e3 = n`` built from tilt/swing of ``n``.

    ``R.T @ X`` expresses ``X`` in a frame where ``n`` becomes ``e3``.
    """
    return rotation_matrix(angles_from_normal(n))
