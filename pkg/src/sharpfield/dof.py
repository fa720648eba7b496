"""Depth-of-field wedge and f-number formulas.

Unless stated otherwise, formulas are written in the sensor-aligned frame:
optical center at the origin, sensor normal ``(0, 0, 1)``. With a front
tilt ``theta`` the hinge line is ``{(t, -f / sin(theta), 0)}`` and the two
limiting planes of sharp focus through it have normals ``(0, -1, a1)`` and
``(0, -1, a2)``; ``a1 >= a2`` are their slopes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import (
    BadOrdering,
    BehindFocal,
    DegenerateMidplane,
    SingularDenominator,
    ZeroTilt,
)
from .geom import Line3, Plane, minnorm_solve2, rotation_about_z, unit, vec

BOUNDARY_TOL = 1e-9


@dataclass(frozen=True)
class DofParams:
    f: float
    c: float  # circle of confusion diameter

    def __post_init__(self):
        if not 0 < self.c < self.f:
            raise ValueError("need 0 < c < f")

    @property
    def n_max(self) -> float:
        return self.f / self.c


class SlopePair(NamedTuple):
    a1: float
    a2: float


@dataclass(frozen=True)
class Wedge:
    upper: Plane
    lower: Plane
    hinge: Line3
    fnumber: float


def harmonic_mean(p1: float, p2: float) -> float:
    """Sensor distance sitting between the two limiting sensor planes."""
    return 2.0 * p1 * p2 / (p1 + p2)


def fnumber_scalar(p1: float, p2: float, params: DofParams) -> float:
    """f-number from the lens-to-sensor distances of the two limiting sensor planes."""
    if not p1 > p2 > 0:
        raise BadOrdering(f"need p1 > p2 > 0, got p1={p1}, p2={p2}")
    return params.n_max * (p1 - p2) / (p1 + p2)


def fnumber_wedge(U1, U2, sensor_normal, params: DofParams) -> float:
    """f-number from one point on each limiting sensor plane.

    Only the components of ``U1``, ``U2`` along the sensor normal matter.
    """
    nS = unit(sensor_normal)
    d1, d2 = float(vec(U1) @ nS), float(vec(U2) @ nS)
    den = d1 + d2
    if abs(den) <= 1e-15:
        raise DegenerateMidplane("limiting sensor planes are symmetric about the lens")
    return params.n_max * abs((d1 - d2) / den)


def sensor_plane_point(hinge_point, lens_normal, sfp_normal) -> np.ndarray:
    """A point of the sensor plane conjugate to the plane through ``hinge_point`` with ``sfp_normal``.

    It is the minimum-norm point on the Scheimpflug line (lens plane
    intersected with the plane of sharp focus).
    """
    W = vec(hinge_point)
    n = vec(sfp_normal)
    return minnorm_solve2(lens_normal, 0.0, n, float(W @ n))


def fnumber_planes(hinge_point, lens_normal, n1, n2, sensor_normal, params: DofParams) -> float:
    """f-number of the wedge bounded by the planes through ``hinge_point`` with normals n1, n2."""
    U1 = sensor_plane_point(hinge_point, lens_normal, n1)
    U2 = sensor_plane_point(hinge_point, lens_normal, n2)
    return fnumber_wedge(U1, U2, sensor_normal, params)


def fnumber_tilt(theta: float, a: SlopePair, params: DofParams) -> float:
    """Exact f-number for tilt ``theta`` and limiting slopes ``a``."""
    if theta == 0:
        raise ZeroTilt("use fnumber_parallel for theta = 0")
    a1, a2 = a
    s, co = np.sin(theta), np.cos(theta)
    den = 2.0 * co - (a1 + a2) * s
    if abs(den) <= 1e-15:
        raise SingularDenominator("limiting planes are symmetric about the lens plane")
    return float(np.sign(theta) * (a1 - a2) * s / den * params.n_max)


def fnumber_tilt_gradient(theta: float, a: SlopePair, params: DofParams) -> np.ndarray:
    """Gradient of :func:`fnumber_tilt` with respect to ``(a1, a2, theta)``."""
    if theta == 0:
        raise ZeroTilt("gradient undefined at theta = 0")
    a1, a2 = a
    cot = np.cos(theta) / np.sin(theta)
    scale = 2.0 * np.sign(theta) / (2.0 * cot - (a1 + a2)) ** 2 * params.n_max
    return scale * np.array([cot - a2, -cot + a1, (a1 - a2) / np.sin(theta) ** 2])


def fnumber_parallel(z1: float, z2: float, params: DofParams) -> float:
    """f-number when the depth of field lies between the planes X3 = z2 and X3 = z1."""
    if z1 < z2:
        z1, z2 = z2, z1
    if z2 <= params.f:
        raise BehindFocal(f"depth {z2} is not in front of the focal plane")
    f = params.f
    return params.n_max * abs(1.0 / z2 - 1.0 / z1) / abs(1.0 / z1 + 1.0 / z2 - 2.0 / f)


def approx_fnumber_merklinger(theta: float, a: SlopePair, params: DofParams) -> float:
    """Small-tilt, distant-object approximation of :func:`fnumber_tilt`."""
    if theta == 0:
        raise ZeroTilt("approximation undefined at theta = 0")
    a1, a2 = a
    return float(np.sign(theta) * (a1 - a2) * np.sin(theta) * params.f / (2.0 * params.c))


def hyperfocal_distance(N: float, params: DofParams) -> float:
    return params.f**2 / (N * params.c)


def hinge_point(theta: float, f: float) -> np.ndarray:
    return np.array([0.0, -f / np.sin(theta), 0.0])


def sensor_plane_depths(theta: float, a: SlopePair, f: float) -> tuple[float, float]:
    """X3 coordinates of the two limiting sensor planes."""
    s, co = np.sin(theta), np.cos(theta)
    return tuple(float(f / (ai * s - co)) for ai in a)


def build_wedge(theta: float, a: SlopePair, params: DofParams, alpha: float = 0.0) -> Wedge:
    """Wedge for tilt ``theta`` and slopes ``a``; ``alpha`` rotates it about X3.

    A nonzero ``alpha`` turns a pure-tilt configuration into the equivalent
    tilt-and-swing one (see :func:`sharpfield.optimize.rotation_reduction`).
    """
    Q = rotation_about_z(alpha).T
    W = hinge_point(theta, params.f)
    upper = Plane.from_point_normal(Q @ W, Q @ np.array([0.0, -1.0, a[0]]))
    lower = Plane.from_point_normal(Q @ W, Q @ np.array([0.0, -1.0, a[1]]))
    hinge = Line3(Q @ W, Q @ np.array([1.0, 0.0, 0.0]))
    return Wedge(upper, lower, hinge, fnumber_tilt(theta, a, params))


class WedgeVerdict(NamedTuple):
    below_upper: bool
    above_lower: bool
    in_front_of_ffp: bool
    upper_margin: float
    lower_margin: float
    ffp_margin: float

    @property
    def inside(self) -> bool:
        return self.below_upper and self.above_lower and self.in_front_of_ffp


def wedge_contains(wedge: Wedge, X, lens_normal, f: float, tol: float = BOUNDARY_TOL) -> WedgeVerdict:
    """Signed margins of ``X`` against the two limiting planes and the front focal plane.

    Positive margins mean the constraint holds: ``X`` is under the upper
    plane, above the lower plane and in front of the front focal plane.
    """
    X = vec(X)
    up = float(wedge.upper.signed_distance(X))
    lo = float(-wedge.lower.signed_distance(X))
    ffp = float(X @ unit(lens_normal) - f)
    return WedgeVerdict(up >= -tol, lo >= -tol, ffp >= -tol, up, lo, ffp)
