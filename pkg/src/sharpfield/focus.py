"""Front-standard tilt/swing and sensor position for a prescribed plane of sharp focus.

Coordinates in :func:`solve_front_standard` have the optical center at the
origin. The sensor plane is ``<X - S, nS> = 0``, the plane through the
optical center parallel to it is ``<X, nS> = 0``, the lens plane is
``<X, nL> = 0`` and the front focal plane ``<X, nL> = f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    HingeTooClose,
    NoConvergence,
    NoFrontFacingSolution,
    ParallelFocusPlane,
    SensorNormalDegenerate,
)
from .geom import (
    Line3,
    Plane,
    RotationAngles,
    angles_from_normal,
    is_parallel,
    minnorm_solve2,
    rotation_matrix,
    unit,
    unit_normal_through_hinge,
    vec,
)
from .optics import CameraModel


@dataclass(frozen=True)
class FocusSolution:
    front: RotationAngles
    S3: float
    hinge: Line3
    scheimpflug: Line3
    lens_normal: np.ndarray
    lens_center: np.ndarray = field(default_factory=lambda: np.zeros(3))
    iterations: int = 1
    residuals: tuple = ()

    def lens_plane(self) -> Plane:
        return Plane(self.lens_normal, float(self.lens_normal @ self.lens_center))

    def front_focal_plane(self, f: float) -> Plane:
        return Plane(self.lens_normal, float(self.lens_normal @ self.lens_center) + f)


def solve_front_standard(sfp: Plane, sensor_normal, S, f: float) -> FocusSolution:
    """Bring ``sfp`` into focus by tilting/swinging the lens and moving the sensor along X3.

    1. hinge line = plane of sharp focus intersected with the plane through
       the lens center parallel to the sensor;
    2. lens normal such that the front focal plane contains the hinge;
    3. Scheimpflug line = lens plane intersected with the plane of sharp focus;
    4. third coordinate of ``S`` such that the sensor plane contains that line.
    """
    nS = unit(sensor_normal)
    S = vec(S)
    nSF = sfp.normal
    if is_parallel(nSF, nS):
        raise ParallelFocusPlane(
            "plane of sharp focus is parallel to the sensor; translate the sensor instead"
        )
    if abs(nS[2]) <= 1e-12:
        raise SensorNormalDegenerate("sensor normal has no X3 component")

    V = np.cross(nSF, nS)
    W = minnorm_solve2(nS, 0.0, nSF, sfp.offset)
    hinge = Line3(W, V)
    try:
        nL = unit_normal_through_hinge(hinge, f)
    except NoFrontFacingSolution as exc:
        raise HingeTooClose(str(exc)) from exc

    U = minnorm_solve2(nL, 0.0, nSF, float(W @ nSF))
    scheimpflug = Line3(U, np.cross(nL, nSF))
    S3 = (U @ nS - S[0] * nS[0] - S[1] * nS[1]) / nS[2]
    return FocusSolution(
        front=angles_from_normal(nL),
        S3=float(S3),
        hinge=hinge,
        scheimpflug=scheimpflug,
        lens_normal=nL,
    )


def solve_front_standard_thick(
    sfp: Plane, cam: CameraModel, tol: float = 1e-12, max_iter: int = 20
) -> FocusSolution:
    """Fixed point on the front-standard angles when the optical center is offset by ``cam.tL``.

    Rotating the front standard moves the optical center, which moves the
    plane through it parallel to the sensor and hence the hinge. Starting
    from the solution that ignores the offset, the angles are recomputed
    from the displaced optical center until they change by less than ``tol``.
    """
    if tol <= 0 or max_iter < 1:
        raise ValueError("tol must be positive and max_iter at least 1")
    nS = cam.sensor_normal

    def solve_at(center):
        sol = solve_front_standard(sfp.translated(-center), nS, cam.S - center, cam.f)
        return sol, center

    sol, center = solve_at(cam.L)
    angles = sol.front
    residuals = []
    for k in range(1, max_iter + 1):
        center = cam.L + rotation_matrix(angles) @ cam.tL
        sol, center = solve_at(center)
        delta = max(abs(sol.front.theta - angles.theta), abs(sol.front.phi - angles.phi))
        residuals.append(delta)
        angles = sol.front
        if delta < tol:
            return FocusSolution(
                front=sol.front,
                S3=sol.S3 + center[2],
                hinge=sol.hinge.translated(center),
                scheimpflug=sol.scheimpflug.translated(center),
                lens_normal=sol.lens_normal,
                lens_center=center,
                iterations=k,
                residuals=tuple(residuals),
            )
    raise NoConvergence(
        f"fixed point did not converge in {max_iter} iterations (last step {residuals[-1]:.3e})"
    )
