"""View-camera geometry, Scheimpflug focusing and minimum f-number depth of field."""

from .dof import DofParams, SlopePair, build_wedge, fnumber_tilt, wedge_contains
from .errors import InfeasibleError, NumericalError, SharpfieldError
from .focus import FocusSolution, solve_front_standard, solve_front_standard_thick
from .geom import Line3, Plane, RotationAngles, angles_from_normal, normal_from_angles, rotation_matrix
from .optics import CameraModel, SensorPoint, fit_plane, object_from_sensor, sensor_from_object
from .optimize import (
    ContactLabel,
    OptimizeReport,
    grid_oracle,
    n_of_theta,
    n_of_theta_phi,
    optimize_tilt_2d,
    optimize_tilt_swing,
)
from .scene import Scene, load_scene

__version__ = "0.1.0"

__all__ = [
    "CameraModel",
    "ContactLabel",
    "DofParams",
    "FocusSolution",
    "InfeasibleError",
    "Line3",
    "NumericalError",
    "OptimizeReport",
    "Plane",
    "RotationAngles",
    "Scene",
    "SensorPoint",
    "SharpfieldError",
    "SlopePair",
    "angles_from_normal",
    "build_wedge",
    "fit_plane",
    "fnumber_tilt",
    "grid_oracle",
    "load_scene",
    "n_of_theta",
    "n_of_theta_phi",
    "normal_from_angles",
    "object_from_sensor",
    "optimize_tilt_2d",
    "optimize_tilt_swing",
    "rotation_matrix",
    "sensor_from_object",
    "solve_front_standard",
    "solve_front_standard_thick",
    "wedge_contains",
]
