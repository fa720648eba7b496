"""Scene documents (JSON) and the bundled fixtures.

A scene holds the optical constants and a list of object points, all
lengths in meters and angles in radians::

    {
      "focal_length_m": 0.05,
      "coc_m": 3e-05,
      "sensor_normal": [0, 0, 1],
      "lens_offset_m": [0, 0, 0],
      "frame": "sensor_aligned",
      "camera": null,
      "points": [[0, -0.1, 0.12], [0, 0, 0.19], [0, -0.0525, 0.17]]
    }

With ``"frame": "global"`` the points are global coordinates and
``camera`` gives the pose: ``L``, ``S``, ``front`` and ``rear`` angle
pairs and an optional ``sensor_offset_m``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .dof import DofParams
from .geom import RotationAngles, angles_from_normal, frame_to_e3, unit, vec
from .optics import CameraModel

FIXTURES = (
    "example1",
    "example2",
    "example3",
    "example3_h005",
    "example3d",
    "focus_plane",
    "focus_plane_thick",
    "acquire_onaxis",
)


@dataclass
class Scene:
    focal_length_m: float
    coc_m: float
    points: np.ndarray
    sensor_normal: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    lens_offset_m: np.ndarray = field(default_factory=lambda: np.zeros(3))
    frame: str = "sensor_aligned"
    camera: Optional[dict] = None
    name: str = ""

    def __post_init__(self):
        if self.frame not in ("sensor_aligned", "global"):
            raise ValueError(f"unknown frame {self.frame!r}")
        self.points = np.asarray(self.points, dtype=float).reshape(-1, 3)
        self.sensor_normal = unit(self.sensor_normal)
        self.lens_offset_m = vec(self.lens_offset_m)
        self.params  # validates f and c

    @property
    def params(self) -> DofParams:
        return DofParams(self.focal_length_m, self.coc_m)

    def camera_model(self) -> CameraModel:
        cam = self.camera or {}
        if "rear" in cam:
            rear = RotationAngles(*cam["rear"])
        else:
            # rear standard oriented so that its normal is the scene's sensor normal
            rear = angles_from_normal(self.sensor_normal)
        return CameraModel(
            f=self.focal_length_m,
            c=self.coc_m,
            L=cam.get("L", [0.0, 0.0, 0.0]),
            S=cam.get("S", [0.0, 0.0, 0.0]),
            front=RotationAngles(*cam.get("front", (0.0, 0.0))),
            rear=rear,
            tL=self.lens_offset_m,
            tS=cam.get("sensor_offset_m", [0.0, 0.0, 0.0]),
        )

    def aligned_points(self) -> np.ndarray:
        """Points in the sensor-aligned frame (optical center at the origin, sensor normal e3)."""
        if self.frame == "global":
            cam = self.camera_model()
            R = cam.RS
            return (self.points - cam.lens_center) @ R
        R = frame_to_e3(self.sensor_normal)
        return self.points @ R

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "focal_length_m": self.focal_length_m,
            "coc_m": self.coc_m,
            "sensor_normal": self.sensor_normal.tolist(),
            "lens_offset_m": self.lens_offset_m.tolist(),
            "frame": self.frame,
            "camera": self.camera,
            "points": self.points.tolist(),
        }


def scene_from_dict(doc: dict) -> Scene:
    try:
        return Scene(
            focal_length_m=float(doc["focal_length_m"]),
            coc_m=float(doc["coc_m"]),
            points=doc.get("points", []),
            sensor_normal=doc.get("sensor_normal", [0.0, 0.0, 1.0]),
            lens_offset_m=doc.get("lens_offset_m", [0.0, 0.0, 0.0]),
            frame=doc.get("frame", "sensor_aligned"),
            camera=doc.get("camera"),
            name=doc.get("name", ""),
        )
    except KeyError as exc:
        raise ValueError(f"scene is missing field {exc}") from None


def fixture_path(name: str) -> Path:
    stem = name[:-5] if name.endswith(".json") else name
    return Path(str(resources.files("sharpfield") / "fixtures" / f"{stem}.json"))


def resolve_scene_path(path: str) -> Path:
    """A file path, or the name of a bundled fixture (``example2``, ``fixtures/example2.json``)."""
    p = Path(path)
    if p.exists():
        return p
    candidate = fixture_path(p.name)
    if candidate.exists():
        return candidate
    raise FileNotFoundError(f"no scene file or fixture named {path!r}")


def load_scene(path) -> Scene:
    p = resolve_scene_path(str(path))
    scene = scene_from_dict(json.loads(p.read_text()))
    if not scene.name:
        scene.name = p.stem
    return scene


def load_expectations(name: str) -> dict:
    stem = Path(name).stem
    p = Path(str(resources.files("sharpfield") / "fixtures" / f"{stem}.expected.json"))
    return json.loads(p.read_text())
