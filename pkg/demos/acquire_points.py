"""Recover object points from sensor coordinates.

A view camera is described by the poses of its two standards. Once the
sensor sits where a point is imaged sharply, the point's position in space
follows from thin-lens conjugation through the lens center.
"""

import numpy as np

from sharpfield import CameraModel, SensorPoint, object_from_sensor, sensor_from_object
from sharpfield.optics import image_of_global

# A 50 mm lens, sensor 10 cm behind it: the on-axis point at 2f = 10 cm is in focus.
cam = CameraModel(f=0.05, c=3e-5, L=[0, 0, 0], S=[0, 0, -0.1])
print("on-axis object:", object_from_sensor(SensorPoint(0, 0), cam))

# Off-axis sensor points map to points of the conjugate plane X3 = 0.1.
for uv in [(0.002, 0.0), (0.0, -0.004), (0.003, 0.003)]:
    print(uv, "->", np.round(object_from_sensor(SensorPoint(*uv), cam), 6))

# Tilt the lens a little, offset the nodal point and rotate the rear standard.
cam = CameraModel(
    f=0.05, c=3e-5, L=[0.01, 0, 0], front=(0.05, -0.02), rear=(0.01, 0.03), tL=[0, 0, 0.005]
)
X = np.array([0.2, -0.3, 1.4])
# move the sensor so that the image of X falls at sensor coordinates (4 mm, -3 mm)
A = image_of_global(X, cam)
cam = CameraModel(
    f=cam.f, c=cam.c, L=cam.L, front=cam.front, rear=cam.rear, tL=cam.tL,
    S=A - cam.RS @ np.array([0.004, -0.003, 0.0]),
)
p = sensor_from_object(X, cam)
print("sensor coordinates of X:", p)
print("recovered X:", object_from_sensor(p, cam))
