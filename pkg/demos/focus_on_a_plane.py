"""Bring a prescribed plane into focus with lens tilt/swing and sensor travel.

The plane of sharp focus, the front focal plane and the plane through the
lens center parallel to the sensor meet in the hinge line. That fixes the
lens orientation. The sensor is then moved along its axis until it meets the
lens plane and the plane of sharp focus in a common line.
"""

import numpy as np

from sharpfield import CameraModel, Plane, fit_plane, solve_front_standard, solve_front_standard_thick

f = 0.05
# three points on a floor-like plane rising with slope 1/2 in depth
points = np.array([[0, 0, 1.5], [1, 0, 1.5], [0, 1, 2.0]])
sfp = fit_plane(points)
sol = solve_front_standard(sfp, sensor_normal=[0, 0, 1], S=[0, 0, -0.1], f=f)
print(f"tilt {sol.front.theta:.7f} rad ({np.degrees(sol.front.theta):.4f} deg), swing {sol.front.phi:.3g}")
print(f"sensor at X3 = {sol.S3:.6f} m, hinge through {np.round(sol.hinge.point, 6)}")

# A vertical plane to the left needs swing only.
wall = Plane([1, 0, 0], -0.5)
sol = solve_front_standard(wall, [0, 0, 1], [0, 0, -0.1], f)
print(f"wall: tilt {sol.front.theta:.3g}, swing {sol.front.phi:.7f} = asin(f / 0.5)")

# When the nodal point is ahead of the rotation center, rotating the lens
# moves the optical center; a short fixed-point iteration settles it.
for tL in ([0, 0, 0.01], [0.01, -0.015, 0.01]):
    cam = CameraModel(f, 3e-5, S=[0, 0, -0.1], tL=tL)
    sol = solve_front_standard_thick(sfp, cam)
    print(f"offset {tL}: tilt {sol.front.theta:.9f}, swing {sol.front.phi:.3g}, "
          f"{sol.iterations} iterations, steps {['%.1e' % r for r in sol.residuals]}")
