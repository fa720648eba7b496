"""Smallest f-number that keeps a small close-up object sharp, using lens tilt only.

The object is a triangle in the vertical plane, 12 to 19 cm from the lens.
The depth of field wedge hinges on a line fixed by the tilt; for each tilt
the tightest wedge touches the object from both sides. The best tilt is one
where an edge lies on one limiting plane and the opposite vertex on the other.
"""

from sharpfield import DofParams, n_of_theta, optimize_tilt_2d
from sharpfield.cli import format_report

params = DofParams(f=0.05, c=3e-5)
pen = [[0, -0.1, 0.12], [0, 0, 0.19], [0, -0.0525, 0.17]]

report = optimize_tilt_2d(pen, params, oracle_steps=2001)
print(format_report(report))

print("without tilt the aperture must close to f/%.1f" % n_of_theta(0.0, pen, params))
print("with tilt f/%.2f is enough" % report.best.fnumber)

# The curve n(theta) has corners at the candidate tilts and no interior dips here,
# because every pair of points is farther than f from the lens center.
for t in (0.0, 0.05, 0.10, 0.15, 0.185269, 0.20, 0.235825, 0.30):
    print(f"  n({t:.6f}) = {n_of_theta(t, pen, params):8.3f}")
