"""How good is the hyperfocal rule of thumb for tilted lenses?

For small tilts and distant subjects the exact f-number is close to
sign(theta) (a1 - a2) sin(theta) f / (2 c). The error is
cos(theta) - (a1 + a2) sin(theta) / 2 relative, which grows for close-up work.
"""

from sharpfield import DofParams, fnumber_tilt, optimize_tilt_2d
from sharpfield.dof import approx_fnumber_merklinger

params = DofParams(0.05, 3e-5)
scenes = {
    "distant triangle, tilt at pair 13": ([[0, -1, 1], [0, 3, 1], [0, 0, 1.5]], 0.0166674384),
    "thin object 1-2 m away": ([[0, 0, 1], [0, 0.005, 1.5], [0, -0.005, 2]], None),
    "close-up pen": ([[0, -0.1, 0.12], [0, 0, 0.19], [0, -0.0525, 0.17]], None),
}
for name, (pts, theta) in scenes.items():
    rep = optimize_tilt_2d(pts, params)
    cand = rep.best if theta is None else min(rep.candidates, key=lambda c: abs(c.theta - theta))
    exact = fnumber_tilt(cand.theta, cand.slopes, params)
    approx = approx_fnumber_merklinger(cand.theta, cand.slopes, params)
    print(f"{name:36s} theta={cand.theta:+.4f}  exact {exact:7.3f}  approx {approx:7.3f}  "
          f"error {approx / exact - 1:+.1%}")
