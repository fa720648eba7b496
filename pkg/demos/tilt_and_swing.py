"""Tilt and swing for a tetrahedron, with a level-set export.

With both rotations the candidates are edge-edge contacts (two opposite
edges, one on each limiting plane) and face-vertex contacts. Each one fixes
a hinge line, hence the lens orientation. A grid search over tilt and swing
confirms the enumeration.
"""

import sys
import tempfile
from pathlib import Path

from sharpfield import DofParams, optimize_tilt_swing
from sharpfield.cli import format_report, main

params = DofParams(0.05, 3e-5)
tetra = [[-0.5, -1, 1], [-0.5, 3, 1], [-0.5, 0, 1.5], [1, 1, 1.5]]
report = optimize_tilt_swing(tetra, params, oracle_steps=2001)
print(format_report(report))

# Export n(theta, phi) on a grid; rows are ordered by theta then phi.
out = Path(tempfile.gettempdir()) / "tetrahedron_surface.csv"
main(["surface", "example3d", "--range", "-0.175", "0.225", "-0.3225", "0.2775",
      "--steps", "101", "--out", str(out)])
lines = out.read_text().splitlines()
print(f"wrote {len(lines) - 1} rows to {out}", file=sys.stderr)
print(lines[0])
print(lines[5101])
