"""Command line tool ``sharpfield``.

Subcommands::

    sharpfield acquire SCENE --uv U V        object point imaged at a sensor point
    sharpfield focus-plane SCENE             lens angles and sensor position for the plane through the points
    sharpfield optimize SCENE --mode tilt    minimum f-number tilt (or tilt-swing)
    sharpfield curve SCENE --range A B       n(theta) as CSV
    sharpfield surface SCENE --range ...     n(theta, phi) as CSV
    sharpfield check [SCENE ...]             compare against the bundled expectation files

``SCENE`` is a JSON file or the name of a bundled fixture. Exit codes: 0 on
success, 1 when ``check`` finds a mismatch, 2 for invalid input, 3 for an
infeasible problem, 4 for a numerical failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import SharpfieldError
from .focus import FocusSolution, solve_front_standard, solve_front_standard_thick
from .optics import SensorPoint, fit_plane, object_from_sensor
from .optimize import (
    ContactCandidate,
    OptimizeReport,
    evaluate_curve,
    evaluate_surface,
    optimize_tilt_2d,
    optimize_tilt_swing,
)
from .scene import FIXTURES, Scene, load_expectations, load_scene

EXIT_MISMATCH = 1
EXIT_INPUT = 2


def g6(x) -> str:
    if x is None or (isinstance(x, float) and math.isnan(x)):
        return "-"
    return f"{x:.6g}"


def _jsonable(x):
    if isinstance(x, float):
        return x + 0.0 if math.isfinite(x) else None
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (np.floating, np.integer)):
        return _jsonable(x.item())
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dumps(doc) -> str:
    return json.dumps(_jsonable(doc), indent=2)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- acquire


def run_acquire(scene: Scene, uv) -> np.ndarray:
    return object_from_sensor(SensorPoint(*uv), scene.camera_model())


def cmd_acquire(args) -> int:
    scene = load_scene(args.scene)
    X = run_acquire(scene, args.uv)
    if args.json:
        _emit(dumps({"uv": list(args.uv), "X": X}) + "\n", args.out)
    else:
        _emit(" ".join(g6(float(v)) for v in X) + "\n", args.out)
    return 0


# ---------------------------------------------------------------- focus-plane


def run_focus_plane(scene: Scene) -> FocusSolution:
    cam = scene.camera_model()
    sfp = fit_plane(scene.points)
    if np.any(cam.tL != 0):
        return solve_front_standard_thick(sfp, cam)
    sol = solve_front_standard(sfp.translated(-cam.L), cam.sensor_normal, cam.S - cam.L, cam.f)
    return FocusSolution(
        front=sol.front,
        S3=sol.S3 + float(cam.L[2]),
        hinge=sol.hinge.translated(cam.L),
        scheimpflug=sol.scheimpflug.translated(cam.L),
        lens_normal=sol.lens_normal,
        lens_center=cam.L.copy(),
    )


def focus_to_dict(sol: FocusSolution) -> dict:
    return {
        "theta": sol.front.theta,
        "phi": sol.front.phi,
        "theta_deg": math.degrees(sol.front.theta),
        "phi_deg": math.degrees(sol.front.phi),
        "S3": sol.S3,
        "lens_normal": sol.lens_normal,
        "lens_center": sol.lens_center,
        "hinge": {"point": sol.hinge.point, "direction": sol.hinge.direction},
        "scheimpflug": {"point": sol.scheimpflug.point, "direction": sol.scheimpflug.direction},
        "iterations": sol.iterations,
    }


def cmd_focus_plane(args) -> int:
    sol = run_focus_plane(load_scene(args.scene))
    _emit(dumps(focus_to_dict(sol)) + "\n", args.out)
    return 0


# ---------------------------------------------------------------- optimize


def run_optimize(scene: Scene, mode: str, oracle_steps=None) -> OptimizeReport:
    pts = scene.aligned_points()
    if mode == "tilt":
        return optimize_tilt_2d(pts, scene.params, oracle_steps)
    return optimize_tilt_swing(pts, scene.params, oracle_steps)


def _candidate_dict(c: ContactCandidate) -> dict:
    return {
        "label": str(c.label),
        "theta": c.theta,
        "phi": c.phi,
        "n": c.fnumber,
        "feasible": c.feasible,
        "reason": c.reason,
        "slopes": list(c.slopes) if c.slopes is not None else None,
    }


def report_to_dict(rep: OptimizeReport) -> dict:
    doc = {
        "candidates": [_candidate_dict(c) for c in rep.candidates],
        "best": _candidate_dict(rep.best),
        "zero_tilt_value": rep.zero_tilt_value,
        "conditions": [
            {"pair": [i + 1 for i in d.pair], "ratio": d.ratio, "satisfied": d.satisfied}
            for d in rep.condition_diagnostics
        ],
        "hull_vertices": [i + 1 for i in rep.hull_vertices],
        "dropped": [i + 1 for i in rep.dropped],
        "oracle": None,
    }
    if rep.oracle is not None:
        o = rep.oracle
        doc["oracle"] = {"theta": o.theta, "phi": o.phi, "n": o.n, "resolution": o.resolution}
    return doc


def format_report(rep: OptimizeReport) -> str:
    rows = [("Contact", "theta", "phi", "n", "theta_deg", "note")]
    for c in rep.candidates:
        note = "" if c.feasible else (c.reason or "infeasible")
        deg = g6(math.degrees(c.theta)) if math.isfinite(c.theta) else "-"
        rows.append((str(c.label), g6(c.theta), g6(c.phi), g6(c.fnumber), deg, note))
    widths = [max(len(r[k]) for r in rows) for k in range(5)]
    buf = io.StringIO()
    for r in rows:
        buf.write("  ".join(r[k].ljust(widths[k]) for k in range(5)).rstrip())
        buf.write(("  " + r[5]) if r[5] else "")
        buf.write("\n")
    b = rep.best
    buf.write(f"\nbest: {b.label} theta={g6(b.theta)} phi={g6(b.phi)} n={g6(b.fnumber)}\n")
    buf.write(f"untilted: n={g6(rep.zero_tilt_value)}\n")
    if rep.condition_diagnostics:
        buf.write("pair conditions:\n")
        for d in rep.condition_diagnostics:
            pair = "".join(str(i + 1) for i in d.pair)
            buf.write(f"  {pair}  ratio={g6(d.ratio)}  {'ok' if d.satisfied else 'fails'}\n")
    if rep.oracle is not None:
        o = rep.oracle
        buf.write(
            f"grid oracle: theta={g6(o.theta)} phi={g6(o.phi)} n={g6(o.n)} "
            f"resolution={g6(o.resolution)}\n"
        )
    return buf.getvalue()


def cmd_optimize(args) -> int:
    rep = run_optimize(load_scene(args.scene), args.mode, args.steps if args.oracle else None)
    text = dumps(report_to_dict(rep)) + "\n" if args.json else format_report(rep)
    _emit(text, args.out)
    return 0


# ---------------------------------------------------------------- curve / surface


def _csv_n(n) -> str:
    return "" if n is None or not math.isfinite(n) else repr(float(n))


def curve_csv(scene: Scene, lo: float, hi: float, steps: int) -> str:
    thetas = np.linspace(lo, hi, steps)
    lines = ["theta,n,contact_label"]
    for t, n, label in evaluate_curve(thetas, scene.aligned_points(), scene.params):
        lines.append(f"{t!r},{_csv_n(n)},{label}")
    return "\n".join(lines) + "\n"


def surface_csv(scene: Scene, trange, prange, steps: int) -> str:
    thetas = np.linspace(*trange, steps)
    phis = np.linspace(*prange, steps)
    n, labels = evaluate_surface(thetas, phis, scene.aligned_points(), scene.params)
    lines = ["theta,phi,n,contact_label"]
    for i, t in enumerate(thetas):
        for j, p in enumerate(phis):
            lines.append(f"{float(t)!r},{float(p)!r},{_csv_n(n[i, j])},{labels[i, j]}")
    return "\n".join(lines) + "\n"


def cmd_curve(args) -> int:
    lo, hi = args.range if args.range else (-0.3, 0.3)
    _emit(curve_csv(load_scene(args.scene), lo, hi, args.steps), args.out)
    return 0


def cmd_surface(args) -> int:
    r = args.range if args.range else (-0.3, 0.3, -0.3, 0.3)
    if len(r) != 4:
        raise SharpfieldError("surface needs --range THETA0 THETA1 PHI0 PHI1")
    _emit(surface_csv(load_scene(args.scene), r[:2], r[2:], args.steps), args.out)
    return 0


# ---------------------------------------------------------------- check


def _close(a, b, tol) -> bool:
    return a is not None and b is not None and math.isfinite(a) and abs(a - b) <= tol


def _find(rep: OptimizeReport, label: str):
    for c in rep.candidates:
        if str(c.label) == label:
            return c
    return None


def _match_angles(c, row) -> list:
    errs = []
    if c is None:
        return [f"no candidate {row['label']}"]
    if "theta" in row and not _close(c.theta, row["theta"], row["tol_theta"]):
        errs.append(f"theta {g6(c.theta)} != {row['theta']}")
    if "phi" in row and not _close(c.phi, row["phi"], row.get("tol_phi", row["tol_theta"])):
        errs.append(f"phi {g6(c.phi)} != {row['phi']}")
    if "n" in row:
        if not c.feasible:
            errs.append(f"infeasible: {c.reason}")
        elif not _close(c.fnumber, row["n"], row["tol_n"]):
            errs.append(f"n {g6(c.fnumber)} != {row['n']}")
    return errs


def evaluate_check(row: dict, scene: Scene, rep) -> list:
    """Mismatch messages for one expectation row (empty when it holds)."""
    kind = row["check"]
    if kind == "candidate":
        return _match_angles(_find(rep, row["label"]), row)
    if kind == "infeasible":
        c = _find(rep, row["label"])
        return [] if c is not None and not c.feasible else [f"{row['label']} is not reported infeasible"]
    if kind == "best":
        b = rep.best
        errs = [] if str(b.label) == row["label"] else [f"best is {b.label}, expected {row['label']}"]
        return errs + _match_angles(b, row)
    if kind == "zero_tilt":
        v = rep.zero_tilt_value
        return [] if _close(v, row["n"], row["tol_n"]) else [f"n(0) {g6(v)} != {row['n']}"]
    if kind == "conditions":
        diag = sorted(rep.condition_diagnostics, key=lambda d: d.pair)
        errs = []
        if len(diag) != len(row["ratios"]):
            return [f"{len(diag)} pair conditions, expected {len(row['ratios'])}"]
        for d, r, s in zip(diag, row["ratios"], row["satisfied"]):
            if not _close(d.ratio, r, row["tol"]) or d.satisfied != s:
                errs.append(f"pair {d.pair}: {g6(d.ratio)} ({d.satisfied}) != {r} ({s})")
        return errs
    if kind == "focus":
        sol = rep
        errs = []
        for key, got in (("theta", sol.front.theta), ("phi", sol.front.phi), ("S3", sol.S3)):
            if key in row and not _close(got, row[key], row["tol"]):
                errs.append(f"{key} {g6(got)} != {row[key]}")
        if sol.iterations > row.get("max_iterations", 1):
            errs.append(f"{sol.iterations} iterations")
        if "hinge_residual" in row:
            res = focus_residual(sol, scene)
            if not res <= row["hinge_residual"]:
                errs.append(f"concurrence residual {res:.3e}")
        return errs
    if kind == "acquire":
        X = run_acquire(scene, row["uv"])
        return [] if np.allclose(X, row["X"], atol=row["tol"], rtol=0) else [f"X {X} != {row['X']}"]
    return [f"unknown check kind {kind!r}"]


def focus_residual(sol: FocusSolution, scene: Scene) -> float:
    """Distance from two hinge points to the front focal plane, the plane of sharp focus and the lens-center plane parallel to the sensor."""
    cam = scene.camera_model()
    sfp = fit_plane(scene.points)
    nS = cam.sensor_normal
    ffp = sol.front_focal_plane(cam.f)
    worst = 0.0
    for t in (0.0, 1.0):
        H = sol.hinge.at(t)
        worst = max(
            worst,
            abs(float(sfp.signed_distance(H))),
            abs(float(ffp.signed_distance(H))),
            abs(float((H - sol.lens_center) @ nS)),
        )
    return worst


def run_check(name: str, stream) -> bool:
    """Print one line per expectation row; False if a verified row fails."""
    exp = load_expectations(name)
    scene = load_scene(name)
    mode = exp["mode"]
    if mode in ("tilt", "tilt-swing"):
        subject = run_optimize(scene, mode)
    elif mode == "focus":
        subject = run_focus_plane(scene)
    else:
        subject = None
    ok = True
    for row in exp["checks"]:
        errs = evaluate_check(row, scene, subject)
        status = row.get("status", "verified")
        what = row["check"] + (f" {row['label']}" if "label" in row else "")
        if not errs:
            stream.write(f"PASS {exp['fixture']}: {what} [{status}]\n")
        else:
            fatal = status == "verified"
            ok &= not fatal
            tag = "FAIL" if fatal else "DIFF"
            stream.write(f"{tag} {exp['fixture']}: {what} [{status}] {'; '.join(errs)}\n")
    return ok


def cmd_check(args) -> int:
    names = args.scenes or list(FIXTURES)
    ok = True
    for name in names:
        ok &= run_check(name, sys.stdout)
    return 0 if ok else EXIT_MISMATCH


# ---------------------------------------------------------------- entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sharpfield", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"sharpfield {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def scene_cmd(name, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("scene_pos", nargs="?", metavar="SCENE", help="scene JSON or fixture name")
        sp.add_argument("--scene", dest="scene_opt", metavar="PATH", help="scene JSON or fixture name")
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
        return sp

    sp = scene_cmd("acquire", "object point sharply imaged at a sensor point")
    sp.add_argument("--uv", nargs=2, type=float, default=(0.0, 0.0), metavar=("U", "V"))
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_acquire)

    sp = scene_cmd("focus-plane", "front standard angles and sensor position for a plane of sharp focus")
    sp.set_defaults(func=cmd_focus_plane)

    sp = scene_cmd("optimize", "tilt (and swing) minimizing the f-number")
    sp.add_argument("--mode", choices=("tilt", "tilt-swing"), default="tilt")
    sp.add_argument("--oracle", action="store_true", help="append the grid-search cross-check")
    sp.add_argument("--steps", type=int, default=2001, help="oracle grid nodes per axis")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_optimize)

    sp = scene_cmd("curve", "CSV of n(theta)")
    sp.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"))
    sp.add_argument("--steps", type=int, default=601)
    sp.set_defaults(func=cmd_curve)

    sp = scene_cmd("surface", "CSV of n(theta, phi)")
    sp.add_argument("--range", nargs=4, type=float, metavar=("T0", "T1", "P0", "P1"))
    sp.add_argument("--steps", type=int, default=201)
    sp.set_defaults(func=cmd_surface)

    sp = sub.add_parser("check", help="compare results with the bundled expectation files")
    sp.add_argument("scenes", nargs="*", metavar="FIXTURE")
    sp.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command != "check":
        args.scene = args.scene_opt or args.scene_pos
        if not args.scene:
            parser.error(f"{args.command}: a scene is required")
        if getattr(args, "steps", 2) < 2:
            parser.error("--steps must be at least 2")
    try:
        return args.func(args)
    except SharpfieldError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
