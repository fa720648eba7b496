"""Minimum f-number search over front tilt (and swing).

The inner problem (tightest wedge through a given hinge) is solved in closed
form by taking extreme slopes. The outer problem is solved by enumerating
the finitely many contact configurations where the f-number can be minimal:
an edge against one limiting plane and a vertex against the other in 2D,
edge-edge and face-vertex contacts in 3D, plus the untilted configuration.
An image-space grid search is provided as an independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple, Optional

import numpy as np

from .dof import (
    DofParams,
    SlopePair,
    fnumber_parallel,
)
from .errors import (
    AllInfeasible,
    BehindFocalPlane,
    EmptyFeasibleSet,
    NoFrontFacingSolution,
    SingularDenominator,
    ZeroAngles,
)
from .geom import (
    Line3,
    Plane,
    angles_from_normal,
    line_from_planes,
    rotation_about_z,
    unit_normal_through_hinge,
)
from .hull import convex_hull_3d, convex_hull_2d

FEASIBILITY_MARGIN = 1e-9
CONTACT_TOL = 1e-9
GOLDEN_TOL = 1e-10
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


# ---------------------------------------------------------------- labels


@dataclass(frozen=True)
class ContactLabel:
    """Which vertices touch the upper and lower limiting planes (0-based).

    ``kind`` names the configuration: ``VV``, ``EV``, ``EE``, ``FV`` and so
    on, or ``Z`` for the untilted configuration. ``str()`` gives the
    1-based notation used in result tables, e.g. ``E12V3`` or ``F123V4``.
    """

    kind: str
    upper: tuple = ()
    lower: tuple = ()

    @classmethod
    def from_contacts(cls, upper, lower) -> "ContactLabel":
        upper, lower = tuple(sorted(upper)), tuple(sorted(lower))
        kind = "".join(_part_kind(p) for p in _ordered_parts(upper, lower))
        return cls(kind, upper, lower)

    @classmethod
    def zero_tilt(cls, upper=(), lower=()) -> "ContactLabel":
        return cls("Z", tuple(sorted(upper)), tuple(sorted(lower)))

    @property
    def vertex_sets(self) -> frozenset:
        return frozenset({frozenset(self.upper), frozenset(self.lower)})

    def __str__(self) -> str:
        if self.kind == "Z":
            return "Z"
        return "".join(
            _part_kind(p) + "".join(str(i + 1) for i in p)
            for p in _ordered_parts(self.upper, self.lower)
        )


def _part_kind(part) -> str:
    return {1: "V", 2: "E"}.get(len(part), "F")


def _ordered_parts(upper, lower):
    # larger contact first, then by smallest index
    return sorted([upper, lower], key=lambda p: (-len(p), p))


@dataclass
class ContactCandidate:
    label: ContactLabel
    theta: float
    phi: float = 0.0
    slopes: Optional[SlopePair] = None
    fnumber: float = math.nan
    feasible: bool = False
    reason: Optional[str] = None
    hinge: Optional[Line3] = None

    def sort_key(self):
        return (self.fnumber, abs(self.theta), abs(self.phi), str(self.label))


class PairCondition(NamedTuple):
    pair: tuple
    ratio: float
    satisfied: bool
    reason: Optional[str] = None


class OracleResult(NamedTuple):
    theta: float
    phi: float
    n: float
    thetas: np.ndarray
    phis: Optional[np.ndarray]
    surface: np.ndarray
    resolution: float


@dataclass
class OptimizeReport:
    candidates: list
    best: ContactCandidate
    zero_tilt_value: float
    oracle: Optional[OracleResult] = None
    condition_diagnostics: list = field(default_factory=list)
    hull_vertices: tuple = ()
    dropped: tuple = ()

    @property
    def feasible(self) -> list:
        return [c for c in self.candidates if c.feasible]


class Contact(NamedTuple):
    slopes: SlopePair
    upper: tuple
    lower: tuple


# ---------------------------------------------------------------- 2D core


def _as_points(pts) -> np.ndarray:
    P = np.asarray(pts, dtype=float)
    if P.ndim != 2 or P.shape[1] != 3:
        raise ValueError("points must be an (n, 3) array")
    if not np.all(np.isfinite(P)):
        raise ValueError("points must be finite")
    return P


def _check_depths(P: np.ndarray, f: float):
    bad = np.nonzero(P[:, 2] <= f)[0]
    if len(bad):
        raise BehindFocalPlane(
            f"points {[int(i) + 1 for i in bad]} are not in front of the focal plane",
            bad.tolist(),
        )


def _ffp_margins(theta: float, y, z, f: float) -> np.ndarray:
    return -y * np.sin(theta) + z * np.cos(theta) - f


def _scaled_slopes(theta: float, y, z, f: float) -> np.ndarray:
    # a * sin(theta) for every point; finite even when sin(theta) underflows
    return (y * np.sin(theta) + f) / z


def _slopes_yz(theta: float, y, z, f: float, idx=None) -> tuple:
    """Contact and scaled slopes ``(b_upper, b_lower)`` with ``b = a sin(theta)``."""
    margins = _ffp_margins(theta, y, z, f)
    bad = np.nonzero(margins < FEASIBILITY_MARGIN)[0]
    if len(bad):
        ids = bad if idx is None else np.asarray(idx)[bad]
        raise BehindFocalPlane(
            f"points {[int(i) + 1 for i in ids]} are behind the front focal plane at theta={theta:.6g}",
            ids.tolist(),
        )
    s = np.sin(theta)
    b = _scaled_slopes(theta, y, z, f)
    # ordering by a = b / s flips with the sign of s
    key = b if s > 0 else -b
    hi, lo = key.max(), key.min()
    upper = np.nonzero(key >= hi - CONTACT_TOL * max(abs(s), abs(hi)))[0]
    lower = np.nonzero(key <= lo + CONTACT_TOL * max(abs(s), abs(lo)))[0]
    b_up, b_lo = float(b[upper[0]]), float(b[lower[0]])
    with np.errstate(over="ignore"):
        slopes = SlopePair(b_up / s, b_lo / s)
    if idx is not None:
        upper, lower = np.asarray(idx)[upper], np.asarray(idx)[lower]
    contact = Contact(slopes, tuple(int(i) for i in upper), tuple(int(i) for i in lower))
    return contact, (b_up, b_lo)


def _tilt_fnumber_scaled(theta: float, b_up: float, b_lo: float, params: DofParams) -> float:
    # the tilted f-number with a_i sin(theta) = b_i substituted; no division by sin(theta)
    den = 2.0 * np.cos(theta) - (b_up + b_lo)
    if abs(den) <= 1e-15:
        raise SingularDenominator("limiting planes are symmetric about the lens plane")
    return float(params.n_max * abs(b_up - b_lo) / den)


def slopes_at(theta: float, pts, f: float) -> Contact:
    """Tightest pair of limiting slopes through the hinge for tilt ``theta``.

    A point ``X`` lies on the plane through the hinge with slope
    ``(X2 + f / sin(theta)) / X3``; the upper slope is the largest of these,
    the lower slope the smallest. The returned indices are the vertices
    attaining each extreme.
    """
    if theta == 0:
        raise ValueError("slopes are undefined at theta = 0")
    P = _as_points(pts)
    return _slopes_yz(theta, P[:, 1], P[:, 2], f)[0]


def _zero_contact(z) -> tuple:
    zmin, zmax = z.min(), z.max()
    tol = CONTACT_TOL * max(1.0, abs(zmax))
    near = tuple(int(i) for i in np.nonzero(z <= zmin + tol)[0])
    far = tuple(int(i) for i in np.nonzero(z >= zmax - tol)[0])
    return near, far


def n_of_theta(theta: float, pts, params: DofParams) -> float:
    """Smallest f-number over all wedges with tilt ``theta`` containing the points."""
    return _n_of_theta_contact(theta, _as_points(pts), params)[0]


def _n_of_theta_contact(theta, P, params, idx=None):
    if not np.isfinite(theta) or abs(theta) >= np.pi / 2:
        raise ValueError(f"invalid tilt {theta}")
    y, z = P[:, 1], P[:, 2]
    if theta == 0:
        _check_depths(P, params.f)
        near, far = _zero_contact(z)
        if idx is not None:
            near = tuple(int(idx[i]) for i in near)
            far = tuple(int(idx[i]) for i in far)
        return fnumber_parallel(z.max(), z.min(), params), ContactLabel.zero_tilt(near, far)
    contact, (b_up, b_lo) = _slopes_yz(theta, y, z, params.f, idx)
    n = _tilt_fnumber_scaled(theta, b_up, b_lo, params)
    return n, ContactLabel.from_contacts(contact.upper, contact.lower)


def angular_theta(Xi, Xj, f: float) -> Optional[float]:
    """Tilt whose hinge is collinear with ``Xi`` and ``Xj`` (in the X2-X3 plane), if any."""
    yi, zi = Xi[1], Xi[2]
    yj, zj = Xj[1], Xj[2]
    if zi == zj:
        return None
    q = (yj * zi - yi * zj) / (zj - zi)
    if q == 0 or abs(f / q) > 1:
        return None
    return float(np.arcsin(f / q))


def angular_thetas_2d(pts, f: float) -> list:
    """``[((i, j), theta or None), ...]`` for every pair of points (0-based)."""
    P = _as_points(pts)
    return [((i, j), angular_theta(P[i], P[j], f)) for i, j in combinations(range(len(P)), 2)]


def feasible_theta_interval(pts, f: float) -> tuple[float, float]:
    """Open interval of tilts keeping every point in front of the front focal plane."""
    P = _as_points(pts)
    _check_depths(P, f)
    y, z = P[:, 1], P[:, 2]
    R = np.hypot(y, z)
    delta = np.arctan2(y, z)
    beta = np.arccos(np.clip(f / R, -1.0, 1.0))
    lo = max(float(np.max(-delta - beta)), -np.pi / 2)
    hi = min(float(np.min(-delta + beta)), np.pi / 2)
    return lo, hi


def prop2_condition(pts, f: float) -> list:
    """Distance from the lens center to the line through each pair, compared with ``f``.

    This is ``|Xi x Xj| / |Xi - Xj|``; when it exceeds ``f`` for every pair
    the 2D optimum can only occur where three vertices touch the wedge.
    """
    P = _as_points(pts)
    out = []
    for i, j in combinations(range(len(P)), 2):
        d = np.linalg.norm(P[i] - P[j])
        if d <= 1e-15:
            out.append(PairCondition((i, j), math.nan, False, "coincident points"))
            continue
        r = float(np.linalg.norm(np.cross(P[i], P[j])) / d)
        out.append(PairCondition((i, j), r, r > f))
    return out


def prop2_coefficients(X1, X2, f: float) -> tuple:
    """Coefficients of ``b0 + b1 cos(t) + b2 sin(t)``, the sign of dn/dtheta on a two-contact arc.

    Returns ``(b0, b1, b2, nonvanishing)`` where ``nonvanishing`` is the
    sufficient condition ``b0**2 > b1**2 + b2**2``.
    """
    X1, X2 = np.asarray(X1, float), np.asarray(X2, float)
    b0 = X1[1] * X2[2] - X2[1] * X1[2]
    b1 = -f * (X2[1] - X1[1])
    b2 = f * (X2[2] - X1[2])
    return float(b0), float(b1), float(b2), bool(b0 * b0 > b1 * b1 + b2 * b2)


def golden_section(fn, a: float, b: float, tol: float = GOLDEN_TOL) -> float:
    """Minimizer of a unimodal ``fn`` on ``[a, b]``."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(c), fn(d)
    while abs(b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(d)
    return (a + b) / 2


def _segment_minimum(fn, a: float, b: float, samples: int = 64) -> float:
    # n may rise and fall once inside a segment; bracket the best sample first
    ts = np.linspace(a, b, samples)
    vals = np.array([fn(t) for t in ts])
    k = int(np.nanargmin(vals))
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, samples - 1)]
    return golden_section(fn, lo, hi)


def _best(candidates) -> ContactCandidate:
    feasible = [c for c in candidates if c.feasible]
    if not feasible:
        raise AllInfeasible("no feasible contact configuration")
    return min(feasible, key=ContactCandidate.sort_key)


def _check_bound(cand: ContactCandidate, params: DofParams):
    if not (0 <= cand.fnumber <= params.n_max * (1 + 1e-12)):
        cand.feasible = False
        cand.reason = f"f-number {cand.fnumber:.6g} outside [0, f/c]"


def optimize_tilt_2d(pts, params: DofParams, oracle_steps: Optional[int] = None) -> OptimizeReport:
    """Tilt minimizing the f-number; the first coordinate of each point is ignored.

    Candidates are the tilts where a hull edge and the opposite vertex both
    touch the wedge, and the untilted configuration. When the sufficient
    condition for triple contact fails for some pair, each smooth segment
    between candidate tilts is also searched for an interior minimum.
    """
    P = _as_points(pts)
    f = params.f
    _check_depths(P, f)
    hull = convex_hull_2d(P[:, 1:])
    dropped = tuple(i for i in range(len(P)) if i not in hull)
    H = P[hull]
    lo, hi = feasible_theta_interval(H, f)

    candidates = []
    for k in range(len(hull)):
        i, j = hull[k], hull[(k + 1) % len(hull)]
        theta = angular_theta(P[i], P[j], f)
        if theta is None:
            continue
        cand = ContactCandidate(ContactLabel.from_contacts((i, j), ()), theta)
        try:
            n, label = _n_of_theta_contact(theta, H, params, hull)
        except BehindFocalPlane as exc:
            cand.reason = str(exc)
            candidates.append(cand)
            continue
        cand.label, cand.fnumber = label, n
        cand.slopes = slopes_at(theta, H, f).slopes
        if {i, j} <= set(label.upper) or {i, j} <= set(label.lower):
            cand.feasible = True
            _check_bound(cand, params)
        else:
            cand.reason = f"edge {i + 1}{j + 1} does not touch a limiting plane"
        candidates.append(cand)

    n0, zlabel = _n_of_theta_contact(0.0, H, params, hull)
    zero = ContactCandidate(zlabel, 0.0, fnumber=n0, feasible=True)
    _check_bound(zero, params)
    candidates.append(zero)

    diagnostics = [
        PairCondition((hull[a], hull[b]), r, s, why)
        for (a, b), r, s, why in prop2_condition(H, f)
    ]
    if not all(d.satisfied for d in diagnostics):
        breaks = sorted({c.theta for c in candidates if c.feasible and lo < c.theta < hi} | {0.0})
        eps = 1e-9
        edges = [lo + eps] + breaks + [hi - eps]

        def fn(t):
            try:
                return _n_of_theta_contact(t, H, params, hull)[0]
            except BehindFocalPlane:
                return math.inf

        for a, b in zip(edges, edges[1:]):
            if b - a < 1e-8:
                continue
            t = _segment_minimum(fn, a, b)
            if min(t - a, b - t) < 1e-7 or t == 0.0:
                continue
            n, label = _n_of_theta_contact(t, H, params, hull)
            cand = ContactCandidate(label, float(t), fnumber=n, feasible=True)
            cand.slopes = slopes_at(t, H, f).slopes
            _check_bound(cand, params)
            candidates.append(cand)

    report = OptimizeReport(
        candidates=candidates,
        best=_best(candidates),
        zero_tilt_value=n0,
        condition_diagnostics=diagnostics,
        hull_vertices=tuple(hull),
        dropped=dropped,
    )
    if oracle_steps:
        report.oracle = refined_oracle(P, params, (lo, hi), None, oracle_steps)
    return report


# ---------------------------------------------------------------- 3D


def rotation_reduction(theta: float, phi: float) -> tuple[float, float]:
    """Equivalent pure tilt ``psi`` and rotation ``alpha`` about X3 for a tilt/swing pair.

    Rotating the scene counter-clockwise by ``alpha`` about the X3 axis
    (``X -> rotation_about_z(alpha) @ X``) turns the tilt/swing configuration
    into a pure tilt by ``psi`` with the same hinge distance ``f / |sin(psi)|``.
    For ``theta = 0`` the sign of ``psi`` is taken positive.
    """
    if theta == 0 and phi == 0:
        raise ZeroAngles("no hinge line for zero tilt and swing")
    sigma = 1.0 if theta >= 0 else -1.0
    x, y = math.sin(phi) * math.cos(theta), math.sin(theta)
    psi = math.asin(sigma * min(math.hypot(x, y), 1.0))
    alpha = math.atan2(sigma * x, sigma * y)
    return psi, alpha


def _n_3d_contact(theta, phi, P, params):
    if theta == 0 and phi == 0:
        return _n_of_theta_contact(0.0, P, params) + (None,)
    psi, alpha = rotation_reduction(theta, phi)
    Q = rotation_about_z(alpha)
    n, label = _n_of_theta_contact(psi, P @ Q.T, params)
    return n, label, (psi, alpha)


def n_of_theta_phi(theta: float, phi: float, pts, params: DofParams) -> float:
    """Smallest f-number over all wedges with front tilt ``theta`` and swing ``phi``."""
    return _n_3d_contact(theta, phi, _as_points(pts), params)[0]


def contact_at(theta: float, phi: float, pts, params: DofParams) -> ContactLabel:
    return _n_3d_contact(theta, phi, _as_points(pts), params)[1]


def limiting_normals(theta: float, phi: float, pts, f: float) -> tuple[np.ndarray, np.ndarray]:
    """Normals of the two limiting planes in the original frame (not normalized)."""
    psi, alpha = rotation_reduction(theta, phi)
    Q = rotation_about_z(alpha)
    c = _slopes_yz(psi, *(_as_points(pts) @ Q.T)[:, 1:].T, f)[0]
    return tuple(Q.T @ np.array([0.0, -1.0, a]) for a in c.slopes)


class HingeCandidate(NamedTuple):
    label: ContactLabel
    hinge: Optional[Line3]
    reason: Optional[str] = None


def _edge_trace(P, i, j, tol):
    d = P[j] - P[i]
    if abs(d[2]) <= tol * np.linalg.norm(d):
        return None, d
    t = -P[i, 2] / d[2]
    return P[i] + t * d, d


def hinge_candidates_3d(pts, f: float) -> list:
    """Hinge lines of every edge-edge and face-vertex contact of the hull.

    Labels of face-vertex candidates carry the face only; the touching
    vertex is found when the candidate is evaluated. Edge-edge labels list
    the two edges without assigning them to a limiting plane yet.
    """
    P = _as_points(pts)
    hull = convex_hull_3d(P)
    scale = np.ptp(P, axis=0).max()
    tol = 1e-12
    out = []
    for e1, e2 in combinations(hull.edges, 2):
        if set(e1) & set(e2):
            continue
        label = ContactLabel("EE", e1, e2)
        t1, d1 = _edge_trace(P, *e1, tol)
        t2, d2 = _edge_trace(P, *e2, tol)
        if t1 is None and t2 is None:
            why = (
                "parallel edges, contact is of face type"
                if np.linalg.norm(np.cross(d1, d2)) <= tol * np.linalg.norm(d1) * np.linalg.norm(d2)
                else "both edges parallel to the sensor, no common hinge"
            )
            out.append(HingeCandidate(label, None, why))
        elif t1 is None or t2 is None:
            # hinge through the trace of one edge, parallel to the other edge
            trace, d = (t2, d1) if t1 is None else (t1, d2)
            out.append(HingeCandidate(label, Line3(trace, d)))
        elif np.linalg.norm(t1 - t2) <= 1e-12 * max(scale, 1.0):
            out.append(HingeCandidate(label, None, "edges meet on the lens-parallel plane"))
        else:
            out.append(HingeCandidate(label, Line3(t1, t2 - t1)))
    psl = Plane(np.array([0.0, 0.0, 1.0]), 0.0)
    for face in hull.faces:
        label = ContactLabel("FV", tuple(sorted(face.vertices)), ())
        if np.hypot(face.normal[0], face.normal[1]) <= tol:
            out.append(HingeCandidate(label, None, "face parallel to the sensor (untilted case)"))
            continue
        out.append(HingeCandidate(label, line_from_planes(Plane(face.normal, face.offset), psl)))
    return out


def optimize_tilt_swing(pts, params: DofParams, oracle_steps: Optional[int] = None) -> OptimizeReport:
    """Tilt and swing minimizing the f-number for a convex polyhedral object."""
    P = _as_points(pts)
    f = params.f
    _check_depths(P, f)
    hull = convex_hull_3d(P)
    candidates = []
    for hc in hinge_candidates_3d(P, f):
        cand = ContactCandidate(hc.label, math.nan, math.nan, hinge=hc.hinge, reason=hc.reason)
        candidates.append(cand)
        if hc.hinge is None:
            continue
        try:
            theta, phi = angles_from_normal(unit_normal_through_hinge(hc.hinge, f))
        except NoFrontFacingSolution as exc:
            cand.reason = str(exc)
            continue
        cand.theta, cand.phi = theta, phi
        try:
            n, label, _ = _n_3d_contact(theta, phi, P, params)
        except BehindFocalPlane as exc:
            cand.reason = str(exc)
            continue
        cand.fnumber = n
        attained = label.vertex_sets
        if hc.label.kind == "EE":
            ok = attained == hc.label.vertex_sets
        else:
            face = frozenset(hc.label.upper)
            ok = face in attained
        if not ok:
            cand.reason = f"attained contact {label} differs from {_describe(hc.label)}"
            continue
        cand.label = label
        psi, alpha = rotation_reduction(theta, phi)
        Q = rotation_about_z(alpha)
        cand.slopes = _slopes_yz(psi, *(P @ Q.T)[:, 1:].T, f)[0].slopes
        cand.feasible = True
        cand.reason = None
        _check_bound(cand, params)

    n0, zlabel, _ = _n_3d_contact(0.0, 0.0, P, params)
    zero = ContactCandidate(zlabel, 0.0, 0.0, fnumber=n0, feasible=True)
    _check_bound(zero, params)
    candidates.append(zero)

    report = OptimizeReport(
        candidates=candidates,
        best=_best(candidates),
        zero_tilt_value=n0,
        condition_diagnostics=prop2_condition(P, f),
        hull_vertices=hull.vertices,
        dropped=tuple(i for i in range(len(P)) if i not in hull.vertices),
    )
    if oracle_steps:
        box = (-np.pi / 2 + 1e-6, np.pi / 2 - 1e-6)
        report.oracle = refined_oracle(P, params, box, box, oracle_steps)
    return report


def _describe(label: ContactLabel) -> str:
    if label.kind == "EE":
        return "E{}{}E{}{}".format(*(i + 1 for i in label.upper + label.lower))
    return "F" + "".join(str(i + 1) for i in label.upper)


# ---------------------------------------------------------------- oracle


def _image_space_fnumber(normals: np.ndarray, P: np.ndarray, params: DofParams) -> np.ndarray:
    """f-number of the thinnest image-space slab holding all images, per lens normal.

    A point ``X`` images to ``f X / (f - <X, nL>)``; the depth of field is
    the preimage of the slab between the two sensor-parallel planes through
    the nearest and farthest images. Infeasible lens orientations give NaN.
    """
    f = params.f
    dots = normals @ P.T
    feasible = np.all(dots - f >= FEASIBILITY_MARGIN, axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        depth = f * P[:, 2] / (f - dots)
        d1, d2 = depth.max(axis=1), depth.min(axis=1)
        n = params.n_max * np.abs((d1 - d2) / (d1 + d2))
    n[~feasible] = np.nan
    return n


def _lens_normals(thetas, phis) -> np.ndarray:
    T, F = np.meshgrid(thetas, phis, indexing="ij")
    T, F = T.ravel(), F.ravel()
    return np.stack([-np.sin(F) * np.cos(T), -np.sin(T), np.cos(F) * np.cos(T)], axis=1)


def grid_oracle(pts, params: DofParams, theta_range, phi_range=None, steps=2001) -> OracleResult:
    """Brute-force minimum of the f-number on a regular grid.

    Works in image space and never looks at slopes or contact
    configurations, so it can check the enumeration. ``phi_range=None``
    means a pure tilt scan (``phi = 0``). Ties go to the smallest ``|theta|``
    then ``|phi|``. ``resolution`` is the largest change of f-number between
    the minimizing node and its feasible neighbours.
    """
    P = _as_points(pts)
    if np.isscalar(steps):
        steps = (int(steps), int(steps))
    if min(steps) < 2:
        raise ValueError("need at least two grid steps per axis")
    thetas = np.linspace(theta_range[0], theta_range[1], steps[0])
    phis = None if phi_range is None else np.linspace(phi_range[0], phi_range[1], steps[1])
    grid_phis = np.zeros(1) if phis is None else phis
    shape = (len(thetas), len(grid_phis))

    surface = np.empty(shape[0] * shape[1])
    chunk = 1 << 18
    rows = max(1, chunk // shape[1])
    for start in range(0, shape[0], rows):
        sl = thetas[start : start + rows]
        normals = _lens_normals(sl, grid_phis)
        surface[start * shape[1] : (start + len(sl)) * shape[1]] = _image_space_fnumber(
            normals, P, params
        )
    surface = surface.reshape(shape)
    if np.all(np.isnan(surface)):
        raise EmptyFeasibleSet("no feasible grid node")

    best = np.nanmin(surface)
    ii, jj = np.nonzero(surface == best)
    order = np.lexsort((np.abs(grid_phis[jj]), np.abs(thetas[ii])))
    i, j = int(ii[order[0]]), int(jj[order[0]])
    neigh = surface[max(i - 1, 0) : i + 2, max(j - 1, 0) : j + 2]
    resolution = float(np.nanmax(np.abs(neigh - best)))
    if phis is None:
        surface = surface[:, 0]
    return OracleResult(
        float(thetas[i]), float(grid_phis[j]), float(best), thetas, phis, surface, resolution
    )


def refined_oracle(pts, params, theta_range, phi_range=None, steps=2001, zooms: int = 2) -> OracleResult:
    """Grid oracle followed by ``zooms`` re-gridding passes around the current minimum."""
    res = grid_oracle(pts, params, theta_range, phi_range, steps)
    for _ in range(zooms):
        dt = 4 * (res.thetas[1] - res.thetas[0])
        tr = (max(res.theta - dt, theta_range[0]), min(res.theta + dt, theta_range[1]))
        pr = None
        if phi_range is not None:
            dp = 4 * (res.phis[1] - res.phis[0])
            pr = (max(res.phi - dp, phi_range[0]), min(res.phi + dp, phi_range[1]))
        res = grid_oracle(pts, params, tr, pr, steps)
    return res


# ---------------------------------------------------------------- curves and surfaces


def evaluate_curve(thetas, pts, params: DofParams) -> list:
    """``[(theta, n or None, label or reason), ...]`` along a tilt scan."""
    P = _as_points(pts)
    out = []
    for t in np.asarray(thetas, float):
        try:
            n, label = _n_of_theta_contact(float(t), P, params)
            out.append((float(t), n, str(label)))
        except BehindFocalPlane:
            out.append((float(t), None, "behind_ffp"))
    return out


def evaluate_surface(thetas, phis, pts, params: DofParams) -> tuple:
    """Vectorized tilt/swing scan: ``(n, labels)`` arrays of shape (len(thetas), len(phis)).

    Infeasible nodes get ``n = NaN`` and the label ``behind_ffp``.
    """
    P = _as_points(pts)
    f = params.f
    T, F = np.meshgrid(np.asarray(thetas, float), np.asarray(phis, float), indexing="ij")
    t, p = T.ravel(), F.ravel()
    n = np.full(t.shape, np.nan)
    labels = np.empty(t.shape, dtype=object)

    zero = (t == 0) & (p == 0)
    sigma = np.where(t >= 0, 1.0, -1.0)
    x_, y_ = np.sin(p) * np.cos(t), np.sin(t)
    sin_psi = sigma * np.minimum(np.hypot(x_, y_), 1.0)
    cos_psi = np.sqrt(1 - sin_psi**2)
    alpha = np.arctan2(sigma * x_, sigma * y_)
    ca, sa = np.cos(alpha), np.sin(alpha)
    y = sa[:, None] * P[None, :, 0] + ca[:, None] * P[None, :, 1]
    z = np.broadcast_to(P[:, 2], y.shape)
    margins = -y * sin_psi[:, None] + z * cos_psi[:, None] - f
    b = (y * sin_psi[:, None] + f) / z
    key = np.where(sin_psi[:, None] > 0, b, -b)
    hi, lo = key.max(axis=1), key.min(axis=1)
    b_sum = b.max(axis=1) + b.min(axis=1)
    feasible = np.all(margins >= FEASIBILITY_MARGIN, axis=1) & ~zero
    den = 2 * cos_psi - b_sum
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = params.n_max * (hi - lo) / den
    n[feasible] = vals[feasible]
    on_up = key >= (hi - CONTACT_TOL * np.maximum(np.abs(sin_psi), np.abs(hi)))[:, None]
    on_lo = key <= (lo + CONTACT_TOL * np.maximum(np.abs(sin_psi), np.abs(lo)))[:, None]
    cache = {}
    for k in np.nonzero(feasible)[0]:
        sig = (on_up[k].tobytes(), on_lo[k].tobytes())
        if sig not in cache:
            cache[sig] = str(ContactLabel.from_contacts(np.nonzero(on_up[k])[0], np.nonzero(on_lo[k])[0]))
        labels[k] = cache[sig]
    labels[~feasible] = "behind_ffp"
    if np.any(zero):
        n0, zl = _n_of_theta_contact(0.0, P, params)
        n[zero], labels[zero] = n0, str(zl)
    return n.reshape(T.shape), labels.reshape(T.shape)
