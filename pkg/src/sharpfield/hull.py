"""Convex hulls of small point sets.

Input sizes are tiny (tens of points), so clarity wins over asymptotics:
2D hulls use the monotone chain, 3D faces are the supporting planes
through point triples, each face polygon is hulled in its own plane.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import CoplanarPoints, DegenerateObject


def _cross2(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull_2d(points, tol: float | None = None) -> list[int]:
    """Indices of the strict hull vertices, counter-clockwise.

    Corners closer than ``tol`` (a length) to the line through their
    neighbours count as edge points and are left out. Raises
    :class:`DegenerateObject` when all points are collinear.
    """
    P = np.asarray(points, dtype=float)
    if len(P) < 3:
        raise DegenerateObject("need at least three points")
    if tol is None:
        tol = 1e-12 * max(np.ptp(P, axis=0).max(), 1e-300)
    # monotone chain with the exact turn sign, then drop near-straight corners
    order = sorted(range(len(P)), key=lambda i: (P[i, 0], P[i, 1]))

    def chain(idx):
        out = []
        for i in idx:
            while len(out) >= 2 and _cross2(P[out[-2]], P[out[-1]], P[i]) <= 0:
                out.pop()
            out.append(i)
        return out

    lower, upper = chain(order), chain(order[::-1])
    hull = lower[:-1] + upper[:-1]
    while len(hull) >= 3:
        m = len(hull)
        height = [
            _cross2(P[hull[k - 1]], P[hull[k]], P[hull[(k + 1) % m]])
            / max(np.linalg.norm(P[hull[(k + 1) % m]] - P[hull[k - 1]]), 1e-300)
            for k in range(m)
        ]
        k = int(np.argmin(height))
        if height[k] > tol:
            break
        del hull[k]
    if len(hull) < 3:
        raise DegenerateObject("points are collinear")
    return hull


@dataclass(frozen=True)
class Face:
    vertices: tuple  # polygon, counter-clockwise seen from outside
    normal: np.ndarray  # outward unit normal
    offset: float


@dataclass(frozen=True)
class Hull3:
    vertices: tuple
    faces: tuple
    edges: tuple  # sorted index pairs


def convex_hull_3d(points) -> Hull3:
    """Vertices, polygonal faces and edges of the hull of a 3D point set."""
    P = np.asarray(points, dtype=float)
    n = len(P)
    if n < 4:
        raise CoplanarPoints("need at least four points for a 3D hull")
    scale = max(np.ptp(P, axis=0).max(), 1e-300)
    tol = 1e-9 * scale

    triples = np.array(list(combinations(range(n), 3)))
    a, b, c = P[triples[:, 0]], P[triples[:, 1]], P[triples[:, 2]]
    normals = np.cross(b - a, c - a)
    norms = np.linalg.norm(normals, axis=1)
    ok = norms > 1e-12 * scale * scale
    triples, a, normals = triples[ok], a[ok], normals[ok] / norms[ok, None]
    if len(triples) == 0:
        raise CoplanarPoints("points are collinear")
    dist = P @ normals.T - np.sum(a * normals, axis=1)  # (n, T)
    if np.all(np.abs(dist) <= tol):
        raise CoplanarPoints("points are coplanar")
    below = np.all(dist <= tol, axis=0)
    above = np.all(dist >= -tol, axis=0)

    faces = {}
    for t in np.nonzero(below | above)[0]:
        on = frozenset(np.nonzero(np.abs(dist[:, t]) <= tol)[0].tolist())
        if on in faces:
            continue
        nrm = normals[t] if below[t] else -normals[t]
        faces[on] = nrm

    out = []
    edges = set()
    for on, nrm in faces.items():
        idx = sorted(on)
        # orthonormal basis of the face plane, oriented so CCW is seen from outside
        u = P[idx[1]] - P[idx[0]]
        u /= np.linalg.norm(u)
        v = np.cross(nrm, u)
        local = np.array([[P[i] @ u, P[i] @ v] for i in idx])
        poly = tuple(idx[k] for k in convex_hull_2d(local))
        centroid = P[list(poly)].mean(axis=0)
        out.append(Face(poly, nrm, float(centroid @ nrm)))
        for i, j in zip(poly, poly[1:] + poly[:1]):
            edges.add((min(i, j), max(i, j)))

    out.sort(key=lambda fc: sorted(fc.vertices))
    verts = tuple(sorted({i for fc in out for i in fc.vertices}))
    return Hull3(verts, tuple(out), tuple(sorted(edges)))
