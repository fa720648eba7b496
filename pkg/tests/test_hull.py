import itertools

import numpy as np
import pytest
from hypothesis import example, given, settings
from hypothesis import strategies as st

from sharpfield.errors import CoplanarPoints, DegenerateObject
from sharpfield.hull import convex_hull_3d, convex_hull_2d


def test_square_with_edge_midpoint_and_interior_point():
    pts = [[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0], [0.4, 0.6]]
    hull = convex_hull_2d(pts)
    assert sorted(hull) == [0, 1, 2, 3]
    # counter-clockwise: positive signed area
    P = np.array(pts)[hull]
    area = 0.5 * np.sum(P[:, 0] * np.roll(P[:, 1], -1) - np.roll(P[:, 0], -1) * P[:, 1])
    assert area == pytest.approx(1.0)


def test_triangle_hull():
    assert sorted(convex_hull_2d([[-0.1, 0.12], [0, 0.19], [-0.0525, 0.17]])) == [0, 1, 2]


def test_collinear_2d_rejected():
    with pytest.raises(DegenerateObject):
        convex_hull_2d([[0, 0], [1, 1], [2, 2]])
    with pytest.raises(DegenerateObject):
        convex_hull_2d([[0, 0], [1, 1]])


@settings(max_examples=60)
@given(st.lists(st.tuples(st.floats(-5, 5), st.floats(-5, 5)), min_size=3, max_size=25))
# extreme points that sit mid-edge within tolerance
@example([(0.0, 1.0), (1.0, 0.0), (2.0, 0.0), (-1.0, 2.2250738585e-313)])
@example([(0.0, 0.0), (0.0, -3.0), (1.0, 0.0), (-1.1125369292536007e-308, -2.0)])
# two corners closer together than numpy's default allclose tolerance
@example([(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 7.779380264546487e-09)])
def test_hull_contains_every_point(pts):
    P = np.array(pts)
    try:
        hull = convex_hull_2d(P)
    except DegenerateObject:
        return
    H = P[hull]
    scale = max(np.ptp(P, axis=0).max(), 1.0)
    for k in range(len(H)):
        o, a = H[k], H[(k + 1) % len(H)]
        cross = (a[0] - o[0]) * (P[:, 1] - o[1]) - (a[1] - o[1]) * (P[:, 0] - o[0])
        assert np.all(cross >= -1e-9 * scale * scale)


def test_cube():
    pts = np.array(list(itertools.product([0, 1], repeat=3)), dtype=float)
    pts = np.vstack([pts, [[0.5, 0.5, 0.5], [0.5, 0.5, 0.0]]])
    hull = convex_hull_3d(pts)
    assert hull.vertices == tuple(range(8))
    assert len(hull.faces) == 6
    assert len(hull.edges) == 12
    for face in hull.faces:
        assert len(face.vertices) == 4
        # every point is on the inner side of every face
        assert np.all(pts @ face.normal - face.offset <= 1e-12)


def test_tetrahedron_faces_and_euler():
    pts = [[-0.5, -1, 1], [-0.5, 3, 1], [-0.5, 0, 1.5], [1, 1, 1.5]]
    hull = convex_hull_3d(pts)
    assert len(hull.faces) == 4
    assert len(hull.edges) == 6
    assert {tuple(sorted(f.vertices)) for f in hull.faces} == {
        (0, 1, 2),
        (0, 1, 3),
        (0, 2, 3),
        (1, 2, 3),
    }


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(5, 20))
def test_random_hull_euler_characteristic(seed, n):
    P = np.random.default_rng(seed).normal(size=(n, 3))
    hull = convex_hull_3d(P)
    V, E, Fc = len(hull.vertices), len(hull.edges), len(hull.faces)
    assert V - E + Fc == 2
    for face in hull.faces:
        assert np.all(P @ face.normal - face.offset <= 1e-9)


def test_coplanar_rejected():
    with pytest.raises(CoplanarPoints):
        convex_hull_3d([[0, 0, 1], [1, 0, 1], [0, 1, 1], [1, 1, 1]])
    with pytest.raises(CoplanarPoints):
        convex_hull_3d([[0, 0, 1], [1, 0, 1], [0, 1, 1]])
