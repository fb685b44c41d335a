from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgcl.projgeom import GeometryError, build_geometry, plane_chart, polarity, quotient_at_point


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_counts_pg3(q):
    g = build_geometry(3, q)
    assert g.num_points == (q**4 - 1) // (q - 1)
    assert g.num_lines == (q * q + 1) * (q * q + q + 1)
    assert g.num_planes == g.num_points
    assert g.line_points.shape == (g.num_lines, q + 1)
    assert g.lines_per_point == q * q + q + 1
    assert g.plane_lines.shape[1] == q * q + q + 1


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7])
def test_counts_pg2(q):
    g = build_geometry(2, q)
    assert g.num_points == g.num_lines == q * q + q + 1
    assert g.lines_per_point == q + 1


def test_two_points_one_line():
    g = build_geometry(3, 3)
    inc = g.point_line.astype(int)
    pair = inc @ inc.T
    off = ~np.eye(g.num_points, dtype=bool)
    assert np.all(pair[off] == 1)
    for a, b in [(0, 1), (5, 17), (30, 39)]:
        assert g.point_line[a, g.line_through(a, b)] and g.point_line[b, g.line_through(a, b)]
    with pytest.raises(GeometryError):
        g.line_through(4, 4)


def test_lines_meet_or_are_skew():
    g = build_geometry(3, 3)
    inc = g.point_line.astype(int)
    common = inc.T @ inc
    assert common.max() == g.q + 1
    # a line is met by (q+1)(q^2+q) other lines
    assert np.all(g.meets.sum(axis=1) == (g.q + 1) * (g.q * g.q + g.q))


@pytest.mark.parametrize("q", [3, 4])
def test_polarity_is_an_involution(q):
    g = build_geometry(3, q)
    pol = polarity(g)
    assert np.array_equal(pol.line_map[pol.line_map], np.arange(g.num_lines))
    # l and l^perp are skew or equal, and incidence is reversed on pencils
    lp = g.point_line
    for l in range(0, g.num_lines, 7):
        m = pol.line_map[l]
        pts = g.line_points[l]
        # every point of l lies in every polar plane of a point of l^perp
        assert np.all(g.point_plane[np.ix_(pts, g.line_points[m])])
    assert lp.shape[1] == g.num_lines


@given(st.integers(0, 39))
@settings(max_examples=20, deadline=None)
def test_quotient_is_a_plane(p):
    g = build_geometry(3, 3)
    qt = quotient_at_point(g, p)
    pg2 = qt.plane_geometry
    assert sorted(qt.line_map.tolist()) == sorted(g.point_lines[p].tolist())
    # a plane on p contains exactly the lines corresponding to a line of the quotient
    for j in range(pg2.num_lines):
        h = qt.plane_map[j]
        assert np.all(g.line_plane[qt.line_map[pg2.line_points[j]], h])


def test_plane_chart_maps_lines_into_the_plane():
    g = build_geometry(3, 5)
    for h in (0, 17, 155):
        ch = plane_chart(g, h)
        assert np.all(g.point_plane[ch.point_map, h])
        assert sorted(ch.line_map.tolist()) == sorted(g.plane_lines[h].tolist())


def test_collineation_preserves_incidence():
    g = build_geometry(3, 4)
    mat = [[1, 2, 0, 0], [0, 1, 3, 0], [0, 0, 1, 1], [1, 0, 0, 2]]
    pp = g.point_image(mat, frob=1)
    assert sorted(pp.tolist()) == list(range(g.num_points))
    lp = g.line_image(pp)
    assert sorted(lp.tolist()) == list(range(g.num_lines))
    for l in range(0, g.num_lines, 11):
        assert set(pp[g.line_points[l]].tolist()) == set(g.line_points[lp[l]].tolist())


def test_singular_matrix_rejected():
    g = build_geometry(3, 3)
    with pytest.raises(GeometryError):
        g.point_image([[1, 0, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


def test_pencils():
    g = build_geometry(3, 5)
    p = 0
    h = int(np.nonzero(g.point_plane[p])[0][0])
    assert len(g.pencil(p, h)) == g.q + 1
    other = int(np.nonzero(~g.point_plane[p])[0][0])
    with pytest.raises(GeometryError):
        g.pencil(p, other)


def test_bad_dimension():
    with pytest.raises(GeometryError):
        build_geometry(4, 2)
