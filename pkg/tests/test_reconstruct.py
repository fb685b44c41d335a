from __future__ import annotations

import numpy as np
import pytest

from pgcl.classes import equivalent_up_to_duality, load_catalog, verify_cl
from pgcl.projgeom import build_geometry
from pgcl.reconstruct import (
    QuotientConstraint, classify_planar_sections, plane_group, run_small_search,
    search_quotient_bsets, section_from_coordinates, solution_patterns, SECTIONS_Q5_X12,
)
from pgcl.projgeom import plane_chart


def test_plane_group_orders():
    assert plane_group(3).order == 5616
    assert plane_group(4).order == 120960


def test_plane_group_acts_on_incidence():
    pg = plane_group(3)
    g = build_geometry(2, 3)
    rng = np.random.default_rng(0)
    for k in rng.choice(pg.order, 20, replace=False):
        pp, lp = pg.point_perm[k], pg.line_perm[k]
        for l in range(g.num_lines):
            assert set(pp[g.line_points[l]].tolist()) == set(g.line_points[lp[l]].tolist())


def test_orbits_and_canonical_forms():
    pg = plane_group(3)
    g = build_geometry(2, 3)
    line = tuple(int(v) for v in g.line_points[0])
    # all (q+1)-sets that are lines form one orbit of size q^2+q+1
    assert len(pg.orbit(line)) == 13
    other = tuple(int(v) for v in g.line_points[5])
    assert pg.canonical(line) == pg.canonical(other)
    # four points in general position are not a line
    frame = tuple(int(v) for v in g.index_of(np.array([[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]])))
    assert pg.canonical(frame) != pg.canonical(line)
    assert len(pg.stabilizer(line)) * 13 == pg.order


def test_bset_search_small():
    # sets of size 3 with no restriction on rows: lines and triangles
    c = QuotientConstraint(3, 3, None, None)
    found = search_quotient_bsets(c, limit=10)
    assert 0 < len(found) <= 10
    # size 0 gives the empty set
    assert search_quotient_bsets(QuotientConstraint(3, 0, None, None)) == [()]


def test_section_coordinates():
    s = section_from_coordinates(5, SECTIONS_Q5_X12["S6"])
    assert len(s) == 6


def test_q3_sections_match_the_known_class():
    L = load_catalog("drudge")
    g = L.g
    pats = solution_patterns(3, 5, 2)
    pg = plane_group(3)
    classified = {w: classify_planar_sections(3, w, pats) for w in (3, 7, 11)}
    assert {w: len(v) for w, v in classified.items()} == {3: 1, 7: 1, 11: 1}
    for h in range(g.num_planes):
        chart = plane_chart(g, h)
        sec = tuple(j for j in range(13) if L.members[chart.line_map[j]])
        want = classified[len(sec)][0].lines
        assert pg.canonical(sec, "line") == pg.canonical(want, "line")


@pytest.mark.parametrize("solution", [0])
def test_small_reconstruction_q3(solution):
    res = run_small_search(3, 5, 2, solution)
    assert len(res.classes) == 1
    L = res.classes[0]
    assert verify_cl(L) == 5
    assert equivalent_up_to_duality(L, load_catalog("drudge")) is not None


def test_q5_x12_sections_of_weight_6_and_12():
    pats = solution_patterns(5, 12, 0)
    pg = plane_group(5)
    canon = {k: pg.canonical(section_from_coordinates(5, v), "line") for k, v in SECTIONS_Q5_X12.items()}
    six = classify_planar_sections(5, 6, pats)
    twelve = classify_planar_sections(5, 12, pats)
    assert len(six) == 2 and len(twelve) == 2
    assert canon["S6"] in {pg.canonical(s.lines, "line") for s in six}
    assert {pg.canonical(s.lines, "line") for s in twelve} == {canon["S12_1"], canon["S12_2"]}
