"""Acceptance criteria 1-11, each recorded as one PASS/FAIL line in the
terminal summary.  Extended cases (q=7, x=18 and q=8, x=20) run under a time
budget taken from PGCL_EXTENDED_SECS (default 600 s each); an exhausted
budget counts as Inconclusive with its report."""

from __future__ import annotations

import itertools
import os
import time

import numpy as np
import pytest

import paper_tables as T
from acceptance_log import criterion, record
from pgcl.classes import (
    CATALOG, ab_set_parameters, add_empty_plane, census, complement, dualize, load_catalog,
    weight_counts, weight_profile, verify_cl,
)
from pgcl.cli import bset_constraint, run_pipeline
from pgcl.countsys import build_system, check_census, counting_identities
from pgcl.feasibility import Budget, solve_bounded, solve_bundle
from pgcl.patterns import (
    admissible_parameters, all_matrices_bruteforce, base_solutions, canonical_pattern, check_axioms,
    generate_patterns, modular_solutions, pattern_lists, weight_sets,
)
from pgcl.reconstruct import complete_from_incident_set, run_x12_search, search_quotient_bsets

EXTENDED_SECS = float(os.environ.get("PGCL_EXTENDED_SECS", "600"))


def _solve(q, x, n):
    b = build_system(q, x, n)
    return b, solve_bundle(b, counting_identities(q, x))


def _labelled(table, ins, q, x):
    return {i: canonical_pattern(m, q, x, i in ins) for i, m in table.items()}


def _paper_rows(bundle, result, table, ins):
    """Solutions rewritten in the reference label order; every pattern
    outside the table must be unused."""
    q, x = bundle.sets.q, bundle.sets.x
    lab = _labelled(table, ins, q, x)
    idx = {i: bundle.patterns.index(p) for i, p in lab.items()}
    rows = set()
    for s in result.solutions:
        assert sum(s.z) == sum(s.z[j] for j in idx.values())
        rows.add(tuple(s.z[idx[i]] for i in sorted(table)))
    return rows


# -- 1 ------------------------------------------------------------------------


def test_criterion_1_modular_gate():
    t0 = time.time()
    with criterion(1, "modular gate for q=3,4,5,7,8"):
        for q, rejected in ((3, {3, 4}), (4, {3, 4, 8}), (5, {3, 7, 11})):
            assert {x for x in range(3, (q * q + 1) // 2 + 1) if not modular_solutions(q, x)} == rejected
        assert admissible_parameters(7, 8, 25) == [8, 9, 10, 13, 16, 17, 18, 21, 24, 25]
        assert admissible_parameters(8, 9, 32) == [9, 10, 11, 13, 16, 18, 19, 20, 22, 25, 27, 28, 29, 31]
        assert time.time() - t0 < 1


# -- 2 ------------------------------------------------------------------------

COUNTS = [((3, 5), (2, 2)), ((4, 7), (7, 4)), ((5, 10), (10, 6)), ((5, 12), (8, 8))]


@pytest.mark.parametrize("case,want", COUNTS)
def test_criterion_2_pattern_counts(case, want):
    q, x = case
    with criterion(2, f"{case} -> {want[0]}/{want[1]}"):
        t0 = time.time()
        (n,) = base_solutions(q, x)
        in_l, out_l = pattern_lists(q, x, n)
        assert (len(in_l), len(out_l)) == want
        assert time.time() - t0 < 10


def test_criterion_2_pattern_counts_x13_both_groups():
    with criterion(2, "(5,13) both groups -> 10/10"):
        assert base_solutions(5, 13) == [0, 3]
        for n in (0, 3):
            in_l, out_l = pattern_lists(5, 13, n)
            assert (len(in_l), len(out_l)) == (10, 10)


def test_criterion_2_reference_matrices():
    with criterion(2, "q=3 matrices equal the reference T1-T4; q=5 reference tables equal the patterns in use"):
        in_l, out_l = pattern_lists(3, 5, 2)
        assert set(in_l + out_l) == set(_labelled(T.Q3_X5, T.Q3_X5_IN, 3, 5).values())
        for (x, n), table, ins in (((12, 0), T.X12, T.X12_IN), ((13, 0), T.X13_G1, T.X13_G1_IN),
                                   ((13, 3), T.X13_G2, T.X13_G2_IN)):
            b, res = _solve(5, x, n)
            used = {p for s in res.solutions for p, z in zip(b.patterns, s.z) if z > 0}
            ref = set(_labelled(table, ins, 5, x).values())
            assert ref <= set(b.patterns)
            assert used == ref


@pytest.mark.xfail(strict=True, reason="the stated pattern identities admit patterns here; see notes ledger")
def test_criterion_2_literal_zero_counts():
    """(5,4), (7,{8,9,10,13}) and (8,{9,10,13,16}) are listed with no
    patterns.  Under identities (a)-(c) alone, some out-of-class (and for
    q=7,8 also class) patterns exist; all these cases still end infeasible,
    which criterion 3 style checks below confirm."""
    found = {}
    for q, xs in ((5, (4,)), (7, (8, 9, 10, 13)), (8, (9, 10, 13, 16))):
        for x in xs:
            for n in base_solutions(q, x):
                in_l, out_l = pattern_lists(q, x, n)
                if in_l or out_l:
                    found[(q, x, n)] = (len(in_l), len(out_l))
    for key, v in found.items():
        record(2, False, f"literal zero count {key[:2]} (n={key[2]}): found {v[0]}/{v[1]}")
    assert not found


@pytest.mark.parametrize("q,x", [(5, 4), (7, 8), (7, 9), (7, 10), (7, 13), (8, 9), (8, 10), (8, 13), (8, 16)])
def test_criterion_2_no_pattern_cases_have_no_class(q, x):
    with criterion(2, f"({q},{x}) admits no class (verdict no-patterns or infeasible)"):
        rep = run_pipeline(q, x)
        assert rep.verdict in ("no-patterns", "infeasible")


# -- 3 ------------------------------------------------------------------------

INFEASIBLE = [(4, 5), (4, 6), (5, 5), (5, 6), (5, 8), (5, 9), (7, 16), (7, 17), (8, 11), (8, 18), (8, 19)]


@pytest.mark.parametrize("q,x", INFEASIBLE)
def test_criterion_3_infeasible(q, x):
    with criterion(3, f"({q},{x}) infeasible"):
        t0 = time.time()
        rep = run_pipeline(q, x)
        assert rep.verdict == "infeasible"
        if q <= 5:
            assert time.time() - t0 < 300


def test_criterion_3_extended_q8_x20():
    rep = run_pipeline(8, 20, Budget(max_seconds=EXTENDED_SECS))
    if rep.verdict == "inconclusive":
        record(3, True, f"(8,20) EXTENDED inconclusive: {rep.inconclusive}")
        assert "exhausted" in rep.inconclusive
    else:
        with criterion(3, "(8,20) EXTENDED infeasible"):
            assert rep.verdict == "infeasible"


# -- 4 ------------------------------------------------------------------------


def test_criterion_4_exact_solutions():
    t0 = time.time()
    with criterion(4, "(3,5) distribution and z"):
        b, res = _solve(3, 5, 2)
        assert [(d.n_counts, d.m_counts) for d in res.distributions] == [(T.Q3_X5_N, T.Q3_X5_M)]
        assert _paper_rows(b, res, T.Q3_X5, T.Q3_X5_IN) == {(20, 45, 20, 45)}
    for q, x, n in ((4, 7, 1), (5, 10, 1)):
        with criterion(4, f"({q},{x}) unique distribution and z"):
            b, res = _solve(q, x, n)
            assert len(res.distributions) == 1 and len(res.solutions) == 1
    with criterion(4, "(5,12) distribution and z"):
        b, res = _solve(5, 12, 0)
        assert [(d.n_counts, d.m_counts) for d in res.distributions] == [T.X12_DISTRIBUTION]
        assert _paper_rows(b, res, T.X12, T.X12_IN) == {T.X12_Z}
    with criterion(4, "(5,13) group 1 three rows"):
        b, res = _solve(5, 13, 0)
        assert {(d.n_counts, d.m_counts) for d in res.distributions} == set(T.X13_G1_DISTRIBUTIONS)
        assert _paper_rows(b, res, T.X13_G1, T.X13_G1_IN) == set(T.X13_G1_Z)
    with criterion(4, "(5,13) group 2 two rows; total time < 10 min"):
        b, res = _solve(5, 13, 3)
        assert {(d.n_counts, d.m_counts) for d in res.distributions} == set(T.X13_G2_DISTRIBUTIONS)
        assert _paper_rows(b, res, T.X13_G2, T.X13_G2_IN) == set(T.X13_G2_Z)
        assert time.time() - t0 < 600


# -- 5 ------------------------------------------------------------------------


@pytest.mark.parametrize("variant", [1, 2])
def test_criterion_5_bset_search(variant):
    with criterion(5, f"12-sets for solution #{variant} constraints: none"):
        t0 = time.time()
        c = bset_constraint(variant)
        assert c.size == 12
        assert search_quotient_bsets(c) == []
        assert time.time() - t0 < 1800


# -- 6 ------------------------------------------------------------------------


@pytest.fixture(scope="module")
def x12_result():
    t0 = time.time()
    res = run_x12_search()
    return res, time.time() - t0


def test_criterion_6_x12_reconstruction(x12_result):
    res, secs = x12_result
    s = res.stages["summary"]
    with criterion(6, f"stages {s['plane1']}/{s['plane2']}/{s['plane3_weight6']}/{s['plane3_weight24']}, "
                      f"{len(res.classes)} class, {secs:.0f}s"):
        assert res.inconclusive is None
        assert (s["plane1"], s["plane2"], s["plane3_weight6"], s["plane3_weight24"]) == (1, 4, 1200, 400)
        assert len(res.classes) == 1
        L = res.classes[0]
        assert verify_cl(L) == 12
        prof = weight_profile(L)
        want = dict(zip((0, 6, 12, 18, 24, 30), T.X12_DISTRIBUTION[0]))
        want = {k: v for k, v in want.items() if v}
        assert prof.points == want and prof.planes == want
        assert secs < 1800


# -- 7 ------------------------------------------------------------------------


def test_criterion_7_r_plus():
    with criterion(7, "R+ verifies at 13 and has census of solution #3"):
        Rp = add_empty_plane(load_catalog("R"))
        assert verify_cl(Rp) == 13
        b = build_system(5, 13, 0)
        z = census(Rp, 13, b.in_l, b.not_in_l)
        lab = _labelled(T.X13_G1, T.X13_G1_IN, 5, 13)
        got = tuple(z[b.patterns.index(lab[i])] for i in sorted(T.X13_G1))
        assert sum(got) == sum(z)
        assert got == T.X13_G1_Z[2]
        assert got[7] == 31 and got[8] == 31


# -- 8 ------------------------------------------------------------------------


def test_criterion_8_extended_q7_x18():
    rep = run_pipeline(7, 18, Budget(max_seconds=EXTENDED_SECS))
    if rep.verdict == "inconclusive":
        record(8, True, f"(7,18) EXTENDED inconclusive: {rep.inconclusive}")
        assert "exhausted" in rep.inconclusive
    else:
        with criterion(8, "(7,18) EXTENDED has exactly 5 solutions"):
            assert rep.solution_count == 5


# -- 9 ------------------------------------------------------------------------


def test_criterion_9_pattern_axioms():
    with criterion(9, "identities (a)-(c) on every generated pattern, q<=5"):
        for q in (3, 4, 5):
            for x in admissible_parameters(q):
                for n in modular_solutions(q, x):
                    for p in sum(pattern_lists(q, x, n), ()):
                        assert check_axioms(p.matrix, q, x, p.member) == []


def test_criterion_9_bruteforce_oracle():
    with criterion(9, "pattern generator equals brute force at q=3"):
        for x in admissible_parameters(3):
            for n in modular_solutions(3, x):
                s = weight_sets(3, x, n)
                for member in (True, False):
                    assert set(generate_patterns(3, x, member, s)) == all_matrices_bruteforce(3, x, member, s)


def test_criterion_9_catalog_properties():
    rng = np.random.default_rng(2024)
    for name, (q, x, _) in sorted(CATALOG.items()):
        L = load_catalog(name)
        g = L.g
        with criterion(9, f"{name}: completion round-trip at 10 lines"):
            for l in rng.choice(g.num_lines, 10, replace=False):
                inc = np.nonzero(L.members & g.meets[l])[0]
                assert complete_from_incident_set(g, x, int(l), bool(L.members[l]), inc) == L
        with criterion(9, f"{name}: complement/dual involutions and parameters"):
            assert complement(complement(L)) == L and dualize(dualize(L)) == L
            assert verify_cl(complement(L)) == q * q + 1 - x
            assert verify_cl(dualize(L)) == x
        with criterion(9, f"{name}: census satisfies weight identities and the full system"):
            ident = counting_identities(q, x)
            matched = 0
            for n in base_solutions(q, x):
                b = build_system(q, x, n)
                nc, mc = weight_counts(L, b.sets.N, b.sets.M)
                if sum(nc) != ident.total or sum(mc) != ident.total:
                    continue
                matched += 1
                for counts, ws in ((nc, b.sets.N), (mc, b.sets.M)):
                    assert sum(u * v for u, v in zip(ws, counts)) == ident.flag_total
                    assert sum(u * (u - 1) * v for u, v in zip(ws, counts)) == ident.pair_total
                assert check_census(b, census(L, x, b.in_l, b.not_in_l), nc, mc) == []
            assert matched == 1


def test_criterion_9_solver_vs_bruteforce():
    rng = np.random.default_rng(9)
    with criterion(9, "integer solver equals boxed brute force on 200 random systems"):
        for _ in range(200):
            nv = int(rng.integers(1, 5))
            nr = int(rng.integers(1, 4))
            mat = rng.integers(-3, 4, size=(nr, nv)).tolist()
            upper = rng.integers(0, 5, size=nv).tolist()
            y = [int(rng.integers(0, u + 1)) for u in upper]
            rhs = [sum(a * b for a, b in zip(r, y)) + int(rng.integers(-1, 2)) for r in mat]
            want = sorted(
                t for t in itertools.product(*(range(u + 1) for u in upper))
                if all(sum(a * b for a, b in zip(r, t)) == v for r, v in zip(mat, rhs)))
            assert solve_bounded(mat, rhs, upper) == want


# -- 10 -----------------------------------------------------------------------


def test_criterion_10_ab_sets():
    with criterion(10, "(3,9): (a,b)=(2,5) at eps=-1, parameters {32,41}, complement symmetry"):
        t0 = time.time()
        lo = [ab_set_parameters(3, 9, -1, d) for d in (-1, 1)]
        assert {(p.a, p.b) for p in lo} == {(2, 5)}
        assert {p.cl_parameter for p in lo} == {32, 41}
        for e in (-1, 1):
            for d in (-1, 1):
                a, b = ab_set_parameters(3, 9, e, d), ab_set_parameters(3, 9, -e, -d)
                assert a.size + b.size == a.total
        assert time.time() - t0 < 1


# -- 11 -----------------------------------------------------------------------


def test_criterion_11_discrepancy_note():
    with criterion(11, "(5,10) report has rank 16, its own zero count and a note on 62-16=48"):
        rep = run_pipeline(5, 10)
        (grp,) = rep.groups
        assert grp.rank == 16
        assert grp.zero_constraints == 46
        assert any("62-16=48" in n and "inconsistent" in n for n in rep.notes)
        assert rep.to_json()["groups"][0]["zero_constraints"] == 46
