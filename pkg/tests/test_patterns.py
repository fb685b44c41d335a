from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pgcl.patterns import (
    PatternError, admissible_parameters, all_matrices_bruteforce, base_solutions, canonical_pattern,
    check_axioms, generate_patterns, modular_solutions, pattern_lists, weight_sets,
)

import paper_tables as T

CASES = [(q, x, n) for q in (3, 4, 5) for x in admissible_parameters(q) for n in base_solutions(q, x)]


def test_modular_equality():
    # C(x,2) + n(n-x) = 0 mod q+1
    assert modular_solutions(3, 5) == [2, 3]
    assert modular_solutions(5, 13) == [0, 1, 3, 4]
    assert base_solutions(5, 13) == [0, 3]
    assert modular_solutions(5, 3) == []
    with pytest.raises(PatternError):
        modular_solutions(3, 11)
    with pytest.raises(PatternError):
        weight_sets(3, 5, 0)


def test_weight_sets_are_residue_classes():
    s = weight_sets(5, 13, 3)
    assert s.N == (3, 9, 15, 21, 27) and s.M == (4, 10, 16, 22, 28)
    s = weight_sets(5, 12, 0)
    assert s.N == s.M == (0, 6, 12, 18, 24, 30)


@pytest.mark.parametrize("q,x,n", CASES)
def test_generated_patterns_satisfy_axioms(q, x, n):
    sets = weight_sets(q, x, n)
    in_l, out_l = pattern_lists(q, x, n)
    for p in in_l + out_l:
        assert check_axioms(p.matrix, q, x, p.member) == []
        chi = p.chi
        assert all(r + chi in sets.N for r in p.rows)
        assert all(c + chi in sets.M for c in p.cols)
        assert list(p.rows) == sorted(p.rows) and list(p.cols) == sorted(p.cols)
        assert canonical_pattern(p.matrix, q, x, p.member) == p
    assert all(p.member for p in in_l) and not any(p.member for p in out_l)


@pytest.mark.parametrize("x", admissible_parameters(3))
def test_bruteforce_oracle_q3(x):
    for n in modular_solutions(3, x):
        sets = weight_sets(3, x, n)
        for member in (True, False):
            assert set(generate_patterns(3, x, member, sets)) == all_matrices_bruteforce(3, x, member, sets)


def test_q3_x5_matches_reference_matrices():
    in_l, out_l = pattern_lists(3, 5, 2)
    ref = {canonical_pattern(m, 3, 5, i in T.Q3_X5_IN) for i, m in T.Q3_X5.items()}
    assert set(in_l + out_l) == ref


@given(st.sampled_from(CASES), st.data())
@settings(max_examples=60, deadline=None)
def test_canonical_form_ignores_row_and_column_order(case, data):
    q, x, n = case
    pats = sum(pattern_lists(q, x, n), ())
    if not pats:
        return
    p = data.draw(st.sampled_from(pats))
    rp = data.draw(st.permutations(range(q + 1)))
    cp = data.draw(st.permutations(range(q + 1)))
    m = [[p.matrix[i][j] for j in cp] for i in rp]
    assert canonical_pattern(m, q, x, p.member) == p


@given(st.lists(st.integers(0, 3), min_size=16, max_size=16), st.booleans())
@settings(max_examples=200)
def test_random_matrices_are_rarely_admissible(entries, member):
    m = [entries[i:i + 4] for i in range(0, 16, 4)]
    fails = check_axioms(m, 3, 5, member)
    if not fails:
        # any admissible matrix is one of the four reference patterns
        ref = {canonical_pattern(t, 3, 5, i in T.Q3_X5_IN) for i, t in T.Q3_X5.items()}
        assert canonical_pattern(m, 3, 5, member) in ref


def test_closed_form():
    for p in sum(pattern_lists(5, 13, 0), ()):
        k = p.x + p.chi * (p.q - 1)
        for i, j in itertools.product(range(6), repeat=2):
            assert p.matrix[i][j] * 6 == p.rows[i] + p.cols[j] - k


def test_check_axioms_names_failures():
    assert check_axioms([[0, 0], [0, 0]], 3, 5, True) == ["shape"]
    bad = [list(r) for r in T.Q3_X5[1]]
    bad[0][0] = 1
    assert "additive" in check_axioms(bad, 3, 5, True)
