"""Modular equality, admissible weights and admissible line patterns.

A pattern is the (q+1)x(q+1) matrix of a line l: entry (i, j) counts class
lines other than l in the pencil of the i-th point of l inside the j-th plane
on l.  Rows belong to points and columns to planes throughout.

The additive identity t_kl + t_rs = t_ks + t_rl forces t_kl = a_k + b_l, and
the row/column identity then gives the closed form

    t_kl = (R_k + C_l - x - chi*(q - 1)) / (q + 1)

with R_k, C_l the row and column sums.  So a pattern is a function of its two
sum multisets, and sorting both gives a complete invariant under row and
column permutations.
"""

from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb


class PatternError(ValueError):
    pass


def modular_solutions(q: int, x: int) -> list[int]:
    """All n in 0..q with C(x,2) + n(n - x) = 0 mod q+1."""
    if not 0 <= x <= q * q + 1:
        raise PatternError(f"x={x} out of range for q={q}")
    return [n for n in range(q + 1) if (comb(x, 2) + n * (n - x)) % (q + 1) == 0]


def base_solutions(q: int, x: int) -> list[int]:
    """One residue per dual pair {n, x - n mod q+1}; the smaller one."""
    sols = modular_solutions(q, x)
    reps = set()
    for n in sols:
        reps.add(min(n, (x - n) % (q + 1)))
    return sorted(reps)


def admissible_parameters(q: int, lo: int | None = None, hi: int | None = None) -> list[int]:
    lo = 0 if lo is None else lo
    hi = (q * q + 1) // 2 if hi is None else hi
    return [x for x in range(lo, hi + 1) if modular_solutions(q, x)]


@dataclass(frozen=True)
class WeightSets:
    q: int
    x: int
    n: int
    N: tuple[int, ...]
    M: tuple[int, ...]

    @property
    def label(self) -> str:
        return f"N={list(self.N)} M={list(self.M)}"

    def to_json(self) -> dict:
        return {"q": self.q, "x": self.x, "n": self.n, "N": list(self.N), "M": list(self.M)}


def weight_sets(q: int, x: int, n: int) -> WeightSets:
    if n not in modular_solutions(q, x):
        raise PatternError(f"n={n} does not solve the modular equality for q={q}, x={x}")
    top = q * q + q + 1
    N = tuple(w for w in range(top + 1) if w % (q + 1) == n % (q + 1))
    M = tuple(w for w in range(top + 1) if w % (q + 1) == (x - n) % (q + 1))
    return WeightSets(q, x, n, N, M)


@dataclass(frozen=True)
class Pattern:
    """Canonical pattern: sorted row sums and sorted column sums."""

    q: int
    x: int
    member: bool
    rows: tuple[int, ...]
    cols: tuple[int, ...]

    @property
    def chi(self) -> int:
        return int(self.member)

    @cached_property
    def matrix(self) -> tuple[tuple[int, ...], ...]:
        k = self.x + self.chi * (self.q - 1)
        d = self.q + 1
        return tuple(tuple((r + c - k) // d for c in self.cols) for r in self.rows)

    @property
    def key(self):
        return (not self.member, self.rows, self.cols)

    def transpose(self) -> "Pattern":
        return Pattern(self.q, self.x, self.member, self.cols, self.rows)

    def pretty(self) -> str:
        return "\n".join(" ".join(str(v) for v in row) for row in self.matrix)

    def to_json(self, pid: int | None = None) -> dict:
        out = {"member": self.member, "matrix": [list(r) for r in self.matrix]}
        if pid is not None:
            out["id"] = pid
        return out


def canonical_pattern(matrix, q: int, x: int, member: bool) -> Pattern:
    """Canonical form of an arbitrary admissible-shaped matrix.

    Raises if the matrix is not of the closed form (which every matrix
    satisfying the additive and row/column identities is).
    """
    rows = tuple(sorted(sum(r) for r in matrix))
    cols = tuple(sorted(sum(c) for c in zip(*matrix)))
    pat = Pattern(q, x, member, rows, cols)
    want = Counter(tuple(sorted(r)) for r in pat.matrix)
    got = Counter(tuple(sorted(r)) for r in matrix)
    if want != got:
        raise PatternError("matrix is not determined by its sums")
    return pat


def check_axioms(t, q: int, x: int, member: bool) -> list[str]:
    """Names of the failing pattern identities (empty list when admissible)."""
    chi = int(member)
    size = q + 1
    failures = []
    if len(t) != size or any(len(r) != size for r in t):
        return ["shape"]
    if any(v < 0 or v > q for r in t for v in r):
        failures.append("range")
    rs = [sum(r) for r in t]
    cs = [sum(t[i][j] for i in range(size)) for j in range(size)]
    for k in range(size):
        for l in range(size):
            rhs = x + (q + 1) * t[k][l] if not chi else x + (q + 1) * (t[k][l] + 1) - 2
            if cs[l] + rs[k] != rhs:
                failures.append("sums")
                break
        else:
            continue
        break
    ok_add = all(
        t[k][l] + t[r][s] == t[k][s] + t[r][l]
        for k in range(size) for l in range(size) for r in range(size) for s in range(size)
    )
    if not ok_add:
        failures.append("additive")
    sq = sum(v * v for r in t for v in r)
    want = x * (q + x) if not chi else q**3 + q**2 + (x - 1) ** 2 + q * (x - 1)
    if sq != want:
        failures.append("squares")
    return failures


def _square_target(q: int, x: int, chi: int) -> int:
    return x * (q + x) if not chi else q**3 + q**2 + (x - 1) ** 2 + q * (x - 1)


def _sum_multisets(values: list[int], size: int, total: int):
    """Non-decreasing tuples of `size` items from `values` summing to `total`."""
    values = sorted(values)
    out = []

    def rec(start, left, remaining, acc):
        if left == 0:
            if remaining == 0:
                out.append(tuple(acc))
            return
        for i in range(start, len(values)):
            v = values[i]
            if v * left > remaining:
                break
            if values[-1] * left < remaining:
                return
            acc.append(v)
            rec(i, left - 1, remaining - v, acc)
            acc.pop()

    rec(0, size, total, [])
    return out


def generate_patterns(q: int, x: int, member: bool, sets: WeightSets) -> list[Pattern]:
    """All admissible patterns for lines in (member=True) or outside the class."""
    chi = int(member)
    d = q + 1
    k = x + chi * (q - 1)
    total = d * k
    row_vals = [u - chi for u in sets.N if 0 <= u - chi <= q * d]
    col_vals = [w - chi for w in sets.M if 0 <= w - chi <= q * d]
    rows_list = _sum_multisets(row_vals, d, total)
    cols_list = _sum_multisets(col_vals, d, total)
    # sum of squares of entries depends only on sum(R^2) + sum(C^2)
    target = _square_target(q, x, chi) * d * d
    const = d * d * k * k + 2 * total * total - 2 * k * d * (2 * total)
    need = target - const
    if need % d:
        return []
    need //= d
    by_sq = defaultdict(list)
    for cols in cols_list:
        by_sq[sum(c * c for c in cols)].append(cols)
    found = []
    for rows in rows_list:
        rsq = sum(r * r for r in rows)
        for cols in by_sq.get(need - rsq, ()):
            lo = rows[0] + cols[0] - k
            hi = rows[-1] + cols[-1] - k
            if lo < 0 or hi > q * d:
                continue
            pat = Pattern(q, x, member, rows, cols)
            if not check_axioms(pat.matrix, q, x, member):
                found.append(pat)
    found.sort(key=lambda p: p.key)
    return found


@lru_cache(maxsize=None)
def pattern_lists(q: int, x: int, n: int) -> tuple[tuple[Pattern, ...], tuple[Pattern, ...]]:
    sets = weight_sets(q, x, n)
    return tuple(generate_patterns(q, x, True, sets)), tuple(generate_patterns(q, x, False, sets))


@dataclass(frozen=True)
class SumProfile:
    """Column counts c[w] (planes of weight w) and row counts r[u] (points)."""

    c: dict
    r: dict


def sum_profile(p: Pattern, sets: WeightSets) -> SumProfile:
    chi = p.chi
    c = {w: 0 for w in sets.M}
    r = {u: 0 for u in sets.N}
    for s in p.cols:
        if s + chi not in c:
            raise PatternError(f"column sum {s} is not an admissible plane weight")
        c[s + chi] += 1
    for s in p.rows:
        if s + chi not in r:
            raise PatternError(f"row sum {s} is not an admissible point weight")
        r[s + chi] += 1
    return SumProfile(c, r)


def pattern_from_rows(matrix, q: int, x: int, member: bool) -> Pattern:
    return canonical_pattern([list(r) for r in matrix], q, x, member)


def patterns_to_json(in_l, not_in_l) -> str:
    items = [p.to_json(i + 1) for i, p in enumerate(list(in_l) + list(not_in_l))]
    return json.dumps(items)


def all_matrices_bruteforce(q: int, x: int, member: bool, sets: WeightSets) -> set[Pattern]:
    """Exhaustive oracle: every (q+1)^2 matrix over 0..q, filtered by the
    identities and sum constraints, reduced to canonical form.  Only sane for q <= 3.

    Rows are built one at a time; the additive identity means every row is
    the first row shifted by a constant, which keeps the search to
    (q+1)^(q+1) * (2q+1)^q candidates.
    """
    chi = int(member)
    d = q + 1
    row_ok = {u - chi for u in sets.N}
    col_ok = {w - chi for w in sets.M}
    seen = set()
    for first in itertools.product(range(q + 1), repeat=d):
        for shifts in itertools.product(range(-q, q + 1), repeat=q):
            t = [list(first)] + [[v + s for v in first] for s in shifts]
            if any(v < 0 or v > q for r in t for v in r):
                continue
            if any(sum(r) not in row_ok for r in t):
                continue
            if any(sum(c) not in col_ok for c in zip(*t)):
                continue
            if check_axioms(t, q, x, member):
                continue
            seen.add(canonical_pattern(t, q, x, member))
    return seen
