"""Global counting identities and the linear system over pattern counts.

Unknowns: z_i, the number of lines carrying pattern i (class lines for the
in-class list, the rest for the other).  Right-hand sides are polynomials in
the weight counts n_u (points of weight u) and m_w (planes of weight w),
named ``n<u>`` and ``m<w>``.

Row tags are descriptive:

    total-in / total-out      pattern counts add up to |L| and its complement
    plane-incidence w / point-incidence u     line-plane (line-point) flags
    plane-class-lines w / point-class-lines u restricted to class lines
    plane-pairs w / point-pairs u             ordered pairs of equal weight
    plane-pairs w,w' / point-pairs u,u'       pairs of different weights
    pencil w,u                                in/out split of pencils
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .exact import SymPoly, SymSystem
from .patterns import Pattern, SumProfile, WeightSets, pattern_lists, sum_profile, weight_sets


class SystemError_(ValueError):
    pass


@dataclass(frozen=True)
class CountingIdentities:
    q: int
    x: int
    total: int
    flag_total: int
    pair_total: int

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.total, self.flag_total, self.pair_total)


def counting_identities(q: int, x: int) -> CountingIdentities:
    """Right-hand sides of sum n_u, sum u n_u, sum u(u-1) n_u (and the m_w twins)."""
    lines_per = q * q + q + 1
    return CountingIdentities(
        q, x,
        q**3 + q**2 + q + 1,
        x * lines_per * (q + 1),
        x * lines_per * ((q + 1) * x + q * q - 1),
    )


def n_name(u: int) -> str:
    return f"n{u}"


def m_name(w: int) -> str:
    return f"m{w}"


@dataclass(frozen=True)
class SystemBundle:
    sets: WeightSets
    in_l: tuple[Pattern, ...]
    not_in_l: tuple[Pattern, ...]
    profiles: tuple[SumProfile, ...]
    system: SymSystem

    @property
    def patterns(self) -> tuple[Pattern, ...]:
        return self.in_l + self.not_in_l

    @property
    def k1(self) -> int:
        return len(self.in_l)

    @property
    def n_vars(self) -> int:
        return len(self.in_l) + len(self.not_in_l)

    def manifest(self) -> list[dict]:
        return [p.to_json(i + 1) for i, p in enumerate(self.patterns)]


def build_system(q: int, x: int, n: int, in_l=None, not_in_l=None) -> SystemBundle:
    sets = weight_sets(q, x, n)
    if in_l is None or not_in_l is None:
        in_l, not_in_l = pattern_lists(q, x, n)
    in_l, not_in_l = tuple(in_l), tuple(not_in_l)
    pats = in_l + not_in_l
    k1 = len(in_l)
    nz = len(pats)
    profiles = tuple(sum_profile(p, sets) for p in pats)
    ones_in = [1 if i < k1 else 0 for i in range(nz)]
    lines_per = q * q + q + 1

    rows: list[tuple[list, SymPoly]] = []
    tags: list[str] = []

    def emit(coeffs, rhs: SymPoly, tag: str):
        if any(coeffs) or rhs:
            rows.append((coeffs, rhs))
            tags.append(tag)

    emit(ones_in, SymPoly.const(x * lines_per), "total-in")
    emit([1 - v for v in ones_in], SymPoly.const((q * q + 1 - x) * lines_per), "total-out")

    for side, weights, get, name in (
        ("plane", sets.M, lambda pr: pr.c, m_name),
        ("point", sets.N, lambda pr: pr.r, n_name),
    ):
        for w in weights:
            cnt = [get(pr)[w] for pr in profiles]
            emit(cnt, SymPoly.var(name(w), lines_per), f"{side}-incidence {w}")
            emit([c * s for c, s in zip(cnt, ones_in)], SymPoly.var(name(w), w),
                 f"{side}-class-lines {w}")
            emit([c * (c - 1) for c in cnt],
                 SymPoly.product(name(w), name(w)) - SymPoly.var(name(w)),
                 f"{side}-pairs {w}")
        for w, w2 in combinations(weights, 2):
            emit([get(pr)[w] * get(pr)[w2] for pr in profiles],
                 SymPoly.product(name(w), name(w2)), f"{side}-pairs {w},{w2}")

    d = q + 1
    for w in sets.M:
        for u in sets.N:
            num = w + u - x
            if num % d:
                raise SystemError_(f"w={w}, u={u}: w+u-x not divisible by q+1")
            k = num // d
            left, right = d - k, k
            coeffs = []
            for i, pr in enumerate(profiles):
                cr = pr.c[w] * pr.r[u]
                coeffs.append(left * cr if i < k1 else -right * cr)
            emit(coeffs, SymPoly(), f"pencil {w},{u}")

    names = [f"z{i + 1}" for i in range(nz)]
    system = SymSystem.build(names, rows, tags)
    return SystemBundle(sets, in_l, not_in_l, profiles, system)


def weight_assignment(sets: WeightSets, n_counts, m_counts) -> dict[str, int]:
    """Map weight-count vectors (ordered like sets.N, sets.M) to indeterminates."""
    out = {n_name(u): int(v) for u, v in zip(sets.N, n_counts)}
    out.update({m_name(w): int(v) for w, v in zip(sets.M, m_counts)})
    return out


def check_census(bundle: SystemBundle, z, n_counts, m_counts) -> list[str]:
    """Tags of rows not satisfied by a concrete census (empty when consistent)."""
    from .exact import evaluate

    env = weight_assignment(bundle.sets, n_counts, m_counts)
    bad = []
    for (coeffs, rhs), tag in zip(bundle.system.rows, bundle.system.tags):
        lhs = sum(Fraction(c) * v for c, v in zip(coeffs, z))
        if lhs != evaluate(rhs, env):
            bad.append(tag)
    return bad
