"""Non-negative integer solutions of linear systems with interval propagation.

One engine serves both phases: enumerating weight distributions (unknowns
n_u, m_w under the counting identities and linear zero-constraints, filtered
by the quadratic ones) and solving for the pattern counts z_i once a
distribution is fixed.

The system is brought to reduced echelon form over the integers, so every
pivot variable appears in exactly one row.  Search branches on free variables
(smallest domain first, ties by index); bounds propagation over all rows to
a fixpoint does the pruning, and integrality falls out of the ceil/floor
rounding.  Budget exhaustion yields :class:`Inconclusive`, never a truncated
list.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .countsys import CountingIdentities, SystemBundle, m_name, n_name, weight_assignment
from .exact import SymPoly, SymSystem, evaluate, integer_rref, rref_symbolic
from .patterns import WeightSets


@dataclass
class Budget:
    """Search limits shared by every solver call made under one budget."""

    max_nodes: int = 10**8
    max_seconds: float | None = None
    nodes: int = field(default=0, compare=False)
    started: float | None = field(default=None, compare=False)

    def start(self) -> None:
        if self.started is None:
            self.started = time.monotonic()

    @property
    def elapsed(self) -> float:
        return 0.0 if self.started is None else time.monotonic() - self.started


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    nodes: int
    seconds: float
    found: int = 0

    def report(self) -> str:
        return (f"inconclusive: {self.reason} after {self.nodes} nodes, "
                f"{self.seconds:.1f}s ({self.found} solutions found so far)")


class _Exhausted(Exception):
    pass


# a check sees the variables it names once all are fixed
Check = tuple[tuple[int, ...], Callable[[tuple[int, ...]], bool]]


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class _Search:
    def __init__(self, rows, free, nvars, upper, checks, budget):
        self.rows = rows  # list of (idx tuple, coef tuple, rhs)
        self.free = free
        self.nvars = nvars
        self.upper = upper
        self.checks = checks
        self.budget = budget
        self.nodes = 0
        budget.start()
        self.out: list[tuple[int, ...]] = []
        self.var_rows = [[] for _ in range(nvars)]
        for r, (idx, _, _) in enumerate(rows):
            for j in idx:
                self.var_rows[j].append(r)
        self.var_checks = [[] for _ in range(nvars)]
        for c, (vs, _) in enumerate(checks):
            for j in vs:
                self.var_checks[j].append(c)

    def _tick(self):
        self.nodes += 1
        b = self.budget
        b.nodes += 1
        if b.nodes > b.max_nodes:
            raise _Exhausted("node budget exhausted")
        if b.max_seconds is not None and b.nodes % 256 == 0:
            if b.elapsed > b.max_seconds:
                raise _Exhausted("time budget exhausted")

    def propagate(self, lo, hi, dirty) -> bool:
        rows = self.rows
        queue = list(dirty)
        inq = set(queue)
        while queue:
            r = queue.pop()
            inq.discard(r)
            idx, coef, rhs = rows[r]
            mn = mx = 0
            for j, a in zip(idx, coef):
                if a > 0:
                    mn += a * lo[j]
                    mx += a * hi[j]
                else:
                    mn += a * hi[j]
                    mx += a * lo[j]
            if mn > rhs or mx < rhs:
                return False
            for j, a in zip(idx, coef):
                if lo[j] == hi[j]:
                    continue
                if a > 0:
                    rest_mn = mn - a * lo[j]
                    rest_mx = mx - a * hi[j]
                    nlo = _ceil_div(rhs - rest_mx, a)
                    nhi = _floor_div(rhs - rest_mn, a)
                else:
                    rest_mn = mn - a * hi[j]
                    rest_mx = mx - a * lo[j]
                    nlo = _ceil_div(rest_mn - rhs, -a)
                    nhi = _floor_div(rest_mx - rhs, -a)
                if nlo > lo[j] or nhi < hi[j]:
                    nlo = max(nlo, lo[j])
                    nhi = min(nhi, hi[j])
                    if nlo > nhi:
                        return False
                    if a > 0:
                        mn += a * (nlo - lo[j])
                        mx += a * (nhi - hi[j])
                    else:
                        mn += a * (nhi - hi[j])
                        mx += a * (nlo - lo[j])
                    lo[j], hi[j] = nlo, nhi
                    # includes r itself: other entries of r may tighten further
                    for r2 in self.var_rows[j]:
                        if r2 not in inq:
                            queue.append(r2)
                            inq.add(r2)
            # a fully fixed row must hold exactly
            if mn == mx and mn != rhs:
                return False
        return True

    def checks_ok(self, lo, hi, touched) -> bool:
        seen = set()
        for j in touched:
            for c in self.var_checks[j]:
                if c in seen:
                    continue
                seen.add(c)
                vs, fn = self.checks[c]
                if all(lo[v] == hi[v] for v in vs) and not fn(tuple(lo[v] for v in vs)):
                    return False
        return True

    def run(self):
        lo = [0] * self.nvars
        hi = list(self.upper)
        if not self.propagate(lo, hi, range(len(self.rows))):
            return
        if not self.checks_ok(lo, hi, [j for j in range(self.nvars) if lo[j] == hi[j]]):
            return
        self.dfs(lo, hi)

    def dfs(self, lo, hi):
        self._tick()
        best = None
        for j in self.free:
            if lo[j] != hi[j]:
                size = hi[j] - lo[j]
                if best is None or size < best[0]:
                    best = (size, j)
        if best is None:
            # propagation normally pins the pivots once the free variables are fixed
            open_ = [j for j in range(self.nvars) if lo[j] != hi[j]]
            if not open_:
                self.out.append(tuple(lo))
                return
            best = (0, open_[0])
        j = best[1]
        for v in range(lo[j], hi[j] + 1):
            nlo, nhi = list(lo), list(hi)
            nlo[j] = nhi[j] = v
            if not self.propagate(nlo, nhi, self.var_rows[j]):
                continue
            fixed = [k for k in range(self.nvars) if nlo[k] == nhi[k] and lo[k] != hi[k]]
            if not self.checks_ok(nlo, nhi, fixed):
                continue
            self.dfs(nlo, nhi)


def solve_bounded(
    matrix: Sequence[Sequence],
    rhs: Sequence,
    upper: Sequence[int],
    budget: Budget | None = None,
    checks: Sequence[Check] = (),
) -> list[tuple[int, ...]] | Inconclusive:
    """All integer y with matrix @ y = rhs and 0 <= y <= upper, sorted."""
    budget = budget or Budget()
    budget.start()
    if budget.max_seconds is not None and budget.elapsed > budget.max_seconds:
        return Inconclusive("time budget exhausted", budget.nodes, budget.elapsed)
    nvars = len(upper)
    aug = []
    for row, b in zip(matrix, rhs):
        fr = [Fraction(v) for v in row] + [Fraction(b)]
        den = 1
        for v in fr:
            den = den * v.denominator // _gcd(den, v.denominator)
        aug.append([int(v * den) for v in fr])
    red, pivots = integer_rref(aug, nvars + 1)
    if pivots and pivots[-1] == nvars:
        return []
    return _search_echelon([(r[:nvars], r[nvars]) for r in red], pivots, upper, budget, checks)


def _search_echelon(rows, pivots, upper, budget: Budget, checks=()) -> list[tuple[int, ...]] | Inconclusive:
    """DFS over integer rows already in reduced echelon form with the given pivots."""
    nvars = len(upper)
    prepared = []
    for coeffs, b in rows:
        idx = tuple(j for j in range(nvars) if coeffs[j])
        prepared.append((idx, tuple(coeffs[j] for j in idx), b))
    piv = set(pivots)
    free = [j for j in range(nvars) if j not in piv]
    search = _Search(prepared, free, nvars, list(upper), list(checks), budget)
    try:
        search.run()
    except _Exhausted as exc:
        return Inconclusive(str(exc), budget.nodes, budget.elapsed, len(search.out))
    return sorted(search.out)


def _gcd(a: int, b: int) -> int:
    from math import gcd
    return gcd(a, b)


def solve_nonneg_integers(
    system: SymSystem, budget: Budget | None = None, upper: Sequence[int] | None = None
) -> list[tuple[int, ...]] | Inconclusive:
    """Non-negative integer solutions of a system with constant right-hand sides.

    Without explicit bounds every variable is capped by the largest constant
    right-hand side over rows with only non-negative coefficients that contain
    it (finite for the pattern systems thanks to the two total rows).
    """
    n = len(system.var_names)
    mat, rhs = [], []
    for coeffs, poly in system.rows:
        if poly.degree > 0:
            raise ValueError("right-hand sides must be constants")
        mat.append(list(coeffs))
        rhs.append(poly.terms.get((), Fraction(0)))
    if upper is None:
        upper = _implied_upper(mat, rhs, n)
    return solve_bounded(mat, rhs, upper, budget)


def _implied_upper(mat, rhs, n) -> list[int]:
    big = None
    ub: list[int | None] = [None] * n
    for row, b in zip(mat, rhs):
        if all(c >= 0 for c in row):
            for j, c in enumerate(row):
                if c > 0:
                    cap = int(Fraction(b) / c)
                    ub[j] = cap if ub[j] is None else min(ub[j], cap)
    if any(u is None for u in ub):
        big = max([abs(int(b)) for b in rhs] + [0])
        raise ValueError(f"unbounded variables; pass explicit upper bounds (max rhs {big})")
    return [max(u, 0) for u in ub]


# -- weight distributions ---------------------------------------------------


@dataclass(frozen=True)
class WeightDistribution:
    n: tuple[tuple[int, int], ...]  # (u, n_u) over sets.N
    m: tuple[tuple[int, int], ...]  # (w, m_w) over sets.M

    @property
    def n_counts(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.n)

    @property
    def m_counts(self) -> tuple[int, ...]:
        return tuple(v for _, v in self.m)

    def assignment(self) -> dict[str, int]:
        out = {n_name(u): v for u, v in self.n}
        out.update({m_name(w): v for w, v in self.m})
        return out

    def to_json(self) -> dict:
        return {"n": {str(u): v for u, v in self.n}, "m": {str(w): v for w, v in self.m}}


def _identity_rows(ident: CountingIdentities, weights, offset, nvars):
    rows = []
    for f, target in ((lambda u: 1, ident.total), (lambda u: u, ident.flag_total),
                      (lambda u: u * (u - 1), ident.pair_total)):
        row = [0] * nvars
        for k, u in enumerate(weights):
            row[offset + k] = f(u)
        rows.append((row, target))
    return rows


def enumerate_weight_distributions(
    ident: CountingIdentities,
    zero_constraints: Sequence[SymPoly],
    sets: WeightSets,
    budget: Budget | None = None,
    reduced: SymSystem | None = None,
) -> list[WeightDistribution] | Inconclusive:
    """All (n_u, m_w) satisfying the counting identities and zero-constraints.

    Linear zero-constraints join the linear system; quadratic ones are checked
    as soon as their variables are fixed.  Variables split into independent
    groups (usually points and planes) that are enumerated separately.

    With ``reduced`` given, every reduced row that pins a single z-variable
    (``z_i = p(n, m)``) adds the requirement that p is a non-negative integer.
    """
    names = [n_name(u) for u in sets.N] + [m_name(w) for w in sets.M]
    col = {v: i for i, v in enumerate(names)}
    nv = len(names)
    linear: list[tuple[list, Fraction]] = []
    linear += _identity_rows(ident, sets.N, 0, nv)
    linear += _identity_rows(ident, sets.M, len(sets.N), nv)
    quad: list[SymPoly] = []
    for poly in zero_constraints:
        unknown = poly.variables() - set(names)
        if unknown:
            raise ValueError(f"constraint mentions unknown indeterminates {sorted(unknown)}")
        if poly.degree <= 1:
            row = [Fraction(0)] * nv
            for mono, c in poly.terms.items():
                if mono:
                    row[col[mono[0]]] += c
            const = poly.terms.get((), Fraction(0))
            linear.append((row, -const))
        else:
            quad.append(poly)
    determined: list[SymPoly] = []
    if reduced is not None:
        for coeffs, rhs in reduced.rows:
            if sum(1 for c in coeffs if c) == 1 and rhs.degree > 0:
                determined.append(rhs)

    # connected components of the variable graph
    parent = list(range(nv))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union_all(vs):
        vs = list(vs)
        for a in vs[1:]:
            ra, rb = find(vs[0]), find(a)
            if ra != rb:
                parent[rb] = ra

    for row, _ in linear:
        union_all([j for j in range(nv) if row[j]])
    for poly in quad + determined:
        union_all([col[v] for v in poly.variables()])
    comps: dict[int, list[int]] = {}
    for j in range(nv):
        comps.setdefault(find(j), []).append(j)

    budget = budget or Budget()
    cap = ident.total
    parts = []
    for members in sorted(comps.values()):
        local = {g: k for k, g in enumerate(members)}
        mat, rhs = [], []
        for row, b in linear:
            if any(row[j] for j in members):
                mat.append([row[j] for j in members])
                rhs.append(b)
        checks = []
        for poly in quad:
            vs = sorted(poly.variables(), key=lambda v: col[v])
            if col[vs[0]] not in local:
                continue
            idx = tuple(local[col[v]] for v in vs)
            checks.append((idx, _poly_check(poly, vs)))
        for poly in determined:
            vs = sorted(poly.variables(), key=lambda v: col[v])
            if col[vs[0]] not in local:
                continue
            idx = tuple(local[col[v]] for v in vs)
            checks.append((idx, _nonneg_int_check(poly, vs)))
        sols = solve_bounded(mat, rhs, [cap] * len(members), budget, checks)
        if isinstance(sols, Inconclusive):
            return sols
        if not sols:
            return []
        parts.append((members, sols))

    out = []

    def combine(k, acc):
        if k == len(parts):
            if budget.max_seconds is not None and len(out) % 4096 == 0 and budget.elapsed > budget.max_seconds:
                raise _Exhausted("time budget exhausted")
            vals = [0] * nv
            for members, sol in acc:
                for g, v in zip(members, sol):
                    vals[g] = v
            nn = len(sets.N)
            out.append(WeightDistribution(
                tuple(zip(sets.N, vals[:nn])), tuple(zip(sets.M, vals[nn:]))))
            return
        members, sols = parts[k]
        for s in sols:
            combine(k + 1, acc + [(members, s)])

    try:
        combine(0, [])
    except _Exhausted as exc:
        return Inconclusive(str(exc), budget.nodes, budget.elapsed, len(out))
    out.sort(key=lambda d: (d.n_counts, d.m_counts))
    return out


def _compile(poly: SymPoly, names: list[str]):
    """Integer form of a polynomial: (terms, den) with poly = sum(c * prod vals) / den."""
    den = 1
    for c in poly.terms.values():
        den = den * c.denominator // _gcd(den, c.denominator)
    pos = {v: i for i, v in enumerate(names)}
    terms = tuple((int(c * den), tuple(pos[v] for v in mono)) for mono, c in poly.terms.items())
    return terms, den


def _int_value(terms, values) -> int:
    total = 0
    for c, idx in terms:
        for i in idx:
            c *= values[i]
        total += c
    return total


def _poly_check(poly: SymPoly, names: list[str]):
    terms, _ = _compile(poly, names)

    def fn(values):
        return _int_value(terms, values) == 0
    return fn


def _nonneg_int_check(poly: SymPoly, names: list[str]):
    terms, den = _compile(poly, names)

    def fn(values):
        v = _int_value(terms, values)
        return v >= 0 and v % den == 0
    return fn


# -- z solutions ------------------------------------------------------------


@dataclass(frozen=True)
class ZSolution:
    distribution: WeightDistribution
    z: tuple[int, ...]

    def to_json(self) -> dict:
        return {"weights": self.distribution.to_json(), "z": list(self.z)}


def z_upper_bounds(bundle: SystemBundle) -> list[int]:
    q, x = bundle.sets.q, bundle.sets.x
    lines_per = q * q + q + 1
    return [x * lines_per] * bundle.k1 + [(q * q + 1 - x) * lines_per] * len(bundle.not_in_l)


@dataclass(frozen=True)
class _CompiledReduction:
    """Integer rows of a reduced system; right-hand sides as integer polynomials."""

    names: tuple[str, ...]
    coeffs: tuple[tuple[int, ...], ...]
    rhs: tuple[tuple, ...]
    pivots: tuple[int, ...]


_COMPILED: dict[int, tuple[SymSystem, _CompiledReduction]] = {}


def _compiled(reduced: SymSystem) -> _CompiledReduction:
    hit = _COMPILED.get(id(reduced))
    if hit is not None and hit[0] is reduced:
        return hit[1]
    names = tuple(sorted({v for _, rhs in reduced.rows for v in rhs.variables()}))
    coeffs, rhs_terms, pivots = [], [], []
    for co, rhs in reduced.rows:
        den = 1
        for c in list(co) + list(rhs.terms.values()):
            den = den * c.denominator // _gcd(den, c.denominator)
        coeffs.append(tuple(int(c * den) for c in co))
        terms, _ = _compile(rhs.scale(den), list(names))
        rhs_terms.append(terms)
        pivots.append(next(j for j, c in enumerate(co) if c))
    comp = _CompiledReduction(names, tuple(coeffs), tuple(rhs_terms), tuple(pivots))
    if len(_COMPILED) > 64:
        _COMPILED.clear()
    _COMPILED[id(reduced)] = (reduced, comp)
    return comp


def solve_for_distribution(
    bundle: SystemBundle, reduced: SymSystem, dist: WeightDistribution, budget: Budget | None = None
) -> list[ZSolution] | Inconclusive:
    """Non-negative integer z for one weight distribution.  Substituting
    constants into the reduced system keeps it in echelon form, so the rows
    are searched directly."""
    budget = budget or Budget()
    budget.start()
    if budget.max_seconds is not None and budget.elapsed > budget.max_seconds:
        return Inconclusive("time budget exhausted", budget.nodes, budget.elapsed)
    comp = _compiled(reduced)
    env = dist.assignment()
    values = [env[v] for v in comp.names]
    rows = [(co, _int_value(terms, values)) for co, terms in zip(comp.coeffs, comp.rhs)]
    sols = _search_echelon(rows, comp.pivots, z_upper_bounds(bundle), budget)
    if isinstance(sols, Inconclusive):
        return sols
    return [ZSolution(dist, s) for s in sols]


@dataclass
class FeasibilityResult:
    rank: int
    zero_constraints: tuple[SymPoly, ...]
    distributions: list[WeightDistribution] = field(default_factory=list)
    solutions: list[ZSolution] = field(default_factory=list)
    inconclusive: Inconclusive | None = None


def solve_bundle(bundle: SystemBundle, ident: CountingIdentities, budget: Budget | None = None) -> FeasibilityResult:
    """Reduce, enumerate weight distributions, then solve each for z."""
    budget = budget or Budget()
    red = rref_symbolic(bundle.system)
    res = FeasibilityResult(red.rank, red.zero_constraints)
    dists = enumerate_weight_distributions(
        ident, red.zero_constraints, bundle.sets, budget, reduced=red.reduced)
    if isinstance(dists, Inconclusive):
        res.inconclusive = dists
        return res
    res.distributions = dists
    for d in dists:
        sols = solve_for_distribution(bundle, red.reduced, d, budget)
        if isinstance(sols, Inconclusive):
            res.inconclusive = sols
            return res
        res.solutions.extend(sols)
    return res


def census_matches(bundle: SystemBundle, sol: ZSolution) -> bool:
    """Re-substitute a solution into every unreduced row."""
    env = weight_assignment(bundle.sets, sol.distribution.n_counts, sol.distribution.m_counts)
    for coeffs, rhs in bundle.system.rows:
        if sum(Fraction(c) * v for c, v in zip(coeffs, sol.z)) != evaluate(rhs, env):
            return False
    return True
