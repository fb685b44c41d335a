"""Exact linear algebra for systems whose right-hand sides are polynomials.

Rationals are :class:`fractions.Fraction`.  A :class:`SymPoly` is a sparse
polynomial of degree at most 2 in named indeterminates (``"n6"``, ``"m13"``).
A :class:`SymSystem` is a list of rows ``sum_j a_j z_j = p(n, m)``.

Reduction works on the augmented integer matrix whose columns are the
z-variables, then every monomial of the right-hand sides (quadratic first,
then linear, then the constant).  The reduced echelon form of that matrix is
unique, so the result does not depend on row order; rows that end up with no
z-part are the zero-constraints ``0 = p(n, m)``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

Monomial = tuple  # () | (a,) | (a, b) with a <= b in var_key order


def var_key(name: str):
    m = re.fullmatch(r"([A-Za-z_]+)(\d+)", name)
    if m:
        return (m.group(1), int(m.group(2)), name)
    return (name, -1, name)


def mono_key(mono: Monomial):
    return (-len(mono), [var_key(v) for v in mono])


def _mono(vars_: Iterable[str]) -> Monomial:
    vs = tuple(sorted(vars_, key=var_key))
    if len(vs) > 2:
        raise ValueError("degree above 2 is not supported")
    return vs


class SymPoly:
    """Immutable polynomial of degree <= 2 with rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        clean = {}
        for mono, coef in (terms or {}).items():
            coef = Fraction(coef)
            if coef:
                mono = _mono(mono)
                clean[mono] = clean.get(mono, Fraction(0)) + coef
                if not clean[mono]:
                    del clean[mono]
        self.terms = dict(sorted(clean.items(), key=lambda kv: mono_key(kv[0])))

    @classmethod
    def const(cls, c) -> "SymPoly":
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, name: str, coef=1) -> "SymPoly":
        return cls({(name,): Fraction(coef)})

    @classmethod
    def product(cls, a: str, b: str, coef=1) -> "SymPoly":
        return cls({(a, b): Fraction(coef)})

    def __add__(self, other: "SymPoly") -> "SymPoly":
        terms = dict(self.terms)
        for mono, c in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + c
        return SymPoly(terms)

    def __neg__(self) -> "SymPoly":
        return SymPoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def scale(self, c) -> "SymPoly":
        c = Fraction(c)
        return SymPoly({m: c * v for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return isinstance(other, SymPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max((len(m) for m in self.terms), default=0)

    def variables(self) -> set[str]:
        return {v for m in self.terms for v in m}

    def normalized(self) -> "SymPoly":
        """Primitive integer multiple with positive leading coefficient."""
        if not self.terms:
            return self
        dens = 1
        for c in self.terms.values():
            dens = dens * c.denominator // gcd(dens, c.denominator)
        ints = {m: int(c * dens) for m, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        lead = next(iter(ints.values()))
        if lead < 0:
            g = -g
        return SymPoly({m: Fraction(v, g) for m, v in ints.items()})

    def __repr__(self) -> str:
        return f"SymPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.terms.items():
            body = "*".join(mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> list[dict]:
        return [{"mono": list(m), "coef": _frac_str(c)} for m, c in self.terms.items()]

    @classmethod
    def from_json(cls, payload) -> "SymPoly":
        return cls({tuple(t["mono"]): _parse_frac(t["coef"]) for t in payload})


def evaluate(poly: SymPoly, assignment: Mapping[str, int]) -> Fraction:
    total = Fraction(0)
    for mono, c in poly.terms.items():
        term = c
        for v in mono:
            if v not in assignment:
                raise KeyError(f"no value for indeterminate {v!r}")
            term *= assignment[v]
        total += term
    return total


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


def _parse_frac(s: str) -> Fraction:
    return Fraction(s.replace("−", "-"))


@dataclass(frozen=True)
class SymSystem:
    var_names: tuple[str, ...]
    rows: tuple[tuple[tuple[Fraction, ...], SymPoly], ...]
    tags: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        n = len(self.var_names)
        for coeffs, _ in self.rows:
            if len(coeffs) != n:
                raise ValueError("row length does not match the number of variables")

    @classmethod
    def build(cls, var_names, rows, tags=()) -> "SymSystem":
        rows = tuple((tuple(Fraction(c) for c in co), rhs) for co, rhs in rows)
        return cls(tuple(var_names), rows, tuple(tags))

    def substitute(self, assignment: Mapping[str, int]) -> "SymSystem":
        rows = tuple((co, SymPoly.const(evaluate(rhs, assignment))) for co, rhs in self.rows)
        return SymSystem(self.var_names, rows, self.tags)

    def to_json(self) -> dict:
        return {
            "vars": list(self.var_names),
            "rows": [
                {"coeffs": [_frac_str(c) for c in co], "rhs": rhs.to_json()}
                for co, rhs in self.rows
            ],
        }

    @classmethod
    def from_json(cls, payload) -> "SymSystem":
        if isinstance(payload, str):
            payload = json.loads(payload)
        rows = tuple(
            (tuple(_parse_frac(c) for c in r["coeffs"]), SymPoly.from_json(r["rhs"]))
            for r in payload["rows"]
        )
        return cls(tuple(payload["vars"]), rows)


@dataclass(frozen=True)
class Reduction:
    reduced: SymSystem
    rank: int
    zero_constraints: tuple[SymPoly, ...]
    pivots: tuple[int, ...]


def _row_content(row: list[int]) -> list[int]:
    g = 0
    for v in row:
        if v:
            g = gcd(g, v)
            if g == 1:
                return row
    if g > 1:
        return [v // g for v in row]
    return row


def integer_rref(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int]]:
    """Fraction-free reduced echelon form.

    Returns integer rows (each primitive, pivot positive) and their pivot
    columns.  Zero rows are dropped.  Pivot columns are taken left to right,
    first nonzero entry wins.
    """
    work = [_row_content(list(r)) for r in rows if any(r)]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, len(work)):
            if work[i][c]:
                sel = i
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        prow = work[r]
        if prow[c] < 0:
            prow = [-v for v in prow]
            work[r] = prow
        pv = prow[c]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                row = work[i]
                work[i] = _row_content([pv * a - f * b for a, b in zip(row, prow)])
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return [w for w in work[:r]], pivots


def _to_integer_matrix(system: SymSystem, monos: list[Monomial]) -> list[list[int]]:
    col_of = {m: i for i, m in enumerate(monos)}
    nz = len(system.var_names)
    out = []
    for coeffs, rhs in system.rows:
        entries = [Fraction(0)] * (nz + len(monos))
        entries[:nz] = coeffs
        for mono, c in rhs.terms.items():
            entries[nz + col_of[mono]] = c
        den = 1
        for e in entries:
            den = den * e.denominator // gcd(den, e.denominator)
        out.append([int(e * den) for e in entries])
    return out


def rref_symbolic(system: SymSystem) -> Reduction:
    if not system.rows:
        raise ValueError("empty system")
    monos = sorted({m for _, rhs in system.rows for m in rhs.terms}, key=mono_key)
    # the constant sorts last because mono_key puts low degree at the end
    nz = len(system.var_names)
    mat = _to_integer_matrix(system, monos)
    rows, pivots = integer_rref(mat, nz + len(monos))
    reduced_rows = []
    zeros = []
    rank = 0
    for row, pc in zip(rows, pivots):
        if pc < nz:
            rank += 1
            pv = row[pc]
            coeffs = tuple(Fraction(v, pv) for v in row[:nz])
            rhs = SymPoly({monos[j]: Fraction(row[nz + j], pv) for j in range(len(monos))})
            reduced_rows.append((coeffs, rhs))
        else:
            poly = SymPoly({monos[j]: Fraction(row[nz + j]) for j in range(len(monos))})
            zeros.append(poly.normalized())
    reduced = SymSystem(system.var_names, tuple(reduced_rows))
    return Reduction(reduced, rank, tuple(zeros), tuple(p for p in pivots if p < nz))


@dataclass(frozen=True)
class SolutionSet:
    """Rational solution set of a constant linear system."""

    kind: str  # "unique" | "affine" | "inconsistent"
    particular: tuple[Fraction, ...] | None = None
    basis: tuple[tuple[Fraction, ...], ...] = ()
    pivots: tuple[int, ...] = ()
    free: tuple[int, ...] = ()


def solve_constant(system: SymSystem) -> SolutionSet:
    for _, rhs in system.rows:
        if rhs.degree > 0:
            raise ValueError("right-hand sides must be constants")
    n = len(system.var_names)
    red = rref_symbolic(system) if system.rows else None
    if red is None:
        return SolutionSet("affine", tuple(Fraction(0) for _ in range(n)),
                           _unit_basis(n), (), tuple(range(n)))
    if red.zero_constraints:
        return SolutionSet("inconsistent")
    pivots = red.pivots
    free = tuple(j for j in range(n) if j not in pivots)
    part = [Fraction(0)] * n
    for (coeffs, rhs), pc in zip(red.reduced.rows, pivots):
        part[pc] = rhs.terms.get((), Fraction(0))
    basis = []
    for fj in free:
        vec = [Fraction(0)] * n
        vec[fj] = Fraction(1)
        for (coeffs, _), pc in zip(red.reduced.rows, pivots):
            vec[pc] = -coeffs[fj]
        lead = next(v for v in vec if v)
        if lead < 0:
            vec = [-v for v in vec]
        basis.append(tuple(vec))
    kind = "unique" if not free else "affine"
    return SolutionSet(kind, tuple(part), tuple(basis), pivots, free)


def _unit_basis(n: int):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))
