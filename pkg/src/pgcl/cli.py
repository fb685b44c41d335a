"""Command line interface and the staged feasibility pipeline.

Exit codes: 0 completed (any verdict), 2 inconclusive (budget), 1 usage or
internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .countsys import SystemError_, build_system, counting_identities
from .exact import rref_symbolic
from .feasibility import Budget, Inconclusive, enumerate_weight_distributions, solve_for_distribution
from .patterns import base_solutions, modular_solutions, pattern_lists, weight_sets

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2


def _stable_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2)


# -- pipeline ---------------------------------------------------------------


@dataclass
class GroupReport:
    sets: dict
    patterns_in: int
    patterns_out: int
    equations: int | None = None
    rank: int | None = None
    zero_constraints: int | None = None
    distributions: list = field(default_factory=list)
    solutions: list = field(default_factory=list)
    verdict: str = ""
    seconds: dict = field(default_factory=dict)

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "weight_sets": self.sets,
            "patterns": {"in": self.patterns_in, "out": self.patterns_out},
            "equations": self.equations,
            "rank": self.rank,
            "zero_constraints": self.zero_constraints,
            "distributions": self.distributions,
            "solutions": self.solutions,
            "verdict": self.verdict,
        }
        if timings:
            out["seconds"] = self.seconds
        return out


@dataclass
class RunReport:
    q: int
    x: int
    modular: list
    groups: list = field(default_factory=list)
    verdict: str = ""
    notes: list = field(default_factory=list)
    inconclusive: str | None = None
    seconds: float = 0.0

    @property
    def solution_count(self) -> int:
        return sum(len(g.solutions) for g in self.groups)

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "q": self.q,
            "x": self.x,
            "modular_solutions": self.modular,
            "groups": [g.to_json(timings) for g in self.groups],
            "verdict": self.verdict,
            "notes": self.notes,
        }
        if self.inconclusive:
            out["inconclusive"] = self.inconclusive
        if timings:
            out["seconds"] = self.seconds
        return out

    def render(self) -> str:
        lines = [f"q={self.q} x={self.x}: {self.verdict}"]
        if not self.modular:
            lines.append("  modular equality has no solution")
        for g in self.groups:
            s = g.sets
            lines.append(f"  N={s['N']} M={s['M']}")
            lines.append(f"    patterns: {g.patterns_in} in, {g.patterns_out} out")
            if g.equations is not None:
                lines.append(f"    equations {g.equations}, rank {g.rank}, zero constraints {g.zero_constraints}")
            lines.append(f"    weight distributions: {len(g.distributions)}")
            for d in g.distributions:
                lines.append(f"      n={d['n']} m={d['m']}")
            lines.append(f"    solutions: {len(g.solutions)}")
            for sol in g.solutions:
                lines.append(f"      z={sol['z']}")
            lines.append(f"    verdict: {g.verdict}")
        for note in self.notes:
            lines.append(f"  note: {note}")
        if self.inconclusive:
            lines.append(f"  {self.inconclusive}")
        return "\n".join(lines)


# zero-equation counts quoted elsewhere for cross-checking (q, x) -> (rows, rank, claimed)
QUOTED_ZERO_COUNTS = {(5, 10): (62, 16, 48)}


def run_pipeline(q: int, x: int, budget: Budget | None = None) -> RunReport:
    """modular gate, patterns, system, reduction, weight distributions, z."""
    t0 = time.time()
    budget = budget or Budget()
    rep = RunReport(q, x, modular_solutions(q, x))
    if not rep.modular:
        rep.verdict = "no-modular-solution"
        return rep
    top = q * q + 1
    alive = False
    for n in base_solutions(q, x):
        sets = weight_sets(q, x, n)
        in_l, out_l = pattern_lists(q, x, n)
        grp = GroupReport(sets.to_json(), len(in_l), len(out_l))
        rep.groups.append(grp)
        if (x > 0 and not in_l) or (x < top and not out_l):
            grp.verdict = "no-patterns"
            continue
        alive = True
        t1 = time.time()
        try:
            bundle = build_system(q, x, n, in_l, out_l)
        except SystemError_ as exc:
            grp.verdict = f"no-patterns ({exc})"
            continue
        red = rref_symbolic(bundle.system)
        grp.equations = len(bundle.system.rows)
        grp.rank = red.rank
        grp.zero_constraints = len(red.zero_constraints)
        grp.seconds["reduce"] = round(time.time() - t1, 3)
        t2 = time.time()
        dists = enumerate_weight_distributions(counting_identities(q, x), red.zero_constraints,
                                               bundle.sets, budget, reduced=red.reduced)
        grp.seconds["distributions"] = round(time.time() - t2, 3)
        if isinstance(dists, Inconclusive):
            grp.verdict = "inconclusive"
            rep.inconclusive = dists.report()
            continue
        grp.distributions = [d.to_json() for d in dists]
        t3 = time.time()
        for d in dists:
            sols = solve_for_distribution(bundle, red.reduced, d, budget)
            if isinstance(sols, Inconclusive):
                grp.verdict = "inconclusive"
                rep.inconclusive = sols.report()
                break
            grp.solutions.extend(s.to_json() for s in sols)
        grp.seconds["solve"] = round(time.time() - t3, 3)
        if not grp.verdict:
            grp.verdict = f"solutions({len(grp.solutions)})" if grp.solutions else "infeasible"
        quoted = QUOTED_ZERO_COUNTS.get((q, x))
        if quoted:
            rows, rank, claimed = quoted
            if rows - rank != claimed:
                rep.notes.append(
                    f"a quoted zero-equation count of {rows}-{rank}={claimed} is inconsistent "
                    f"({rows}-{rank}={rows - rank}); this reduction has rank {grp.rank} and "
                    f"{grp.zero_constraints} zero constraints")
    if any(g.verdict == "inconclusive" for g in rep.groups):
        rep.verdict = "inconclusive"
    elif not alive:
        rep.verdict = "no-patterns"
    elif rep.solution_count:
        rep.verdict = f"solutions({rep.solution_count})"
    else:
        rep.verdict = "infeasible"
    rep.seconds = round(time.time() - t0, 3)
    return rep


# -- table rendering ----------------------------------------------------------


def render_patterns(q: int, x: int, n: int) -> str:
    in_l, out_l = pattern_lists(q, x, n)
    sets = weight_sets(q, x, n)
    out = [f"q={q} x={x} {sets.label}"]
    for title, pats, offset in (("patterns of class lines", in_l, 0),
                                ("patterns of the other lines", out_l, len(in_l))):
        out.append(title)
        for i, p in enumerate(pats):
            out.append(f"T{offset + i + 1} =")
            out.extend("  " + " ".join(f"{v:2d}" for v in row) for row in p.matrix)
    return "\n".join(out)


# -- commands -----------------------------------------------------------------


def _budget(args) -> Budget:
    return Budget(max_nodes=args.budget_nodes, max_seconds=args.budget_secs)


def cmd_admissible(args) -> int:
    lo = args.lo if args.lo is not None else 1
    hi = args.hi if args.hi is not None else (args.q * args.q + 1) // 2
    ok = [x for x in range(lo, hi + 1) if modular_solutions(args.q, x)]
    rejected = [x for x in range(lo, hi + 1) if not modular_solutions(args.q, x)]
    if args.json:
        print(_stable_json({"q": args.q, "admissible": ok, "rejected": rejected}))
    else:
        print(f"q={args.q} admissible: {ok}")
        print(f"q={args.q} rejected:   {rejected}")
    return EXIT_OK


def cmd_patterns(args) -> int:
    ns = [args.n] if args.n is not None else base_solutions(args.q, args.x)
    if args.json:
        out = []
        for n in ns:
            in_l, out_l = pattern_lists(args.q, args.x, n)
            out.append({"weight_sets": weight_sets(args.q, args.x, n).to_json(),
                        "patterns": [p.to_json(i + 1) for i, p in enumerate(in_l + out_l)]})
        print(_stable_json(out))
    else:
        print("\n\n".join(render_patterns(args.q, args.x, n) for n in ns) or "no weight sets")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    xs = [args.x] if args.x is not None else list(range(0, (args.q * args.q + 1) // 2 + 1))
    reports = [run_pipeline(args.q, x, _budget(args)) for x in xs]
    if args.json:
        payload = [r.to_json(args.timings) for r in reports]
        print(_stable_json(payload[0] if len(payload) == 1 else payload))
    else:
        print("\n\n".join(r.render() for r in reports))
    if args.out:
        Path(args.out).write_text(_stable_json([r.to_json(args.timings) for r in reports]) + "\n")
    return EXIT_INCONCLUSIVE if any(r.verdict == "inconclusive" for r in reports) else EXIT_OK


def cmd_search_x12(args) -> int:
    from .classes import weight_profile, write_class
    from .reconstruct import run_x12_search

    res = run_x12_search(args.budget_secs)
    summary = res.stages.get("summary", {})
    payload = {"stages": summary, "classes": [
        {"lines": len(L), "weights": weight_profile(L).points} for L in res.classes]}
    if res.inconclusive:
        payload["inconclusive"] = res.inconclusive.report()
    if args.json:
        print(_stable_json(payload))
    else:
        for k, v in summary.items():
            print(f"{k}: {v}")
        print(f"classes found: {len(res.classes)}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        for i, L in enumerate(res.classes):
            write_class(L, out / f"q5_x12_{i + 1}.pgcl", 12)
    return EXIT_INCONCLUSIVE if res.inconclusive else EXIT_OK


def bset_constraint(variant: int = 1, relaxed: bool = False, size: int = 12):
    """Row constraint for 12-point sets of PG(2,5) taken from a z-solution of
    the x=13 system with weights N={0,6,...,30} and no plane of weight 31:
    rows at weight-12 points of the patterns in use, with a unique point
    carrying the row of the class-line pattern that occurs exactly once."""
    from .countsys import build_system
    from .feasibility import solve_bundle
    from .reconstruct import QuotientConstraint

    if relaxed:
        return QuotientConstraint(5, size, None, None)
    q, x, n, w = 5, 13, 0, 12
    bundle = build_system(q, x, n)
    res = solve_bundle(bundle, counting_identities(q, x))
    # the solutions without a plane containing all of its lines, in solver order
    full = q * q + q + 1
    sols = [s for s in res.solutions if dict(s.distribution.m).get(full, 0) == 0]
    sol = sols[variant - 1]
    rows_in, rows_out, once = set(), set(), set()
    for p, z in zip(bundle.patterns, sol.z):
        if z == 0:
            continue
        mat = p.matrix
        for r, rs in zip(mat, p.rows):
            if rs + p.chi != w:
                continue
            row = tuple(sorted(r))
            (rows_in if p.member else rows_out).add(row)
            if z == 1 and p.member:
                once.add(row)
    special = min(once) if once else None
    return QuotientConstraint(q, size, frozenset(rows_in), frozenset(rows_out), special)


def cmd_search_bset(args) -> int:
    from .reconstruct import search_quotient_bsets

    c = bset_constraint(args.variant, args.relaxed, args.size)
    limit = args.limit if args.limit else (1 if args.relaxed else None)
    sets = search_quotient_bsets(c, limit=limit)
    payload = {"size": c.size, "in_rows": sorted(c.in_rows or []), "out_rows": sorted(c.out_rows or []),
               "special_row": c.special_row, "sets": [list(s) for s in sets]}
    if args.json:
        print(_stable_json(payload))
    else:
        print(f"row-constrained {c.size}-sets found: {len(sets)}")
        for s in sets:
            print("  ", list(s))
    return EXIT_OK


def cmd_verify(args) -> int:
    from .classes import read_class, verify_cl, weight_profile

    L = read_class(args.inp)
    res = verify_cl(L)
    payload = {"lines": len(L)}
    if isinstance(res, int):
        prof = weight_profile(L)
        payload.update({"verdict": "cameron-liebler", "x": res,
                        "point_weights": prof.points, "plane_weights": prof.planes})
    else:
        payload.update({"verdict": "not-cameron-liebler", "reason": res.reason, "line": res.line})
    if args.json:
        print(_stable_json(payload))
    else:
        print(f"x = {res}" if isinstance(res, int) else f"NotCL: {res.reason}")
    return EXIT_OK


def cmd_equiv(args) -> int:
    from .classes import equivalent, equivalent_up_to_duality, read_class

    a, b = read_class(args.a), read_class(args.b)
    if a.g.q != b.g.q:
        print("classes live over different fields", file=sys.stderr)
        return EXIT_ERROR
    if args.dual:
        verdict = equivalent_up_to_duality(a, b)
        print(verdict or "inequivalent")
    else:
        col = equivalent(a, b)
        if col is None:
            print("inequivalent")
        else:
            print("equivalent; matrix " + json.dumps(col.matrix.tolist()) + f" frobenius {col.frob}")
    return EXIT_OK


def cmd_absets(args) -> int:
    from .classes import ab_set_parameters

    rows = []
    for eps in (-1, 1):
        for delta in (-1, 1):
            p = ab_set_parameters(args.n, args.q, eps, delta)
            rows.append({"eps": eps, "delta": delta, "a": p.a, "b": p.b, "size": p.size,
                         "total": p.total, "cl_parameter": p.cl_parameter})
    if args.json:
        print(_stable_json(rows))
    else:
        print(" eps delta  a  b   |O|  x")
        for r in rows:
            print(f"{r['eps']:4d} {r['delta']:5d} {r['a']:2d} {r['b']:2d} {r['size']:5d}  {r['cl_parameter']}")
    return EXIT_OK


def cmd_catalog(args) -> int:
    from .classes import CATALOG, add_empty_plane, catalog_path, load_catalog, verify_cl, write_class

    if args.rebuild:
        from .reconstruct import run_small_search, run_x12_search

        r3 = run_small_search(3, 5, base_solutions(3, 5)[0])
        write_class(r3.classes[0], catalog_path("drudge"), 5)
        r = run_x12_search()
        write_class(r.classes[0], catalog_path("R"), 12)
        write_class(add_empty_plane(r.classes[0]), catalog_path("R+"), 13)
    names = [args.name] if args.name else sorted(CATALOG)
    for name in names:
        L = load_catalog(name)
        q, x, _ = CATALOG[name]
        print(f"{name}: q={q} lines={len(L)} x={verify_cl(L)}")
        if args.out:
            Path(args.out).mkdir(parents=True, exist_ok=True)
            write_class(L, Path(args.out) / catalog_path(name).name, x)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pgcl", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--threads", type=int, default=1, help="accepted for compatibility; runs single-threaded")
        return p

    p = common(sub.add_parser("admissible", help="parameters passing the modular gate"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--lo", type=int)
    p.add_argument("--hi", type=int)
    p.set_defaults(fn=cmd_admissible)

    p = common(sub.add_parser("patterns", help="admissible line patterns"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--n", type=int)
    p.set_defaults(fn=cmd_patterns)

    p = common(sub.add_parser("pipeline", help="full feasibility pipeline"))
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", type=int, help="omit to sweep 0..(q^2+1)/2")
    p.add_argument("--budget-nodes", type=int, default=10**8)
    p.add_argument("--budget-secs", type=float)
    p.add_argument("--timings", action="store_true", help="include runtimes in JSON")
    p.add_argument("--out", help="write the JSON report here")
    p.set_defaults(fn=cmd_pipeline)

    p = common(sub.add_parser("search-x12", help="reconstruct the x=12 classes of PG(3,5)"))
    p.add_argument("--budget-secs", type=float)
    p.add_argument("--out", help="directory for found classes")
    p.set_defaults(fn=cmd_search_x12)

    p = common(sub.add_parser("search-bset", help="row-constrained 12-sets of PG(2,5)"))
    p.add_argument("--variant", type=int, default=1, choices=(1, 2))
    p.add_argument("--relaxed", action="store_true", help="allow every row")
    p.add_argument("--size", type=int, default=12)
    p.add_argument("--limit", type=int)
    p.set_defaults(fn=cmd_search_bset)

    p = common(sub.add_parser("verify", help="check a line-class file"))
    p.add_argument("--in", dest="inp", required=True)
    p.set_defaults(fn=cmd_verify)

    p = common(sub.add_parser("equiv", help="projective equivalence of two class files"))
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--dual", action="store_true", help="also try dual, complement and both")
    p.set_defaults(fn=cmd_equiv)

    p = common(sub.add_parser("absets", help="(a,b)-set parameters"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(fn=cmd_absets)

    p = common(sub.add_parser("catalog", help="list or rebuild the known classes"))
    p.add_argument("--name")
    p.add_argument("--rebuild", action="store_true")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
