"""Reconstruction searches: completion from an incident set, row-constrained
point sets in PG(2,q), planar section classification and the staged search
for line classes around a line of known pattern."""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .classes import LineClass, equivalent, verify_cl
from .projgeom import Geometry, build_geometry, plane_chart, quotient_at_point


class Contradiction(Exception):
    def __init__(self, line: int, count: int):
        super().__init__(f"line {line}: {count} incident class lines fit no membership")
        self.line = line
        self.count = count


@dataclass
class SearchInconclusive:
    reason: str
    stages: dict

    def report(self) -> str:
        return f"inconclusive: {self.reason}; stages {self.stages}"


# -- completion -------------------------------------------------------------


def complete_from_incident_set(g: Geometry, x: int, star_line: int, member: bool, incident) -> LineClass:
    """Recover a line class from its lines meeting ``star_line``.

    For a line l skew to star_line, the class lines meeting both number
    x + q(chi(l) + chi(star_line)); all of them belong to the incident set.
    """
    q = g.q
    inc = np.zeros(g.num_lines, dtype=bool)
    inc[np.asarray(list(incident), dtype=np.int64)] = True
    meets = g.meets
    if np.any(inc & ~meets[star_line]):
        raise ValueError("incident set contains a line skew to the base line")
    base = x + q * int(member)
    skew = np.nonzero(~meets[star_line])[0]
    skew = skew[skew != star_line]
    counts = meets[np.ix_(skew, np.nonzero(inc)[0])].sum(axis=1)
    bad = np.nonzero((counts != base) & (counts != base + q))[0]
    if len(bad):
        raise Contradiction(int(skew[bad[0]]), int(counts[bad[0]]))
    members = inc.copy()
    members[skew[counts == base + q]] = True
    members[star_line] = member
    return LineClass(g, members)


# -- the collineation group of PG(2,q) --------------------------------------


def _popcount(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a.astype(np.uint64)).astype(np.int64)


def _mask(idx) -> int:
    m = 0
    for i in idx:
        m |= 1 << int(i)
    return m


def _unmask(m: int) -> tuple[int, ...]:
    out = []
    i = 0
    m = int(m)
    while m:
        if m & 1:
            out.append(i)
        m >>= 1
        i += 1
    return tuple(out)


class PlaneGroup:
    """PGL(3,q) (with field automorphisms when q is not prime) acting on
    points and lines of PG(2,q), stored as permutation arrays."""

    def __init__(self, q: int):
        g = build_geometry(2, q)
        f = g.field
        self.q, self.geometry = q, g
        mats = []
        digits = np.array(list(itertools.product(range(q), repeat=6)), dtype=np.int64)
        for first in itertools.product(range(q), repeat=3):
            if not any(first):
                continue
            lead = next(v for v in first if v)
            if lead != 1:
                continue
            m = np.empty((len(digits), 3, 3), dtype=np.int64)
            m[:, 0] = first
            m[:, 1] = digits[:, :3]
            m[:, 2] = digits[:, 3:]
            keep = self._det(f, m) != 0
            mats.append(m[keep])
        # scalar normalization: the first nonzero entry of row 0 is 1
        self.matrices = np.concatenate(mats)
        frobs = range(f.e) if f.e > 1 else range(1)
        perms = []
        self.frob = []
        for fr in frobs:
            pts = g.points
            for _ in range(fr):
                pts = f.frob[pts]
            perms.append(self._images(g, self.matrices, pts))
            self.frob.extend([fr] * len(self.matrices))
        self.frob = np.array(self.frob, dtype=np.int64)
        if f.e > 1:
            self.matrices = np.concatenate([self.matrices] * f.e)
        self.point_perm = np.concatenate(perms)
        a = self.point_perm[:, g.line_points[:, 0]]
        b = self.point_perm[:, g.line_points[:, 1]]
        self.line_perm = g.line_of[a, b].astype(np.int16)
        self.order = len(self.point_perm)

    @staticmethod
    def _det(f, m):
        mul, add, sub = f.mul, f.add, f.sub

        def minor(i, j, k, l):
            return sub[mul[m[:, 1, i], m[:, 2, j]], mul[m[:, 1, k], m[:, 2, l]]]

        t0 = mul[m[:, 0, 0], minor(1, 2, 2, 1)]
        t1 = mul[m[:, 0, 1], minor(0, 2, 2, 0)]
        t2 = mul[m[:, 0, 2], minor(0, 1, 1, 0)]
        return add[sub[t0, t1], t2]

    @staticmethod
    def _images(g, mats, pts):
        f = g.field
        out = np.empty((len(mats), len(pts)), dtype=np.int16)
        step = 20000
        for s in range(0, len(mats), step):
            m = mats[s:s + step]
            img = np.zeros((len(m), len(pts), 3), dtype=np.int64)
            for i in range(3):
                acc = np.zeros((len(m), len(pts)), dtype=np.int64)
                for j in range(3):
                    acc = f.add[acc, f.mul[m[:, i, j][:, None], pts[None, :, j]]]
                img[:, :, i] = acc
            out[s:s + step] = g.index_of(img.reshape(-1, 3)).reshape(len(m), -1)
        return out

    def _perm(self, kind: str) -> np.ndarray:
        return self.point_perm if kind == "point" else self.line_perm

    def images(self, subset, kind: str = "point", elements=None) -> np.ndarray:
        """Bitmasks of the images of ``subset`` under every (or the given) element."""
        perm = self._perm(kind)
        if elements is not None:
            perm = perm[elements]
        idx = list(subset)
        if not idx:
            return np.zeros(len(perm), dtype=np.int64)
        return (np.int64(1) << perm[:, idx].astype(np.int64)).sum(axis=1)

    def orbit(self, subset, kind: str = "point", elements=None) -> np.ndarray:
        return np.unique(self.images(subset, kind, elements))

    def canonical(self, subset, kind: str = "point", elements=None) -> int:
        return int(self.images(subset, kind, elements).min())

    def stabilizer(self, subset, kind: str = "point") -> np.ndarray:
        m = self.images(subset, kind)
        return np.nonzero(m == _mask(subset))[0]

    def subgroup(self, predicate) -> np.ndarray:
        """Indices of elements whose matrix satisfies ``predicate`` (PGL part only)."""
        keep = predicate(self.matrices) & (self.frob == 0)
        return np.nonzero(keep)[0]


@lru_cache(maxsize=None)
def plane_group(q: int) -> PlaneGroup:
    return PlaneGroup(q)


# -- row-constrained point sets -------------------------------------------


@dataclass(frozen=True)
class QuotientConstraint:
    """Point sets B of PG(2,q) of a given size such that, for every point p,
    the sorted row (|m ∩ (B minus p)| : m a line on p) lies in ``in_rows``
    when p is in B and in ``out_rows`` otherwise.  ``None`` allows any row.
    With ``special_row`` set, exactly one point of B has that row."""

    q: int
    size: int
    in_rows: frozenset | None
    out_rows: frozenset | None
    special_row: tuple | None = None

    def complemented(self) -> "QuotientConstraint":
        q = self.q
        flip = lambda rows: None if rows is None else frozenset(
            tuple(sorted(q - v for v in r)) for r in rows)
        P = q * q + q + 1
        return QuotientConstraint(q, P - self.size, flip(self.out_rows), flip(self.in_rows))


def _codes(rows, base: int) -> np.ndarray:
    arr = np.array(sorted(rows), dtype=np.int64)
    return arr @ (base ** np.arange(arr.shape[1], dtype=np.int64)) if len(arr) else np.zeros(0, np.int64)


def _check_sets(g: Geometry, B: np.ndarray, c: QuotientConstraint, in_codes, out_codes, special_code):
    """Boolean mask of rows of B (n, P) meeting the constraint."""
    base = c.q + 2
    hits = B.astype(np.int16) @ g.point_line.astype(np.int16)
    rows = hits[:, g.point_lines] - B[:, :, None]
    rows.sort(axis=2)
    codes = rows.astype(np.int64) @ (base ** np.arange(rows.shape[2], dtype=np.int64))
    ok = np.ones(len(B), dtype=bool)
    if in_codes is not None:
        ok &= np.all(np.isin(codes, in_codes) | ~B, axis=1)
    if out_codes is not None:
        ok &= np.all(np.isin(codes, out_codes) | B, axis=1)
    if special_code is not None:
        ok &= ((codes == special_code) & B).sum(axis=1) == 1
    return ok


def _arrangements(row, pencil_perms) -> list[tuple[int, ...]]:
    seen = set()
    reps = []
    for arr in sorted(set(itertools.permutations(row))):
        if arr in seen:
            continue
        orbit = {tuple(arr[i] for i in p) for p in pencil_perms}
        seen |= orbit
        reps.append(arr)
    return reps


def _pencil_perms(grp: PlaneGroup, p: int) -> list[tuple[int, ...]]:
    g = grp.geometry
    stab = np.nonzero(grp.point_perm[:, p] == p)[0]
    pencil = g.point_lines[p]
    pos = {int(l): i for i, l in enumerate(pencil)}
    acts = np.unique(grp.line_perm[np.ix_(stab, pencil)], axis=0)
    # image position of each pencil line; arrangements are permuted accordingly
    perms = set()
    for a in acts:
        img = [pos[int(l)] for l in a]
        inv = [0] * len(img)
        for i, j in enumerate(img):
            inv[j] = i
        perms.add(tuple(inv))
    return sorted(perms)


def search_quotient_bsets(c: QuotientConstraint, limit: int | None = None,
                          chunk: int = 50000) -> list[tuple[int, ...]]:
    """All point sets meeting the constraint, one per collineation class,
    sorted by canonical bitmask."""
    q = c.q
    g = build_geometry(2, q)
    P = g.num_points
    base = q + 2
    if c.size == 0:
        zero = tuple([0] * (q + 1))
        ok = c.out_rows is None or zero in c.out_rows
        return [()] if ok and c.special_row is None else []
    if c.size > P:
        return []
    if c.in_rows is None and c.out_rows is None and c.special_row is None:
        if limit is None:
            raise ValueError("an unconstrained search needs a limit")
        grp = plane_group(q)
        out = []
        for comb in itertools.combinations(range(P), c.size):
            key = grp.canonical(comb)
            if all(_mask(o) != key for o in out):
                out.append(_unmask(key))
            if len(out) >= limit:
                break
        return sorted(out, key=_mask)
    if c.special_row is None and c.size * 2 > P:
        comp = search_quotient_bsets(c.complemented(), limit, chunk)
        grp = plane_group(q)
        full = set(range(P))
        res = [_unmask(grp.canonical(sorted(full - set(b)))) for b in comp]
        return sorted(set(res), key=_mask)

    grp = plane_group(q)
    in_codes = None if c.in_rows is None else _codes(c.in_rows, base)
    out_codes = None if c.out_rows is None else _codes(c.out_rows, base)
    special_code = None
    if c.special_row is not None:
        special_code = int(_codes([c.special_row], base)[0])
        anchors = [tuple(sorted(c.special_row))]
    elif c.in_rows is not None:
        anchors = sorted(c.in_rows)
    else:
        anchors = sorted({tuple(sorted(r)) for r in _compositions(c.size - 1, q + 1, q)})
    anchor = 0
    pencil = g.point_lines[anchor]
    others = [[int(p) for p in g.line_points[l] if p != anchor] for l in pencil]
    perms = _pencil_perms(grp, anchor)
    found: dict[int, tuple[int, ...]] = {}
    for row in anchors:
        if sum(row) != c.size - 1 or max(row) > q:
            continue
        for arr in _arrangements(row, perms):
            options = []
            for pts, e in zip(others, arr):
                opts = np.zeros((0, P), dtype=bool)
                combs = list(itertools.combinations(pts, e))
                opts = np.zeros((len(combs), P), dtype=bool)
                for i, cb in enumerate(combs):
                    opts[i, list(cb)] = True
                options.append(opts)
            for B in _product_chunks(options, P, anchor, chunk):
                ok = _check_sets(g, B, c, in_codes, out_codes, special_code)
                for b in B[ok]:
                    pts = np.nonzero(b)[0]
                    key = grp.canonical(pts)
                    if key not in found:
                        found[key] = _unmask(key)
                        if limit is not None and len(found) >= limit:
                            return [found[k] for k in sorted(found)]
    return [found[k] for k in sorted(found)]


def _compositions(total: int, parts: int, cap: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for v in range(min(cap, total) + 1):
        for rest in _compositions(total - v, parts - 1, cap):
            yield (v,) + rest


def _product_chunks(options, P: int, anchor: int, chunk: int):
    """Yield (n, P) boolean blocks covering the product of per-line choices."""
    sizes = [len(o) for o in options]
    # split into an outer python loop and an inner vectorized product
    inner = len(options)
    total = 1
    while inner > 0 and total * sizes[inner - 1] <= chunk:
        total *= sizes[inner - 1]
        inner -= 1
    tail = np.zeros((1, P), dtype=bool)
    tail[0, anchor] = True
    for o in options[inner:]:
        tail = (tail[:, None, :] | o[None, :, :]).reshape(-1, P)
    for head in itertools.product(*[range(s) for s in sizes[:inner]]):
        h = np.zeros(P, dtype=bool)
        for o, i in zip(options, head):
            h |= o[i]
        yield tail | h[None, :]


# -- planar sections -------------------------------------------------------


@dataclass(frozen=True)
class PlanarSection:
    """A set of lines of PG(2,q), with the pattern labels compatible with each
    line of the plane."""

    q: int
    lines: tuple[int, ...]
    annotations: tuple[tuple[str, ...], ...] = ()

    @property
    def weight(self) -> int:
        return len(self.lines)

    def coordinates(self) -> list[tuple[int, ...]]:
        g = build_geometry(2, self.q)
        return [tuple(int(v) for v in g.points[g.line_dual[l]]) for l in self.lines]

    def labels_on(self, label: str) -> int:
        return sum(label in a for a in self.annotations)


def section_from_coordinates(q: int, coords) -> tuple[int, ...]:
    """Line indices of PG(2,q) from dual coordinates <a:b:c>."""
    g = build_geometry(2, q)
    return tuple(sorted(int(g.dual_line[i]) for i in g.index_of(np.array(coords))))


def section_columns(patterns, labels, weight: int):
    """Allowed column vectors for lines inside a plane of the given weight.

    Returns (in_cols, out_cols) as dicts sorted-column -> labels."""
    in_cols: dict = {}
    out_cols: dict = {}
    for p, lab in zip(patterns, labels):
        mat = np.array(p.matrix)
        for col in mat.T:
            if int(col.sum()) + p.chi != weight:
                continue
            key = tuple(sorted(int(v) for v in col))
            (in_cols if p.member else out_cols).setdefault(key, set()).add(lab)
    return in_cols, out_cols


def line_columns(q: int, lines) -> list[tuple[int, ...]]:
    """For every line of PG(2,q), the sorted counts at its points of section
    lines other than itself."""
    g = build_geometry(2, q)
    S = np.zeros(g.num_lines, dtype=bool)
    S[list(lines)] = True
    deg = g.point_line.astype(np.int64) @ S
    out = []
    for l in range(g.num_lines):
        out.append(tuple(sorted(int(v) for v in deg[g.line_points[l]] - S[l])))
    return out


def annotate(q: int, lines, in_cols: dict, out_cols: dict) -> tuple[tuple[str, ...], ...]:
    S = set(lines)
    cols = line_columns(q, lines)
    return tuple(tuple(sorted((in_cols if l in S else out_cols).get(c, ())))
                 for l, c in enumerate(cols))


def classify_planar_sections(q: int, weight: int, patterns, labels=None) -> list[PlanarSection]:
    """Line sets of PG(2,q) of the given size whose every line has a column
    compatible with one of ``patterns``, up to collineations."""
    labels = labels or [f"T{i + 1}" for i in range(len(patterns))]
    in_cols, out_cols = section_columns(patterns, labels, weight)
    g = build_geometry(2, q)
    # dualize: lines become points, the points of a line become the lines on a point
    c = QuotientConstraint(q, weight, frozenset(in_cols), frozenset(out_cols))
    sets = search_quotient_bsets(c)
    out = []
    for pts in sets:
        lines = tuple(sorted(int(g.dual_line[p]) for p in pts))
        out.append(PlanarSection(q, lines, annotate(q, lines, in_cols, out_cols)))
    return out


# -- staged search around a framed line -----------------------------------


@dataclass(frozen=True)
class SearchFrame:
    """A line of PG(3,q) with its points and planes in a fixed order and the
    pattern it is assumed to carry (rows follow points, columns planes).

    ``plane_options[j]`` lists the admissible columns for plane j; the
    chosen columns must together form the pattern's column multiset."""

    line: int
    member: bool
    points: tuple[int, ...]
    planes: tuple[tuple[int, ...], ...]  # basis vectors of each plane (first two span the line)
    plane_index: tuple[int, ...]
    rows_weight: tuple[int, ...]
    plane_options: tuple[tuple[tuple[int, ...], ...], ...]
    columns: tuple[tuple[int, ...], ...]


def standard_frame(g: Geometry, matrix, member: bool = False, option_planes=(2,)) -> SearchFrame:
    """Frame on the line <e1,e2> with planes <e1,e2,e3>, <e1,e2,e4>,
    <e1,e2,e3+c e4> (c = -1, 1, 2, ...).  ``matrix`` rows follow
    e1, e2, e1+e2, e1+2e2, ...; its columns follow the planes.  Columns of
    planes listed in ``option_planes`` and of the planes after them may be
    permuted among themselves."""
    q, f = g.q, g.field
    mat = np.array(matrix, dtype=np.int64)
    e = np.eye(4, dtype=np.int64)
    pts = [e[0], e[1]] + [np.array([1, t, 0, 0]) for t in range(1, q)]
    points = tuple(int(i) for i in g.index_of(np.array(pts)))
    line = g.line_of[points[0], points[1]]
    cs = [int(f.neg[1])] + [c for c in range(1, q) if c != int(f.neg[1])]
    bases = [(0, 0, 1, 0), (0, 0, 0, 1)] + [(0, 0, 1, c) for c in cs]
    planes = tuple((tuple(e[0]), tuple(e[1]), b) for b in bases)
    plane_index = []
    for b in bases:
        idx = g.index_of(np.array([e[0], e[1], b]))
        plane_index.append(g.plane_of_points(idx))
    cols = [tuple(int(v) for v in mat[:, j]) for j in range(q + 1)]
    free = sorted(set(range(min(option_planes), q + 1)))
    options = []
    for j in range(q + 1):
        if j in free:
            options.append(tuple(sorted({cols[k] for k in free})))
        else:
            options.append((cols[j],))
    rows_weight = tuple(int(v) + int(member) for v in mat.sum(axis=1))
    return SearchFrame(int(line), member, points, planes, tuple(plane_index), rows_weight,
                       tuple(options), tuple(cols))


@dataclass
class SearchResult:
    classes: list
    stages: dict = field(default_factory=dict)
    inconclusive: SearchInconclusive | None = None


def _chart(g: Geometry, frame: SearchFrame, j: int):
    return plane_chart(g, frame.plane_index[j], basis=np.array(frame.planes[j]))


def _placements(grp: PlaneGroup, chart, frame: SearchFrame, section_lines, column, star_line2) -> np.ndarray:
    """All images of a section (bitmask over chart lines) avoiding the frame
    line and meeting its points with the given counts."""
    pg2 = chart.plane_geometry
    orb = grp.orbit(section_lines, "line")
    if not frame.member:
        orb = orb[(orb >> star_line2) & 1 == 0]
    else:
        orb = orb[(orb >> star_line2) & 1 == 1]
    pos = {int(p): i for i, p in enumerate(chart.point_map)}
    for k, P in enumerate(frame.points):
        pm = _mask(pg2.point_lines[pos[P]])
        want = column[k] + int(frame.member)
        orb = orb[_popcount(orb & pm) == want]
    return orb


def _chart_lines_to_global(chart, mask: int) -> list[int]:
    return [int(chart.line_map[i]) for i in _unmask(mask)]


def search_line_classes(g: Geometry, x: int, frame: SearchFrame, catalog: dict,
                        star_catalog: dict | None = None,
                        budget_seconds: float | None = None) -> SearchResult:
    """Find every line class with parameter x in which the frame line has the
    frame pattern, assuming each planar section of weight w is equivalent to
    one of ``catalog[w]`` (line sets of PG(2,q)) and each star of weight w to
    the dual of one of them.

    Stage 1 fixes the section of the first plane up to the collineations
    fixing e1 and e2; stage 2 fixes the second plane up to the group induced
    by the stabilizer of stage 1; stage 3 lists every placement in the third
    plane.  Stars at the frame points are then matched plane by plane and
    every candidate incident set is completed.
    """
    t0 = time.time()
    q = g.q
    grp = plane_group(q)
    pg2 = grp.geometry
    f = g.field
    res = SearchResult([])
    star2 = int(pg2.dual_line[pg2.index_of([[0, 0, 1]])[0]])
    charts = [_chart(g, frame, j) for j in range(q + 1)]
    plane_weight = lambda col: sum(col) + int(frame.member)

    fix12 = grp.subgroup(lambda m: (m[:, 1, 0] == 0) & (m[:, 2, 0] == 0) & (m[:, 0, 1] == 0) & (m[:, 2, 1] == 0))
    pointwise = fix12[grp.matrices[fix12, 0, 0] == grp.matrices[fix12, 1, 1]]

    def placements(j, col):
        out = []
        for sec in catalog.get(plane_weight(col), ()):
            out.append(_placements(grp, charts[j], frame, sec, col, star2))
        return np.unique(np.concatenate(out)) if out else np.zeros(0, np.int64)

    def reps(masks, elements):
        keys = {}
        for m in masks:
            k = int(grp.images(_unmask(m), "line", elements).min())
            keys.setdefault(k, int(m))
        return [keys[k] for k in sorted(keys)]

    # stage 1
    col1 = frame.plane_options[0][0]
    s1 = reps(placements(0, col1), fix12)
    res.stages["plane1"] = len(s1)
    col2 = frame.plane_options[1][0]
    pl2 = placements(1, col2)
    res.stages["plane2_pointwise"] = len(reps(pl2, pointwise))
    stage2 = []
    for a in s1:
        # elements fixing e1, e2 and the first section; their diagonal (a:b:c)
        # extends to the second plane together with arbitrary translations
        stab = fix12[grp.images(_unmask(a), "line", fix12) == a]
        diag = {(int(f.mul[m[1, 1], f.inv[m[0, 0]]]), int(f.mul[m[2, 2], f.inv[m[0, 0]]]))
                for m in grp.matrices[stab]}
        mats = grp.matrices[fix12]
        nb = f.mul[mats[:, 1, 1], f.inv[mats[:, 0, 0]]]
        nc = f.mul[mats[:, 2, 2], f.inv[mats[:, 0, 0]]]
        induced = fix12[np.array([(int(b), int(c)) in diag for b, c in zip(nb, nc)], dtype=bool)]
        pointwise_inside = bool(np.all(np.isin(pointwise, induced)))
        use = pointwise if pointwise_inside else induced
        r2 = reps(pl2, use)
        res.stages.setdefault("plane2_sound", 0)
        res.stages["plane2_sound"] += len(r2)
        res.stages["plane2_pointwise_inside_induced"] = pointwise_inside
        stage2.extend((a, b) for b in r2)

    # stage 3 and 4 per option of the third plane
    star_catalog = catalog if star_catalog is None else star_catalog
    catalog_stars = {w: [tuple(int(pg2.line_dual[l]) for l in sec) for sec in secs]
                     for w, secs in star_catalog.items()}
    star_orbits = {w: np.unique(np.concatenate([grp.orbit(s, "point") for s in secs]))
                   for w, secs in catalog_stars.items()}
    quotients = [quotient_at_point(g, P) for P in frame.points]
    # per point: quotient point of the frame line, and for every plane the quotient line
    qinfo = []
    for Q in quotients:
        qpos = Q.point_of_line()
        plane_line = {int(h): i for i, h in enumerate(Q.plane_map)}
        lstar = qpos[frame.line]
        plines = [plane_line[frame.plane_index[j]] for j in range(q + 1)]
        pmasks = [_mask([p for p in Q.plane_geometry.line_points[L] if p != lstar]) for L in plines]
        qinfo.append((qpos, lstar, pmasks))

    third_cols = frame.plane_options[2]
    classes = {}
    res.stages["plane3"] = {}
    res.stages["incident_sets"] = 0
    res.stages["completed"] = 0
    for col3 in third_cols:
        w3 = plane_weight(col3)
        pl3 = placements(2, col3)
        res.stages["plane3"][w3] = len(pl3)
        rest = range(3, q + 1)
        rest_place = {}
        for j in rest:
            for col in frame.plane_options[j]:
                rest_place[(j, col)] = placements(j, col)
        tables = _part_tables(g, frame, charts, qinfo, rest_place)
        for a, b in stage2:
            fixed = [(0, a), (1, b)]
            # prefilter star candidates using planes 1 and 2
            pre = [_star_candidates(g, frame, k, charts, fixed, qinfo[k], star_orbits)
                   for k in range(q + 1)]
            for c in pl3:
                if budget_seconds is not None and time.time() - t0 > budget_seconds:
                    res.inconclusive = SearchInconclusive("time budget exhausted", dict(res.stages))
                    res.classes = [classes[k] for k in sorted(classes)]
                    return res
                sel = fixed + [(2, int(c))]
                cands = [_refine(g, frame, k, charts, sel, qinfo[k], pre[k]) for k in range(q + 1)]
                if any(len(cd) == 0 for cd in cands):
                    continue
                for inc in _match_stars(g, frame, qinfo, quotients, cands, tables, col3):
                    res.stages["incident_sets"] += 1
                    try:
                        L = complete_from_incident_set(g, x, frame.line, frame.member, inc)
                    except Contradiction:
                        continue
                    if verify_cl(L) == x:
                        res.stages["completed"] += 1
                        classes.setdefault(L.key(), L)
    res.classes = [classes[k] for k in sorted(classes)]
    res.stages["seconds"] = round(time.time() - t0, 1)
    return res


def _section_lines_at(g, charts, j, mask, P) -> list[int]:
    """Global lines of a chart section passing through the PG(3,q) point P."""
    return [l for l in _chart_lines_to_global(charts[j], mask) if g.point_line[P, l]]


def _star_candidates(g, frame, k, charts, fixed, qi, star_orbits):
    qpos, lstar, pmasks = qi
    P = frame.points[k]
    w = frame.rows_weight[k]
    orb = star_orbits.get(w)
    if orb is None:
        return np.zeros(0, np.int64)
    orb = orb[(orb >> lstar) & 1 == int(frame.member)]
    for j, m in fixed:
        known = _mask(qpos[l] for l in _section_lines_at(g, charts, j, m, P))
        orb = orb[(orb & pmasks[j]) == known]
    return orb


def _refine(g, frame, k, charts, sel, qi, pre):
    qpos, lstar, pmasks = qi
    P = frame.points[k]
    j, m = sel[-1]
    known = _mask(qpos[l] for l in _section_lines_at(g, charts, j, m, P))
    return pre[(pre & pmasks[j]) == known]


def _part_tables(g, frame, charts, qinfo, rest_place):
    """Each allowed placement in a remaining plane, split into per-point
    parts expressed as quotient bitmasks."""
    q = g.q
    tables = {}
    for j in range(3, q + 1):
        entries = []
        chart = charts[j]
        for col in frame.plane_options[j]:
            arr = rest_place[(j, col)]
            if len(arr) == 0:
                continue
            bits = ((arr[:, None] >> np.arange(len(chart.line_map))[None, :]) & 1).astype(bool)
            parts = np.zeros((len(arr), q + 1), dtype=np.int64)
            for k, P in enumerate(frame.points):
                qpos = qinfo[k][0]
                glob = np.array([(1 << qpos[int(l)]) if g.point_line[P, l] else 0
                                 for l in chart.line_map], dtype=np.int64)
                parts[:, k] = (bits * glob[None, :]).sum(axis=1)
            entries.append((parts, np.array([col] * len(arr))))
        if entries:
            tables[j] = (np.concatenate([e[0] for e in entries]), np.concatenate([e[1] for e in entries]))
    return tables


def _match_stars(g, frame, qinfo, quotients, cands, tables, col3):
    """Choose one star per frame point so that every remaining plane's section
    is an allowed placement; yield the incident line sets."""
    q = g.q
    rest = list(range(3, q + 1))
    if any(j not in tables for j in rest):
        return
    need = sorted(frame.columns)

    def rec(k, alive, chosen):
        if k == q + 1:
            for pick in itertools.product(*[np.nonzero(alive[j])[0] for j in rest]):
                cols = [frame.plane_options[0][0], frame.plane_options[1][0], col3]
                cols += [tuple(tables[j][1][i]) for j, i in zip(rest, pick)]
                if sorted(cols) != need:
                    continue
                inc = []
                for kk, st in enumerate(chosen):
                    Q = quotients[kk]
                    inc.extend(int(Q.line_map[p]) for p in _unmask(st))
                yield inc
            return
        pm = qinfo[k][2]
        for st in cands[k]:
            st = int(st)
            new = {}
            ok = True
            for j in rest:
                part = st & pm[j]
                a = alive[j] & (tables[j][0][:, k] == part)
                if not a.any():
                    ok = False
                    break
                new[j] = a
            if ok:
                yield from rec(k + 1, new, chosen + [st])

    start = {j: np.ones(len(tables[j][0]), dtype=bool) for j in rest}
    yield from rec(0, start, [])


# -- small generic driver ---------------------------------------------------


def brute_force_line_classes(g: Geometry, x: int, frame: SearchFrame, patterns,
                             budget_seconds: float | None = None) -> SearchResult:
    """Search without a section catalog: every plane through the frame line
    gets each subset of its lines compatible with the allowed pattern
    columns, and each combination is completed.  Practical for q = 3."""
    t0 = time.time()
    q = g.q
    res = SearchResult([])
    charts = [_chart(g, frame, j) for j in range(q + 1)]
    pg2 = charts[0].plane_geometry
    star2 = int(pg2.dual_line[pg2.index_of([[0, 0, 1]])[0]])
    others = [l for l in range(pg2.num_lines) if l != star2]
    labels = [f"T{i + 1}" for i in range(len(patterns))]
    per_plane = []
    for j in range(q + 1):
        opts = []
        for col in frame.plane_options[j]:
            w = sum(col) + int(frame.member)
            in_cols, out_cols = section_columns(patterns, labels, w)
            k = w - int(frame.member)
            for comb in itertools.combinations(others, k):
                lines = set(comb) | ({star2} if frame.member else set())
                cols = line_columns(q, lines)
                if all(c in (in_cols if l in lines else out_cols) for l, c in enumerate(cols)):
                    pos = {int(p): i for i, p in enumerate(charts[j].point_map)}
                    deg = [sum(1 for l in comb if pg2.point_line[pos[P], l]) for P in frame.points]
                    if tuple(deg) == col:
                        opts.append((col, [int(charts[j].line_map[l]) for l in comb]))
        per_plane.append(opts)
    res.stages["sections"] = [len(o) for o in per_plane]
    need = sorted(frame.columns)
    classes = {}
    for pick in itertools.product(*per_plane):
        if budget_seconds is not None and time.time() - t0 > budget_seconds:
            res.inconclusive = SearchInconclusive("time budget exhausted", dict(res.stages))
            break
        if sorted(c for c, _ in pick) != need:
            continue
        inc = [l for _, ls in pick for l in ls]
        try:
            L = complete_from_incident_set(g, x, frame.line, frame.member, inc)
        except Contradiction:
            continue
        if verify_cl(L) == x:
            classes.setdefault(L.key(), L)
    res.classes = [classes[k] for k in sorted(classes)]
    res.stages["completed"] = len(res.classes)
    return res


# -- catalog of sections for q = 5, x = 12 ---------------------------------

SECTIONS_Q5_X12 = {
    "S6": [(1, 0, 0), (0, 0, 1), (0, 1, 2), (1, 3, 3), (1, 3, 0), (1, 4, 0)],
    "S12_1": [(1, 0, 0), (0, 1, 2), (1, 4, 3), (0, 1, 1), (1, 4, 4), (0, 0, 1),
              (1, 3, 3), (0, 1, 0), (1, 4, 0), (1, 0, 3), (1, 2, 0), (1, 2, 1)],
    "S12_2": [(1, 0, 0), (1, 1, 1), (1, 2, 0), (1, 2, 2), (1, 3, 0), (1, 3, 4),
              (1, 0, 3), (1, 0, 1), (1, 3, 2), (1, 1, 4), (1, 4, 1), (1, 3, 1)],
    "S18": [(1, 0, 0), (1, 3, 1), (1, 4, 0), (1, 3, 3), (1, 0, 2), (0, 0, 1),
            (0, 1, 1), (0, 1, 3), (1, 4, 1), (1, 0, 1), (1, 2, 1), (1, 3, 4),
            (1, 0, 4), (1, 3, 0), (0, 1, 2), (0, 1, 0), (1, 1, 3), (1, 1, 2)],
    "S24_complement": [(0, 1, 4), (1, 0, 4), (1, 3, 0), (1, 2, 0), (1, 0, 2), (1, 0, 1), (1, 3, 1)],
}

# Pattern of the frame line for x = 12 in PG(3,5): rows e1, e2, e1+t e2;
# columns <e1,e2,e3>, <e1,e2,e4>, <e1,e2,e3-e4>, then the other planes.
FRAME_X12_24 = [
    [1, 2, 3, 0, 0, 0],
    [3, 4, 5, 2, 2, 2],
    [2, 3, 4, 1, 1, 1],
    [2, 3, 4, 1, 1, 1],
    [2, 3, 4, 1, 1, 1],
    [2, 3, 4, 1, 1, 1],
]


def x12_catalog(include_first_twelve: bool = False) -> dict:
    """Section catalog keyed by weight.  A weight-12 plane through a line of
    the frame pattern has the second twelve-line configuration; pass
    ``include_first_twelve`` for stars, which may have either."""
    q = 5
    g = build_geometry(2, q)
    sec = {k: section_from_coordinates(q, v) for k, v in SECTIONS_Q5_X12.items()}
    s24 = tuple(sorted(set(range(g.num_lines)) - set(sec["S24_complement"])))
    cat = {6: [sec["S6"]], 12: [sec["S12_2"]], 18: [sec["S18"]], 24: [s24]}
    if include_first_twelve:
        cat[12] = [sec["S12_2"], sec["S12_1"]]
    return cat


def x12_frame(g: Geometry, third: int = 24) -> SearchFrame:
    """The frame for x = 12.  With ``third`` = 24 the third plane carries the
    weight-24 column; with 6 it carries a weight-6 column and the weight-24
    column moves to one of the remaining planes."""
    frame = standard_frame(g, FRAME_X12_24, member=False, option_planes=(3,))
    if third == 24:
        return frame
    cols = list(frame.columns)
    six = cols[3]
    options = list(frame.plane_options)
    options[2] = (six,)
    for j in range(3, g.q + 1):
        options[j] = tuple(sorted({six, cols[2]}))
    return SearchFrame(frame.line, frame.member, frame.points, frame.planes, frame.plane_index,
                       frame.rows_weight, tuple(options), frame.columns)


def dedupe_classes(classes) -> list:
    """One representative per projective equivalence class, in input order."""
    reps: list = []
    for L in classes:
        if not any(len(L) == len(R) and equivalent(L, R) is not None for R in reps):
            reps.append(L)
    return reps


def run_x12_search(budget_seconds: float | None = None) -> SearchResult:
    """Both placements of the weight-24 column on the frame line, with
    completions deduplicated up to collineation."""
    g = build_geometry(3, 5)
    t0 = time.time()
    stages: dict = {}
    raw: list = []
    for third in (24, 6):
        left = None if budget_seconds is None else max(0.0, budget_seconds - (time.time() - t0))
        r = search_line_classes(g, 12, x12_frame(g, third), x12_catalog(),
                                star_catalog=x12_catalog(True), budget_seconds=left)
        stages[f"third_plane_{third}"] = r.stages
        if r.inconclusive is not None:
            return SearchResult(raw + r.classes, stages, r.inconclusive)
        raw.extend(r.classes)
    first = stages["third_plane_24"]
    stages["summary"] = {
        "plane1": first["plane1"],
        "plane2": first["plane2_pointwise"],
        "plane2_searched": first["plane2_sound"],
        "plane3_weight6": stages["third_plane_6"]["plane3"][6],
        "plane3_weight24": first["plane3"][24],
        "completions": len(raw),
    }
    reps = dedupe_classes(raw)
    stages["summary"]["classes"] = len(reps)
    stages["summary"]["seconds"] = round(time.time() - t0, 1)
    return SearchResult(reps, stages)


def solution_patterns(q: int, x: int, n: int, index: int = 0):
    """Patterns carried by at least one line in the chosen z-solution."""
    from .countsys import build_system, counting_identities
    from .feasibility import solve_bundle

    b = build_system(q, x, n)
    r = solve_bundle(b, counting_identities(q, x))
    sol = r.solutions[index]
    return [p for p, z in zip(b.patterns, sol.z) if z > 0]


def run_small_search(q: int, x: int, n: int, solution: int = 0) -> SearchResult:
    """Catalog-free search framed on each pattern of a z-solution in turn
    (q = 3 scale), deduplicated up to collineation."""
    g = build_geometry(3, q)
    pats = solution_patterns(q, x, n, solution)
    raw: list = []
    stages: dict = {}
    for i, p in enumerate(pats):
        fr = standard_frame(g, p.matrix, member=p.member, option_planes=(q + 1,))
        r = brute_force_line_classes(g, x, fr, pats)
        stages[f"frame_{i + 1}"] = r.stages
        raw.extend(r.classes)
    reps = dedupe_classes(raw)
    stages["classes"] = len(reps)
    return SearchResult(reps, stages)
