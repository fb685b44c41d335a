"""Line sets of PG(3,q): verification, invariants, transforms and equivalence."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .patterns import Pattern
from .projgeom import Geometry, GeometryError, build_geometry, polarity


class ClassError(ValueError):
    pass


@dataclass(eq=False)
class LineClass:
    """A set of lines as a boolean membership vector over line indices."""

    g: Geometry
    members: np.ndarray
    x: int | None = None

    def __post_init__(self):
        m = np.asarray(self.members, dtype=bool)
        if m.shape != (self.g.num_lines,):
            raise ClassError("membership vector has the wrong length")
        self.members = m

    @classmethod
    def from_lines(cls, g: Geometry, lines) -> "LineClass":
        m = np.zeros(g.num_lines, dtype=bool)
        m[np.asarray(list(lines), dtype=np.int64)] = True
        return cls(g, m)

    @classmethod
    def empty(cls, g: Geometry) -> "LineClass":
        return cls(g, np.zeros(g.num_lines, dtype=bool))

    @property
    def lines(self) -> np.ndarray:
        return np.nonzero(self.members)[0]

    def __len__(self) -> int:
        return int(self.members.sum())

    def __eq__(self, other) -> bool:
        return isinstance(other, LineClass) and self.g is other.g and bool(
            np.array_equal(self.members, other.members))

    def __hash__(self):
        return hash(self.members.tobytes())

    def key(self) -> tuple[int, ...]:
        return tuple(int(v) for v in self.lines)

    def __or__(self, other: "LineClass") -> "LineClass":
        return LineClass(self.g, self.members | other.members)

    def __sub__(self, other: "LineClass") -> "LineClass":
        return LineClass(self.g, self.members & ~other.members)

    def image(self, line_perm: np.ndarray) -> "LineClass":
        m = np.zeros_like(self.members)
        m[line_perm[self.members]] = True
        return LineClass(self.g, m, self.x)


def star(g: Geometry, p: int) -> LineClass:
    return LineClass.from_lines(g, g.point_lines[p])


def ruling(g: Geometry, h: int) -> LineClass:
    """Line(h): all lines inside the plane h."""
    return LineClass.from_lines(g, g.plane_lines[h])


# -- verification -----------------------------------------------------------


@dataclass(frozen=True)
class NotCL:
    reason: str
    line: int | None = None

    def __bool__(self) -> bool:
        return False


def meeting_counts(L: LineClass) -> np.ndarray:
    """For every line, the number of other class lines meeting it."""
    return L.g.meets.astype(np.int32) @ L.members.astype(np.int32)


def in_row_space(L: LineClass) -> bool:
    """Exact test that the characteristic vector lies in the row space of the
    point-line incidence matrix A.

    A A^T = aI + J with a = q^2 + q, so the least-squares preimage is
    y = (A chi - S/(a+P)) / a with S = sum(A chi); chi is in the row space iff
    A^T y = chi.  Everything is scaled to integers.
    """
    g = L.g
    q = g.q
    a = q * q + q
    P = g.num_points
    chi = L.members.astype(np.int64)
    s = np.zeros(P, dtype=np.int64)
    np.add.at(s, g.line_points[L.members].ravel(), 1)
    S = int(s.sum())
    lhs = s[g.line_points].sum(axis=1) * (a + P) - (q + 1) * S
    return bool(np.array_equal(lhs, chi * a * (a + P)))


def verify_cl(L: LineClass) -> int | NotCL:
    g = L.g
    q = g.q
    per = q * q + q + 1
    size = len(L)
    if size % per:
        return NotCL(f"|L|={size} is not a multiple of {per}")
    x = size // per
    want = x * (q + 1) + (q * q - 1) * L.members.astype(np.int64)
    got = meeting_counts(L)
    bad = np.nonzero(got != want)[0]
    if len(bad):
        return NotCL(f"line {int(bad[0])} meets {int(got[bad[0]])} class lines, expected "
                     f"{int(want[bad[0]])}", int(bad[0]))
    if not in_row_space(L):
        return NotCL("characteristic vector is not in the row space of the incidence matrix")
    L.x = x
    return x


def check_skew_pairs(L: LineClass, x: int, samples: int = 1000, seed: int = 0) -> bool:
    """Transversal identity on random skew pairs: lines of L meeting both of
    two skew lines number x + q(chi(l) + chi(l'))."""
    g = L.g
    rng = np.random.default_rng(seed)
    meets = g.meets
    chi = L.members
    for _ in range(samples):
        a = int(rng.integers(g.num_lines))
        skew = np.nonzero(~meets[a])[0]
        skew = skew[skew != a]
        b = int(rng.choice(skew))
        c = int(np.sum(meets[a] & meets[b] & chi))
        if c != x + g.q * (int(chi[a]) + int(chi[b])):
            return False
    return True


# -- invariants -------------------------------------------------------------


def point_weights(L: LineClass) -> np.ndarray:
    g = L.g
    w = np.zeros(g.num_points, dtype=np.int64)
    np.add.at(w, g.line_points[L.members].ravel(), 1)
    return w


def plane_weights(L: LineClass) -> np.ndarray:
    g = L.g
    w = np.zeros(g.num_planes, dtype=np.int64)
    np.add.at(w, g.line_planes[L.members].ravel(), 1)
    return w


@dataclass(frozen=True)
class WeightProfile:
    points: dict
    planes: dict


def weight_profile(L: LineClass) -> WeightProfile:
    def hist(a):
        vals, cnt = np.unique(a, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, cnt)}
    return WeightProfile(hist(point_weights(L)), hist(plane_weights(L)))


def line_patterns(L: LineClass) -> np.ndarray:
    """(lines, q+1, q+1) pencil counts: rows follow line_points, columns
    line_planes, and the line itself is not counted."""
    g = L.g
    PL = g.point_lines[g.line_points]  # (L, q+1, r)
    inside = g.line_plane[PL[:, :, None, :], g.line_planes[:, None, :, None]]
    counts = (inside & L.members[PL][:, :, None, :]).sum(axis=3)
    return counts - L.members[:, None, None].astype(np.int64)


def pattern_keys(L: LineClass, x: int) -> list[Pattern]:
    """Canonical pattern of every line, from point and plane weights."""
    g = L.g
    pw, hw = point_weights(L), plane_weights(L)
    chi = L.members.astype(np.int64)
    rows = np.sort(pw[g.line_points] - chi[:, None], axis=1)
    cols = np.sort(hw[g.line_planes] - chi[:, None], axis=1)
    return [Pattern(g.q, x, bool(chi[l]), tuple(int(v) for v in rows[l]),
                    tuple(int(v) for v in cols[l])) for l in range(g.num_lines)]


def census(L: LineClass, x: int, in_l, not_in_l) -> tuple[int, ...]:
    """Number of lines carrying each listed pattern (in-class list first)."""
    keys = pattern_keys(L, x)
    order = {p: i for i, p in enumerate(list(in_l) + list(not_in_l))}
    z = [0] * len(order)
    for k in keys:
        if k not in order:
            raise ClassError(f"line pattern {k.rows}/{k.cols} is not in the list")
        z[order[k]] += 1
    return tuple(z)


def weight_counts(L: LineClass, N, M) -> tuple[tuple[int, ...], tuple[int, ...]]:
    prof = weight_profile(L)
    return (tuple(prof.points.get(u, 0) for u in N), tuple(prof.planes.get(w, 0) for w in M))


# -- transforms -------------------------------------------------------------


def complement(L: LineClass) -> LineClass:
    x = None if L.x is None else L.g.q ** 2 + 1 - L.x
    return LineClass(L.g, ~L.members, x)


def dualize(L: LineClass) -> LineClass:
    """Image under the standard polarity (points <-> planes)."""
    pol = polarity(L.g)
    return L.image(pol.line_map)


def switch(L: LineClass, p: int, h: int) -> LineClass:
    g = L.g
    if not g.point_plane[p, h]:
        raise ClassError(f"point {p} is not on plane {h}")
    st = star(g, p).members
    pl = ruling(g, h).members
    plane_only = pl & ~st
    star_only = st & ~pl
    if not np.all(L.members[plane_only]):
        raise ClassError("Line(plane) minus Star(point) is not contained in the class")
    if np.any(L.members[star_only]):
        raise ClassError("Star(point) minus Line(plane) meets the class")
    return LineClass(g, (L.members | star_only) & ~plane_only, L.x)


def find_switch(L: LineClass) -> list[tuple[int, int]]:
    """All incident (point, plane) pairs satisfying the switching hypothesis."""
    g = L.g
    out = []
    for h in range(g.num_planes):
        for p in g.plane_points[h]:
            st = g.point_lines[p]
            pl = g.plane_lines[h]
            in_plane = ~g.line_plane[st, h]
            if np.all(L.members[pl[~g.point_line[p, pl]]]) and not np.any(L.members[st[in_plane]]):
                out.append((int(p), int(h)))
    return out


# -- caps -------------------------------------------------------------------


@dataclass(frozen=True)
class Cap:
    points: tuple[int, ...]
    external: int
    tangent: int
    secant: int
    kind: str


def cap_analysis(g: Geometry, points) -> Cap | NotCL:
    pts = np.zeros(g.num_points, dtype=bool)
    pts[list(points)] = True
    hits = pts[g.line_points].sum(axis=1)
    bad = np.nonzero(hits > 2)[0]
    if len(bad):
        return NotCL(f"line {int(bad[0])} meets the set in {int(hits[bad[0]])} points", int(bad[0]))
    k = int(pts.sum())
    q = g.q
    kind = "cap"
    if g.n == 3 and k == q * q + 1 and q % 2 == 1:
        kind = "elliptic quadric"
    return Cap(tuple(int(p) for p in np.nonzero(pts)[0]), int((hits == 0).sum()),
               int((hits == 1).sum()), int((hits == 2).sum()), kind)


# -- equivalence ------------------------------------------------------------


@dataclass(frozen=True)
class Collineation:
    matrix: np.ndarray
    frob: int
    point_perm: np.ndarray
    line_perm: np.ndarray


class Inconclusive(Exception):
    pass


def collineation(g: Geometry, mat, frob: int = 0) -> Collineation:
    perm = g.point_image(mat, frob)
    return Collineation(np.asarray(mat), frob, perm, g.line_image(perm))


def _frame_matrix(g: Geometry, src, dst):
    """Matrix sending the frame src (5 points, general position) onto dst."""
    f = g.field

    def basis(pts):
        v = g.points[list(pts)]
        m = v[:4].T.copy()
        # solve m @ lam = v[4]
        lam = _solve(f, m, v[4])
        if lam is None or any(l == 0 for l in lam):
            return None
        return np.array([[f.mul[m[i, j], lam[j]] for j in range(4)] for i in range(4)])

    A = basis(src)
    B = basis(dst)
    if A is None or B is None:
        return None
    Ainv = _inverse(f, A)
    if Ainv is None:
        return None
    return _mat_mul(f, B, Ainv)


def _solve(f, m, rhs):
    n = m.shape[0]
    aug = np.concatenate([m, rhs.reshape(-1, 1)], axis=1).astype(np.int64)
    r = 0
    piv = []
    for c in range(n):
        sel = next((i for i in range(r, n) if aug[i, c]), None)
        if sel is None:
            return None
        aug[[r, sel]] = aug[[sel, r]]
        inv = f.inv[aug[r, c]]
        aug[r] = f.mul[inv, aug[r]]
        for i in range(n):
            if i != r and aug[i, c]:
                aug[i] = f.sub[aug[i], f.mul[aug[i, c], aug[r]]]
        piv.append(c)
        r += 1
    return [int(v) for v in aug[:, n]]


def _inverse(f, m):
    n = m.shape[0]
    aug = np.concatenate([m, np.eye(n, dtype=np.int64)], axis=1)
    for c in range(n):
        sel = next((i for i in range(c, n) if aug[i, c]), None)
        if sel is None:
            return None
        aug[[c, sel]] = aug[[sel, c]]
        aug[c] = f.mul[f.inv[aug[c, c]], aug[c]]
        for i in range(n):
            if i != c and aug[i, c]:
                aug[i] = f.sub[aug[i], f.mul[aug[i, c], aug[c]]]
    return aug[:, n:]


def _mat_mul(f, a, b):
    n = a.shape[0]
    out = np.zeros((n, b.shape[1]), dtype=np.int64)
    for i in range(n):
        for j in range(b.shape[1]):
            acc = 0
            for k in range(n):
                acc = f.add[acc, f.mul[a[i, k], b[k, j]]]
            out[i, j] = acc
    return out


def _general_position(g: Geometry, pts) -> bool:
    """No four of the points coplanar (and hence no three collinear)."""
    v = g.points[list(pts)]
    for quad in itertools.combinations(range(len(pts)), 4):
        if _solve(g.field, v[list(quad)].T.copy(), np.zeros(4, dtype=np.int64)) is None:
            return False
    return True


def _rank(f, vecs) -> int:
    m = np.array(vecs, dtype=np.int64)
    r = 0
    rows, cols = m.shape
    for c in range(cols):
        sel = next((i for i in range(r, rows) if m[i, c]), None)
        if sel is None:
            continue
        m[[r, sel]] = m[[sel, r]]
        m[r] = f.mul[f.inv[m[r, c]], m[r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = f.sub[m[i], f.mul[m[i, c], m[r]]]
        r += 1
    return r


def _invariants(L: LineClass):
    g = L.g
    x = len(L) // (g.q ** 2 + g.q + 1)
    pw = point_weights(L)
    keys = pattern_keys(L, x)
    ids: dict = {}
    line_key = np.array([ids.setdefault(k, len(ids)) for k in keys], dtype=np.int64)
    return pw, line_key, ids


def equivalent(L1: LineClass, L2: LineClass, max_tests: int = 200000) -> Collineation | None:
    """A collineation mapping L1 onto L2, or None if there is none.

    Backtracks over images of a 5-point frame chosen inside L1's rarest point
    weight classes; a pair of points is mapped only onto a pair whose joining
    line has the same membership and canonical pattern.
    """
    g = L1.g
    if L2.g is not g:
        raise ClassError("classes live in different geometries")
    if len(L1) != len(L2):
        return None
    pw1, lk1, ids1 = _invariants(L1)
    pw2, lk2raw, ids2 = _invariants(L2)
    # align pattern ids between the two classes
    inv2 = {v: k for k, v in ids2.items()}
    lk2 = np.array([ids1.get(inv2[int(v)], -1 - int(v)) for v in lk2raw], dtype=np.int64)
    if sorted(pw1.tolist()) != sorted(pw2.tolist()) or sorted(lk1.tolist()) != sorted(lk2.tolist()):
        return None
    f = g.field
    frob_range = range(f.e) if f.e > 1 else range(1)

    # frame in L1: greedily from rare weights, in general position
    freq = {w: int((pw1 == w).sum()) for w in np.unique(pw1)}
    order = sorted(range(g.num_points), key=lambda p: (freq[int(pw1[p])], p))
    frame: list[int] = []
    for p in order:
        cand = frame + [p]
        if len(cand) <= 4:
            if _rank(f, g.points[cand]) == len(cand):
                frame.append(p)
        elif _general_position(g, cand):
            frame.append(p)
        if len(frame) == 5:
            break
    tests = 0
    line_of = g.line_of

    def extend(images):
        nonlocal tests
        k = len(images)
        if k == 5:
            for fr in frob_range:
                src = frame
                if fr:
                    # x -> M x^sigma: map the frame through sigma first
                    sig = g.point_image(np.eye(4, dtype=np.int64), fr)
                    src = [int(sig[p]) for p in frame]
                mat = _frame_matrix(g, src, images)
                if mat is None:
                    continue
                tests += 1
                if tests > max_tests:
                    raise Inconclusive("test budget exhausted")
                col = collineation(g, mat, fr)
                if np.array_equal(L2.members[col.line_perm], L1.members):
                    return col
            return None
        p = frame[k]
        for c in range(g.num_points):
            if pw2[c] != pw1[p] or c in images:
                continue
            ok = True
            for a, ia in zip(frame[:k], images):
                if lk2[line_of[ia, c]] != lk1[line_of[a, p]]:
                    ok = False
                    break
            if not ok:
                continue
            if k + 1 <= 4:
                if _rank(f, g.points[images + [c]]) != k + 1:
                    continue
            elif not _general_position(g, images + [c]):
                continue
            res = extend(images + [c])
            if res is not None:
                return res
        return None

    return extend([])


def equivalent_up_to_duality(L1: LineClass, L2: LineClass) -> str | None:
    """Which of L2, its dual, its complement or the complement of its dual
    is projectively equivalent to L1 (first match), else None."""
    for name, cand in (("direct", L2), ("dual", dualize(L2)), ("complement", complement(L2)),
                       ("complement-dual", complement(dualize(L2)))):
        if len(cand) == len(L1) and equivalent(L1, cand) is not None:
            return name
    return None


# -- (a,b)-sets --------------------------------------------------------------


@dataclass(frozen=True)
class AbSetParams:
    n: int
    q: int
    eps: int
    delta: int
    a: int
    b: int
    size: int
    total: int
    cl_parameter: int | None


def ab_set_parameters(n: int, q: int, eps: int, delta: int) -> AbSetParams:
    """Necessary parameters of an (a,b)-set in PG(n,q), q an odd square.

    For n = 3 the lines meeting the set in b points form a line class with
    parameter (|O| - a(q^2+1)) / (b - a).
    """
    r = math.isqrt(q)
    if r * r != q or q % 2 == 0:
        raise ClassError(f"q={q} is not an odd square")
    if n < 3:
        raise ClassError("n must be at least 3")
    if eps not in (-1, 1) or delta not in (-1, 1):
        raise ClassError("eps and delta are +1 or -1")
    a2 = q + 1 - r * (1 - eps)
    b2 = q + 1 + r * (1 + eps)
    s2 = 1 + (q**n - 1) // (q - 1) * (q + eps * r) + delta * math.isqrt(q**n)
    if a2 % 2 or b2 % 2 or s2 % 2 or math.isqrt(q**n) ** 2 != q**n:
        raise ClassError("parameters are not integral")
    a, b, size = a2 // 2, b2 // 2, s2 // 2
    total = (q ** (n + 1) - 1) // (q - 1)
    cl = None
    if n == 3:
        num = size - a * (q * q + 1)
        cl = num // (b - a) if num % (b - a) == 0 else None
    return AbSetParams(n, q, eps, delta, a, b, size, total, cl)


# -- file format ------------------------------------------------------------


def write_class(L: LineClass, path, x: int | None = None) -> None:
    x = L.x if x is None else x
    lines = L.lines
    head = f"PGCL v1; n=3; q={L.g.q}; x={x if x is not None else '?'}; count={len(lines)}"
    Path(path).write_text(head + "\n" + "".join(f"{int(l)}\n" for l in lines))


def read_class(path) -> LineClass:
    text = Path(path).read_text().splitlines()
    if not text or not text[0].startswith("PGCL v1"):
        raise ClassError("missing PGCL header")
    fields = dict(part.strip().split("=", 1) for part in text[0].split(";")[1:])
    q = int(fields["q"])
    if int(fields.get("n", 3)) != 3:
        raise ClassError("only n=3 is supported")
    g = build_geometry(3, q)
    lines = [int(s) for s in text[1:] if s.strip()]
    if len(lines) != int(fields["count"]):
        raise ClassError("record count does not match the header")
    L = LineClass.from_lines(g, lines)
    if fields.get("x", "?") != "?":
        L.x = int(fields["x"])
    return L


# -- catalog ----------------------------------------------------------------

CATALOG = {
    # name: (q, x, file)
    "drudge": (3, 5, "q3_x5.pgcl"),
    "R": (5, 12, "q5_x12_R.pgcl"),
    "R+": (5, 13, "q5_x13_Rplus.pgcl"),
}


def empty_planes(L: LineClass) -> np.ndarray:
    return np.nonzero(plane_weights(L) == 0)[0]


def add_empty_plane(L: LineClass) -> LineClass:
    """L together with all lines of its unique plane of weight 0."""
    planes = empty_planes(L)
    if len(planes) != 1:
        raise ClassError(f"expected one plane of weight 0, found {len(planes)}")
    return L | ruling(L.g, int(planes[0]))


def catalog_path(name: str) -> Path:
    if name not in CATALOG:
        raise ClassError(f"unknown catalog entry {name!r}; known: {sorted(CATALOG)}")
    return Path(__file__).with_name("data") / CATALOG[name][2]


def load_catalog(name: str) -> LineClass:
    return read_class(catalog_path(name))
