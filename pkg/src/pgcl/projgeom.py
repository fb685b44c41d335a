"""Incidence model of PG(2,q) and PG(3,q).

Points and planes (hyperplanes) are normalized homogeneous coordinate tuples
(first nonzero entry 1) indexed in lexicographic order.  Lines are indexed by
the lexicographic rank of their sorted point lists, which is the same as the
rank of the pair of their two smallest point indices.

Everything is precomputed into numpy arrays; a :class:`Geometry` is never
mutated after construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .galois import Field, make_field


class GeometryError(ValueError):
    pass


def _normalize_rows(field: Field, vecs: np.ndarray) -> np.ndarray:
    """Scale every nonzero row so that its first nonzero entry is 1."""
    vecs = np.asarray(vecs, dtype=np.int64)
    nz = vecs != 0
    first = np.argmax(nz, axis=1)
    lead = vecs[np.arange(len(vecs)), first]
    scale = field.inv[lead]
    return field.mul[scale[:, None], vecs]


def _matvec(field: Field, mat: np.ndarray, vecs: np.ndarray) -> np.ndarray:
    """Rows of ``vecs`` mapped by x -> mat @ x over the field."""
    dim = mat.shape[0]
    out = np.zeros((len(vecs), dim), dtype=np.int64)
    for k in range(dim):
        acc = np.zeros(len(vecs), dtype=np.int64)
        for j in range(mat.shape[1]):
            acc = field.add[acc, field.mul[mat[k, j], vecs[:, j]]]
        out[:, k] = acc
    return out


def _dot(field: Field, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Bilinear form sum(a_i b_i) broadcast over the leading axes."""
    acc = np.zeros(np.broadcast_shapes(a.shape[:-1], b.shape[:-1]), dtype=np.int64)
    for i in range(a.shape[-1]):
        acc = field.add[acc, field.mul[a[..., i], b[..., i]]]
    return acc


def format_coords(coords) -> str:
    return "(" + ":".join(str(int(c)) for c in coords) + ")"


class Geometry:
    """PG(n, q) for n in {2, 3}.

    Attributes (all numpy arrays):
      points         (P, n+1) normalized coordinates
      line_points    (L, q+1) sorted point indices of every line
      point_lines    (P, r)   lines through each point
      line_of        (P, P)   line through two distinct points (-1 on diagonal)
      point_line     (P, L)   bool incidence
    For n = 3 additionally:
      planes         (P, 4) normalized dual coordinates (same count as points)
      plane_points   (P, q^2+q+1)
      plane_lines    (P, q^2+q+1)
      line_planes    (L, q+1)
      point_plane    (P, P) bool incidence
    For n = 2, ``line_dual`` maps each line to the point index of its dual
    coordinates, so line sets can be handled as point sets of the dual plane.
    """

    def __init__(self, n: int, q: int):
        if n not in (2, 3):
            raise GeometryError(f"unsupported dimension n={n}")
        try:
            field = make_field(q)
        except ValueError as exc:
            raise GeometryError(str(exc)) from exc
        self.n, self.q, self.field = n, q, field
        dim = n + 1
        coords = [c for c in itertools.product(range(q), repeat=dim) if any(c)]
        coords = [c for c in coords if c[next(i for i, v in enumerate(c) if v)] == 1]
        coords.sort()
        self.points = np.array(coords, dtype=np.int64)
        self.num_points = len(coords)
        self._weights = q ** np.arange(dim - 1, -1, -1)
        lookup = np.full(q**dim, -1, dtype=np.int64)
        lookup[self.points @ self._weights] = np.arange(self.num_points)
        self._lookup = lookup
        self._build_lines()
        if n == 3:
            self._build_planes()
        else:
            self._build_plane_duals()
        self._cross_check()

    def __repr__(self) -> str:
        return f"Geometry(n={self.n}, q={self.q})"

    # -- construction ---------------------------------------------------
    def index_of(self, vecs) -> np.ndarray:
        """Point indices of (unnormalized, nonzero) coordinate rows."""
        vecs = np.atleast_2d(np.asarray(vecs, dtype=np.int64))
        if np.any(np.all(vecs == 0, axis=1)):
            raise GeometryError("zero vector is not a projective point")
        return self._lookup[_normalize_rows(self.field, vecs) @ self._weights]

    def _span_points(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        f = self.field
        ts = np.arange(self.q)
        vecs = f.add[a[None, :], f.mul[ts[:, None], b[None, :]]]
        return np.sort(np.concatenate([self.index_of(vecs), self.index_of(b)]))

    def _build_lines(self) -> None:
        P = self.num_points
        line_of = np.full((P, P), -1, dtype=np.int64)
        lines = []
        for i in range(P):
            for j in range(i + 1, P):
                if line_of[i, j] >= 0:
                    continue
                pts = self._span_points(self.points[i], self.points[j])
                lid = len(lines)
                lines.append(pts)
                line_of[np.ix_(pts, pts)] = lid
        # generation order already sorts by the smallest pair (i, j)
        self.line_points = np.array(lines, dtype=np.int64)
        np.fill_diagonal(line_of, -1)
        self.line_of = line_of
        self.num_lines = len(lines)
        inc = np.zeros((P, self.num_lines), dtype=bool)
        inc[self.line_points, np.arange(self.num_lines)[:, None]] = True
        self.point_line = inc
        self.point_lines = np.array([np.nonzero(inc[p])[0] for p in range(P)], dtype=np.int64)

    def _build_planes(self) -> None:
        f = self.field
        P = self.num_points
        self.planes = self.points.copy()
        dots = _dot(f, self.points[:, None, :], self.planes[None, :, :])
        self.point_plane = dots == 0
        self.plane_points = np.array([np.nonzero(self.point_plane[:, h])[0] for h in range(P)])
        lp = self.point_plane[self.line_points[:, 0]] & self.point_plane[self.line_points[:, 1]]
        self.line_plane = lp
        self.line_planes = np.array([np.nonzero(lp[l])[0] for l in range(self.num_lines)])
        self.plane_lines = np.array([np.nonzero(lp[:, h])[0] for h in range(P)])
        self.num_planes = P

    def _build_plane_duals(self) -> None:
        f = self.field
        a = self.points[self.line_points[:, 0]]
        b = self.points[self.line_points[:, 1]]
        # dual coordinates of a line = cross product of two of its points
        cross = np.stack(
            [
                f.sub[f.mul[a[:, 1], b[:, 2]], f.mul[a[:, 2], b[:, 1]]],
                f.sub[f.mul[a[:, 2], b[:, 0]], f.mul[a[:, 0], b[:, 2]]],
                f.sub[f.mul[a[:, 0], b[:, 1]], f.mul[a[:, 1], b[:, 0]]],
            ],
            axis=1,
        )
        self.line_dual = self.index_of(cross)
        dual_line = np.empty_like(self.line_dual)
        dual_line[self.line_dual] = np.arange(self.num_lines)
        self.dual_line = dual_line

    def _cross_check(self) -> None:
        q = self.q
        if self.n == 3:
            expect = (q**4 - 1) // (q - 1), (q**2 + 1) * (q**2 + q + 1)
        else:
            expect = q * q + q + 1, q * q + q + 1
        if (self.num_points, self.num_lines) != expect:
            raise GeometryError("incidence counts are wrong")
        if self.line_points.shape[1] != q + 1:
            raise GeometryError("line size is wrong")
        if self.n == 3:
            if self.plane_points.shape[1] != q * q + q + 1 or self.line_planes.shape[1] != q + 1:
                raise GeometryError("plane incidence is wrong")

    # -- queries ----------------------------------------------------------
    @property
    def lines_per_point(self) -> int:
        return self.point_lines.shape[1]

    def line_through(self, a: int, b: int) -> int:
        if a == b:
            raise GeometryError("need two distinct points")
        return int(self.line_of[a, b])

    def point_label(self, p: int) -> str:
        return format_coords(self.points[p])

    def plane_label(self, h: int) -> str:
        return format_coords(self.planes[h])

    def plane_of_points(self, pts) -> int:
        """The plane spanned by three non-collinear points (n = 3)."""
        mask = np.all(self.point_plane[list(pts)], axis=0)
        hits = np.nonzero(mask)[0]
        if len(hits) != 1:
            raise GeometryError("points do not span a plane")
        return int(hits[0])

    @cached_property
    def meets(self) -> np.ndarray:
        """(L, L) bool: distinct lines sharing a point."""
        inc = self.point_line.astype(np.int32)
        m = (inc.T @ inc) > 0
        np.fill_diagonal(m, False)
        return m

    @cached_property
    def star_masks(self) -> np.ndarray:
        return self.point_line.copy()

    def star(self, p: int) -> np.ndarray:
        return self.point_lines[p]

    def pencil(self, p: int, h: int) -> np.ndarray:
        """Lines through point p inside plane h."""
        if self.n != 3:
            raise GeometryError("pencils need n = 3")
        if not self.point_plane[p, h]:
            raise GeometryError(f"point {p} is not in plane {h}")
        lines = self.point_lines[p]
        return lines[self.line_plane[lines, h]]

    # -- collineations ----------------------------------------------------
    def point_image(self, mat, frob: int = 0) -> np.ndarray:
        """Point permutation of x -> mat @ x^(p^frob)."""
        f = self.field
        mat = np.asarray(mat, dtype=np.int64)
        pts = self.points
        for _ in range(frob % max(f.e, 1) if f.e > 1 else 0):
            pts = f.frob[pts]
        img = self.index_of(_matvec(f, mat, pts))
        if len(np.unique(img)) != self.num_points:
            raise GeometryError("matrix is singular")
        return img

    def line_image(self, point_perm: np.ndarray) -> np.ndarray:
        a = point_perm[self.line_points[:, 0]]
        b = point_perm[self.line_points[:, 1]]
        return self.line_of[a, b]

    def plane_image(self, point_perm: np.ndarray) -> np.ndarray:
        lp = self.plane_points
        out = np.empty(self.num_planes, dtype=np.int64)
        for h in range(self.num_planes):
            out[h] = self.plane_of_points(point_perm[self._plane_frame[h]])
        return out

    @cached_property
    def _plane_frame(self) -> np.ndarray:
        frames = []
        for h in range(self.num_planes):
            pts = self.plane_points[h]
            a, b = pts[0], pts[1]
            line = set(self.line_points[self.line_of[a, b]].tolist())
            c = next(p for p in pts if p not in line)
            frames.append((a, b, c))
        return np.array(frames, dtype=np.int64)


@lru_cache(maxsize=None)
def build_geometry(n: int, q: int) -> Geometry:
    return Geometry(n, q)


@dataclass(frozen=True)
class Polarity:
    """Correlation of PG(3,q) from the form sum(x_i y_i).

    ``point_to_plane[p]`` is the plane with dual coordinates equal to the
    coordinates of ``p`` (hence the identity on indices), and ``line_map`` is
    the induced involution l -> l^perp.
    """

    point_to_plane: np.ndarray
    plane_to_point: np.ndarray
    line_map: np.ndarray


def polarity(g: Geometry) -> Polarity:
    if g.n != 3:
        raise GeometryError("polarity is implemented for PG(3,q)")
    ident = np.arange(g.num_points)
    # l^perp = intersection of the two polar planes of two points of l
    h1 = g.line_points[:, 0]
    h2 = g.line_points[:, 1]
    common = g.point_plane[:, h1] & g.point_plane[:, h2]
    line_map = np.empty(g.num_lines, dtype=np.int64)
    for l in range(g.num_lines):
        pts = np.nonzero(common[:, l])[0]
        line_map[l] = g.line_of[pts[0], pts[1]]
    return Polarity(ident, ident.copy(), line_map)


@dataclass(frozen=True)
class Quotient:
    """PG(3,q)/P realised on the standard PG(2,q).

    ``line_map[i]`` is the PG(3,q) line through P that corresponds to point i
    of the plane; ``plane_map[j]`` is the PG(3,q) plane through P that
    corresponds to line j of the plane.
    """

    point: int
    plane_geometry: Geometry
    line_map: np.ndarray
    plane_map: np.ndarray

    def point_of_line(self) -> dict[int, int]:
        return {int(l): i for i, l in enumerate(self.line_map)}


def _drop_coordinate_map(g: Geometry, lead: int, vecs: np.ndarray) -> np.ndarray:
    keep = [j for j in range(g.n + 1) if j != lead]
    return vecs[:, keep]


def quotient_at_point(g: Geometry, p: int) -> Quotient:
    """Lines on p become points, planes on p become lines of PG(2,q)."""
    if g.n != 3:
        raise GeometryError("quotients are taken in PG(3,q)")
    f = g.field
    pg2 = build_geometry(2, g.q)
    pv = g.points[p]
    lead = int(np.argmax(pv != 0))
    lines = g.point_lines[p]
    # a second point on each line, reduced modulo p so that coordinate `lead` vanishes
    other = np.array(
        [g.line_points[l][g.line_points[l] != p][0] for l in lines], dtype=np.int64
    )
    vecs = g.points[other]
    vecs = f.sub[vecs, f.mul[vecs[:, lead][:, None], pv[None, :]]]
    idx = pg2.index_of(_drop_coordinate_map(g, lead, vecs))
    line_map = np.empty(pg2.num_points, dtype=np.int64)
    line_map[idx] = lines
    planes = np.nonzero(g.point_plane[p])[0]
    duals = _drop_coordinate_map(g, lead, g.planes[planes])
    didx = pg2.dual_line[pg2.index_of(duals)]
    plane_map = np.empty(pg2.num_lines, dtype=np.int64)
    plane_map[didx] = planes
    return Quotient(p, pg2, line_map, plane_map)


@dataclass(frozen=True)
class PlaneChart:
    """Coordinates on a plane h of PG(3,q) taken from the standard PG(2,q).

    ``point_map[i]`` is the PG(3,q) point for point i of PG(2,q), and
    ``line_map[j]`` the PG(3,q) line for line j of PG(2,q).
    """

    plane: int
    plane_geometry: Geometry
    point_map: np.ndarray
    line_map: np.ndarray


def plane_chart(g: Geometry, h: int, basis=None) -> PlaneChart:
    """Chart a plane either by dropping its leading dual coordinate or by an
    explicit basis of three spanning vectors."""
    f = g.field
    pg2 = build_geometry(2, g.q)
    if basis is None:
        dual = g.planes[h]
        lead = int(np.argmax(dual != 0))
        basis = []
        for j in range(4):
            if j == lead:
                continue
            v = np.zeros(4, dtype=np.int64)
            v[j] = 1
            v[lead] = f.neg[dual[j]]
            basis.append(v)
    basis = np.asarray(basis, dtype=np.int64)
    mat = basis.T  # columns are the basis vectors
    vecs = _matvec(f, mat, pg2.points)
    point_map = g.index_of(vecs)
    if not np.all(g.point_plane[point_map, h]):
        raise GeometryError("basis does not span the plane")
    a = point_map[pg2.line_points[:, 0]]
    b = point_map[pg2.line_points[:, 1]]
    line_map = g.line_of[a, b]
    return PlaneChart(h, pg2, point_map, line_map)
