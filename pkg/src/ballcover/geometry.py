"""Voronoi-restricted partition of a polygonal region covered by equal balls.

The region ``A`` is a union of interior-disjoint convex polygons ``A_j``.  For
a configuration of ``m`` balls with common radius ``r`` every polygon is split
by the Voronoi cells of the centers, and each cell piece is intersected with
its owner's ball.  The pieces ``S_ij = A_j ∩ V_i ∩ B(x_i, r)`` partition
``A ∩ Ω``; their circular arcs, merged across interior edges, are the sets of
maximal arcs of ``∂Ω ∩ A`` that the covering formulas consume.

Points are plain ``(x, y)`` tuples.  Indices of balls and polygons are
0-based.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "Arc",
    "ArcBook",
    "Configuration",
    "CurvilinearPolygon",
    "DegenerateConfiguration",
    "DiagnosticsReport",
    "DuplicateCenters",
    "Halfplane",
    "Region",
    "VertexAnnotation",
    "bisector_halfplanes",
    "build_partition",
    "clip_polygon_halfplane",
    "intersect_polygon_ball",
    "piece_area",
    "polygon_area",
    "region_volume",
    "screen_nondegenerate",
    "voronoi_pieces",
]

TWO_PI = 2.0 * math.pi
EPS_GEO_REL = 1e-12
EPS_DEG_REL = 1e-9
ARC_MERGE_TOL = 1e-10

SEGMENT = 0
ARC = 1


class DuplicateCenters(ValueError):
    pass


class DegenerateConfiguration(Warning):
    """Category for degeneracy diagnostics; computations still proceed."""


def polygon_area(vertices: Sequence[tuple]) -> float:
    n = len(vertices)
    s = 0.0
    for k in range(n):
        x0, y0 = vertices[k]
        x1, y1 = vertices[(k + 1) % n]
        s += x0 * y1 - x1 * y0
    return 0.5 * s


def _angle(dx, dy):
    t = math.atan2(dy, dx)
    if t < 0.0:
        t += TWO_PI
        if t >= TWO_PI:
            t = 0.0
    return t


# ---------------------------------------------------------------------------
# Region


@dataclass(frozen=True)
class Region:
    """Union of interior-disjoint convex polygons with counter-clockwise vertices.

    ``boundary_flags[j][k]`` is True when edge ``k`` of polygon ``j`` (from
    vertex ``k`` to ``k+1``) lies on ``∂A`` and False when it is shared with a
    sibling polygon.
    """

    polygons: tuple
    boundary_flags: tuple
    volume: float
    normals: tuple = field(repr=False)
    bbox: tuple = field(repr=False)

    @property
    def diameter(self) -> float:
        x0, y0, x1, y1 = self.bbox
        return math.hypot(x1 - x0, y1 - y0)

    @property
    def eps_geo(self) -> float:
        return EPS_GEO_REL * self.diameter

    @property
    def eps_deg(self) -> float:
        return EPS_DEG_REL * self.diameter

    @classmethod
    def from_polygons(cls, polygons, boundary_flags=None) -> "Region":
        polys = []
        for k, poly in enumerate(polygons):
            pts = [(float(x), float(y)) for x, y in poly]
            pts = [p for i, p in enumerate(pts) if p != pts[i - 1]] if len(pts) > 1 else pts
            if len(pts) < 3:
                raise ValueError(f"polygon {k} has fewer than 3 distinct vertices")
            if polygon_area(pts) < 0:
                if boundary_flags is not None:
                    raise ValueError(f"polygon {k} is clockwise")
                pts.reverse()
            polys.append(pts)

        xs = [x for p in polys for x, _ in p]
        ys = [y for p in polys for _, y in p]
        bbox = (min(xs), min(ys), max(xs), max(ys))
        eps = EPS_GEO_REL * math.hypot(bbox[2] - bbox[0], bbox[3] - bbox[1])

        for k, p in enumerate(polys):
            if polygon_area(p) <= eps * eps:
                raise ValueError(f"polygon {k} has zero area")
            n = len(p)
            for i in range(n):
                (ax, ay), (bx, by), (cx, cy) = p[i - 1], p[i], p[(i + 1) % n]
                cross = (bx - ax) * (cy - by) - (by - ay) * (cx - bx)
                scale = math.hypot(bx - ax, by - ay) * math.hypot(cx - bx, cy - by)
                if cross < -EPS_GEO_REL * 10 * scale:
                    raise ValueError(f"polygon {k} is not convex at vertex {i}")

        if boundary_flags is None:
            polys = _split_t_junctions(polys, eps)
            flags = _detect_boundary_flags(polys, eps)
        else:
            flags = [list(map(bool, f)) for f in boundary_flags]
            if len(flags) != len(polys) or any(len(f) != len(p) for f, p in zip(flags, polys)):
                raise ValueError("boundary_flags shape does not match polygons")
            detected = _detect_boundary_flags(polys, eps)
            for j, (fj, dj) in enumerate(zip(flags, detected)):
                for k, (a, b) in enumerate(zip(fj, dj)):
                    if not a and b:
                        raise ValueError(f"edge {k} of polygon {j} flagged interior but has no twin")

        _check_disjoint(polys, eps)

        normals = []
        for p in polys:
            n = len(p)
            nj = []
            for i in range(n):
                (ax, ay), (bx, by) = p[i], p[(i + 1) % n]
                length = math.hypot(bx - ax, by - ay)
                nj.append(((by - ay) / length, (ax - bx) / length))
            normals.append(tuple(nj))

        volume = math.fsum(polygon_area(p) for p in polys)
        return cls(
            polygons=tuple(tuple(p) for p in polys),
            boundary_flags=tuple(tuple(f) for f in flags),
            volume=volume,
            normals=tuple(normals),
            bbox=bbox,
        )

    # -- JSON -------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "polygons": [[[x, y] for x, y in p] for p in self.polygons],
            "boundary_flags": [list(f) for f in self.boundary_flags],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "Region":
        if "polygons" not in data:
            raise ValueError("region JSON needs a 'polygons' key")
        return cls.from_polygons(data["polygons"], data.get("boundary_flags"))

    @classmethod
    def from_json(cls, text: str) -> "Region":
        return cls.from_dict(json.loads(text))

    def contains(self, x: float, y: float) -> bool:
        for j, p in enumerate(self.polygons):
            inside = True
            for (px, py), (nx, ny) in zip(p, self.normals[j]):
                if nx * (x - px) + ny * (y - py) > 0.0:
                    inside = False
                    break
            if inside:
                return True
        return False


def _split_t_junctions(polys, eps):
    all_pts = [v for p in polys for v in p]
    out = []
    for p in polys:
        n = len(p)
        new = []
        for i in range(n):
            a, b = p[i], p[(i + 1) % n]
            new.append(a)
            dx, dy = b[0] - a[0], b[1] - a[1]
            ll = dx * dx + dy * dy
            inner = []
            for q in all_pts:
                t = ((q[0] - a[0]) * dx + (q[1] - a[1]) * dy) / ll
                if t <= 0.0 or t >= 1.0:
                    continue
                dist = abs((q[0] - a[0]) * dy - (q[1] - a[1]) * dx) / math.sqrt(ll)
                if dist <= eps and math.hypot(q[0] - a[0], q[1] - a[1]) > eps and math.hypot(
                    q[0] - b[0], q[1] - b[1]
                ) > eps:
                    inner.append((t, q))
            for _, q in sorted(set(inner)):
                if math.hypot(q[0] - new[-1][0], q[1] - new[-1][1]) > eps:
                    new.append(q)
        out.append(new)
    return out


def _detect_boundary_flags(polys, eps):
    def close(p, q):
        return abs(p[0] - q[0]) <= eps and abs(p[1] - q[1]) <= eps

    edges = []
    for j, p in enumerate(polys):
        n = len(p)
        for k in range(n):
            edges.append((j, k, p[k], p[(k + 1) % n]))
    flags = [[True] * len(p) for p in polys]
    for j, k, a, b in edges:
        for j2, _, a2, b2 in edges:
            if j2 != j and close(a, b2) and close(b, a2):
                flags[j][k] = False
                break
    return flags


def _check_disjoint(polys, eps):
    boxes = [(min(x for x, _ in p), min(y for _, y in p), max(x for x, _ in p), max(y for _, y in p)) for p in polys]
    for a in range(len(polys)):
        for b in range(a + 1, len(polys)):
            ba, bb = boxes[a], boxes[b]
            if ba[2] <= bb[0] + eps or bb[2] <= ba[0] + eps or ba[3] <= bb[1] + eps or bb[3] <= ba[1] + eps:
                continue
            if not _separated(polys[a], polys[b], eps) and not _separated(polys[b], polys[a], eps):
                raise ValueError(f"polygons {a} and {b} overlap")


def _separated(p, q, eps):
    n = len(p)
    for i in range(n):
        (ax, ay), (bx, by) = p[i], p[(i + 1) % n]
        nx, ny = by - ay, ax - bx
        length = math.hypot(nx, ny)
        if all(nx * (x - ax) + ny * (y - ay) >= -eps * length for x, y in q):
            return True
    return False


def region_volume(region: Region) -> float:
    return math.fsum(polygon_area(p) for p in region.polygons)


# ---------------------------------------------------------------------------
# Configuration


@dataclass(frozen=True)
class Configuration:
    centers: tuple
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "centers", tuple((float(x), float(y)) for x, y in self.centers))
        object.__setattr__(self, "radius", float(self.radius))
        if len(self.centers) < 1:
            raise ValueError("need at least one ball")
        if not self.radius > 0.0:
            raise ValueError("radius must be positive")

    @property
    def m(self) -> int:
        return len(self.centers)

    def to_vector(self) -> np.ndarray:
        return np.array([c for xy in self.centers for c in xy] + [self.radius])

    @classmethod
    def from_vector(cls, z) -> "Configuration":
        z = np.asarray(z, dtype=float)
        m = (len(z) - 1) // 2
        return cls(tuple((z[2 * i], z[2 * i + 1]) for i in range(m)), z[-1])

    def to_dict(self) -> dict:
        return {"centers": [list(c) for c in self.centers], "r": self.radius}

    @classmethod
    def from_dict(cls, data: dict) -> "Configuration":
        r = data["r"] if "r" in data else data["radius"]
        return cls(tuple(tuple(c) for c in data["centers"]), r)


# ---------------------------------------------------------------------------
# Half-planes and clipping


@dataclass(frozen=True)
class Halfplane:
    """``{y : normal · (y - point) >= 0}``; ``tag`` labels the edges it creates."""

    point: tuple
    normal: tuple
    tag: object = None

    def contains(self, y, tol=0.0) -> bool:
        return self.normal[0] * (y[0] - self.point[0]) + self.normal[1] * (y[1] - self.point[1]) >= -tol


def _bisector(a, b, tag=None):
    nx, ny = a[0] - b[0], a[1] - b[1]
    length = math.hypot(nx, ny)
    if length == 0.0:
        raise DuplicateCenters(f"coincident centers at {tuple(a)}")
    return Halfplane((0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])), (nx / length, ny / length), tag)


def bisector_halfplanes(centers, i: int, eps: float = 0.0) -> list:
    """Half-planes whose intersection is the Voronoi cell of ``centers[i]``.

    Delaunay neighbors are used when ``m >= 3``; all pairs are used otherwise
    or when the triangulation fails (collinear or cocircular input).
    """
    pts = [tuple(map(float, c)) for c in centers]
    m = len(pts)
    xi = pts[i]
    for k, c in enumerate(pts):
        if k != i and math.hypot(c[0] - xi[0], c[1] - xi[1]) <= eps:
            raise DuplicateCenters(f"centers {i} and {k} coincide")
    if m == 1:
        return []
    neighbors = None
    if m >= 3:
        try:
            from scipy.spatial import Delaunay, QhullError

            tri = Delaunay(np.asarray(pts))
            if len(tri.coplanar) == 0:
                indptr, indices = tri.vertex_neighbor_vertices
                neighbors = sorted(int(k) for k in indices[indptr[i] : indptr[i + 1]])
        except (QhullError, ValueError):
            neighbors = None
    if neighbors is None:
        neighbors = [k for k in range(m) if k != i]
    return [_bisector(xi, pts[k], k) for k in neighbors]


class _Poly:
    """Convex polygon with a provenance tag per edge (edge k runs v[k] -> v[k+1])."""

    __slots__ = ("v", "tags")

    def __init__(self, v, tags):
        self.v = v
        self.tags = tags


def _clip(poly: _Poly, hp: Halfplane, eps: float) -> Optional[_Poly]:
    px, py = hp.point
    nx, ny = hp.normal
    v = poly.v
    n = len(v)
    d = [nx * (x - px) + ny * (y - py) for x, y in v]
    if min(d) >= -eps:
        return poly
    if max(d) <= eps:
        return None
    out_v = []
    out_t = []
    tags = poly.tags
    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        dp, dq = d[k], d[k1]
        p = v[k]
        p_in = dp >= -eps
        q_in = dq >= -eps
        if p_in:
            out_v.append(p)
            if q_in:
                out_t.append(tags[k])
            else:
                out_t.append(tags[k] if dp > eps else hp.tag)
                if dp > eps:
                    s = dp / (dp - dq)
                    q = v[k1]
                    out_v.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
                    out_t.append(hp.tag)
        elif q_in:
            if dq > eps:
                s = dp / (dp - dq)
                q = v[k1]
                out_v.append((p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])))
                out_t.append(tags[k])
    if len(out_v) < 3:
        return None
    res = _Poly(out_v, out_t)
    if polygon_area(out_v) <= eps * eps:
        return None
    return res


def clip_polygon_halfplane(poly, hp: Halfplane, eps: float = 0.0):
    """Sutherland-Hodgman step: ``poly ∩ hp`` as a CCW vertex list, or ``None`` if empty."""
    res = _clip(_Poly(list(poly), [None] * len(poly)), hp, eps)
    return None if res is None else res.v


# ---------------------------------------------------------------------------
# Curvilinear polygons


@dataclass(frozen=True, slots=True)
class VertexAnnotation:
    on_boundary_A: bool
    nu_A: Optional[tuple]
    L: tuple
    theta: float
    vartheta: tuple = ()
    degenerate: bool = False

    @property
    def mergeable(self) -> bool:
        return not self.on_boundary_A and not self.L


@dataclass(frozen=True)
class CurvilinearPolygon:
    """Piece ``S_ij``; ``cycle[k] = (vertex, kind, annotation)`` where ``kind``
    describes the boundary from ``vertex`` to the next one (SEGMENT or ARC).
    Annotations are attached to arc endpoints and are ``None`` elsewhere."""

    owner: tuple
    cycle: tuple
    is_full_ball: bool = False


@dataclass(frozen=True, slots=True)
class Arc:
    v: tuple
    w: tuple
    theta_v: float
    theta_w: float
    ann_v: Optional[VertexAnnotation]
    ann_w: Optional[VertexAnnotation]


def _annotate(z, tag, region, cfg, i, adjacent=None):
    xi = cfg.centers[i]
    theta = _angle(z[0] - xi[0], z[1] - xi[1])
    on_a = False
    nu = None
    L = []
    degenerate = False
    for t in (tag,) if adjacent is None else (tag, adjacent):
        if t is None:
            continue
        if t[0] == "A":
            _, j, k = t
            if region.boundary_flags[j][k]:
                if on_a and nu != region.normals[j][k]:
                    nu = None
                    degenerate = True
                elif not on_a:
                    nu = region.normals[j][k]
                on_a = True
            elif adjacent is not None:
                degenerate = True
        elif t[1] not in L:
            L.append(t[1])
    if adjacent is not None:
        degenerate = True
    if on_a and L:
        degenerate = True
    L = tuple(sorted(L))
    vartheta = tuple(
        _angle(z[0] - cfg.centers[ell][0], z[1] - cfg.centers[ell][1]) for ell in L
    )
    return VertexAnnotation(on_a, nu, L, theta, vartheta, degenerate)


def _segment_circle(p, q, cx, cy, r2):
    dx, dy = q[0] - p[0], q[1] - p[1]
    fx, fy = p[0] - cx, p[1] - cy
    a = dx * dx + dy * dy
    b = fx * dx + fy * dy
    c = fx * fx + fy * fy - r2
    disc = b * b - a * c
    if disc <= 0.0 or a == 0.0:
        return None
    sq = math.sqrt(disc)
    # numerically stable pair of roots of a s^2 + 2 b s + c = 0
    if b >= 0.0:
        qq = -(b + sq)
        s1, s2 = qq / a, (c / qq if qq != 0.0 else -qq / a)
    else:
        qq = -b + sq
        s1, s2 = c / qq, qq / a
    if s1 > s2:
        s1, s2 = s2, s1
    return s1, s2


def _point_on(p, q, s):
    return (p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1]))


def _ball_piece(W: _Poly, cfg, i, region, eps):
    """Intersection of a tagged convex polygon with the closed ball of ``i``.

    Walks the edges once, emitting segment/arc markers per inclusion case.
    Returns ``(cycle, full)`` where ``cycle`` is a list of
    ``(point, kind, annotation)`` or None when the intersection is empty.
    """
    cx, cy = cfg.centers[i]
    r = cfg.radius
    r2 = r * r
    v = W.v
    tags = W.tags
    n = len(v)
    inside = [(x - cx) * (x - cx) + (y - cy) * (y - cy) <= r2 for x, y in v]
    if all(inside):
        return [(p, SEGMENT, None) for p in v], False
    S = []

    def emit_cross(k, s, kind):
        p, q = v[k], v[k + 1 if k + 1 < n else 0]
        z = _point_on(p, q, s)
        length = math.hypot(q[0] - p[0], q[1] - p[1])
        adjacent = None
        if s * length <= eps:
            adjacent = tags[k - 1]
        elif (1.0 - s) * length <= eps:
            adjacent = tags[k + 1 if k + 1 < n else 0]
        S.append((z, kind, _annotate(z, tags[k], region, cfg, i, adjacent)))

    for k in range(n):
        k1 = k + 1 if k + 1 < n else 0
        p, q = v[k], v[k1]
        p_in, q_in = inside[k], inside[k1]
        if p_in and q_in:
            S.append((p, SEGMENT, None))
        elif p_in:
            roots = _segment_circle(p, q, cx, cy, r2)
            s = min(max(roots[1], 0.0), 1.0) if roots else 0.0
            if (p[0] - cx) ** 2 + (p[1] - cy) ** 2 < r2:
                S.append((p, SEGMENT, None))
            emit_cross(k, s, ARC)
        elif q_in:
            roots = _segment_circle(p, q, cx, cy, r2)
            s = min(max(roots[0], 0.0), 1.0) if roots else 1.0
            emit_cross(k, s, SEGMENT)
        else:
            roots = _segment_circle(p, q, cx, cy, r2)
            if roots and 0.0 < roots[0] < roots[1] < 1.0:
                emit_cross(k, roots[0], SEGMENT)
                emit_cross(k, roots[1], ARC)
    if S:
        return S, False
    # no vertex emitted: the ball is either inside W or disjoint from it
    for (x, y), t in zip(v, range(n)):
        x1, y1 = v[t + 1 if t + 1 < n else 0]
        if (x1 - x) * (cy - y) - (y1 - y) * (cx - x) < 0.0:
            return None, False
    top = (cx, cy + r)
    ann = VertexAnnotation(False, None, (), 0.5 * math.pi)
    return [(top, ARC, ann)], True


def intersect_polygon_ball(W, center, r: float):
    """Curvilinear polygon ``W ∩ closed ball`` for a CCW convex vertex list ``W``.

    Returns a :class:`CurvilinearPolygon` (owner ``(0, 0)``) or ``None`` when
    the intersection is empty.  Annotations treat every edge of ``W`` as part
    of ``∂A``.
    """
    W = [tuple(map(float, p)) for p in W]
    region = Region.from_polygons([W])
    cfg = Configuration((center,), r)
    poly = _Poly(W, [("A", 0, k) for k in range(len(W))])
    cycle, full = _ball_piece(poly, cfg, 0, region, region.eps_geo)
    if cycle is None:
        return None
    return CurvilinearPolygon((0, 0), tuple(cycle), full)


def piece_area(piece: CurvilinearPolygon, center, r: float) -> float:
    """Area enclosed by a curvilinear polygon (Green's theorem, ``∮ x dy``)."""
    if piece.is_full_ball:
        return math.pi * r * r
    cyc = piece.cycle
    n = len(cyc)
    total = 0.0
    for k in range(n):
        v, kind, _ = cyc[k]
        w = cyc[(k + 1) % n][0]
        if kind == SEGMENT:
            total += 0.5 * (v[0] + w[0]) * (w[1] - v[1])
        else:
            tv = _angle(v[0] - center[0], v[1] - center[1])
            tw = _angle(w[0] - center[0], w[1] - center[1])
            if tw <= tv:
                tw += TWO_PI
            total += _arc_green(center[0], r, tv, tw)
    return total


def _arc_green(cx, r, tv, tw):
    sv, cv = math.sin(tv), math.cos(tv)
    sw, cw = math.sin(tw), math.cos(tw)
    return cx * r * (sw - sv) + 0.5 * r * r * (tw - tv + sw * cw - sv * cv)


# ---------------------------------------------------------------------------
# Partition


@dataclass
class ArcBook:
    """Per-ball merged arcs and edges of the Voronoi-restricted partition."""

    arcs: list
    circle: list
    edges: list
    K: list
    K_A: list
    K_B: list
    degenerate_points: int = 0
    unmatched_merges: int = 0

    @property
    def m(self) -> int:
        return len(self.arcs)


def _neighbor_pairs(centers: np.ndarray, reach: float):
    m = len(centers)
    if m < 2:
        return [[] for _ in range(m)]
    if m <= 96:
        diff = centers[:, None, :] - centers[None, :, :]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        ii, ll = np.nonzero(dist < reach)
        pairs = [(a, b) for a, b in zip(ii.tolist(), ll.tolist()) if a < b]
    else:
        from scipy.spatial import cKDTree

        pairs = cKDTree(centers).query_pairs(reach, output_type="ndarray").tolist()
    nbrs = [[] for _ in range(m)]
    for a, b in pairs:
        nbrs[a].append(b)
        nbrs[b].append(a)
    return nbrs


def _candidate_polygons(region: Region, centers: np.ndarray, r: float):
    boxes = np.array(
        [[min(x for x, _ in p), min(y for _, y in p), max(x for x, _ in p), max(y for _, y in p)] for p in region.polygons]
    )
    hit = (
        (centers[:, 0:1] + r >= boxes[None, :, 0])
        & (centers[:, 0:1] - r <= boxes[None, :, 2])
        & (centers[:, 1:2] + r >= boxes[None, :, 1])
        & (centers[:, 1:2] - r <= boxes[None, :, 3])
    )
    return [np.nonzero(row)[0].tolist() for row in hit]


def _polygon_ball_distance_ok(poly, normals, cx, cy, r):
    for (px, py), (nx, ny) in zip(poly, normals):
        if nx * (cx - px) + ny * (cy - py) > r:
            return False
    return True


def _cell_halfplanes(cfg: Configuration, i: int, nbrs):
    xi = cfg.centers[i]
    return [_bisector(xi, cfg.centers[ell], ("V", ell)) for ell in nbrs]


def build_partition(region: Region, cfg: Configuration):
    """Pieces ``S_ij`` and the merged arc book for ``(region, cfg)``.

    Only bisectors with centers closer than ``2r`` are applied: a farther
    neighbor's half-plane contains the whole ball, so it cannot change
    ``V_i ∩ B(x_i, r)``.
    """
    eps = region.eps_geo
    m = cfg.m
    r = cfg.radius
    centers = np.asarray(cfg.centers, dtype=float)
    nbrs = _neighbor_pairs(centers, 2.0 * r * (1.0 + 1e-12))
    cands = _candidate_polygons(region, centers, r)

    pieces = []
    raw_arcs = [[] for _ in range(m)]
    edges = [[] for _ in range(m)]
    full = [False] * m
    K_A = [[] for _ in region.polygons]
    K_B = [[] for _ in range(m)]
    K = []
    degenerate_points = 0
    for i in range(m):
        cx, cy = cfg.centers[i]
        hps = None
        for j in cands[i]:
            poly = region.polygons[j]
            if not _polygon_ball_distance_ok(poly, region.normals[j], cx, cy, r):
                continue
            if hps is None:
                hps = _cell_halfplanes(cfg, i, nbrs[i])
            W = _Poly(list(poly), [("A", j, k) for k in range(len(poly))])
            for hp in hps:
                W = _clip(W, hp, eps)
                if W is None:
                    break
            if W is None:
                continue
            cycle, is_full = _ball_piece(W, cfg, i, region, eps)
            if cycle is None:
                continue
            piece = CurvilinearPolygon((i, j), tuple(cycle), is_full)
            pieces.append(piece)
            K.append((i, j))
            K_A[j].append(i)
            K_B[i].append(j)
            if is_full:
                full[i] = True
                continue
            n = len(cycle)
            for k in range(n):
                z, kind, ann = cycle[k]
                z2, _, ann2 = cycle[(k + 1) % n]
                if kind == SEGMENT:
                    edges[i].append((z, z2))
                else:
                    if ann is None or ann2 is None:
                        degenerate_points += 1
                        ann = ann or _annotate(z, None, region, cfg, i)
                        ann2 = ann2 or _annotate(z2, None, region, cfg, i)
                    tv, tw = ann.theta, ann2.theta
                    if tw <= tv:
                        tw += TWO_PI
                    raw_arcs[i].append(Arc(z, z2, tv, tw, ann, ann2))
            for _, kind, ann in cycle:
                if ann is not None and ann.degenerate:
                    degenerate_points += 1

    arcs = []
    circle = []
    unmatched = 0
    for i in range(m):
        if full[i]:
            arcs.append([])
            circle.append(True)
            continue
        merged, is_circle, miss = _merge_arcs(raw_arcs[i])
        unmatched += miss
        arcs.append([] if is_circle else merged)
        circle.append(is_circle)
    book = ArcBook(arcs, circle, edges, K, K_A, K_B, degenerate_points, unmatched)
    return pieces, book


def _merge_arcs(arcs):
    """Chain arcs that meet at an endpoint lying on an interior edge."""
    if not arcs:
        return [], False, 0
    n = len(arcs)
    succ = [None] * n
    has_pred = [False] * n
    for a in range(n):
        if not arcs[a].ann_w.mergeable:
            continue
        tw = arcs[a].theta_w % TWO_PI
        for b in range(n):
            if b == a or has_pred[b] or not arcs[b].ann_v.mergeable:
                continue
            d = abs(arcs[b].theta_v - tw)
            if min(d, TWO_PI - d) <= ARC_MERGE_TOL:
                succ[a] = b
                has_pred[b] = True
                break
    unmatched = sum(1 for a in range(n) if arcs[a].ann_w.mergeable and succ[a] is None)
    unmatched += sum(1 for b in range(n) if arcs[b].ann_v.mergeable and not has_pred[b])
    merged = []
    seen = [False] * n
    for a in range(n):
        if has_pred[a] or seen[a]:
            continue
        span = 0.0
        b = a
        last = a
        while b is not None and not seen[b]:
            seen[b] = True
            span += arcs[b].theta_w - arcs[b].theta_v
            last = b
            b = succ[b]
        first = arcs[a]
        end = arcs[last]
        merged.append(Arc(first.v, end.w, first.theta_v, first.theta_v + span, first.ann_v, end.ann_w))
    if all(seen):
        return merged, False, unmatched
    # remaining arcs form closed chains: the whole circle lies on ∂Ω ∩ A
    rest = [a for a in range(n) if not seen[a]]
    if len(rest) == n:
        return [], True, unmatched
    # a closed chain next to open arcs cannot happen for one circle; keep pieces
    for a in rest:
        merged.append(arcs[a])
    return merged, False, unmatched + len(rest)


def voronoi_pieces(region: Region, centers) -> list:
    """Vertex lists of ``W_ij = A_j ∩ V_i`` for all non-empty pairs, as ``((i, j), vertices)``."""
    eps = region.eps_geo
    out = []
    for i in range(len(centers)):
        hps = bisector_halfplanes(centers, i)
        for j, poly in enumerate(region.polygons):
            W = _Poly(list(poly), [None] * len(poly))
            for hp in hps:
                W = _clip(W, hp, eps)
                if W is None:
                    break
            if W is not None:
                out.append(((i, j), W.v))
    return out


# ---------------------------------------------------------------------------
# Degeneracy screening


@dataclass
class DiagnosticsReport:
    tangency_margin: float
    min_center_distance: float
    transversality_margin: float
    triple_count: int
    near_vertex_count: int
    boundary_tangency_margin: float
    ok: bool
    messages: list = field(default_factory=list)
    vertex_margin: float = math.inf

    def to_dict(self) -> dict:
        return {
            "tangency_margin": self.tangency_margin,
            "min_center_distance": self.min_center_distance,
            "transversality_margin": self.transversality_margin,
            "triple_count": self.triple_count,
            "near_vertex_count": self.near_vertex_count,
            "boundary_tangency_margin": self.boundary_tangency_margin,
            "vertex_margin": self.vertex_margin,
            "ok": self.ok,
            "messages": list(self.messages),
        }


def _circle_pair_points(a, b, r):
    dx, dy = b[0] - a[0], b[1] - a[1]
    d = math.hypot(dx, dy)
    if d == 0.0 or d > 2.0 * r:
        return []
    h = math.sqrt(max(r * r - 0.25 * d * d, 0.0))
    mx, my = a[0] + 0.5 * dx, a[1] + 0.5 * dy
    ux, uy = -dy / d, dx / d
    return [(mx + h * ux, my + h * uy), (mx - h * ux, my - h * uy)]


def screen_nondegenerate(region: Region, cfg: Configuration, book: Optional[ArcBook] = None) -> DiagnosticsReport:
    """Distances of ``(region, cfg)`` from the degenerate set.

    Length margins are compared with ``eps_deg`` (relative to the region
    size); the transversality margin ``|τ_i · ν_{-i}|`` is dimensionless and
    compared with the relative factor alone.
    """
    eps_deg = region.eps_deg
    r = cfg.radius
    pts = cfg.centers
    m = cfg.m
    msgs = []
    tangency = math.inf
    min_dist = math.inf
    for a in range(m):
        for b in range(a + 1, m):
            d = math.hypot(pts[b][0] - pts[a][0], pts[b][1] - pts[a][1])
            min_dist = min(min_dist, d)
            tangency = min(tangency, abs(d - 2.0 * r))
    if min_dist <= eps_deg:
        msgs.append("coincident centers")
    if tangency <= eps_deg:
        msgs.append("tangent balls")

    triples = []
    for a in range(m):
        for b in range(a + 1, m):
            for z in _circle_pair_points(pts[a], pts[b], r):
                for c in range(m):
                    if c in (a, b):
                        continue
                    if abs(math.hypot(z[0] - pts[c][0], z[1] - pts[c][1]) - r) <= eps_deg:
                        key = frozenset((a, b, c))
                        if not any(k == key and math.hypot(z[0] - q[0], z[1] - q[1]) <= 1e3 * eps_deg for k, q in triples):
                            triples.append((key, z))
    if triples:
        msgs.append(f"{len(triples)} near-triple circle intersection(s)")

    if book is None:
        _, book = build_partition(region, cfg)
    trans = math.inf
    for i in range(m):
        for arc in book.arcs[i]:
            for ann in (arc.ann_v, arc.ann_w):
                th = ann.theta
                tx, ty = -math.sin(th), math.cos(th)
                if ann.nu_A is not None:
                    trans = min(trans, abs(ann.nu_A[0] * tx + ann.nu_A[1] * ty))
                for vt in ann.vartheta:
                    trans = min(trans, abs(math.sin(vt - th)))
    if trans <= EPS_DEG_REL:
        msgs.append("non-transversal arc endpoint")
    near_vertex = book.degenerate_points
    if near_vertex:
        msgs.append(f"{near_vertex} arc endpoint(s) at a polygon vertex or multiple contact")
    if book.unmatched_merges:
        msgs.append(f"{book.unmatched_merges} arc endpoint(s) without a merge partner")

    btang = math.inf
    for i, (cx, cy) in enumerate(pts):
        for j, poly in enumerate(region.polygons):
            n = len(poly)
            for k in range(n):
                if not region.boundary_flags[j][k]:
                    continue
                (ax, ay), (bx, by) = poly[k], poly[(k + 1) % n]
                dx, dy = bx - ax, by - ay
                ll = dx * dx + dy * dy
                t = ((cx - ax) * dx + (cy - ay) * dy) / ll
                if 0.0 < t < 1.0:
                    dist = abs((cx - ax) * dy - (cy - ay) * dx) / math.sqrt(ll)
                    btang = min(btang, abs(dist - r))
    if btang <= eps_deg:
        msgs.append("ball tangent to the region boundary")

    # circles through a corner of ∂A: the arc endpoint leaves its edge there
    corners = {
        poly[k]
        for poly, flags in zip(region.polygons, region.boundary_flags)
        for k in range(len(poly))
        if flags[k] or flags[k - 1]
    }
    vmargin = math.inf
    if corners:
        cp = np.array(sorted(corners))
        for cx, cy in pts:
            vmargin = min(vmargin, float(np.abs(np.hypot(cp[:, 0] - cx, cp[:, 1] - cy) - r).min()))

    ok = (
        min_dist > eps_deg
        and tangency > eps_deg
        and not triples
        and trans > EPS_DEG_REL
        and near_vertex == 0
        and book.unmatched_merges == 0
        and btang > eps_deg
    )
    return DiagnosticsReport(tangency, min_dist, trans, len(triples), near_vertex, btang, ok, msgs, vmargin)
