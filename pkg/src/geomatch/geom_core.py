"""Exact planar geometry primitives for non-crossing matchings.

All coordinates are rational (`fractions.Fraction`); every predicate is
decided by the sign of an integer determinant, so there is no tolerance
anywhere.  A :class:`PointSet` caches its coordinates scaled to a common
integer grid, which keeps the hot predicates in (arbitrary-precision)
integer arithmetic instead of `Fraction` arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    CollinearTriple,
    DuplicatePoint,
    GeomatchError,
    MismatchedVertexSet,
    NotConvexPosition,
    TooFewPoints,
)

#: The exact scalar type used for all coordinates.
Scalar = Fraction

Coord = tuple[Fraction, Fraction]


def as_scalar(value) -> Fraction:
    """Coerce ints, strings like ``"3/4"`` and Fractions to the Scalar type."""
    return value if isinstance(value, Fraction) else Fraction(value)


def sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------------------
# low-level predicates on raw coordinates


def orient(ax, ay, bx, by, cx, cy) -> int:
    """Sign of the signed area of triangle abc.

    +1 when c lies to the left of the directed line a->b (counter-clockwise
    turn), -1 to the right, 0 when the three points are collinear.  Works on
    any exact numeric type (int or Fraction).
    """
    return sign((bx - ax) * (cy - ay) - (by - ay) * (cx - ax))


def _on_bbox(px, py, qx, qy, rx, ry) -> bool:
    """Whether r lies inside the closed bounding box of segment pq."""
    return (
        min(px, qx) <= rx <= max(px, qx)
        and min(py, qy) <= ry <= max(py, qy)
    )


def segments_cross_coords(p: Coord, q: Coord, r: Coord, s: Coord) -> bool:
    """Whether closed segments pq and rs share a point other than a common endpoint.

    Endpoints are coordinate pairs.  Touching at a point that is an endpoint
    of *both* segments does not count as a crossing; any other shared point
    (proper crossing, T-contact, collinear overlap) does.
    """
    px, py = p
    qx, qy = q
    rx, ry = r
    sx, sy = s
    d1 = orient(rx, ry, sx, sy, px, py)
    d2 = orient(rx, ry, sx, sy, qx, qy)
    d3 = orient(px, py, qx, qy, rx, ry)
    d4 = orient(px, py, qx, qy, sx, sy)
    if d1 * d2 < 0 and d3 * d4 < 0:
        return True  # proper interior crossing
    touch = set()
    if d1 == 0 and _on_bbox(rx, ry, sx, sy, px, py):
        touch.add((px, py))
    if d2 == 0 and _on_bbox(rx, ry, sx, sy, qx, qy):
        touch.add((qx, qy))
    if d3 == 0 and _on_bbox(px, py, qx, qy, rx, ry):
        touch.add((rx, ry))
    if d4 == 0 and _on_bbox(px, py, qx, qy, sx, sy):
        touch.add((sx, sy))
    if not touch:
        return False
    if len(touch) == 1:
        z = touch.pop()
        return not (z in ((px, py), (qx, qy)) and z in ((rx, ry), (sx, sy)))
    # Two or more touch points: a collinear overlap of positive length.
    return True


# ---------------------------------------------------------------------------
# core value types


@dataclass(frozen=True)
class Point:
    """A labelled point with exact rational coordinates."""

    x: Fraction
    y: Fraction
    id: int

    def __post_init__(self):
        object.__setattr__(self, "x", as_scalar(self.x))
        object.__setattr__(self, "y", as_scalar(self.y))

    @property
    def coord(self) -> Coord:
        return (self.x, self.y)


@dataclass(frozen=True, order=True)
class Segment:
    """An unordered pair of point ids, stored with ``a < b``."""

    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise GeomatchError(f"segment joins point {self.a} to itself")
        if self.a > self.b:
            a, b = self.a, self.b
            object.__setattr__(self, "a", b)
            object.__setattr__(self, "b", a)

    @property
    def ids(self) -> tuple[int, int]:
        return (self.a, self.b)

    def other(self, i: int) -> int:
        if i == self.a:
            return self.b
        if i == self.b:
            return self.a
        raise KeyError(i)


def orientation_test(p: Point, q: Point, r: Point) -> int:
    """Orientation of the ordered triple (p, q, r); see :func:`orient`."""
    return orient(p.x, p.y, q.x, q.y, r.x, r.y)


class PointSet:
    """An immutable ordered list of points with dense ids 0..n-1.

    Coordinates may repeat denominators arbitrarily; internally the set is
    rescaled once to a common integer grid so that all predicates run on
    plain integers.  Rescaling is a similarity transform, so it changes no
    orientation sign, crossing, hull or x-order.
    """

    __slots__ = ("points", "_ix", "_iy", "_scale", "_hash")

    def __init__(self, points: Sequence[Point]):
        pts = tuple(points)
        seen: dict[Coord, int] = {}
        for idx, p in enumerate(pts):
            if p.id != idx:
                raise GeomatchError(
                    f"point ids must be dense 0..n-1 (found id {p.id} at index {idx})"
                )
            prev = seen.get(p.coord)
            if prev is not None:
                raise DuplicatePoint(prev, idx)
            seen[p.coord] = idx
        self.points = pts
        dens = [p.x.denominator for p in pts] + [p.y.denominator for p in pts]
        scale = math.lcm(*dens) if dens else 1
        self._scale = scale
        self._ix = [int(p.x * scale) for p in pts]
        self._iy = [int(p.y * scale) for p in pts]
        self._hash = hash(tuple((p.x, p.y) for p in pts))

    @classmethod
    def from_coords(cls, coords: Iterable[tuple]) -> "PointSet":
        return cls([Point(as_scalar(x), as_scalar(y), i) for i, (x, y) in enumerate(coords)])

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, PointSet):
            return NotImplemented
        return [p.coord for p in self.points] == [p.coord for p in other.points]

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"PointSet({len(self.points)} points)"

    @property
    def ids(self) -> range:
        return range(len(self.points))

    def coord(self, i: int) -> Coord:
        return self.points[i].coord

    # -- integer fast paths -------------------------------------------------

    def scaled(self, i: int) -> tuple[int, int]:
        return self._ix[i], self._iy[i]

    def orient_ids(self, i: int, j: int, k: int) -> int:
        ix, iy = self._ix, self._iy
        return sign(
            (ix[j] - ix[i]) * (iy[k] - iy[i]) - (iy[j] - iy[i]) * (ix[k] - ix[i])
        )

    def segments_cross_ids(self, a: int, b: int, c: int, d: int) -> bool:
        """Fast exact crossing test between segments (a,b) and (c,d) by id."""
        if a == c or a == d or b == c or b == d:
            if {a, b} == {c, d}:
                return True  # identical segments overlap everywhere
            # Sharing exactly one endpoint: a crossing would need a collinear
            # overlap, i.e. three collinear input points.
            shared = a if a in (c, d) else b
            e1 = b if shared == a else a
            e2 = d if shared == c else c
            if self.orient_ids(shared, e1, e2) != 0:
                return False
            ix, iy = self._ix, self._iy
            # Collinear: overlap iff e1 and e2 lie on the same side of shared.
            dot = (ix[e1] - ix[shared]) * (ix[e2] - ix[shared]) + (
                iy[e1] - iy[shared]
            ) * (iy[e2] - iy[shared])
            return dot > 0
        ix, iy = self._ix, self._iy
        return segments_cross_coords(
            (ix[a], iy[a]), (ix[b], iy[b]), (ix[c], iy[c]), (ix[d], iy[d])
        )

    def _edge_boxes(self, edges: Sequence[Segment]):
        ix, iy = self._ix, self._iy
        out = []
        for s in edges:
            xa, xb = ix[s.a], ix[s.b]
            ya, yb = iy[s.a], iy[s.b]
            if xa > xb:
                xa, xb = xb, xa
            if ya > yb:
                ya, yb = yb, ya
            out.append((xa, xb, ya, yb, s))
        return out

    def first_crossing_within(self, edges: Iterable[Segment]):
        """Return a crossing pair among ``edges`` or None (bbox-prefiltered)."""
        boxes = self._edge_boxes(list(edges))
        for i in range(len(boxes)):
            xa1, xb1, ya1, yb1, s1 = boxes[i]
            for j in range(i + 1, len(boxes)):
                xa2, xb2, ya2, yb2, s2 = boxes[j]
                if xb1 < xa2 or xb2 < xa1 or yb1 < ya2 or yb2 < ya1:
                    continue
                if self.segments_cross_ids(s1.a, s1.b, s2.a, s2.b):
                    return s1, s2
        return None

    def first_crossing_between(self, edges1: Iterable[Segment], edges2: Iterable[Segment]):
        """Return a crossing pair (e1, e2) with e1 in edges1, e2 in edges2, or None.

        Identical segments are skipped (an edge shared by both sides occurs
        once in the union and cannot cross itself).
        """
        boxes1 = self._edge_boxes(list(edges1))
        boxes2 = self._edge_boxes(list(edges2))
        for xa1, xb1, ya1, yb1, s1 in boxes1:
            for xa2, xb2, ya2, yb2, s2 in boxes2:
                if s1 == s2:
                    continue
                if xb1 < xa2 or xb2 < xa1 or yb1 < ya2 or yb2 < ya1:
                    continue
                if self.segments_cross_ids(s1.a, s1.b, s2.a, s2.b):
                    return s1, s2
        return None


def segments_cross(ps: PointSet, s: Segment, t: Segment) -> bool:
    """Whether segments s and t of ``ps`` share a point besides a common endpoint."""
    return ps.segments_cross_ids(s.a, s.b, t.a, t.b)


class Matching:
    """A set of pairwise non-crossing segments, each point in at most one.

    Instances are immutable and hashable.  Construction validates the degree
    condition and (by default) the non-crossing invariant; internal callers
    that build edge sets which are non-crossing by construction may pass
    ``check=False``.
    """

    __slots__ = ("base", "edges", "_hash")

    def __init__(self, base: PointSet, edges: Iterable[Segment], check: bool = True):
        self.base = base
        self.edges = frozenset(edges)
        n = len(base)
        used: set[int] = set()
        for s in self.edges:
            if not (0 <= s.a < n and 0 <= s.b < n):
                raise GeomatchError(f"segment {s} references a point outside the set")
            if s.a in used or s.b in used:
                raise GeomatchError(f"point reused by segment {s}")
            used.add(s.a)
            used.add(s.b)
        if check:
            pair = base.first_crossing_within(self.edges)
            if pair is not None:
                raise GeomatchError(f"edges {pair[0]} and {pair[1]} cross")
        self._hash = hash((base._hash, self.edges))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matching):
            return NotImplemented
        return self.edges == other.edges and self.base == other.base

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"Matching({len(self.edges)} edges on {len(self.base)} points)"

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def matched_ids(self) -> frozenset[int]:
        return frozenset(i for s in self.edges for i in s.ids)

    @property
    def is_perfect(self) -> bool:
        return 2 * len(self.edges) == len(self.base)

    def segment_of(self, i: int) -> Optional[Segment]:
        for s in self.edges:
            if i in s.ids:
                return s
        return None

    def sorted_edges(self) -> list[Segment]:
        return sorted(self.edges)


def _require_same_base(m1: Matching, m2: Matching) -> PointSet:
    if m1.base != m2.base:
        raise MismatchedVertexSet("matchings live on different point sets")
    return m1.base


def compatible(m1: Matching, m2: Matching) -> bool:
    """Whether the union of the two edge sets is pairwise non-crossing.

    Both arguments already satisfy the non-crossing invariant internally, so
    only cross pairs are examined.
    """
    ps = _require_same_base(m1, m2)
    return ps.first_crossing_between(m1.edges, m2.edges) is None


def disjoint(m1: Matching, m2: Matching) -> bool:
    """Whether the two matchings share no edge."""
    _require_same_base(m1, m2)
    return not (m1.edges & m2.edges)


# ---------------------------------------------------------------------------
# general position


def validate_general_position(ps: PointSet) -> None:
    """Raise CollinearTriple / DuplicatePoint unless no three points are collinear.

    Runs in O(n^2) by hashing the normalised direction from each anchor point
    to every later point; two equal directions witness a collinear triple.
    """
    ix, iy = ps._ix, ps._iy
    n = len(ps)
    for i in range(n):
        seen: dict[tuple[int, int], int] = {}
        xi, yi = ix[i], iy[i]
        for j in range(i + 1, n):
            dx = ix[j] - xi
            dy = iy[j] - yi
            g = math.gcd(dx, dy)
            dx //= g
            dy //= g
            if dx < 0 or (dx == 0 and dy < 0):
                dx, dy = -dx, -dy
            key = (dx, dy)
            if key in seen:
                raise CollinearTriple(i, seen[key], j)
            seen[key] = j


# ---------------------------------------------------------------------------
# convex polygons, boxes, hulls


class ConvexPolygon:
    """A strictly convex polygon; vertices in counter-clockwise order."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[Coord]):
        verts = tuple((as_scalar(x), as_scalar(y)) for x, y in vertices)
        if len(verts) < 3:
            raise GeomatchError("a convex polygon needs at least 3 vertices")
        m = len(verts)
        for i in range(m):
            ax, ay = verts[i]
            bx, by = verts[(i + 1) % m]
            cx, cy = verts[(i + 2) % m]
            if orient(ax, ay, bx, by, cx, cy) <= 0:
                raise GeomatchError(
                    "polygon vertices are not in strictly convex CCW order"
                )
        self.vertices = verts

    @classmethod
    def _unchecked(cls, vertices: tuple[Coord, ...]) -> "ConvexPolygon":
        # trusted path for callers that have already certified strict convex
        # CCW order with exact arithmetic; skips the quadratic revalidation
        poly = object.__new__(cls)
        poly.vertices = vertices
        return poly

    def __eq__(self, other):
        if not isinstance(other, ConvexPolygon):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"ConvexPolygon({len(self.vertices)} vertices)"

    def __len__(self):
        return len(self.vertices)

    def edges(self) -> list[tuple[Coord, Coord]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def area2(self) -> Fraction:
        """Twice the (positive) area."""
        total = Fraction(0)
        v = self.vertices
        for i in range(len(v)):
            (ax, ay), (bx, by) = v[i], v[(i + 1) % len(v)]
            total += ax * by - bx * ay
        return total

    def contains(self, pt: Coord, strict: bool = False) -> bool:
        x, y = as_scalar(pt[0]), as_scalar(pt[1])
        lo = 1 if strict else 0
        v = self.vertices
        for i in range(len(v)):
            (ax, ay), (bx, by) = v[i], v[(i + 1) % len(v)]
            if orient(ax, ay, bx, by, x, y) < lo:
                return False
        return True

    def clip_halfplane(self, a: Fraction, b: Fraction, c: Fraction, keep: int):
        """Intersect with the halfplane sign(a*x + b*y - c) in {0, keep}.

        Returns a new ConvexPolygon, or None when the intersection has empty
        interior.  ``keep`` must be +1 or -1.
        """
        a, b, c = as_scalar(a), as_scalar(b), as_scalar(c)
        if keep not in (1, -1):
            raise GeomatchError("keep must be +1 or -1")
        out: list[Coord] = []
        v = self.vertices
        m = len(v)
        vals = [sign(a * x + b * y - c) * keep for x, y in v]
        for i in range(m):
            (px, py), sp = v[i], vals[i]
            (qx, qy), sq = v[(i + 1) % m], vals[(i + 1) % m]
            if sp >= 0:
                out.append((px, py))
            if sp * sq < 0:
                # exact intersection of edge pq with the line
                denom = a * (qx - px) + b * (qy - py)
                t = (c - a * px - b * py) / denom
                out.append((px + t * (qx - px), py + t * (qy - py)))
        # drop repeated and collinear vertices
        dedup: list[Coord] = []
        for pt in out:
            if not dedup or pt != dedup[-1]:
                dedup.append(pt)
        if len(dedup) > 1 and dedup[0] == dedup[-1]:
            dedup.pop()
        final: list[Coord] = []
        m2 = len(dedup)
        for i in range(m2):
            ax_, ay_ = dedup[(i - 1) % m2]
            bx_, by_ = dedup[i]
            cx_, cy_ = dedup[(i + 1) % m2]
            if orient(ax_, ay_, bx_, by_, cx_, cy_) != 0:
                final.append((bx_, by_))
        if len(final) < 3:
            return None
        # clipping a strictly convex CCW polygon yields one, and the loop
        # above already removed duplicate / collinear vertices exactly
        return ConvexPolygon._unchecked(tuple(final))


@dataclass(frozen=True)
class BoundingBox:
    """An axis-parallel box; used to clip unbounded extension regions."""

    xmin: Fraction
    ymin: Fraction
    xmax: Fraction
    ymax: Fraction

    def __post_init__(self):
        for name in ("xmin", "ymin", "xmax", "ymax"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        if not (self.xmin < self.xmax and self.ymin < self.ymax):
            raise GeomatchError("bounding box has empty interior")

    @classmethod
    def around(cls, ps: PointSet) -> "BoundingBox":
        """Box containing every point with margin 1 + coordinate spread."""
        if len(ps) == 0:
            raise TooFewPoints("cannot bound an empty point set")
        xs = [p.x for p in ps]
        ys = [p.y for p in ps]
        spread = max(max(xs) - min(xs), max(ys) - min(ys))
        margin = 1 + spread
        return cls(min(xs) - margin, min(ys) - margin, max(xs) + margin, max(ys) + margin)

    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon(
            [
                (self.xmin, self.ymin),
                (self.xmax, self.ymin),
                (self.xmax, self.ymax),
                (self.xmin, self.ymax),
            ]
        )

    def strictly_contains(self, pt: Coord) -> bool:
        x, y = pt
        return self.xmin < x < self.xmax and self.ymin < y < self.ymax


@dataclass(frozen=True)
class HullResult:
    polygon: ConvexPolygon
    hull_ids: tuple[int, ...]  # CCW cyclic order
    interior_ids: tuple[int, ...]


def convex_hull(ps: PointSet, ids: Optional[Iterable[int]] = None) -> HullResult:
    """Convex hull by monotone chain over the scaled integer coordinates.

    Returns the hull polygon, the cyclic CCW order of hull point ids, and the
    ids left strictly inside.  Requires at least 3 points.
    """
    idx = sorted(ids) if ids is not None else list(ps.ids)
    if len(idx) < 3:
        raise TooFewPoints(f"convex hull needs >= 3 points, got {len(idx)}")
    ix, iy = ps._ix, ps._iy
    pts = sorted(idx, key=lambda i: (ix[i], iy[i]))

    def half(seq):
        chain: list[int] = []
        for i in seq:
            while (
                len(chain) >= 2
                and ps.orient_ids(chain[-2], chain[-1], i) <= 0
            ):
                chain.pop()
            chain.append(i)
        return chain

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise CollinearTriple(hull[0], hull[1], pts[-1])
    hull_set = set(hull)
    interior = tuple(i for i in idx if i not in hull_set)
    poly = ConvexPolygon([ps.coord(i) for i in hull])
    return HullResult(poly, tuple(hull), interior)


def convex_position_order(ps: PointSet, ids: Iterable[int]) -> list[int]:
    """CCW cyclic order of ``ids``, which must all be in convex position.

    The returned list starts at the smallest id.  Raises NotConvexPosition
    when some point falls strictly inside the hull of the others.
    """
    idx = list(ids)
    if len(idx) < 3:
        return sorted(idx)
    hull = convex_hull(ps, idx)
    if hull.interior_ids:
        raise NotConvexPosition(
            f"points {list(hull.interior_ids)} are inside the hull of the rest"
        )
    order = list(hull.hull_ids)
    k = order.index(min(order))
    return order[k:] + order[:k]


# ---------------------------------------------------------------------------
# shear preprocessing


def shear_points(ps: PointSet, K: Optional[Fraction] = None) -> tuple[PointSet, Fraction]:
    """Apply the x-shear x' = x + y/K, preserving all strict x-orderings.

    With K omitted it is chosen just large enough that no pair of points with
    distinct x swaps x-order, while pairs that tie in x become distinct
    (they must differ in y).  Shears are affine, so orientation signs,
    crossings and hulls are unchanged.  Returns the new set and the K used.
    """
    if K is None:
        max_dy = Fraction(0)
        min_dx = None
        pts = ps.points
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                dy = abs(pts[i].y - pts[j].y)
                dx = abs(pts[i].x - pts[j].x)
                if dy > max_dy:
                    max_dy = dy
                if dx != 0 and (min_dx is None or dx < min_dx):
                    min_dx = dx
        if min_dx is None:
            K = max_dy + 1  # all x equal; any positive K separates
        else:
            K = Fraction(math.floor(max_dy / min_dx)) + 1
    K = as_scalar(K)
    if K <= 0:
        raise GeomatchError("shear parameter K must be positive")
    sheared = PointSet(
        [Point(p.x + p.y / K, p.y, p.id) for p in ps.points]
    )
    return sheared, K


def distinct_x(ps: PointSet) -> bool:
    return len({p.x for p in ps.points}) == len(ps)
