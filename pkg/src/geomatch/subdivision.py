"""Segment extension inside a convex region, and the resulting subdivision.

Each matching segment is extended by rays in a prescribed order; a ray stops
at the first thing it meets — another segment, a previous extension, or the
region boundary.  Once all rays are placed, the union of walls partitions
the region into convex cells (one more cell than the number of extended
segments).  Every matching vertex inside the region then lies on the shared
boundary of exactly two cells, which is recorded as the dual multigraph:
one vertex per cell, one edge per in-region matching vertex.

All arithmetic is exact.  Rays are compared by cross-multiplied integers in
a scaled frame, so no rounding ever decides a blocking order; a tie (two
blockers at the identical point, or a ray through an existing vertex) is a
degeneracy and raises DegenerateIncidence rather than being perturbed away.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cmp_to_key
from math import gcd, lcm
from typing import Optional, Sequence, Union

from .errors import (
    DegenerateIncidence,
    GeomatchError,
    InvariantViolation,
    SegmentOutsideRegionRule,
)
from .geom_core import (
    BoundingBox,
    ConvexPolygon,
    Coord,
    Matching,
    Segment,
    segments_cross_coords,
)
from .orientation import Multigraph, components

Region = Union[ConvexPolygon, BoundingBox]


# ---------------------------------------------------------------------------
# directives


@dataclass(frozen=True)
class BothDirections:
    """Extend a segment beyond both of its endpoints."""


@dataclass(frozen=True)
class FromEndpoint:
    """Extend a segment beyond the given endpoint only."""

    point: int


@dataclass(frozen=True)
class ExtensionDirective:
    segment: Segment
    directions: Union[BothDirections, FromEndpoint]
    order_index: int

    def __post_init__(self):
        if isinstance(self.directions, FromEndpoint):
            if self.directions.point not in self.segment.ids:
                raise GeomatchError(
                    f"endpoint {self.directions.point} not on {self.segment}"
                )
        elif not isinstance(self.directions, BothDirections):
            raise GeomatchError("directions must be BothDirections or FromEndpoint")


def both_ways_directives(segments: Sequence[Segment]) -> list[ExtensionDirective]:
    """One BothDirections directive per segment, in the given order."""
    return [
        ExtensionDirective(seg, BothDirections(), i) for i, seg in enumerate(segments)
    ]


@dataclass(frozen=True)
class RayExtension:
    """One placed ray: where it started, where it stopped."""

    directive_index: int
    segment: Segment
    from_point: int
    origin: Coord
    terminus: Coord
    went_to_infinity: bool


@dataclass(frozen=True)
class ExtensionGeometry:
    rays: tuple[RayExtension, ...]

    def rays_for(self, directive_index: int) -> list[RayExtension]:
        return [r for r in self.rays if r.directive_index == directive_index]

    def segments(self) -> list[tuple[Coord, Coord]]:
        """The extension pieces as coordinate segments (for blocking/drawing)."""
        return [(r.origin, r.terminus) for r in self.rays]


# ---------------------------------------------------------------------------
# subdivision and dual


class EndpointRole(Enum):
    LEFT_END = "left"
    RIGHT_END = "right"
    BOTTOM_END = "bottom"
    TOP_END = "top"


@dataclass(frozen=True)
class ConvexSubdivision:
    """Convex cells covering the region; each in-region matching vertex lies
    on the common boundary of exactly two of them (left cell listed first,
    looking along the segment from its coordinate-wise smaller endpoint)."""

    cells: tuple[ConvexPolygon, ...]
    vertex_cells: dict[int, tuple[int, int]]
    region: Region


@dataclass(frozen=True)
class DualEdge:
    cells: tuple[int, int]  # (left, right) cell of the matching vertex
    vertex: int
    segment: Segment
    role: EndpointRole


@dataclass(frozen=True)
class DualMultigraph:
    n: int
    edges: tuple[DualEdge, ...]

    def graph(self) -> Multigraph:
        return Multigraph(self.n, [e.cells for e in self.edges])


def endpoint_role(ps, seg: Segment, vertex: int) -> EndpointRole:
    ax, ay = ps.coord(seg.a)
    bx, by = ps.coord(seg.b)
    if ax == bx:
        low = seg.a if ay < by else seg.b
        return EndpointRole.BOTTOM_END if vertex == low else EndpointRole.TOP_END
    left = seg.a if ax < bx else seg.b
    return EndpointRole.LEFT_END if vertex == left else EndpointRole.RIGHT_END


# ---------------------------------------------------------------------------
# the engine


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


# line parameters live as normalized integer pairs (n, d), d > 0, gcd(n, d) = 1,
# so equality is tuple equality and ordering is a cross-multiplication
_ZERO = (0, 1)
_ONE = (1, 1)


def _norm(n: int, d: int) -> tuple[int, int]:
    g = gcd(n, d)
    return (n // g, d // g)


def _plt(a: tuple[int, int], b: tuple[int, int]) -> bool:
    return a[0] * b[1] < b[0] * a[1]


def _pcmp(a: tuple[int, int], b: tuple[int, int]) -> int:
    return a[0] * b[1] - b[0] * a[1]


class _Feature:
    """A straight blocker: a wall (segment plus extensions) or a region edge.

    Points on the carrier line are A + t*(B - A); ``lo..hi`` is the part
    that currently exists.  ``params`` collects every node that ends up on
    the feature (wall ends, landings of other rays, matching vertices).
    """

    __slots__ = ("ax", "ay", "bx", "by", "lo", "hi", "is_boundary", "seg", "params")

    def __init__(self, a, b, is_boundary, seg=None):
        self.ax, self.ay = a
        self.bx, self.by = b
        self.lo = _ZERO
        self.hi = _ONE
        self.is_boundary = is_boundary
        self.seg = seg
        self.params: set[tuple[int, int]] = set()

    def node_key(self, t: tuple[int, int]) -> tuple[int, int, int]:
        """A + t*(B - A) as a gcd-normalized homogeneous integer triple."""
        tn, td = t
        x = self.ax * td + tn * (self.bx - self.ax)
        y = self.ay * td + tn * (self.by - self.ay)
        g = gcd(x, y, td)
        return (x // g, y // g, td // g)

    def direction(self) -> tuple[int, int]:
        return (self.bx - self.ax, self.by - self.ay)


def _param_between(lo: tuple[int, int], un: int, ud: int, hi: tuple[int, int]) -> bool:
    # ud > 0 required; checks lo <= un/ud <= hi
    return un * lo[1] >= lo[0] * ud and un * hi[1] <= hi[0] * ud


def extend(
    m: Matching,
    region: Region,
    directives: Sequence[ExtensionDirective],
    partial: bool = False,
):
    """Extend matching segments in the directed order inside the region.

    Returns (ExtensionGeometry, ConvexSubdivision).  With ``partial=True``
    the directives need not extend every segment fully; only the ray
    geometry is computed and the subdivision slot is None.
    """
    ps = m.base
    region_poly = region.polygon() if isinstance(region, BoundingBox) else region
    if not isinstance(region_poly, ConvexPolygon):
        raise GeomatchError("region must be a ConvexPolygon or BoundingBox")
    clip_is_infinity = isinstance(region, BoundingBox)

    # a shared integer frame for points and region vertices, built on the
    # point set's cached scaling
    denoms = [region_poly.vertices[i][j].denominator for i in range(len(region_poly)) for j in (0, 1)]
    frame = lcm(ps._scale, *denoms)
    mult = frame // ps._scale
    pts = [(ix * mult, iy * mult) for ix, iy in zip(ps._ix, ps._iy)]
    reg = [(int(x * frame), int(y * frame)) for x, y in region_poly.vertices]
    nreg = len(reg)

    # classify segments by how many endpoints are inside the region
    def point_state(i: int) -> int:
        px, py = pts[i]
        on_edge = False
        for k in range(nreg):
            ax, ay = reg[k]
            bx, by = reg[(k + 1) % nreg]
            s = (bx - ax) * (py - ay) - (by - ay) * (px - ax)
            if s < 0:
                return 0
            if s == 0:
                on_edge = True
        if on_edge:
            raise DegenerateIncidence(f"point {i} lies exactly on the region boundary")
        return 1

    state = {i: point_state(i) for s in m.edges for i in s.ids}
    one_in: set[Segment] = set()
    both_in: set[Segment] = set()
    for s in m.edges:
        k = state[s.a] + state[s.b]
        if k == 2:
            both_in.add(s)
        elif k == 1:
            one_in.add(s)
        else:
            for i in range(len(reg)):
                r, t = reg[i], reg[(i + 1) % len(reg)]
                if segments_cross_coords(pts[s.a], pts[s.b], r, t):
                    raise SegmentOutsideRegionRule(
                        f"{s} crosses the region but has no endpoint inside"
                    )

    # validate directives and expand them into rays, in order
    order_seen = set()
    wanted: dict[Segment, set[int]] = {}
    for s in one_in:
        wanted[s] = {s.a if state[s.a] else s.b}
    for s in both_in:
        wanted[s] = set(s.ids)
    given: dict[Segment, set[int]] = {s: set() for s in wanted}
    rays: list[tuple[int, Segment, int]] = []  # (directive order_index, segment, endpoint)
    for d in sorted(directives, key=lambda d: d.order_index):
        if d.order_index in order_seen:
            raise GeomatchError(f"duplicate order_index {d.order_index}")
        order_seen.add(d.order_index)
        if d.segment not in wanted:
            raise GeomatchError(f"directive for {d.segment}, which is not in the region")
        if isinstance(d.directions, BothDirections):
            ends = [d.segment.a, d.segment.b]
        else:
            ends = [d.directions.point]
        for e in ends:
            if e not in wanted[d.segment]:
                raise GeomatchError(
                    f"cannot extend {d.segment} beyond endpoint {e}"
                    " (outside the region or already covered)"
                )
            if e in given[d.segment]:
                raise GeomatchError(f"{d.segment} extended twice beyond {e}")
            given[d.segment].add(e)
            rays.append((d.order_index, d.segment, e))
    if not partial:
        missing = [s for s in wanted if given[s] != wanted[s]]
        if missing:
            raise GeomatchError(
                f"directives do not fully extend {sorted(missing)[0]}"
            )

    in_segments = sorted(wanted)
    walls = {s: _Feature(pts[s.a], pts[s.b], False, s) for s in in_segments}
    boundary = [
        _Feature(reg[i], reg[(i + 1) % len(reg)], True) for i in range(len(reg))
    ]
    features: list[_Feature] = [walls[s] for s in in_segments] + boundary

    ray_records: list[RayExtension] = []
    for di, seg, endpoint in rays:
        f = walls[seg]
        at_b = endpoint == seg.b
        ox, oy = pts[endpoint]
        dx, dy = f.direction()
        if not at_b:
            dx, dy = -dx, -dy
        best = None  # (tn, td, feature, un, ud)
        tie = False
        for g in features:
            if g is f:
                continue
            ex, ey = g.direction()
            fx, fy = ox - g.ax, oy - g.ay
            denom = _cross(dx, dy, ex, ey)
            if denom == 0:
                if _cross(ex, ey, fx, fy) == 0:
                    raise DegenerateIncidence(
                        f"ray from {endpoint} is collinear with another feature"
                    )
                continue
            tn, td = _cross(ex, ey, fx, fy), denom
            if td < 0:
                tn, td = -tn, -td
            if tn < 0:
                continue
            un, ud = _cross(dx, dy, fx, fy), denom
            if ud < 0:
                un, ud = -un, -ud
            if not _param_between(g.lo, un, ud, g.hi):
                continue
            if tn == 0:
                raise DegenerateIncidence(
                    f"a blocker passes through matching vertex {endpoint}"
                )
            if best is None or tn * best[1] < best[0] * td:
                best = (tn, td, g, un, ud)
                tie = False
            elif tn * best[1] == best[0] * td:
                tie = True
        if best is None:
            raise InvariantViolation("ray escaped the bounded region")
        if tie:
            raise DegenerateIncidence(
                f"ray from {endpoint} meets two blockers at the same point"
            )
        tn, td, g, un, ud = best
        u = _norm(un, ud)
        if u == g.lo or u == g.hi or u in g.params or (
            not g.is_boundary and (u == _ZERO or u == _ONE)
        ):
            raise DegenerateIncidence(
                f"ray from {endpoint} stops exactly on an existing vertex"
            )
        if at_b:
            f.hi = _norm(td + tn, td)
        else:
            f.lo = _norm(-tn, td)
        g.params.add(u)
        ray_records.append(
            RayExtension(
                directive_index=di,
                segment=seg,
                from_point=endpoint,
                origin=ps.coord(endpoint),
                terminus=(
                    Fraction(ox * td + tn * dx, td * frame),
                    Fraction(oy * td + tn * dy, td * frame),
                ),
                went_to_infinity=g.is_boundary and clip_is_infinity,
            )
        )
    geometry = ExtensionGeometry(tuple(ray_records))
    if partial:
        return geometry, None

    # clip every wall to the region and register boundary entry nodes
    for s in in_segments:
        f = walls[s]
        dx, dy = f.direction()
        crossings = []
        for ei, g in enumerate(boundary):
            ex, ey = g.direction()
            fx, fy = f.ax - g.ax, f.ay - g.ay
            denom = _cross(dx, dy, ex, ey)
            if denom == 0:
                continue
            tn, td = _cross(ex, ey, fx, fy), denom
            un, ud = _cross(dx, dy, fx, fy), denom
            if td < 0:
                tn, td = -tn, -td
            if ud < 0:
                un, ud = -un, -ud
            if un <= 0 or un >= ud:  # not an interior crossing of this edge
                if un == 0 or un == ud:
                    raise DegenerateIncidence("a segment line passes through a region corner")
                continue
            crossings.append((_norm(tn, td), g, _norm(un, ud)))
        if len(crossings) != 2:
            raise InvariantViolation("a wall line must cross the region boundary twice")
        (c1, g1, u1), (c2, g2, u2) = crossings
        if _plt(c2, c1):
            (c1, g1, u1), (c2, g2, u2) = (c2, g2, u2), (c1, g1, u1)
        final_lo = f.lo if _plt(c1, f.lo) else c1
        final_hi = f.hi if _plt(f.hi, c2) else c2
        if not _plt(final_lo, final_hi):
            raise InvariantViolation("wall has empty extent inside the region")
        if final_lo == c1:
            g1.params.add(u1)
        if final_hi == c2:
            g2.params.add(u2)
        f.lo, f.hi = final_lo, final_hi
        f.params.add(final_lo)
        f.params.add(final_hi)
        for base_param in (_ZERO, _ONE):
            if _plt(final_lo, base_param) and _plt(base_param, final_hi):
                f.params.add(base_param)

    for g in boundary:
        g.params.add(_ZERO)
        g.params.add(_ONE)

    # build the node/edgelet graph of the finished structure; nodes are
    # gcd-normalized homogeneous integer triples (X, Y, W) in frame units
    node_ids: dict[tuple[int, int, int], int] = {}
    node_pts: list[tuple[int, int, int]] = []

    def node(key: tuple[int, int, int]) -> int:
        i = node_ids.get(key)
        if i is None:
            i = len(node_pts)
            node_ids[key] = i
            node_pts.append(key)
        return i

    # dedges 2k and 2k+1 are the two directions of edgelet k
    dedge_from: list[int] = []
    dedge_to: list[int] = []
    dedge_dir: list[tuple[int, int]] = []

    def add_edgelet(n1: int, n2: int, direction: tuple[int, int]):
        dedge_from.extend((n1, n2))
        dedge_to.extend((n2, n1))
        dedge_dir.append(direction)
        dedge_dir.append((-direction[0], -direction[1]))

    for f in features:
        if f.is_boundary:
            lo_cut, hi_cut = _ZERO, _ONE
        else:
            lo_cut, hi_cut = f.lo, f.hi
        params = sorted(
            (p for p in f.params if not (_plt(p, lo_cut) or _plt(hi_cut, p))),
            key=cmp_to_key(_pcmp),
        )
        if f.is_boundary and not params:
            raise InvariantViolation("boundary edge lost its endpoints")
        nodes = [node(f.node_key(p)) for p in params]
        d = f.direction()
        for a, b in zip(nodes, nodes[1:]):
            if a == b:
                raise DegenerateIncidence("two structure vertices coincide")
            add_edgelet(a, b, d)

    # rotation system: outgoing dedges sorted counter-clockwise per node
    def angle_cmp(i: int, j: int) -> int:
        (ax, ay), (bx, by) = dedge_dir[i], dedge_dir[j]
        ha = 0 if (ay > 0 or (ay == 0 and ax > 0)) else 1
        hb = 0 if (by > 0 or (by == 0 and bx > 0)) else 1
        if ha != hb:
            return -1 if ha < hb else 1
        c = _cross(ax, ay, bx, by)
        if c == 0:
            raise DegenerateIncidence("two collinear edgelets leave one vertex")
        return -1 if c > 0 else 1

    outgoing: list[list[int]] = [[] for _ in node_pts]
    for e in range(len(dedge_from)):
        outgoing[dedge_from[e]].append(e)
    prev_at_node: dict[int, int] = {}
    for v, out in enumerate(outgoing):
        out.sort(key=cmp_to_key(angle_cmp))
        for k, e in enumerate(out):
            prev_at_node[e] = out[k - 1]

    def next_dedge(e: int) -> int:
        # clockwise-next around the head of e keeps the face on the left
        return prev_at_node[e ^ 1]

    face_of: list[Optional[int]] = [None] * len(dedge_from)
    face_cycles: list[list[int]] = []  # cycles of dedges, face on the left
    for e0 in range(len(dedge_from)):
        if face_of[e0] is not None:
            continue
        fid = len(face_cycles)
        cycle = []
        e = e0
        while face_of[e] is None:
            face_of[e] = fid
            cycle.append(e)
            e = next_dedge(e)
        if e != e0:
            raise InvariantViolation("face walk did not close")
        face_cycles.append(cycle)

    # Certificates, all in integers.  An interior cell walk turns left or
    # goes straight at every node and never reverses; any walk around the
    # outside of a connected piece must turn right somewhere (total turning
    # -2pi) or reverse (at a pendant), so "exactly one non-convex face"
    # certifies connectivity, and Euler's formula cross-checks it.
    def is_convex_walk(cycle: list[int]) -> bool:
        prev = cycle[-1]
        for e in cycle:
            (ax, ay), (bx, by) = dedge_dir[prev], dedge_dir[e]
            turn = ax * by - ay * bx
            if turn < 0 or (turn == 0 and ax * bx + ay * by < 0):
                return False
            prev = e
        return True

    convex_face = [is_convex_walk(c) for c in face_cycles]
    if sum(not ok for ok in convex_face) != 1:
        raise InvariantViolation("subdivision structure is not connected")
    outer_face = convex_face.index(False)
    if len(face_cycles) != len(dedge_from) // 2 - len(node_pts) + 2:
        raise InvariantViolation("subdivision structure is not connected")

    cell_index: dict[int, int] = {}
    cells: list[ConvexPolygon] = []
    for fid, cycle in enumerate(face_cycles):
        if fid == outer_face:
            continue
        heads = [dedge_from[e] for e in cycle]
        if len(set(heads)) != len(heads):
            raise InvariantViolation("a traced cell pinches at a vertex")
        corners: list[Coord] = []
        prev = cycle[-1]
        for e in cycle:
            (ax, ay), (bx, by) = dedge_dir[prev], dedge_dir[e]
            if ax * by - ay * bx != 0:
                x_num, y_num, w = node_pts[dedge_from[e]]
                corners.append((Fraction(x_num, w * frame), Fraction(y_num, w * frame)))
            prev = e
        if len(corners) < 3:
            raise InvariantViolation("traced cell has fewer than 3 corners")
        # simple convex-certified CCW walk; skip the revalidating constructor
        cells.append(ConvexPolygon._unchecked(tuple(corners)))
        cell_index[fid] = len(cells) - 1

    if len(cells) != len(one_in) + len(both_in) + 1:
        raise InvariantViolation(
            f"{len(cells)} cells for {len(one_in)} + {len(both_in)} extended segments"
        )

    vertex_cells: dict[int, tuple[int, int]] = {}
    for s in in_segments:
        f = walls[s]
        forward = f.direction()
        a_c, b_c = ps.coord(s.a), ps.coord(s.b)
        if (a_c[0], a_c[1]) > (b_c[0], b_c[1]):
            forward = (-forward[0], -forward[1])
        for endpoint in s.ids:
            if not state[endpoint]:
                continue
            nid = node_ids[(pts[endpoint][0], pts[endpoint][1], 1)]
            out = outgoing[nid]
            if len(out) != 2:
                raise InvariantViolation("matching vertex is not interior to its wall")
            ahead = next(e for e in out if dedge_dir[e] == forward)
            behind = next(e for e in out if dedge_dir[e] != forward)
            left = cell_index[face_of[ahead]]
            right = cell_index[face_of[behind]]
            if left == right:
                raise InvariantViolation("matching vertex sees only one cell")
            vertex_cells[endpoint] = (left, right)

    sub = ConvexSubdivision(tuple(cells), vertex_cells, region)
    return geometry, sub


def dual_multigraph(sub: ConvexSubdivision, m: Matching) -> DualMultigraph:
    """One vertex per cell, one edge per in-region matching vertex."""
    edges = []
    for v in sorted(sub.vertex_cells):
        seg = m.segment_of(v)
        if seg is None:
            raise InvariantViolation(f"subdivision vertex {v} is unmatched in M")
        edges.append(
            DualEdge(
                cells=sub.vertex_cells[v],
                vertex=v,
                segment=seg,
                role=endpoint_role(m.base, seg, v),
            )
        )
    dual = DualMultigraph(len(sub.cells), tuple(edges))
    if len(components(dual.graph())) != 1:
        raise InvariantViolation("dual multigraph is not connected")
    return dual
