"""End-to-end constructions on non-crossing perfect matchings.

Implements the logarithmic transformation between matchings, disjoint
compatible matchings for axis-parallel and convex-hull-connected inputs,
the 4/5-size guarantee for general even matchings, the relaxed variant
that tolerates crossings between the two halves, a searcher for the
two-trees dual structure, and instance generators (including the odd
counterexample families).
"""

from __future__ import annotations

import functools
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import (
    DegenerateIncidence,
    DistinctXRequired,
    GenerationFailed,
    GeomatchError,
    InvariantViolation,
    MismatchedVertexSet,
    NotAxisParallel,
    NotCHC,
    OddCount,
    OddCut,
    OddMatching,
    OddN,
    VertexOnLine,
    VerticalSegment,
)
from .geom_core import (
    BoundingBox,
    ConvexPolygon,
    Matching,
    PointSet,
    Scalar,
    Segment,
    as_scalar,
    compatible,
    convex_hull,
    distinct_x,
    sign,
    validate_general_position,
)
from .oracle import visibility_graph
from .matching_engine import (
    ConstrainedMatchProblem,
    assemble_from_orientation,
    constrained_matching,
)
from .orientation import (
    Multigraph,
    components,
    count_odd_components,
    even_orientation,
    orientation_from_partition,
    prune_odd_components,
)
from .subdivision import (
    BothDirections,
    DualMultigraph,
    EndpointRole,
    ExtensionDirective,
    FromEndpoint,
    both_ways_directives,
    dual_multigraph,
    extend,
)

# an oriented line a*x + b*y = c; the halfplane selector picks the side
# where sign(a*x + b*y - c) equals it
Line = tuple[Scalar, Scalar, Scalar]

RED = "red"
GREEN = "green"
BLUE = "blue"


# ---------------------------------------------------------------------------
# types


@dataclass(frozen=True)
class TransformationSequence:
    """A chain of perfect matchings, each compatible with the next."""

    matchings: tuple[Matching, ...]

    def __post_init__(self):
        if not self.matchings:
            raise GeomatchError("a transformation needs at least one matching")
        base = self.matchings[0].base
        covered = self.matchings[0].matched_ids
        for i, m in enumerate(self.matchings):
            if m.base != base:
                raise MismatchedVertexSet("sequence mixes point sets")
            if m.matched_ids != covered:
                raise InvariantViolation(f"entry {i} matches a different vertex set")
            if i and not compatible(self.matchings[i - 1], m):
                raise InvariantViolation(f"entries {i - 1} and {i} are incompatible")

    @property
    def length(self) -> int:
        return len(self.matchings) - 1

    @property
    def source(self) -> Matching:
        return self.matchings[0]

    @property
    def target(self) -> Matching:
        return self.matchings[-1]


@dataclass(frozen=True)
class ColoredDual:
    """A dual multigraph with one color per edge, two colors overall.

    The two dual edges arising from one segment always get distinct colors.
    """

    dual: DualMultigraph
    colors: tuple[str, ...]

    def __post_init__(self):
        if len(self.colors) != len(self.dual.edges):
            raise GeomatchError("one color per dual edge required")
        palette = set(self.colors)
        if not (palette <= {RED, GREEN} or palette <= {RED, BLUE}):
            raise GeomatchError(f"unsupported palette {sorted(palette)}")
        per_segment: dict[Segment, set[str]] = {}
        for e, c in zip(self.dual.edges, self.colors):
            per_segment.setdefault(e.segment, set()).add(c)
        for seg, cs in per_segment.items():
            if len(cs) != 2:
                raise InvariantViolation(f"both edges of {seg} are colored {cs.pop()}")

    def edge_ids(self, color: str) -> list[int]:
        return [i for i, c in enumerate(self.colors) if c == color]

    def subgraph(self, color: str) -> Multigraph:
        return Multigraph(
            self.dual.n,
            tuple(e.cells for e, c in zip(self.dual.edges, self.colors) if c == color),
        )


@dataclass(frozen=True)
class FourFifthsReport:
    matching: Matching
    n: int
    guarantee: int
    achieved: int
    odd_components: int
    removed_edge_ids: tuple[int, ...]
    colored: ColoredDual


@dataclass(frozen=True)
class TwoTreesResult:
    found: bool
    directives: Optional[tuple[ExtensionDirective, ...]]
    assignment: Optional[tuple[int, ...]]
    dual: Optional[DualMultigraph]
    orders_tried: int
    orders_skipped: int


# ---------------------------------------------------------------------------
# transformation (canonical matchings and log-length chains)


def canonical_matching(ps: PointSet) -> Matching:
    """Sort by x and pair consecutively; the strips make it non-crossing."""
    if len(ps) % 2 == 1:
        raise OddCount(f"{len(ps)} points cannot be perfectly matched")
    if not distinct_x(ps):
        raise DistinctXRequired("canonical matching needs distinct x-coordinates")
    order = sorted(ps.ids, key=lambda i: ps._ix[i])
    return Matching(ps, [Segment(order[i], order[i + 1]) for i in range(0, len(order), 2)])


def _line_sides(ps: PointSet, ids, line: Line) -> dict[int, int]:
    """Side of the line per point id, evaluated on the integer grid."""
    a, b, c = (Fraction(v) for v in line)
    den = math.lcm(a.denominator, b.denominator, c.denominator)
    ia, ib, ic = int(a * den), int(b * den), int(c * den)
    ix, iy, scale = ps._ix, ps._iy, ps._scale
    return {i: sign(ia * ix[i] + ib * iy[i] - ic * scale) for i in ids}


def halfplane_matching(
    m: Matching, line: Line, keep: int, within: Optional[ConvexPolygon] = None
) -> Matching:
    """Perfect matching of m's vertices on one side of the line, compatible
    with m: extend m inside the clipped region, orient the dual evenly and
    match each cell's assigned vertices around its boundary.

    ``within`` optionally reuses a precomputed bounding polygon of the
    point set (it must contain every point strictly).
    """
    if keep not in (1, -1):
        raise GeomatchError("halfplane selector must be +1 or -1")
    ps = m.base
    sides = _line_sides(ps, sorted(m.matched_ids), line)
    for i, s in sides.items():
        if s == 0:
            raise VertexOnLine(f"point {i} lies on the cut line")
    cut = [e for e in m.sorted_edges() if sides[e.a] != sides[e.b]]
    if len(cut) % 2 == 1:
        raise OddCut(len(cut))
    inside = [i for i, s in sides.items() if s == keep]
    if not inside:
        return Matching(ps, [], check=False)

    a, b, c = (as_scalar(v) for v in line)
    if within is None:
        within = BoundingBox.around(ps).polygon()
    region = within.clip_halfplane(a, b, c, keep)
    if region is None:
        raise InvariantViolation("the bounding box misses the kept halfplane")
    directives = []
    for e in m.sorted_edges():
        if sides[e.a] == keep and sides[e.b] == keep:
            directives.append(
                ExtensionDirective(e, BothDirections(), len(directives))
            )
        elif sides[e.a] != sides[e.b]:
            inner = e.a if sides[e.a] == keep else e.b
            directives.append(
                ExtensionDirective(e, FromEndpoint(inner), len(directives))
            )
    _, sub = extend(m, region, directives)
    dual = dual_multigraph(sub, m)
    orientation = even_orientation(dual.graph())
    if orientation is None:
        raise InvariantViolation("dual of a halfplane extension must orient evenly")
    return assemble_from_orientation(m, sub, dual, orientation, require_disjoint=False)


def even_cut_matching(
    m: Matching, line: Line, within: Optional[ConvexPolygon] = None
) -> Matching:
    """Match both sides of the line; the union never crosses the line."""
    left = halfplane_matching(m, line, +1, within)
    right = halfplane_matching(m, line, -1, within)
    # each side is non-crossing on its own and the open halfplanes are
    # disjoint, so the union needs no crossing re-check
    return Matching(m.base, list(left.edges) + list(right.edges), check=False)


def _canonical_steps(
    ps: PointSet,
    ids: list[int],
    edges: list[Segment],
    within: ConvexPolygon,
) -> list[frozenset[Segment]]:
    """Edge sets from ``edges`` to the canonical matching of ``ids``.

    One even-cut step at the median, then both halves advance in lockstep
    (the vertical line keeps them from ever interacting).
    """
    n_seg = len(ids) // 2
    if n_seg <= 1:
        return [frozenset(edges)]
    by_x = sorted(ids, key=lambda i: ps._ix[i])
    k = 2 * (n_seg // 2)
    cx = Fraction(ps.coord(by_x[k - 1])[0] + ps.coord(by_x[k])[0], 2)
    line: Line = (Fraction(1), Fraction(0), cx)
    step = even_cut_matching(Matching(ps, edges, check=False), line, within)
    left_ids, right_ids = by_x[:k], by_x[k:]
    left_set = set(left_ids)
    left_edges = [e for e in step.edges if e.a in left_set]
    right_edges = [e for e in step.edges if e.a not in left_set]
    lseq = _canonical_steps(ps, left_ids, left_edges, within)
    rseq = _canonical_steps(ps, right_ids, right_edges, within)
    depth = max(len(lseq), len(rseq))
    lseq += [lseq[-1]] * (depth - len(lseq))
    rseq += [rseq[-1]] * (depth - len(rseq))
    return [frozenset(edges)] + [l | r for l, r in zip(lseq, rseq)]


def _collapse(steps: Sequence[frozenset[Segment]]) -> list[frozenset[Segment]]:
    out: list[frozenset[Segment]] = []
    for s in steps:
        if not out or out[-1] != s:
            out.append(s)
    return out


def transform_to_canonical(m: Matching) -> TransformationSequence:
    """A transformation from m to the canonical matching of its points,
    of length at most ceil(log2 n)."""
    if not m.is_perfect:
        raise GeomatchError("transformation requires a perfect matching")
    ps = m.base
    if not distinct_x(ps):
        raise DistinctXRequired("transformation needs distinct x-coordinates")
    within = BoundingBox.around(ps).polygon()
    steps = _canonical_steps(ps, list(ps.ids), list(m.sorted_edges()), within)
    steps = _collapse(steps)
    seq = TransformationSequence(tuple(Matching(ps, s) for s in steps))
    n = len(m)
    bound = math.ceil(math.log2(n)) if n > 1 else 0
    if seq.length > bound:
        raise InvariantViolation(f"length {seq.length} exceeds log bound {bound}")
    if set(seq.target.edges) != set(canonical_matching(ps).edges):
        raise InvariantViolation("transformation did not reach the canonical matching")
    return seq


def transform(m1: Matching, m2: Matching) -> TransformationSequence:
    """A transformation between two perfect matchings of one point set,
    of length at most 2*ceil(log2 n), through the canonical matching."""
    if m1.base != m2.base:
        raise MismatchedVertexSet("matchings live on different point sets")
    fwd = transform_to_canonical(m1)
    back = transform_to_canonical(m2)
    f = list(fwd.matchings)
    b = list(back.matchings)
    # both chains end at the canonical matching; a shared tail would make
    # the walk double back on itself, so cut it (M = M2 collapses to zero)
    while len(f) > 1 and len(b) > 1 and f[-2] == b[-2]:
        f.pop()
        b.pop()
    steps = f
    for m in b[-2::-1]:
        if m != steps[-1]:
            steps.append(m)
    seq = TransformationSequence(tuple(steps))
    n = len(m1)
    bound = 2 * math.ceil(math.log2(n)) if n > 1 else 0
    if seq.length > bound:
        raise InvariantViolation(f"length {seq.length} exceeds bound {bound}")
    return seq


# ---------------------------------------------------------------------------
# axis-parallel matchings


def _is_horizontal(ps: PointSet, e: Segment) -> bool:
    (ax, ay), (bx, by) = ps.coord(e.a), ps.coord(e.b)
    return ay == by and ax != bx


def _is_vertical(ps: PointSet, e: Segment) -> bool:
    (ax, ay), (bx, by) = ps.coord(e.a), ps.coord(e.b)
    return ax == bx and ay != by


def _role_color(role: EndpointRole) -> str:
    return RED if role in (EndpointRole.LEFT_END, EndpointRole.BOTTOM_END) else GREEN


def hv_disjoint_matching(m: Matching) -> tuple[Optional[Matching], ColoredDual]:
    """Disjoint compatible matching for axis-parallel segments.

    Horizontal segments are extended first (both ways), then vertical ones.
    Left/bottom endpoint edges of the dual are red, right/top green; both
    color classes are spanning trees, which forces the per-cell batches to
    pair off without ever reusing a segment.  For an odd matching only the
    colored dual is produced (no even orientation exists).
    """
    if not m.is_perfect:
        raise GeomatchError("input must be a perfect matching")
    ps = m.base
    horizontals = [e for e in m.sorted_edges() if _is_horizontal(ps, e)]
    verticals = [e for e in m.sorted_edges() if _is_vertical(ps, e)]
    if len(horizontals) + len(verticals) != len(m):
        bad = next(
            e for e in m.sorted_edges()
            if not _is_horizontal(ps, e) and not _is_vertical(ps, e)
        )
        raise NotAxisParallel(f"{bad} is neither horizontal nor vertical")
    region = BoundingBox.around(ps)
    _, sub = extend(m, region, both_ways_directives(horizontals + verticals))
    dual = dual_multigraph(sub, m)
    colors = tuple(_role_color(e.role) for e in dual.edges)
    colored = ColoredDual(dual, colors)
    for color in (RED, GREEN):
        g = colored.subgraph(color)
        if len(components(g)) != 1 or len(g.edges) != dual.n - 1:
            raise InvariantViolation(f"the {color} subgraph is not a spanning tree")
    if len(m) % 2 == 1:
        return None, colored
    partition = {i: c for i, c in enumerate(colors)}
    orientation = orientation_from_partition(dual.graph(), partition)
    out = assemble_from_orientation(m, sub, dual, orientation, require_disjoint=True)
    return out, colored


# ---------------------------------------------------------------------------
# convex-hull-connected matchings


def is_convex_hull_connected(m: Matching) -> bool:
    ids = sorted(m.matched_ids)
    if len(ids) == 2:
        return True
    hull = set(convex_hull(m.base, ids).hull_ids)
    return all(e.a in hull or e.b in hull for e in m.edges)


def _chc_recurse(ps: PointSet, edges: list[Segment]) -> list[Segment]:
    ids = sorted(i for e in edges for i in e.ids)
    hull_order = list(convex_hull(ps, ids).hull_ids)
    hull_pos = {v: i for i, v in enumerate(hull_order)}
    k = len(hull_order)
    edge_set = set(edges)

    splitter = None
    for e in sorted(edges):
        if e.a in hull_pos and e.b in hull_pos:
            if (hull_pos[e.a] - hull_pos[e.b]) % k not in (1, k - 1):
                splitter = e
                break
    if splitter is not None:
        side1, side2 = [], []
        for e in edges:
            if e == splitter:
                continue
            sa = ps.orient_ids(splitter.a, splitter.b, e.a)
            sb = ps.orient_ids(splitter.a, splitter.b, e.b)
            if sa != sb:
                raise InvariantViolation(f"{e} straddles the splitter {splitter}")
            (side1 if sa > 0 else side2).append(e)
        if len(side1) % 2 == 1:
            side1.append(splitter)
        else:
            side2.append(splitter)
        return _chc_recurse(ps, side1) + _chc_recurse(ps, side2)

    # no splitter: take alternate gaps of the hull, then match what remains
    # inside the hull, walled off by the matching and the chosen gaps
    gaps = []
    for i in range(k):
        v, w = hull_order[i], hull_order[(i + 1) % k]
        if Segment(v, w) not in edge_set:
            gaps.append(Segment(v, w))
    if len(gaps) % 2 == 1:
        raise InvariantViolation("a splitter-free hull must have evenly many gaps")
    first = min(range(len(gaps)), key=lambda i: gaps[i])
    chosen = [gaps[i] for i in range(len(gaps)) if (i - first) % 2 == 0]
    covered = {v for g in chosen for v in g.ids}
    for e in edges:
        if (e.a in covered) == (e.b in covered):
            raise InvariantViolation(f"alternate gaps cover {e} unevenly")
    remaining = tuple(i for i in ids if i not in covered)
    blockers = tuple(
        (ps.coord(s.a), ps.coord(s.b)) for s in list(edges) + chosen
    )
    inner = constrained_matching(
        ConstrainedMatchProblem(ps, remaining, blockers)
    )
    if inner is None:
        raise InvariantViolation("no inner matching despite the gap structure")
    return chosen + list(inner.edges)


def chc_disjoint_matching(m: Matching) -> Matching:
    """Disjoint compatible matching for convex-hull-connected inputs:
    recurse on splitter segments, otherwise pair alternate hull gaps and
    match the leftover endpoints behind them."""
    if not m.is_perfect:
        raise GeomatchError("input must be a perfect matching")
    if len(m) % 2 == 1:
        raise OddMatching(f"{len(m)} segments; an even matching is required")
    if not is_convex_hull_connected(m):
        raise NotCHC("some segment has no endpoint on the convex hull")
    return Matching(m.base, _chc_recurse(m.base, list(m.sorted_edges())))


# ---------------------------------------------------------------------------
# the 4/5 guarantee


def _left_right(ps: PointSet, e: Segment) -> tuple[int, int]:
    (ax, _), (bx, _) = ps.coord(e.a), ps.coord(e.b)
    if ax == bx:
        raise VerticalSegment(f"{e} is vertical")
    return (e.a, e.b) if ax < bx else (e.b, e.a)


def four_fifths_matching(m: Matching) -> FourFifthsReport:
    """Disjoint compatible matching of guaranteed size ceil((4n-1)/5).

    All right extensions are placed first, then all left extensions; the
    left-endpoint (blue) dual edges then form a spanning tree.  Odd
    components of the right-endpoint (red) subgraph each give up one edge,
    the rest is oriented part by part and assembled per cell.
    """
    if not m.is_perfect:
        raise GeomatchError("input must be a perfect matching")
    n = len(m)
    if n % 2 == 1:
        raise OddN(f"{n} segments; the guarantee needs an even matching")
    ps = m.base
    order = m.sorted_edges()
    ends = {e: _left_right(ps, e) for e in order}
    directives = [
        ExtensionDirective(e, FromEndpoint(ends[e][1]), i)
        for i, e in enumerate(order)
    ]
    directives += [
        ExtensionDirective(e, FromEndpoint(ends[e][0]), n + i)
        for i, e in enumerate(order)
    ]
    region = BoundingBox.around(ps)
    _, sub = extend(m, region, directives)
    dual = dual_multigraph(sub, m)
    colors = tuple(
        BLUE if e.role == EndpointRole.LEFT_END else RED for e in dual.edges
    )
    colored = ColoredDual(dual, colors)

    blue_graph = colored.subgraph(BLUE)
    if len(components(blue_graph)) != 1 or len(blue_graph.edges) != dual.n - 1:
        raise InvariantViolation("the left-endpoint subgraph is not a spanning tree")
    red_ids = colored.edge_ids(RED)
    red_graph = colored.subgraph(RED)
    f_red = count_odd_components(red_graph)
    _, removed_local = prune_odd_components(red_graph)
    if len(removed_local) != f_red:
        raise InvariantViolation("pruning must remove one edge per odd component")
    removed = {red_ids[i] for i in removed_local}

    kept_edges = tuple(e for i, e in enumerate(dual.edges) if i not in removed)
    kept_colors = [c for i, c in enumerate(colors) if i not in removed]
    reduced = DualMultigraph(dual.n, kept_edges)
    partition = {i: c for i, c in enumerate(kept_colors)}
    orientation = orientation_from_partition(reduced.graph(), partition)
    out = assemble_from_orientation(m, sub, reduced, orientation, require_disjoint=True)

    guarantee = -(-(4 * n - 1) // 5)
    achieved = len(out)
    if 2 * achieved != 2 * n - f_red:
        raise InvariantViolation("output size must be n - f(R)/2")
    if achieved < guarantee:
        raise InvariantViolation(f"only {achieved} segments; {guarantee} guaranteed")
    return FourFifthsReport(
        out, n, guarantee, achieved, f_red, tuple(sorted(removed)), colored
    )


# ---------------------------------------------------------------------------
# matchings with crossings allowed between the two halves


def crossings_matchings(m: Matching) -> tuple[Matching, Matching]:
    """Perfect matchings of the left endpoints and of the right endpoints,
    neither of which crosses m (they may cross each other)."""
    if not m.is_perfect:
        raise GeomatchError("input must be a perfect matching")
    if len(m) % 2 == 1:
        raise OddMatching(f"{len(m)} segments; an even matching is required")
    ps = m.base
    order = m.sorted_edges()
    ends = {e: _left_right(ps, e) for e in order}
    region = BoundingBox.around(ps)
    segments = [(ps.coord(e.a), ps.coord(e.b)) for e in order]

    def one_side(extend_from: int, match_points: int) -> Matching:
        directives = [
            ExtensionDirective(e, FromEndpoint(ends[e][extend_from]), i)
            for i, e in enumerate(order)
        ]
        geometry, _ = extend(m, region, directives, partial=True)
        blockers = tuple(segments) + tuple(
            (r.origin, r.terminus) for r in geometry.rays
        )
        points = tuple(sorted(ends[e][match_points] for e in order))
        got = constrained_matching(ConstrainedMatchProblem(ps, points, blockers))
        if got is None:
            raise InvariantViolation("rays never block a whole endpoint class")
        return got

    m_l = one_side(1, 0)  # right rays block, left endpoints match
    m_r = one_side(0, 1)  # left rays block, right endpoints match
    return m_l, m_r


# ---------------------------------------------------------------------------
# two-trees structure search


def _is_spanning_tree(n: int, edges: list[tuple[int, int]]) -> bool:
    if len(edges) != n - 1:
        return False
    return len(components(Multigraph(n, tuple(edges)))) == 1


def two_trees_search(m: Matching, max_orders: int = 24) -> TwoTreesResult:
    """Look for an extension order whose dual splits into two trees with
    the two edges of every segment in different trees.

    Orders are tried deterministically: for each permutation of the
    segments, first everything both-ways, then (for non-vertical inputs)
    all right extensions before all left ones.
    """
    if not m.is_perfect:
        raise GeomatchError("input must be a perfect matching")
    ps = m.base
    base_edges = m.sorted_edges()
    no_verticals = all(ps.coord(e.a)[0] != ps.coord(e.b)[0] for e in base_edges)
    region = BoundingBox.around(ps)

    def candidate_orders():
        for perm in itertools.permutations(base_edges):
            yield both_ways_directives(perm)
            if no_verticals:
                n = len(perm)
                rights = [
                    ExtensionDirective(e, FromEndpoint(_left_right(ps, e)[1]), i)
                    for i, e in enumerate(perm)
                ]
                lefts = [
                    ExtensionDirective(e, FromEndpoint(_left_right(ps, e)[0]), n + i)
                    for i, e in enumerate(perm)
                ]
                yield rights + lefts

    tried = skipped = 0
    for directives in candidate_orders():
        if tried >= max_orders:
            break
        tried += 1
        try:
            _, sub = extend(m, region, directives)
            dual = dual_multigraph(sub, m)
        except DegenerateIncidence:
            skipped += 1
            continue
        by_segment: dict[Segment, list[int]] = {}
        for i, e in enumerate(dual.edges):
            by_segment.setdefault(e.segment, []).append(i)
        pairs = [tuple(v) for v in by_segment.values()]
        if any(len(p) != 2 for p in pairs):
            raise InvariantViolation("each segment must contribute two dual edges")
        n_seg = len(pairs)
        for mask in range(1 << (n_seg - 1)):
            assign = [0] * len(dual.edges)
            for j, (e1, e2) in enumerate(pairs):
                bit = (mask >> (j - 1)) & 1 if j else 0
                assign[e1], assign[e2] = bit, 1 - bit
            t0 = [dual.edges[i].cells for i in range(len(assign)) if assign[i] == 0]
            t1 = [dual.edges[i].cells for i in range(len(assign)) if assign[i] == 1]
            if _is_spanning_tree(dual.n, t0) and _is_spanning_tree(dual.n, t1):
                return TwoTreesResult(
                    True, tuple(directives), tuple(assign), dual, tried, skipped
                )
    return TwoTreesResult(False, None, None, None, tried, skipped)


# ---------------------------------------------------------------------------
# generators


def gen_parallel_chords(k: int, radius: Scalar = 1) -> Matching:
    """k horizontal chords of a circle (rational points); for odd k the
    result has no disjoint compatible perfect matching."""
    if k < 1:
        raise GeomatchError("need at least one chord")
    r = as_scalar(radius)
    if r <= 0:
        raise GeomatchError("radius must be positive")
    coords = []
    edges = []
    for i in range(k):
        t = Fraction(i + 1, k + 2)
        x = r * (1 - t * t) / (1 + t * t)
        y = r * 2 * t / (1 + t * t)
        coords.append((-x, y))
        coords.append((x, y))
        edges.append(Segment(2 * i, 2 * i + 1))
    ps = PointSet.from_coords(coords)
    validate_general_position(ps)
    return Matching(ps, edges)


def gen_general_odd(n: int) -> Matching:
    """2n+1 segments with no disjoint compatible perfect matching: n long
    parallel blockers and one short segment in each of the n+1 regions
    between them.  Any segment joining two short-segment endpoints from
    different regions stays within the blockers' shadow and is cut, so the
    2n+2 short-segment endpoints outnumber the 2n blocker endpoints they
    would have to pair with."""
    if n < 1:
        raise GeomatchError("need at least one blocker segment")
    unit = 4 * (n + 2)
    wide = 40 * unit
    levels = [unit * (i + 1) * (i + 1) for i in range(n)]
    mids = [levels[0] - unit]
    mids += [(levels[j - 1] + levels[j]) // 2 for j in range(1, n)]
    mids += [levels[-1] + unit]
    # the short segments all sit within |x| <= n+2, deep inside every
    # blocker's span, so a jittered placement keeps the shadow argument
    # intact; the jitter only has to break collinearities
    rng = random.Random(f"general-odd:{n}")
    for _ in range(200):
        coords: list[tuple] = []
        edges: list[Segment] = []
        for y in levels:
            coords.append((-wide - rng.randrange(unit), y))
            coords.append((wide + 1 + rng.randrange(unit), y))
            edges.append(Segment(len(coords) - 2, len(coords) - 1))
        for y in mids:
            x = rng.randrange(-n - 2, n + 2)
            coords.append((x, y))
            coords.append((x + 1, y + 1))
            edges.append(Segment(len(coords) - 2, len(coords) - 1))
        ps = PointSet.from_coords(coords)
        try:
            validate_general_position(ps)
        except GeomatchError:
            continue
        m = Matching(ps, edges)
        vis = visibility_graph(m, minus_m=True)
        if any(u >= 2 * n and v >= 2 * n for u, v in vis.pairs):
            raise InvariantViolation("short-segment endpoints must be blocked")
        return m
    raise GenerationFailed("no general-position placement of the short segments")


class Flavor:
    GENERAL = "general"
    AXIS_PARALLEL = "axis-parallel"
    CHC = "chc"
    ALL = (GENERAL, AXIS_PARALLEL, CHC)


def _random_ncpm(ps: PointSet, rng: random.Random, ids: Optional[list[int]] = None) -> set[Segment]:
    if ids is None:
        ids = list(ps.ids)
    if not ids:
        return set()
    if len(ids) == 2:
        return {Segment(ids[0], ids[1])}
    anchor = min(ids, key=lambda i: (ps.coord(i)[1], ps.coord(i)[0]))
    rest = [i for i in ids if i != anchor]
    rest.sort(key=functools.cmp_to_key(lambda i, j: -ps.orient_ids(anchor, i, j)))
    k = rng.randrange((len(rest) + 1) // 2) * 2
    out = {Segment(anchor, rest[k])}
    out |= _random_ncpm(ps, rng, rest[:k])
    out |= _random_ncpm(ps, rng, rest[k + 1 :])
    return out


_GRID = 10**6
_ATTEMPTS = 200


def _gen_general(rng: random.Random, n: int) -> Matching:
    for _ in range(_ATTEMPTS):
        coords = [(rng.randrange(_GRID), rng.randrange(_GRID)) for _ in range(2 * n)]
        if len(set(coords)) < 2 * n:
            continue
        ps = PointSet.from_coords(coords)
        try:
            validate_general_position(ps)
        except GeomatchError:
            continue
        return Matching(ps, _random_ncpm(ps, rng))
    raise GenerationFailed("no general-position instance found")


def _axis_crossing(cand, placed) -> bool:
    x1, y1, x2, y2, horizontal = cand
    for px1, py1, px2, py2, p_horizontal in placed:
        if horizontal == p_horizontal:
            continue
        if horizontal:
            hx1, hx2, hy = x1, x2, y1
            vx, vy1, vy2 = px1, py1, py2
        else:
            hx1, hx2, hy = px1, px2, py1
            vx, vy1, vy2 = x1, y1, y2
        if hx1 < vx < hx2 and vy1 < hy < vy2:
            return True
    return False


def _gen_axis_parallel(rng: random.Random, n: int) -> Matching:
    span = max(_GRID // (3 * n), 4)
    for _ in range(_ATTEMPTS):
        used_x: set[int] = set()
        used_y: set[int] = set()
        placed: list[tuple[int, int, int, int, bool]] = []
        coords: list[tuple[int, int]] = []
        ok = True
        for _seg in range(n):
            for _try in range(_ATTEMPTS):
                horizontal = rng.random() < 0.5
                length = rng.randrange(span // 2, span)
                lo = rng.randrange(_GRID - length)
                other = rng.randrange(_GRID)
                if horizontal:
                    x1, x2, y = lo, lo + length, other
                    fresh = {x1, x2}.isdisjoint(used_x) and y not in used_y
                    cand = (x1, y, x2, y, True)
                else:
                    y1, y2, x = lo, lo + length, other
                    fresh = {y1, y2}.isdisjoint(used_y) and x not in used_x
                    cand = (x, y1, x, y2, False)
                if not fresh or _axis_crossing(cand, placed):
                    continue
                placed.append(cand)
                if cand[4]:
                    used_x.update((cand[0], cand[2]))
                    used_y.add(cand[1])
                else:
                    used_y.update((cand[1], cand[3]))
                    used_x.add(cand[0])
                coords.append((cand[0], cand[1]))
                coords.append((cand[2], cand[3]))
                break
            else:
                ok = False
                break
        if not ok:
            continue
        ps = PointSet.from_coords(coords)
        try:
            validate_general_position(ps)
        except GeomatchError:
            continue
        return Matching(ps, [Segment(2 * i, 2 * i + 1) for i in range(n)])
    raise GenerationFailed("no axis-parallel instance found")


def _gen_chc(rng: random.Random, n: int) -> Matching:
    radius = 10**7
    k = 2 * n
    for _ in range(_ATTEMPTS):
        angles = sorted(
            (i + rng.random() * 0.6) * 2 * math.pi / k for i in range(k)
        )
        coords: list[tuple] = [
            (round(radius * math.cos(a)), round(radius * math.sin(a)))
            for a in angles
        ]
        if len(set(coords)) < k:
            continue
        # pull some second endpoints inward along their own segment
        for i in range(0, k, 2):
            if n >= 2 and rng.random() < 0.5:
                (ax, ay), (bx, by) = coords[i], coords[i + 1]
                t = Fraction(rng.randrange(1, 4), 4)
                coords[i + 1] = (ax + t * (bx - ax), ay + t * (by - ay))
        ps = PointSet.from_coords(coords)
        try:
            validate_general_position(ps)
            matching = Matching(ps, [Segment(i, i + 1) for i in range(0, k, 2)])
        except GeomatchError:
            continue
        if not is_convex_hull_connected(matching):
            continue
        return matching
    raise GenerationFailed("no convex-hull-connected instance found")


def gen_random_matching(n: int, seed: int, flavor: str = Flavor.GENERAL) -> Matching:
    """A random non-crossing perfect matching with n segments; deterministic
    per (n, seed, flavor)."""
    if n < 1:
        raise GeomatchError("need at least one segment")
    rng = random.Random(f"{flavor}:{n}:{seed}")
    if flavor == Flavor.GENERAL:
        return _gen_general(rng, n)
    if flavor == Flavor.AXIS_PARALLEL:
        return _gen_axis_parallel(rng, n)
    if flavor == Flavor.CHC:
        if n == 1:
            return _gen_general(rng, 1)
        return _gen_chc(rng, n)
    raise GeomatchError(f"unknown flavor {flavor!r}; use one of {Flavor.ALL}")
