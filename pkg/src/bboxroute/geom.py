"""Planar geometric primitives and predicates.

All predicates use a single global tolerance EPS: values within EPS of each
other are treated as equal. Inputs are assumed to be in general position
(no 3 collinear, no 4 cocircular points); netgen enforces this by seeded
perturbation, so the predicates here only need to be stable, not exact.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

EPS = 1e-9

# Magnitude of the symmetric perturbation applied to restore general position.
PERTURB = 1e-6


class Point(NamedTuple):
    x: float
    y: float


class Segment(NamedTuple):
    a: Point
    b: Point


class Rect(NamedTuple):
    min_x: float
    max_x: float
    min_y: float
    max_y: float

    @property
    def top_left(self) -> Point:
        return Point(self.min_x, self.max_y)

    @property
    def top_right(self) -> Point:
        return Point(self.max_x, self.max_y)

    @property
    def bottom_left(self) -> Point:
        return Point(self.min_x, self.min_y)

    @property
    def bottom_right(self) -> Point:
        return Point(self.max_x, self.min_y)

    def corners(self) -> list[Point]:
        """Corner points in the order top-left, top-right, bottom-left, bottom-right."""
        return [self.top_left, self.top_right, self.bottom_left, self.bottom_right]

    def edges(self) -> list[Segment]:
        """The four boundary segments: top, bottom, left, right."""
        return [
            Segment(self.top_left, self.top_right),
            Segment(self.bottom_left, self.bottom_right),
            Segment(self.bottom_left, self.top_left),
            Segment(self.bottom_right, self.top_right),
        ]

    def contains_strict(self, p: Point) -> bool:
        """True iff p lies in the open interior, at least EPS from the boundary."""
        return (
            self.min_x + EPS < p[0] < self.max_x - EPS
            and self.min_y + EPS < p[1] < self.max_y - EPS
        )

    def contains_closed(self, p: Point) -> bool:
        """True iff p lies inside or within EPS of the boundary."""
        return (
            self.min_x - EPS <= p[0] <= self.max_x + EPS
            and self.min_y - EPS <= p[1] <= self.max_y + EPS
        )

    def overlaps(self, other: "Rect") -> bool:
        """True iff the two closed rectangles share positive area."""
        return (
            min(self.max_x, other.max_x) - max(self.min_x, other.min_x) > EPS
            and min(self.max_y, other.max_y) - max(self.min_y, other.min_y) > EPS
        )


class Polygon:
    """Simple polygon with counterclockwise vertex order."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[Point]):
        if len(vertices) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        vs = [Point(float(x), float(y)) for x, y in vertices]
        if signed_area(vs) < 0:
            vs.reverse()
        self.vertices = vs

    def __len__(self) -> int:
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def edges(self) -> list[Segment]:
        vs = self.vertices
        return [Segment(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]

    def bounding_rect(self) -> Rect:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return make_rect(min(xs), max(xs), min(ys), max(ys))


def make_rect(min_x: float, max_x: float, min_y: float, max_y: float) -> Rect:
    """Build a Rect, inflating a flat dimension by EPS instead of rejecting it."""
    if max_x - min_x <= 0:
        min_x, max_x = min_x - EPS, max_x + EPS
    if max_y - min_y <= 0:
        min_y, max_y = min_y - EPS, max_y + EPS
    if not (min_x < max_x and min_y < max_y):
        raise ValueError("degenerate rectangle")
    return Rect(min_x, max_x, min_y, max_y)


def dist(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def cross(o: Point, a: Point, b: Point) -> float:
    """Z-component of (a-o) x (b-o); positive when o->a->b turns left."""
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def signed_area(vertices: Sequence[Point]) -> float:
    s = 0.0
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return 0.5 * s


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    """p assumed collinear with a-b; check it lies within the segment's span."""
    return (
        min(a[0], b[0]) - EPS <= p[0] <= max(a[0], b[0]) + EPS
        and min(a[1], b[1]) - EPS <= p[1] <= max(a[1], b[1]) + EPS
    )


def segments_intersect(s1: Segment, s2: Segment) -> tuple[str, Point | None]:
    """Classify how two segments meet.

    Returns one of:
      ("disjoint", None)          no common point
      ("crossing", p)             proper crossing at interior point p
      ("touching", p)             contact at a single endpoint
      ("overlap", None)           collinear with a shared sub-segment
    """
    (p1, p2), (q1, q2) = s1, s2
    d1 = cross(q1, q2, p1)
    d2 = cross(q1, q2, p2)
    d3 = cross(p1, p2, q1)
    d4 = cross(p1, p2, q2)

    # Scale-aware tolerance so long segments behave like unit ones.
    scale = max(abs(v) for p in (p1, p2, q1, q2) for v in p) + 1.0
    tol = EPS * scale

    z1 = abs(d1) <= tol
    z2 = abs(d2) <= tol
    z3 = abs(d3) <= tol
    z4 = abs(d4) <= tol

    if z1 and z2 and z3 and z4:
        # Collinear: overlap, touch at one point, or disjoint.
        pts = []
        for p in (p1, p2):
            if _on_segment(p, q1, q2):
                pts.append(p)
        for q in (q1, q2):
            if _on_segment(q, p1, p2):
                pts.append(q)
        if not pts:
            return ("disjoint", None)
        lo = min(pts)
        hi = max(pts)
        if dist(lo, hi) <= tol:
            return ("touching", Point(*lo))
        return ("overlap", None)

    if not z1 and not z2 and not z3 and not z4:
        if (d1 > 0) != (d2 > 0) and (d3 > 0) != (d4 > 0):
            denom = (p2[0] - p1[0]) * (q2[1] - q1[1]) - (p2[1] - p1[1]) * (q2[0] - q1[0])
            t = ((q1[0] - p1[0]) * (q2[1] - q1[1]) - (q1[1] - p1[1]) * (q2[0] - q1[0])) / denom
            return ("crossing", Point(p1[0] + t * (p2[0] - p1[0]), p1[1] + t * (p2[1] - p1[1])))
        return ("disjoint", None)

    # At least one endpoint sits on the other segment's line.
    for p, dd in ((p1, d1), (p2, d2)):
        if abs(dd) <= tol and _on_segment(p, q1, q2):
            return ("touching", Point(*p))
    for q, dd in ((q1, d3), (q2, d4)):
        if abs(dd) <= tol and _on_segment(q, p1, p2):
            return ("touching", Point(*q))
    return ("disjoint", None)


def segment_intersects_rect(s: Segment, r: Rect) -> bool:
    """True iff s enters the open interior of r.

    A segment that only grazes the boundary (touches a corner, runs along an
    edge) does not count: visibility edges are allowed to run along box
    boundaries.
    """
    (ax, ay), (bx, by) = s
    dx = bx - ax
    dy = by - ay
    t0, t1 = 0.0, 1.0
    for p, q in (
        (-dx, ax - r.min_x),
        (dx, r.max_x - ax),
        (-dy, ay - r.min_y),
        (dy, r.max_y - ay),
    ):
        if abs(p) < EPS:
            if q < -EPS:
                return False  # parallel and outside this slab
            continue
        t = q / p
        if p < 0:
            if t > t1:
                return False
            if t > t0:
                t0 = t
        else:
            if t < t0:
                return False
            if t < t1:
                t1 = t
    if t1 - t0 <= EPS:
        # Degenerate clip: at most a single touching point.
        return False
    tm = 0.5 * (t0 + t1)
    mid = Point(ax + tm * dx, ay + tm * dy)
    return r.contains_strict(mid)


def point_on_polygon_boundary(p: Point, poly: Polygon) -> bool:
    for e in poly.edges():
        if abs(cross(e.a, e.b, p)) <= EPS * (1.0 + dist(e.a, e.b)) and _on_segment(p, e.a, e.b):
            return True
    return False


def point_in_polygon(p: Point, poly: Polygon) -> bool:
    """Strict interior test; points on the boundary count as outside."""
    if point_on_polygon_boundary(p, poly):
        return False
    inside = False
    vs = poly.vertices
    n = len(vs)
    x, y = p
    j = n - 1
    for i in range(n):
        xi, yi = vs[i]
        xj, yj = vs[j]
        if (yi > y) != (yj > y):
            x_cross = xi + (y - yi) / (yj - yi) * (xj - xi)
            if x < x_cross:
                inside = not inside
        j = i
    return inside


def circumcircle(a: Point, b: Point, c: Point) -> tuple[Point, float]:
    """Center and radius of the unique circle through three points.

    Raises ValueError for (near-)collinear input.
    """
    ax, ay = a
    bx, by = b
    cx, cy = c
    d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by))
    scale = max(abs(ax), abs(ay), abs(bx), abs(by), abs(cx), abs(cy), 1.0)
    if abs(d) <= EPS * scale * scale:
        raise ValueError("degenerate triangle")
    a2 = ax * ax + ay * ay
    b2 = bx * bx + by * by
    c2 = cx * cx + cy * cy
    ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d
    uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d
    center = Point(ux, uy)
    return center, dist(center, a)


def convex_hull(points: Sequence[Point]) -> Polygon:
    """Counterclockwise convex hull (Andrew's monotone chain).

    Raises ValueError for fewer than 3 points or an all-collinear input.
    """
    pts = sorted(set((float(x), float(y)) for x, y in points))
    if len(pts) < 3:
        raise ValueError("convex hull needs at least 3 distinct points")

    def half(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and cross(Point(*out[-2]), Point(*out[-1]), Point(*p)) <= EPS:
                out.pop()
            out.append(p)
        return out

    lower = half(pts)
    upper = half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise ValueError("all points collinear")
    return Polygon([Point(*p) for p in hull])


def nearest_node(q: Point, nodes: Sequence[Point]) -> int:
    """Index of the node closest to q; ties go to the lowest index."""
    if len(nodes) == 0:
        raise ValueError("empty node list")
    best = 0
    best_d = dist(q, nodes[0])
    for i in range(1, len(nodes)):
        d = dist(q, nodes[i])
        if d < best_d - EPS:
            best = i
            best_d = d
    return best


def point_segment_distance(p: Point, a: Point, b: Point) -> float:
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    ln2 = dx * dx + dy * dy
    if ln2 <= EPS * EPS:
        return dist(p, a)
    t = ((px - ax) * dx + (py - ay) * dy) / ln2
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * dx), py - (ay + t * dy))


def segment_intersects_polygon(s: Segment, poly: Polygon) -> bool:
    """True iff s passes through the polygon's interior or properly crosses
    its boundary. Touching at vertices or running along edges is allowed."""
    for e in poly.edges():
        kind, _ = segments_intersect(s, e)
        if kind == "crossing":
            return True
    mid = Point(0.5 * (s.a[0] + s.b[0]), 0.5 * (s.a[1] + s.b[1]))
    return point_in_polygon(mid, poly)
