"""Planar primitives shared by every other module.

Conventions (one set, everywhere):

* Coordinates are screen pixels: x grows right, y grows DOWN.
* Angles are radians.  The usual rotation formulas applied to a y-down
  axis turn clockwise on screen for positive angles.
* Containment uses arc flattening at 0.25 px sagitta; distances use the
  exact arc math.  Points exactly on a border count as inside.

All types are immutable values; every function is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

ARC_SAGITTA = 0.25      # px tolerance when flattening arcs for containment
CLOSE_TOL = 1e-6        # px tolerance for contour closure
BORDER_EPS = 1e-9       # "exactly on the border" slack

TWO_PI = 2.0 * math.pi


def _finite(*vals: float) -> bool:
    return all(math.isfinite(v) for v in vals)


@dataclass(frozen=True)
class Point:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not _finite(self.x, self.y):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")

    def translated(self, dx: float, dy: float) -> "Point":
        return Point(self.x + dx, self.y + dy)


@dataclass(frozen=True)
class Line:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("degenerate line piece: endpoints coincide")


@dataclass(frozen=True)
class Arc:
    center: Point
    radius: float
    start_angle: float
    sweep: float

    def __post_init__(self):
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "start_angle", float(self.start_angle))
        object.__setattr__(self, "sweep", float(self.sweep))
        if not _finite(self.radius, self.start_angle, self.sweep):
            raise ValueError("non-finite arc parameters")
        if self.radius <= 0.0:
            raise ValueError(f"arc radius must be > 0, got {self.radius}")
        if abs(self.sweep) > TWO_PI + 1e-12:
            raise ValueError(f"|sweep| must be <= 2*pi, got {self.sweep}")
        if self.sweep == 0.0:
            raise ValueError("arc sweep must be nonzero")

    def point_at(self, angle: float) -> Point:
        return Point(
            self.center.x + self.radius * math.cos(angle),
            self.center.y + self.radius * math.sin(angle),
        )

    @property
    def start(self) -> Point:
        return self.point_at(self.start_angle)

    @property
    def end(self) -> Point:
        return self.point_at(self.start_angle + self.sweep)


SegmentPiece = Union[Line, Arc]


def piece_start(piece: SegmentPiece) -> Point:
    return piece.a if isinstance(piece, Line) else piece.start


def piece_end(piece: SegmentPiece) -> Point:
    return piece.b if isinstance(piece, Line) else piece.end


def flatten_piece(piece: SegmentPiece, sagitta: float = ARC_SAGITTA) -> list[Point]:
    """Chord polyline for a piece, endpoints included.

    Chord count keeps the sagitta (max chord-to-arc deviation) under the
    tolerance; lines pass through unchanged.
    """
    if isinstance(piece, Line):
        return [piece.a, piece.b]
    frac = 1.0 - sagitta / piece.radius
    max_step = 2.0 * math.acos(frac) if -1.0 < frac < 1.0 else math.pi
    n = max(1, math.ceil(abs(piece.sweep) / max_step))
    # keep at least quarter-turn resolution so sub-pixel circles stay loops
    n = max(n, math.ceil(abs(piece.sweep) / (math.pi / 2.0)))
    return [piece.point_at(piece.start_angle + piece.sweep * k / n) for k in range(n + 1)]


@dataclass(frozen=True)
class Contour:
    """Closed loop of pieces; end of each piece meets the start of the next."""

    pieces: tuple[SegmentPiece, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(self.pieces))
        if not self.pieces:
            raise ValueError("contour needs at least one piece")
        n = len(self.pieces)
        for i, piece in enumerate(self.pieces):
            e = piece_end(piece)
            s = piece_start(self.pieces[(i + 1) % n])
            if math.hypot(e.x - s.x, e.y - s.y) > CLOSE_TOL:
                raise ValueError(f"contour not closed between pieces {i} and {(i + 1) % n}")

    @cached_property
    def flat(self) -> list[tuple[float, float]]:
        """Flattened loop at the containment tolerance (not re-closed)."""
        pts: list[tuple[float, float]] = []
        for piece in self.pieces:
            for p in flatten_piece(piece)[:-1]:
                pts.append((p.x, p.y))
        return pts

    @cached_property
    def all_lines(self) -> bool:
        return all(isinstance(p, Line) for p in self.pieces)

    @cached_property
    def vertices(self) -> list[Point]:
        """Start point of each piece, in order."""
        return [piece_start(p) for p in self.pieces]


def polygon_contour(pts: list[Point] | tuple[Point, ...]) -> Contour:
    n = len(pts)
    if n < 3:
        raise ValueError("polygon contour needs at least 3 vertices")
    return Contour(tuple(Line(pts[i], pts[(i + 1) % n]) for i in range(n)))


def circle_contour(center: Point, r: float) -> Contour:
    return Contour((Arc(center, r, 0.0, TWO_PI),))


def _loop_contains(loop: list[tuple[float, float]], px: float, py: float) -> bool:
    inside = False
    n = len(loop)
    xj, yj = loop[-1]
    for i in range(n):
        xi, yi = loop[i]
        if (yi > py) != (yj > py):
            xcross = xi + (py - yi) * (xj - xi) / (yj - yi)
            if px < xcross:
                inside = not inside
        xj, yj = xi, yi
    return inside


@dataclass(frozen=True)
class ShapeGeom:
    """Area with an outer border and zero or more holes.

    Hole validity (strictly inside the outer contour, pairwise disjoint) is
    checked by sampling the flattened hole loops.
    """

    outer: Contour
    holes: tuple[Contour, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "holes", tuple(self.holes))
        outer_loop = self.outer.flat
        for hi, hole in enumerate(self.holes):
            for (x, y) in hole.flat:
                if not _loop_contains(outer_loop, x, y):
                    raise ValueError(f"hole {hi} not inside outer contour")
            for hj in range(hi):
                other = self.holes[hj].flat
                if any(_loop_contains(other, x, y) for (x, y) in hole.flat):
                    raise ValueError(f"holes {hj} and {hi} overlap")

    @cached_property
    def loops(self) -> list[list[tuple[float, float]]]:
        return [self.outer.flat] + [h.flat for h in self.holes]

    @cached_property
    def all_pieces(self) -> list[SegmentPiece]:
        pieces = list(self.outer.pieces)
        for h in self.holes:
            pieces.extend(h.pieces)
        return pieces


def rect_shape(x0: float, y0: float, x1: float, y1: float) -> ShapeGeom:
    return ShapeGeom(polygon_contour(
        [Point(x0, y0), Point(x1, y0), Point(x1, y1), Point(x0, y1)]
    ))


@dataclass(frozen=True)
class Rect:
    min: Point
    max: Point

    def __post_init__(self):
        if self.min.x > self.max.x or self.min.y > self.max.y:
            raise ValueError("rect min must not exceed max")

    @property
    def width(self) -> float:
        return self.max.x - self.min.x

    @property
    def height(self) -> float:
        return self.max.y - self.min.y

    @property
    def center(self) -> Point:
        return Point((self.min.x + self.max.x) / 2.0, (self.min.y + self.max.y) / 2.0)

    def contains_point(self, p: Point) -> bool:
        return self.min.x <= p.x <= self.max.x and self.min.y <= p.y <= self.max.y

    def expanded(self, m: float) -> "Rect":
        return Rect(Point(self.min.x - m, self.min.y - m), Point(self.max.x + m, self.max.y + m))

    def union(self, other: "Rect") -> "Rect":
        return Rect(
            Point(min(self.min.x, other.min.x), min(self.min.y, other.min.y)),
            Point(max(self.max.x, other.max.x), max(self.max.y, other.max.y)),
        )


def rect_from_corners(x0: float, y0: float, x1: float, y1: float) -> Rect:
    return Rect(Point(min(x0, x1), min(y0, y1)), Point(max(x0, x1), max(y0, y1)))


# --- operations ---------------------------------------------------------

def contains(shape: ShapeGeom, p: Point) -> bool:
    """True iff p is inside the outer contour and outside every hole.

    Even-odd crossing test over the flattened loops; points on a border
    (within BORDER_EPS exact distance) count as inside.
    """
    inside = False
    for loop in shape.loops:
        if _loop_contains(loop, p.x, p.y):
            inside = not inside
    if inside:
        return True
    # crossing test said no: points exactly on a border still count as inside
    return any(dist_to_piece(p, piece) <= BORDER_EPS for piece in shape.all_pieces)


def dist_segment(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> float:
    dx, dy = bx - ax, by - ay
    den = dx * dx + dy * dy
    if den == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / den
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return math.hypot(px - (ax + dx * t), py - (ay + dy * t))


def _angle_in_sweep(angle: float, start: float, sweep: float) -> bool:
    if sweep < 0.0:
        start, sweep = start + sweep, -sweep
    d = (angle - start) % TWO_PI
    return d <= sweep


def dist_to_piece(p: Point, piece: SegmentPiece) -> float:
    """Exact Euclidean distance from p to a line segment or arc."""
    if isinstance(piece, Line):
        return dist_segment(p.x, p.y, piece.a.x, piece.a.y, piece.b.x, piece.b.y)
    dx, dy = p.x - piece.center.x, p.y - piece.center.y
    rho = math.hypot(dx, dy)
    if abs(piece.sweep) >= TWO_PI - 1e-12:
        return abs(rho - piece.radius)
    ang = math.atan2(dy, dx)
    if _angle_in_sweep(ang, piece.start_angle, piece.sweep):
        return abs(rho - piece.radius)
    s, e = piece.start, piece.end
    return min(math.hypot(p.x - s.x, p.y - s.y), math.hypot(p.x - e.x, p.y - e.y))


def rotate_about(p: Point, pivot: Point, theta: float) -> Point:
    """Rotate p about pivot by theta (clockwise on screen for theta > 0)."""
    c, s = math.cos(theta), math.sin(theta)
    dx, dy = p.x - pivot.x, p.y - pivot.y
    return Point(pivot.x + dx * c - dy * s, pivot.y + dx * s + dy * c)


def _arc_bbox(arc: Arc) -> Rect:
    xs = [arc.start.x, arc.end.x]
    ys = [arc.start.y, arc.end.y]
    # quadrant extremes reached within the swept range
    for k in range(4):
        cardinal = k * math.pi / 2.0
        if _angle_in_sweep(cardinal, arc.start_angle, arc.sweep):
            q = arc.point_at(cardinal)
            xs.append(q.x)
            ys.append(q.y)
    return Rect(Point(min(xs), min(ys)), Point(max(xs), max(ys)))


def contour_bbox(contour: Contour) -> Rect:
    box: Rect | None = None
    for piece in contour.pieces:
        if isinstance(piece, Line):
            b = rect_from_corners(piece.a.x, piece.a.y, piece.b.x, piece.b.y)
        else:
            b = _arc_bbox(piece)
        box = b if box is None else box.union(b)
    assert box is not None
    return box


def bbox(shape: ShapeGeom) -> Rect:
    """Tight axis-aligned box of the outer contour (arcs handled exactly)."""
    return contour_bbox(shape.outer)


def project_to_polyline(p: Point, pts: list[Point] | tuple[Point, ...]) -> tuple[Point, int, float]:
    """Nearest point on the polyline.

    Ties break to the smallest segment index, then the smallest t, so a
    query exactly at a shared vertex names the earlier segment with t=1.
    """
    if len(pts) < 2:
        raise ValueError("polyline needs at least 2 points")
    best_d = math.inf
    best: tuple[Point, int, float] | None = None
    for i in range(len(pts) - 1):
        ax, ay = pts[i].x, pts[i].y
        bx, by = pts[i + 1].x, pts[i + 1].y
        dx, dy = bx - ax, by - ay
        den = dx * dx + dy * dy
        t = 0.0 if den == 0.0 else ((p.x - ax) * dx + (p.y - ay) * dy) / den
        if t < 0.0:
            t = 0.0
        elif t > 1.0:
            t = 1.0
        fx, fy = ax + dx * t, ay + dy * t
        d = math.hypot(p.x - fx, p.y - fy)
        if d < best_d:
            best_d = d
            best = (Point(fx, fy), i, t)
    assert best is not None
    return best


# --- simple-polygon test ------------------------------------------------

def _orient(ax, ay, bx, by, cx, cy) -> float:
    return (bx - ax) * (cy - ay) - (by - ay) * (cx - ax)


def _on_segment(ax, ay, bx, by, px, py) -> bool:
    return min(ax, bx) <= px <= max(ax, bx) and min(ay, by) <= py <= max(ay, by)


def segments_intersect(a: tuple[float, float], b: tuple[float, float],
                       c: tuple[float, float], d: tuple[float, float]) -> bool:
    """True when segments ab and cd share any point (touching included)."""
    o1 = _orient(*a, *b, *c)
    o2 = _orient(*a, *b, *d)
    o3 = _orient(*c, *d, *a)
    o4 = _orient(*c, *d, *b)
    if ((o1 > 0) != (o2 > 0)) and ((o3 > 0) != (o4 > 0)) and o1 != 0 and o2 != 0 and o3 != 0 and o4 != 0:
        return True
    if o1 == 0 and _on_segment(*a, *b, *c):
        return True
    if o2 == 0 and _on_segment(*a, *b, *d):
        return True
    if o3 == 0 and _on_segment(*c, *d, *a):
        return True
    if o4 == 0 and _on_segment(*c, *d, *b):
        return True
    return False


def polygon_is_simple(pts: list[tuple[float, float]]) -> bool:
    """No repeated vertices, no zero-length edges, no edge crossings.

    Adjacent edges may share only their common vertex.  O(n^2); polygons
    here are small.
    """
    n = len(pts)
    if n < 3:
        return False
    if len({(x, y) for (x, y) in pts}) != n:
        return False
    for i in range(n):
        # a vertex whose edges fold back along the same line is a spike
        px, py = pts[i]
        qx, qy = pts[(i - 1) % n]
        rx, ry = pts[(i + 1) % n]
        if _orient(qx, qy, px, py, rx, ry) == 0.0 and (px - qx) * (rx - px) + (py - qy) * (ry - py) < 0.0:
            return False
    edges = [(pts[i], pts[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        a, b = edges[i]
        if a == b:
            return False
        for j in range(i + 1, n):
            if (j + 1) % n == i or (i + 1) % n == j:
                continue  # adjacent: shared vertex is legal
            c, d = edges[j]
            if segments_intersect(a, b, c, d):
                return False
    return True
