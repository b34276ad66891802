"""Element taxonomy and the geometric mutation each grab action performs.

Every element kind is an immutable dataclass; operations return new
instances.  A rejected mutation (self-intersection, degenerate geometry)
returns the *same* object, which callers use as the rejection signal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

from .geometry import (
    Arc,
    Contour,
    Line,
    Point,
    Rect,
    SegmentPiece,
    ShapeGeom,
    TWO_PI,
    _loop_contains,
    bbox,
    circle_contour,
    dist_segment,
    piece_end,
    piece_start,
    polygon_contour,
    polygon_is_simple,
    rotate_about,
)

MIN_RECT_SIZE = 10.0    # px; rect-backed elements never shrink below this
MIN_RADIUS = 5.0        # px
MIN_SHARE_DEG = 1.0     # degrees; pie sectors never collapse
RING_GAP = 1.0          # px; outer radius exceeds inner by at least this

COMMENT_CHAR_W = 7.0
COMMENT_PAD = 4.0
COMMENT_LINE_H = 18.0
SCALE_THICKNESS = 16.0


class InvariantError(ValueError):
    """An element (or scene) violates one of its stated invariants."""

    def __init__(self, message: str, element_id: int | None = None):
        super().__init__(message)
        self.element_id = element_id


@dataclass(frozen=True, kw_only=True)
class WorldRect:
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        vals = (self.xmin, self.xmax, self.ymin, self.ymax)
        if not all(math.isfinite(v) for v in vals):
            raise InvariantError("non-finite world rect")
        if self.xmin >= self.xmax or self.ymin >= self.ymax:
            raise InvariantError("world rect must have xmin<xmax and ymin<ymax")


@dataclass(frozen=True)
class Wall:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise InvariantError("degenerate wall: endpoints coincide")


@dataclass(frozen=True, kw_only=True)
class Element:
    id: int
    z: int = 0
    rotatable: bool = True
    style: tuple[tuple[str, str], ...] = ()

    def _err(self, message: str) -> InvariantError:
        return InvariantError(f"element {self.id}: {message}", self.id)


@dataclass(frozen=True, kw_only=True)
class PolygonEl(Element):
    geom: ShapeGeom


@dataclass(frozen=True, kw_only=True)
class CircleEl(Element):
    center: Point
    r: float

    def __post_init__(self):
        object.__setattr__(self, "r", float(self.r))
        if not math.isfinite(self.r) or self.r <= 0:
            raise self._err(f"circle radius must be finite and > 0, got {self.r}")


@dataclass(frozen=True, kw_only=True)
class PieEl(Element):
    """Pie (inner_r == 0) or ring with angular sector partitions.

    shares are sector sizes in degrees, summing to 360.  start_deg is the
    screen angle of divider 0 (the boundary before sector 0); divider i
    sits at start_deg + sum(shares[:i]).
    """

    center: Point
    outer_r: float
    inner_r: float = 0.0
    start_deg: float = 0.0
    shares: tuple[float, ...] = (360.0,)

    def __post_init__(self):
        object.__setattr__(self, "outer_r", float(self.outer_r))
        object.__setattr__(self, "inner_r", float(self.inner_r))
        object.__setattr__(self, "start_deg", float(self.start_deg))
        object.__setattr__(self, "shares", tuple(float(s) for s in self.shares))
        if not self.shares:
            raise self._err("pie needs at least one sector")
        if self.outer_r <= 0 or not math.isfinite(self.outer_r):
            raise self._err(f"outer radius must be > 0, got {self.outer_r}")
        if self.inner_r < 0:
            raise self._err(f"inner radius must be >= 0, got {self.inner_r}")
        if self.inner_r > 0 and self.inner_r > self.outer_r - RING_GAP + 1e-9:
            raise self._err(
                f"inner radius {self.inner_r} too close to outer {self.outer_r}"
            )
        if abs(sum(self.shares) - 360.0) > 1e-9:
            raise self._err(f"sector shares sum to {sum(self.shares)}, expected 360")
        if any(s < MIN_SHARE_DEG - 1e-9 for s in self.shares):
            raise self._err("every sector share must be >= 1 degree")


@dataclass(frozen=True, kw_only=True)
class ControlEl(Element):
    rect: Rect
    tag: str
    rotatable: bool = False

    def __post_init__(self):
        if self.rotatable:
            raise self._err("controls are never rotatable")


@dataclass(frozen=True, kw_only=True)
class CommentEl(Element):
    anchor: Point
    angle: float = 0.0
    text: str = ""
    attached_to: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "angle", float(self.angle))
        if not math.isfinite(self.angle):
            raise self._err("comment angle must be finite")


@dataclass(frozen=True, kw_only=True)
class PlotAreaEl(Element):
    rect: Rect
    world: WorldRect
    rotatable: bool = False

    def __post_init__(self):
        if self.rotatable:
            # the axis-aligned rect/world mapping cannot carry an angle
            raise self._err("plot areas are not rotatable")


@dataclass(frozen=True, kw_only=True)
class ScaleEl(Element):
    attached_to: int
    edge: str  # "left" | "bottom"
    offset: float = 8.0
    rotatable: bool = False

    def __post_init__(self):
        object.__setattr__(self, "offset", float(self.offset))
        if self.edge not in ("left", "bottom"):
            raise self._err(f"scale edge must be 'left' or 'bottom', got {self.edge!r}")
        if self.rotatable:
            raise self._err("scales are not rotatable")


@dataclass(frozen=True, kw_only=True)
class SpotEl(Element):
    center: Point
    r: float
    mode: str = "free"  # "free" | "path" | "maze"
    target_id: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "r", float(self.r))
        if self.r <= 0 or not math.isfinite(self.r):
            raise self._err(f"spot radius must be > 0, got {self.r}")
        if self.mode not in ("free", "path", "maze"):
            raise self._err(f"unknown spot mode {self.mode!r}")
        if self.mode != "free" and self.target_id is None:
            raise self._err(f"spot mode {self.mode!r} needs a target element")


@dataclass(frozen=True, kw_only=True)
class LabyrinthEl(Element):
    walls: tuple[Wall, ...]
    thickness: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "walls", tuple(self.walls))
        object.__setattr__(self, "thickness", float(self.thickness))
        if self.thickness <= 0:
            raise self._err("wall thickness must be > 0")


@dataclass(frozen=True, kw_only=True)
class PathEl(Element):
    pts: tuple[Point, ...]

    def __post_init__(self):
        object.__setattr__(self, "pts", tuple(self.pts))
        if len(self.pts) < 2:
            raise self._err("path needs at least 2 points")


# --- derived geometry ----------------------------------------------------

def pie_shape(el: PieEl) -> ShapeGeom:
    holes = (circle_contour(el.center, el.inner_r),) if el.inner_r > 0 else ()
    return ShapeGeom(circle_contour(el.center, el.outer_r), holes)


def comment_corners(el: CommentEl) -> list[Point]:
    """Corners of the comment's text box, rotated about its anchor."""
    w = (max(len(el.text), 1) * COMMENT_CHAR_W + 2 * COMMENT_PAD) / 2.0
    h = COMMENT_LINE_H / 2.0
    raw = [
        Point(el.anchor.x - w, el.anchor.y - h),
        Point(el.anchor.x + w, el.anchor.y - h),
        Point(el.anchor.x + w, el.anchor.y + h),
        Point(el.anchor.x - w, el.anchor.y + h),
    ]
    if el.angle == 0.0:
        return raw
    return [rotate_about(p, el.anchor, el.angle) for p in raw]


def comment_shape(el: CommentEl) -> ShapeGeom:
    return ShapeGeom(polygon_contour(comment_corners(el)))


def rect_edges(rect: Rect) -> list[Line]:
    """Edge lines in fixed border-id order: 0 left, 1 top, 2 right, 3 bottom."""
    lo, hi = rect.min, rect.max
    return [
        Line(Point(lo.x, lo.y), Point(lo.x, hi.y)),
        Line(Point(lo.x, lo.y), Point(hi.x, lo.y)),
        Line(Point(hi.x, lo.y), Point(hi.x, hi.y)),
        Line(Point(lo.x, hi.y), Point(hi.x, hi.y)),
    ]


def rect_shape_of(rect: Rect) -> ShapeGeom:
    return ShapeGeom(polygon_contour(
        [rect.min, Point(rect.max.x, rect.min.y), rect.max, Point(rect.min.x, rect.max.y)]
    ))


def scale_rect(el: ScaleEl, area_rect: Rect) -> Rect:
    if el.edge == "left":
        x1 = area_rect.min.x - el.offset
        return Rect(Point(x1 - SCALE_THICKNESS, area_rect.min.y), Point(x1, area_rect.max.y))
    y0 = area_rect.max.y + el.offset
    return Rect(Point(area_rect.min.x, y0), Point(area_rect.max.x, y0 + SCALE_THICKNESS))


def divider_angles_deg(el: PieEl) -> list[float]:
    """Absolute screen angle (degrees) of each divider, index-aligned."""
    out = []
    acc = el.start_deg
    for share in el.shares:
        out.append(acc % 360.0)
        acc += share
    return out


def divider_points(el: PieEl) -> list[Point]:
    return [
        Point(
            el.center.x + el.outer_r * math.cos(math.radians(a)),
            el.center.y + el.outer_r * math.sin(math.radians(a)),
        )
        for a in divider_angles_deg(el)
    ]


Resolver = Callable[[int], Element]


def shape_of(el: Element, resolve: Resolver | None = None) -> ShapeGeom | None:
    """Area shape for containment, or None for line-like elements."""
    if isinstance(el, PolygonEl):
        return el.geom
    if isinstance(el, CircleEl):
        return ShapeGeom(circle_contour(el.center, el.r))
    if isinstance(el, PieEl):
        return pie_shape(el)
    if isinstance(el, ControlEl):
        return rect_shape_of(el.rect)
    if isinstance(el, CommentEl):
        return comment_shape(el)
    if isinstance(el, PlotAreaEl):
        return rect_shape_of(el.rect)
    if isinstance(el, ScaleEl):
        if resolve is None:
            raise ValueError("scale geometry needs an element resolver")
        area = resolve(el.attached_to)
        if not isinstance(area, PlotAreaEl):
            raise el._err("scale must be attached to a plot area")
        return rect_shape_of(scale_rect(el, area.rect))
    if isinstance(el, SpotEl):
        return ShapeGeom(circle_contour(el.center, el.r))
    return None  # labyrinth, path


def bbox_of(el: Element, resolve: Resolver | None = None) -> Rect:
    if isinstance(el, (ControlEl, PlotAreaEl)):
        return el.rect
    if isinstance(el, CircleEl):
        return Rect(Point(el.center.x - el.r, el.center.y - el.r),
                    Point(el.center.x + el.r, el.center.y + el.r))
    if isinstance(el, PieEl):
        r = el.outer_r
        return Rect(Point(el.center.x - r, el.center.y - r),
                    Point(el.center.x + r, el.center.y + r))
    if isinstance(el, SpotEl):
        return Rect(Point(el.center.x - el.r, el.center.y - el.r),
                    Point(el.center.x + el.r, el.center.y + el.r))
    if isinstance(el, LabyrinthEl):
        xs = [p for w in el.walls for p in (w.a.x, w.b.x)]
        ys = [p for w in el.walls for p in (w.a.y, w.b.y)]
        m = el.thickness / 2.0
        if not xs:
            return Rect(Point(0, 0), Point(0, 0))
        return Rect(Point(min(xs) - m, min(ys) - m), Point(max(xs) + m, max(ys) + m))
    if isinstance(el, PathEl):
        xs = [p.x for p in el.pts]
        ys = [p.y for p in el.pts]
        return Rect(Point(min(xs), min(ys)), Point(max(xs), max(ys)))
    shape = shape_of(el, resolve)
    assert shape is not None
    return bbox(shape)


def outer_border_pieces(el: Element) -> list[SegmentPiece]:
    """Resizable border pieces, index-aligned with ResizeBorder ids."""
    if isinstance(el, PolygonEl):
        return list(el.geom.outer.pieces)
    if isinstance(el, CircleEl):
        return [Arc(el.center, el.r, 0.0, TWO_PI)]
    if isinstance(el, PieEl):
        pieces: list[SegmentPiece] = [Arc(el.center, el.outer_r, 0.0, TWO_PI)]
        if el.inner_r > 0:
            pieces.append(Arc(el.center, el.inner_r, 0.0, TWO_PI))
        return pieces
    if isinstance(el, (ControlEl, PlotAreaEl)):
        return list(rect_edges(el.rect))
    return []


# --- mutations -----------------------------------------------------------

def _translate_piece(piece: SegmentPiece, dx: float, dy: float) -> SegmentPiece:
    if isinstance(piece, Line):
        return Line(piece.a.translated(dx, dy), piece.b.translated(dx, dy))
    return Arc(piece.center.translated(dx, dy), piece.radius, piece.start_angle, piece.sweep)


def _translate_shape(geom: ShapeGeom, dx: float, dy: float) -> ShapeGeom:
    def tr(contour: Contour) -> Contour:
        return Contour(tuple(_translate_piece(p, dx, dy) for p in contour.pieces))
    return ShapeGeom(tr(geom.outer), tuple(tr(h) for h in geom.holes))


def _translate_rect(rect: Rect, dx: float, dy: float) -> Rect:
    return Rect(rect.min.translated(dx, dy), rect.max.translated(dx, dy))


def move_by(el: Element, dx: float, dy: float) -> Element:
    """Translate the whole element; shape, size, and angles are unchanged.

    Scales are pinned to their plot area, so only the component
    perpendicular to their edge moves them (it is re-recorded as offset).
    """
    if isinstance(el, PolygonEl):
        return replace(el, geom=_translate_shape(el.geom, dx, dy))
    if isinstance(el, (CircleEl, PieEl, SpotEl)):
        return replace(el, center=el.center.translated(dx, dy))
    if isinstance(el, (ControlEl, PlotAreaEl)):
        return replace(el, rect=_translate_rect(el.rect, dx, dy))
    if isinstance(el, CommentEl):
        return replace(el, anchor=el.anchor.translated(dx, dy))
    if isinstance(el, ScaleEl):
        if el.edge == "left":
            return replace(el, offset=el.offset - dx)
        return replace(el, offset=el.offset + dy)
    if isinstance(el, LabyrinthEl):
        return replace(el, walls=tuple(
            Wall(w.a.translated(dx, dy), w.b.translated(dx, dy)) for w in el.walls
        ))
    if isinstance(el, PathEl):
        return replace(el, pts=tuple(p.translated(dx, dy) for p in el.pts))
    raise TypeError(f"cannot move {type(el).__name__}")


def rotate_to(el: Element, pivot: Point, dtheta: float) -> Element:
    """Rotate about pivot by dtheta; returns el unchanged if not rotatable."""
    if not el.rotatable:
        return el

    def rot(p: Point) -> Point:
        return rotate_about(p, pivot, dtheta)

    if isinstance(el, PolygonEl):
        def rot_piece(piece: SegmentPiece) -> SegmentPiece:
            if isinstance(piece, Line):
                return Line(rot(piece.a), rot(piece.b))
            return Arc(rot(piece.center), piece.radius,
                       piece.start_angle + dtheta, piece.sweep)

        def rot_contour(contour: Contour) -> Contour:
            return Contour(tuple(rot_piece(p) for p in contour.pieces))

        return replace(el, geom=ShapeGeom(
            rot_contour(el.geom.outer), tuple(rot_contour(h) for h in el.geom.holes)
        ))
    if isinstance(el, CircleEl) or isinstance(el, SpotEl):
        return replace(el, center=rot(el.center))
    if isinstance(el, PieEl):
        return replace(el, center=rot(el.center),
                       start_deg=(el.start_deg + math.degrees(dtheta)) % 360.0)
    if isinstance(el, CommentEl):
        return replace(el, anchor=rot(el.anchor), angle=(el.angle + dtheta) % TWO_PI)
    if isinstance(el, LabyrinthEl):
        return replace(el, walls=tuple(Wall(rot(w.a), rot(w.b)) for w in el.walls))
    if isinstance(el, PathEl):
        return replace(el, pts=tuple(rot(p) for p in el.pts))
    return el


def _resize_rect(rect: Rect, border_id: int, cursor: Point) -> Rect:
    x0, y0, x1, y1 = rect.min.x, rect.min.y, rect.max.x, rect.max.y
    if border_id == 0:
        x0 = min(cursor.x, x1 - MIN_RECT_SIZE)
    elif border_id == 1:
        y0 = min(cursor.y, y1 - MIN_RECT_SIZE)
    elif border_id == 2:
        x1 = max(cursor.x, x0 + MIN_RECT_SIZE)
    elif border_id == 3:
        y1 = max(cursor.y, y0 + MIN_RECT_SIZE)
    else:
        raise ValueError(f"rect border id must be 0..3, got {border_id}")
    return Rect(Point(x0, y0), Point(x1, y1))


def _polygon_outer_points(geom: ShapeGeom) -> list[Point]:
    return geom.outer.vertices


def _polygon_with_outer(el: PolygonEl, pts: list[Point]) -> PolygonEl | None:
    """Rebuild the polygon with new outer vertices; None when invalid."""
    if not polygon_is_simple([(p.x, p.y) for p in pts]):
        return None
    try:
        outer = polygon_contour(pts)
        # holes must survive the new outer border
        loop = outer.flat
        for hole in el.geom.holes:
            if not all(_loop_contains(loop, x, y) for (x, y) in hole.flat):
                return None
        return replace(el, geom=ShapeGeom(outer, el.geom.holes))
    except ValueError:
        return None


def resize_border(el: Element, border_id: int, cursor: Point) -> Element:
    """Drag one border; opposite/other borders stay fixed.

    Rect-backed elements clamp to MIN_RECT_SIZE, radii clamp to
    MIN_RADIUS, a pie's inner border stays RING_GAP inside the outer one.
    A mutation that would break an invariant returns el unchanged.
    """
    if isinstance(el, (ControlEl, PlotAreaEl)):
        return replace(el, rect=_resize_rect(el.rect, border_id, cursor))
    if isinstance(el, CircleEl):
        d = math.hypot(cursor.x - el.center.x, cursor.y - el.center.y)
        return replace(el, r=max(d, MIN_RADIUS))
    if isinstance(el, PieEl):
        d = math.hypot(cursor.x - el.center.x, cursor.y - el.center.y)
        if border_id == 0:
            lo = MIN_RADIUS if el.inner_r == 0 else max(MIN_RADIUS, el.inner_r + RING_GAP)
            return replace(el, outer_r=max(d, lo))
        if border_id == 1 and el.inner_r > 0:
            return replace(el, inner_r=min(max(d, 0.0), el.outer_r - RING_GAP))
        return el
    if isinstance(el, PolygonEl):
        return _resize_polygon_border(el, border_id, cursor)
    return el


def _resize_polygon_border(el: PolygonEl, border_id: int, cursor: Point) -> Element:
    pieces = list(el.geom.outer.pieces)
    if not (0 <= border_id < len(pieces)):
        return el
    n = len(pieces)
    piece = pieces[border_id]
    prev = pieces[(border_id - 1) % n]
    nxt = pieces[(border_id + 1) % n]
    # neighbors must be lines: only a line can absorb a moved endpoint
    if n > 1 and not (isinstance(prev, Line) and isinstance(nxt, Line)):
        return el

    if isinstance(piece, Line):
        ex, ey = piece.b.x - piece.a.x, piece.b.y - piece.a.y
        length = math.hypot(ex, ey)
        nx, ny = -ey / length, ex / length
        s = (cursor.x - piece.a.x) * nx + (cursor.y - piece.a.y) * ny
        moved: SegmentPiece = Line(piece.a.translated(nx * s, ny * s),
                                   piece.b.translated(nx * s, ny * s))
    else:
        mid = piece.point_at(piece.start_angle + piece.sweep / 2.0)
        length = math.hypot(mid.x - piece.center.x, mid.y - piece.center.y)
        nx, ny = (mid.x - piece.center.x) / length, (mid.y - piece.center.y) / length
        s = (cursor.x - mid.x) * nx + (cursor.y - mid.y) * ny
        moved = Arc(piece.center.translated(nx * s, ny * s), piece.radius,
                    piece.start_angle, piece.sweep)
        if n == 1:  # lone full-circle piece: just translate it
            return replace(el, geom=ShapeGeom(Contour((moved,)), el.geom.holes))

    new_pieces = list(pieces)
    new_pieces[border_id] = moved
    try:
        a, b = piece_start(moved), piece_end(moved)
        if n == 2:
            new_pieces[(border_id + 1) % 2] = Line(b, a)  # single shared neighbor
        else:
            new_pieces[(border_id - 1) % n] = Line(prev.a, a)
            new_pieces[(border_id + 1) % n] = Line(b, nxt.b)
        outer = Contour(tuple(new_pieces))
    except ValueError:
        return el
    flat = outer.flat
    if not polygon_is_simple(flat):
        return el
    for hole in el.geom.holes:
        if not all(_loop_contains(flat, x, y) for (x, y) in hole.flat):
            return el
    return replace(el, geom=ShapeGeom(outer, el.geom.holes))


def reconfigure_vertex(el: Element, index: int, cursor: Point) -> Element:
    """Drag one special point; every other coordinate stays bit-identical.

    Polygons reject drags that would self-intersect the outer contour.
    """
    if isinstance(el, PolygonEl):
        if not el.geom.outer.all_lines:
            return el
        pts = _polygon_outer_points(el.geom)
        if not (0 <= index < len(pts)):
            return el
        new_pts = list(pts)
        new_pts[index] = cursor
        rebuilt = _polygon_with_outer(el, new_pts)
        return el if rebuilt is None else rebuilt
    if isinstance(el, PathEl):
        if not (0 <= index < len(el.pts)):
            return el
        pts = list(el.pts)
        pts[index] = cursor
        return replace(el, pts=tuple(pts))
    if isinstance(el, LabyrinthEl):
        wi, end = divmod(index, 2)
        if not (0 <= wi < len(el.walls)):
            return el
        wall = el.walls[wi]
        try:
            new_wall = Wall(cursor, wall.b) if end == 0 else Wall(wall.a, cursor)
        except InvariantError:
            return el
        walls = list(el.walls)
        walls[wi] = new_wall
        return replace(el, walls=tuple(walls))
    return el


def drag_divider(el: PieEl, index: int, cursor: Point) -> PieEl:
    """Move divider `index` to the cursor's polar angle about the center.

    Only the two adjacent shares change; both stay >= 1 degree; the last
    share is recomputed as 360 minus the others so the total is conserved.
    """
    n = len(el.shares)
    if not (0 <= index < n):
        return el
    theta = math.degrees(math.atan2(cursor.y - el.center.y, cursor.x - el.center.x)) % 360.0
    if n == 1:
        return replace(el, start_deg=theta)

    shares = list(el.shares)
    if index == 0:
        pair = shares[n - 1] + shares[0]
        a1 = (el.start_deg + shares[0]) % 360.0  # divider 1 stays put
        new0 = (a1 - theta) % 360.0
        if abs((new0 - 360.0) - shares[0]) < abs(new0 - shares[0]):
            new0 -= 360.0
        new0 = min(max(new0, MIN_SHARE_DEG), pair - MIN_SHARE_DEG)
        shares[0] = new0
        shares[n - 1] = pair - new0
        start = (a1 - new0) % 360.0
        shares[n - 1] = 360.0 - sum(shares[: n - 1])
        return replace(el, start_deg=start, shares=tuple(shares))

    cum = [0.0]
    for s in shares:
        cum.append(cum[-1] + s)
    delta = (theta - el.start_deg) % 360.0
    if abs((delta - 360.0) - cum[index]) < abs(delta - cum[index]):
        delta -= 360.0
    lo = cum[index - 1] + MIN_SHARE_DEG
    hi = cum[index + 1] - MIN_SHARE_DEG
    new_c = min(max(delta, lo), hi)
    shares[index - 1] = new_c - cum[index - 1]
    shares[index] = cum[index + 1] - new_c
    shares[n - 1] = 360.0 - sum(shares[: n - 1])
    return replace(el, shares=tuple(shares))


def constrained_spot_move(lab: LabyrinthEl, spot: SpotEl, target: Point) -> Point:
    """Farthest reachable point toward target that stays clear of every wall.

    The spot advances along the straight segment center->target in steps
    bounded by its current clearance, so it can never cross a wall; it
    stops within 0.1 px of first contact.  The returned point is always
    collision-free.
    """
    clear_r = spot.r + lab.thickness / 2.0
    cx, cy = spot.center.x, spot.center.y
    dx, dy = target.x - cx, target.y - cy
    length = math.hypot(dx, dy)
    if length == 0.0 or not lab.walls:
        return target

    walls = [(w.a.x, w.a.y, w.b.x, w.b.y) for w in lab.walls]

    def gap_at(x: float, y: float) -> float:
        return min(dist_segment(x, y, *w) for w in walls) - clear_r

    if gap_at(cx, cy) < 0.0:
        return spot.center  # already pinched: refuse to move deeper
    ux, uy = dx / length, dy / length
    s = 0.0
    for _ in range(20_000):
        if s >= length:
            return target
        gap = gap_at(cx + ux * s, cy + uy * s)
        if gap <= 0.1:
            return Point(cx + ux * s, cy + uy * s)
        s = min(length, s + gap)
    return Point(cx + ux * s, cy + uy * s)
