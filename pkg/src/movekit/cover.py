"""Covers: the ordered list of invisible sensitive areas on an element.

A cover is what makes an element grabbable.  Node order encodes priority:
special points (vertices, dividers, control corners) come first, border
strips second, the interior catch-all last.  Hit resolution returns the
first node containing the query point; ties never need breaking because
order is the tie-break.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Union

from .geometry import (
    Arc,
    Line,
    Point,
    Rect,
    SegmentPiece,
    ShapeGeom,
    bbox,
    contains,
    dist_segment,
    dist_to_piece,
    flatten_piece,
)
from .elements import (
    CircleEl,
    CommentEl,
    ControlEl,
    Element,
    LabyrinthEl,
    PathEl,
    PieEl,
    PlotAreaEl,
    PolygonEl,
    Resolver,
    ScaleEl,
    SpotEl,
    comment_shape,
    divider_points,
    pie_shape,
    rect_edges,
    rect_shape_of,
    scale_rect,
    shape_of,
)


@dataclass(frozen=True)
class CoverParams:
    strip_halfwidth: float = 3.0
    vertex_radius: float = 5.0
    frame_margin: float = 6.0

    def __post_init__(self):
        if min(self.strip_halfwidth, self.vertex_radius, self.frame_margin) <= 0:
            raise ValueError("cover parameters must be positive")


# node actions

@dataclass(frozen=True)
class Move:
    pass


@dataclass(frozen=True)
class ResizeBorder:
    border_id: int


@dataclass(frozen=True)
class Vertex:
    index: int


@dataclass(frozen=True)
class Divider:
    index: int


@dataclass(frozen=True)
class PathConstrained:
    pass


@dataclass(frozen=True)
class Transparent:
    pass


NodeAction = Union[Move, ResizeBorder, Vertex, Divider, PathConstrained, Transparent]


# node shapes

@dataclass(frozen=True)
class CircleNode:
    center: Point
    r: float

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("circle node radius must be > 0")

    @cached_property
    def bounds(self) -> Rect:
        return Rect(Point(self.center.x - self.r, self.center.y - self.r),
                    Point(self.center.x + self.r, self.center.y + self.r))


@dataclass(frozen=True)
class StripNode:
    a: Point
    b: Point
    halfwidth: float

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("strip node endpoints coincide")
        if self.halfwidth <= 0:
            raise ValueError("strip halfwidth must be > 0")

    @cached_property
    def bounds(self) -> Rect:
        h = self.halfwidth
        return Rect(
            Point(min(self.a.x, self.b.x) - h, min(self.a.y, self.b.y) - h),
            Point(max(self.a.x, self.b.x) + h, max(self.a.y, self.b.y) + h),
        )


@dataclass(frozen=True)
class PolygonNode:
    shape: ShapeGeom

    @cached_property
    def bounds(self) -> Rect:
        return bbox(self.shape)


NodeShape = Union[CircleNode, StripNode, PolygonNode]


@dataclass(frozen=True)
class CoverNode:
    shape: NodeShape
    action: NodeAction


@dataclass(frozen=True)
class Cover:
    nodes: tuple[CoverNode, ...] = field(default_factory=tuple)

    @cached_property
    def bounds(self) -> Optional[Rect]:
        box: Rect | None = None
        for node in self.nodes:
            b = node.shape.bounds
            box = b if box is None else box.union(b)
        return box


def node_contains(node: CoverNode, p: Point) -> bool:
    shape = node.shape
    if isinstance(shape, CircleNode):
        dx, dy = p.x - shape.center.x, p.y - shape.center.y
        return dx * dx + dy * dy <= shape.r * shape.r
    if isinstance(shape, StripNode):
        return dist_segment(p.x, p.y, shape.a.x, shape.a.y,
                            shape.b.x, shape.b.y) <= shape.halfwidth
    return contains(shape.shape, p)


def node_boundary_distance(node: CoverNode, p: Point) -> float:
    """Distance from p to the containment boundary of a node.

    Used to carve out the float-fuzz band when comparing against oracles.
    """
    shape = node.shape
    if isinstance(shape, CircleNode):
        return abs(math.hypot(p.x - shape.center.x, p.y - shape.center.y) - shape.r)
    if isinstance(shape, StripNode):
        d = dist_segment(p.x, p.y, shape.a.x, shape.a.y, shape.b.x, shape.b.y)
        return abs(d - shape.halfwidth)
    return min(dist_to_piece(p, piece) for piece in shape.shape.all_pieces)


def resolve_hit(cover: Cover, p: Point) -> Optional[int]:
    """Index of the first node whose shape contains p, else None.

    Transparent nodes match like any other; interpreting them as
    "pass to the element beneath" is the engine's job.
    """
    for idx, node in enumerate(cover.nodes):
        if node_contains(node, p):
            return idx
    return None


def _strips_for_piece(piece: SegmentPiece, halfwidth: float,
                      action: NodeAction) -> list[CoverNode]:
    """One strip per chord; arcs are chained at the containment tolerance."""
    pts = flatten_piece(piece)
    out = []
    for a, b in zip(pts, pts[1:]):
        if a == b:
            continue
        out.append(CoverNode(StripNode(a, b, halfwidth), action))
    return out


def build_cover(el: Element, params: CoverParams,
                resolve: Resolver | None = None) -> Cover:
    """Sensitive areas for one element, in priority order.

    Graphical elements: special-point circles, border strips, then one
    interior polygon that moves the element.  Controls have no interior
    node (clicks pass through to the control); their corners move them.
    """
    nodes: list[CoverNode] = []
    hw = params.strip_halfwidth
    vr = params.vertex_radius

    if isinstance(el, PolygonEl):
        if el.geom.outer.all_lines:
            for i, v in enumerate(el.geom.outer.vertices):
                nodes.append(CoverNode(CircleNode(v, vr), Vertex(i)))
        for i, piece in enumerate(el.geom.outer.pieces):
            nodes.extend(_strips_for_piece(piece, hw, ResizeBorder(i)))
        for hole in el.geom.holes:
            for piece in hole.pieces:
                nodes.extend(_strips_for_piece(piece, hw, Transparent()))
        nodes.append(CoverNode(PolygonNode(el.geom), Move()))
        return Cover(tuple(nodes))

    if isinstance(el, CircleEl):
        nodes.extend(_strips_for_piece(Arc(el.center, el.r, 0.0, 2 * math.pi),
                                       hw, ResizeBorder(0)))
        nodes.append(CoverNode(PolygonNode(shape_of(el)), Move()))
        return Cover(tuple(nodes))

    if isinstance(el, PieEl):
        for i, dp in enumerate(divider_points(el)):
            nodes.append(CoverNode(CircleNode(dp, vr), Divider(i)))
        nodes.extend(_strips_for_piece(Arc(el.center, el.outer_r, 0.0, 2 * math.pi),
                                       hw, ResizeBorder(0)))
        if el.inner_r > 0:
            nodes.extend(_strips_for_piece(Arc(el.center, el.inner_r, 0.0, 2 * math.pi),
                                           hw, ResizeBorder(1)))
        nodes.append(CoverNode(PolygonNode(pie_shape(el)), Move()))
        return Cover(tuple(nodes))

    if isinstance(el, ControlEl):
        r = el.rect
        corners = [r.min, Point(r.max.x, r.min.y), r.max, Point(r.min.x, r.max.y)]
        for c in corners:
            nodes.append(CoverNode(CircleNode(c, vr), Move()))
        for i, edge in enumerate(rect_edges(r)):
            nodes.append(CoverNode(StripNode(edge.a, edge.b, hw), ResizeBorder(i)))
        return Cover(tuple(nodes))  # no interior node: clicks reach the control

    if isinstance(el, CommentEl):
        return Cover((CoverNode(PolygonNode(comment_shape(el)), Move()),))

    if isinstance(el, PlotAreaEl):
        for i, edge in enumerate(rect_edges(el.rect)):
            nodes.append(CoverNode(StripNode(edge.a, edge.b, hw), ResizeBorder(i)))
        nodes.append(CoverNode(PolygonNode(rect_shape_of(el.rect)), Move()))
        return Cover(tuple(nodes))

    if isinstance(el, ScaleEl):
        if resolve is None:
            raise ValueError("scale cover needs an element resolver")
        area = resolve(el.attached_to)
        rect = scale_rect(el, area.rect)
        return Cover((CoverNode(PolygonNode(rect_shape_of(rect)), Move()),))

    if isinstance(el, SpotEl):
        action: NodeAction = PathConstrained() if el.mode == "path" else Move()
        return Cover((CoverNode(CircleNode(el.center, el.r), action),))

    if isinstance(el, LabyrinthEl):
        wall_hw = max(hw, el.thickness / 2.0)
        for i, w in enumerate(el.walls):
            nodes.append(CoverNode(CircleNode(w.a, vr), Vertex(2 * i)))
            nodes.append(CoverNode(CircleNode(w.b, vr), Vertex(2 * i + 1)))
        for w in el.walls:
            nodes.append(CoverNode(StripNode(w.a, w.b, wall_hw), Move()))
        return Cover(tuple(nodes))

    if isinstance(el, PathEl):
        for i, p in enumerate(el.pts):
            nodes.append(CoverNode(CircleNode(p, vr), Vertex(i)))
        for a, b in zip(el.pts, el.pts[1:]):
            if a != b:
                nodes.append(CoverNode(StripNode(a, b, hw), Move()))
        return Cover(tuple(nodes))

    raise TypeError(f"no cover rule for {type(el).__name__}")
